use phero_core::agents::{Arena, Pose};
use phero_core::field::{
    compose_image, step_pde, Channel, ComposeSpec, FieldGrid, InjectionMask, PdeParams,
};
use phero_core::io::{aggregation_series, poses_csv};
use phero_core::scenarios::AgentRole;
use phero_core::sim::{
    run_simulation, EventKind, Layer, RobotSpec, SimConfig, Simulation, TrialOutcome, World,
};

fn short_case2(duration: f64) -> SimConfig {
    let mut c = SimConfig::case2();
    c.case2.duration = duration;
    c
}

#[test]
fn one_second_is_fifty_ticks() {
    let log = run_simulation(&short_case2(1.0)).unwrap();
    let ticks: Vec<u64> = log.poses.iter().map(|p| p.tick).collect();
    assert_eq!(*ticks.last().unwrap(), 50);
    // one row per robot per tick
    assert_eq!(log.poses.len(), 50 * log.roster.len());
    let last = log.poses.last().unwrap();
    assert!((last.time - 1.0).abs() < 1e-12);
}

#[test]
fn repeated_runs_match_exactly() {
    let c = short_case2(4.0);
    let a = run_simulation(&c).unwrap();
    let b = run_simulation(&c).unwrap();
    assert_eq!(a, b);
    assert_eq!(poses_csv(&a), poses_csv(&b));
}

#[test]
fn seed_changes_the_run() {
    let mut c = short_case2(2.0);
    let a = run_simulation(&c).unwrap();
    c.seed += 1;
    let b = run_simulation(&c).unwrap();
    assert_ne!(a.poses, b.poses);
}

#[test]
fn roster_order_does_not_matter() {
    let c = short_case2(6.0);
    let forward = Simulation::new(c.clone()).unwrap().run().unwrap();
    let mut roster = c.roster();
    roster.reverse();
    let reversed = Simulation::with_roster(c, roster).unwrap().run().unwrap();
    assert_eq!(forward.poses, reversed.poses);
    assert_eq!(forward.events, reversed.events);
}

#[test]
fn aggregation_series_covers_every_tick() {
    let log = run_simulation(&short_case2(3.0)).unwrap();
    let s = aggregation_series(&log).unwrap();
    assert_eq!(s.len(), 150);
    assert!(s.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(s.iter().all(|(_, v)| *v >= 0.0));
}

fn trail_world(width: usize, height: usize, row: impl Fn(usize) -> bool) -> World {
    let grid = FieldGrid::new(width, height, 0.25, "trail").unwrap();
    let mut mask = InjectionMask::new();
    for y in 0..height {
        if row(y) {
            for x in 0..width {
                mask.insert(x, y, 0.05).unwrap();
            }
        }
    }
    let layer = Layer::pde(grid, PdeParams::new(50.0, 0.0, 0.02), mask);
    let compose = ComposeSpec::new().bind("trail", Channel::Blue, 1.0);
    World::new(vec![layer], compose).unwrap()
}

#[test]
fn robot_free_tick_is_a_pure_field_step() {
    let mut world = trail_world(40, 30, |y| (10..18).contains(&y));
    let before = world.layers[0].clone();
    let mut sim =
        Simulation::from_parts(0.02, Arena::new(10.0, 7.5), world.clone(), Vec::new(), 3).unwrap();
    sim.tick().unwrap();

    let Layer::Pde {
        grid, params, mask, ..
    } = &before
    else {
        unreachable!()
    };
    let expected = step_pde(grid, params, mask).unwrap();
    assert_eq!(sim.world().layers[0].grid(), &expected);
    let image = compose_image(&[&expected], &world.compose).unwrap();
    assert_eq!(sim.world().image(), &image);
    assert!(sim.log().poses.is_empty());

    world.step(0.0).unwrap();
    assert_eq!(sim.world(), &world);
}

#[test]
fn straight_trail_is_held_for_thirty_seconds() {
    // 2 cm wide trail along y = 10 cm in a 200 x 20 cm arena
    let centre = 10.0;
    let mut world = trail_world(800, 80, |y| {
        let yc = (y as f64 + 0.5) * 0.25;
        (yc - centre).abs() < 1.0
    });
    world.settle(0.0, 5000).unwrap();
    let c = SimConfig::case1();
    let spec = RobotSpec {
        id: 1,
        role: AgentRole::Forager,
        body: c.body,
        params: c.robot_params(AgentRole::Forager),
    };
    for (dy, heading) in [(0.0, 0.0), (0.5, -0.15), (-0.6, 0.2), (0.3, 0.25)] {
        let start = Pose::new(5.0, centre + dy, heading);
        let mut sim = Simulation::from_parts(
            0.02,
            Arena::new(200.0, 20.0),
            world.clone(),
            vec![(spec, start)],
            7,
        )
        .unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..1500 {
            sim.tick().unwrap();
            let p = sim.poses()[0].1;
            worst = worst.max((p.y - centre).abs());
        }
        let end = sim.poses()[0].1;
        assert!(worst <= 1.0, "start offset {dy}: strayed {worst} cm");
        assert!(end.x > 150.0, "start offset {dy}: stalled at x = {}", end.x);
    }
}

#[test]
fn foraging_trials_are_logged() {
    let mut c = SimConfig::case1();
    c.case1.trials = 3;
    let log = run_simulation(&c).unwrap();
    assert_eq!(log.trials.len(), 3);
    assert_eq!(log.events_of(EventKind::TrialStart).count(), 3);
    for (i, t) in log.trials.iter().enumerate() {
        assert_eq!(t.index, i);
        assert!(t.end_time > t.start_time);
        if let TrialOutcome::Arrival(e) = t.outcome {
            assert!((1..=10).contains(&e));
        }
    }
    assert!(log.warmup_steps > 0);
}
