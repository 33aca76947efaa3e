use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agents::{detect_collision, read_sensors_noisy, step_kinematics, Arena, Pose};
use crate::behaviors::{follower_step, forage_step, leader_step, BehaviorState, Mode};
use crate::error::{Error, Result};
use crate::field::{to_byte, Channel, ComposeSpec, FieldGrid};
use crate::scenarios::{
    build_case1_fields, case2_injection_update, detect_arrival, predator_entry, predator_step,
    AgentRole, Case1Config, Case2Config, Case2Sources, Endpoint, PredatorMode, AGP_ID, ALP_ID,
};
use crate::Real;

use super::log::{Event, EventKind, Frame, PoseRecord, RunLog, TrialOutcome, TrialRecord};
use super::world::{Layer, World};
use super::{RobotSpec, ScenarioKind, SimConfig};

/// Random stream of robot `id` under `seed`.
pub fn robot_rng(seed: u64, id: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id) + 1);
    rng
}

/// Random stream of the scenario itself (placements, predator script).
pub fn scenario_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

#[derive(Debug, Clone)]
struct Robot {
    spec: RobotSpec,
    pose: Pose<Real>,
    state: BehaviorState<Real>,
    rng: ChaCha8Rng,
    active: bool,
}

#[derive(Debug, Clone)]
enum ScenarioState {
    None,
    Case1 {
        config: Case1Config,
        endpoints: Vec<Endpoint>,
        arrived: Option<u32>,
    },
    Case2 {
        config: Case2Config,
        sources: Case2Sources,
    },
}

/// A running simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    dt: Real,
    arena: Arena<Real>,
    sensor_noise: Real,
    frame_stride: usize,
    world: World,
    robots: Vec<Robot>,
    scenario: ScenarioState,
    scenario_rng: ChaCha8Rng,
    tick: u64,
    log: RunLog,
}

const LAP_ID: &str = "LAP";
const SAP_ID: &str = "SAP";
const SRP_ID: &str = "SRP";

fn check_roster(roster: &[RobotSpec]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for r in roster {
        if !seen.insert(r.id) {
            return Err(Error::config(format!("duplicate robot id {}", r.id)));
        }
        r.body.validate()?;
        r.params.validate()?;
    }
    Ok(())
}

impl Simulation {
    /// Builds a scenario simulation with the default roster.
    pub fn new(config: SimConfig) -> Result<Self> {
        let roster = config.roster();
        Self::with_roster(config, roster)
    }

    /// Builds a scenario simulation with an explicit roster order. Results
    /// depend on robot ids, not on their position in the roster.
    pub fn with_roster(config: SimConfig, roster: Vec<RobotSpec>) -> Result<Self> {
        config.validate()?;
        check_roster(&roster)?;
        let grid = |id: &str| {
            FieldGrid::covering(
                config.arena_width,
                config.arena_height,
                config.cell_size,
                id,
            )
        };
        let arena = config.arena();

        let (world, scenario) = match config.scenario {
            ScenarioKind::Case1 => {
                let c = &config.case1;
                let lap = grid(LAP_ID)?;
                let fields = build_case1_fields(c, &lap)?;
                let pde = |p: &crate::scenarios::TrailPheromone| {
                    p.pde(config.dt).with_mode(config.stencil)
                };
                let layers = vec![
                    Layer::pde(lap, pde(&c.lap), fields.d3),
                    Layer::pde(grid(SAP_ID)?, pde(&c.sap), fields.d2),
                    Layer::pde(grid(SRP_ID)?, pde(&c.srp), fields.d1),
                ];
                let compose = ComposeSpec::new()
                    .bind(LAP_ID, Channel::Blue, 1.0)
                    .bind(SAP_ID, Channel::Green, 1.0)
                    .bind(SRP_ID, Channel::Red, 1.0);
                let state = ScenarioState::Case1 {
                    config: c.clone(),
                    endpoints: fields.endpoints,
                    arrived: None,
                };
                (World::new(layers, compose)?, state)
            }
            ScenarioKind::Case2 => {
                let layers = vec![
                    Layer::gaussian(grid(AGP_ID)?),
                    Layer::gaussian(grid(ALP_ID)?),
                ];
                let compose = ComposeSpec::new().bind(AGP_ID, Channel::Green, 1.0).bind(
                    ALP_ID,
                    Channel::Red,
                    1.0,
                );
                let state = ScenarioState::Case2 {
                    config: config.case2.clone(),
                    sources: Case2Sources::default(),
                };
                (World::new(layers, compose)?, state)
            }
        };

        if let ScenarioKind::Case2 = config.scenario {
            let leaders = roster
                .iter()
                .filter(|r| r.role == AgentRole::Leader)
                .count();
            if leaders != 1 {
                return Err(Error::config(format!(
                    "aggregation needs exactly one leader, got {leaders}"
                )));
            }
        }

        let seed = config.seed;
        let robots = roster
            .iter()
            .map(|spec| Robot {
                spec: *spec,
                pose: Pose::new(0.0, 0.0, 0.0),
                state: BehaviorState::default(),
                rng: robot_rng(seed, spec.id),
                active: true,
            })
            .collect();
        let mut sim = Self {
            dt: config.dt,
            arena,
            sensor_noise: config.sensor_noise,
            frame_stride: config.frame_stride,
            world,
            robots,
            scenario,
            scenario_rng: scenario_rng(seed),
            tick: 0,
            log: RunLog::new(None, Vec::new(), config.dt),
        };
        sim.place_initial()?;
        sim.log = RunLog::new(Some(config), sim.roster_ids(), sim.dt);
        Ok(sim)
    }

    /// Assembles a simulation from hand-built parts with no scenario logic.
    pub fn from_parts(
        dt: Real,
        arena: Arena<Real>,
        world: World,
        robots: Vec<(RobotSpec, Pose<Real>)>,
        seed: u64,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::range("dt", dt, "dt > 0"));
        }
        let specs: Vec<RobotSpec> = robots.iter().map(|(s, _)| *s).collect();
        check_roster(&specs)?;
        let robots = robots
            .into_iter()
            .map(|(spec, pose)| Robot {
                spec,
                pose,
                state: BehaviorState::default(),
                rng: robot_rng(seed, spec.id),
                active: true,
            })
            .collect();
        let mut sim = Self {
            dt,
            arena,
            sensor_noise: 0.0,
            frame_stride: 0,
            world,
            robots,
            scenario: ScenarioState::None,
            scenario_rng: scenario_rng(seed),
            tick: 0,
            log: RunLog::new(None, Vec::new(), dt),
        };
        sim.log.roster = sim.roster_ids();
        Ok(sim)
    }

    fn roster_ids(&self) -> Vec<(u32, AgentRole)> {
        let mut r: Vec<_> = self
            .robots
            .iter()
            .map(|r| (r.spec.id, r.spec.role))
            .collect();
        r.sort();
        r
    }

    /// Initial poses for the aggregation experiment, drawn from the scenario
    /// stream in ascending id order.
    fn place_initial(&mut self) -> Result<()> {
        let ScenarioState::Case2 { config, .. } = &self.scenario else {
            return Ok(());
        };
        let config = config.clone();
        let mut order: Vec<usize> = (0..self.robots.len()).collect();
        order.sort_by_key(|&i| self.robots[i].spec.id);
        let rng = &mut self.scenario_rng;
        let (w, h) = (self.arena.width, self.arena.height);
        let margin = 5.0;

        let leader_idx = order
            .iter()
            .copied()
            .find(|&i| self.robots[i].spec.role == AgentRole::Leader)
            .expect("leader checked at construction");
        let leader = Pose::new(
            w / 2.0 + rng.gen_range(-10.0..=10.0),
            h / 2.0 + rng.gen_range(-10.0..=10.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        self.robots[leader_idx].pose = leader;
        let mut placed = vec![leader];

        for &i in &order {
            let robot = &self.robots[i];
            let d = robot.spec.body.diameter;
            match robot.spec.role {
                AgentRole::Leader => {}
                AgentRole::Predator => {
                    let pose = predator_entry(&leader, &self.arena, margin);
                    let active = config.predator == PredatorMode::Wander;
                    self.robots[i].pose = pose;
                    self.robots[i].active = active;
                }
                _ => {
                    let (lo, hi) = config.start_distance;
                    let mut pose = None;
                    for _ in 0..10_000 {
                        let a = rng.gen_range(0.0..std::f64::consts::TAU);
                        let r = rng.gen_range(lo..=hi);
                        let heading = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
                        let p = Pose::new(leader.x + r * a.cos(), leader.y + r * a.sin(), heading);
                        let inside = p.x >= margin
                            && p.x <= w - margin
                            && p.y >= margin
                            && p.y <= h - margin;
                        if inside && placed.iter().all(|q| q.distance_to(&p) > d + 1.0) {
                            pose = Some(p);
                            break;
                        }
                    }
                    let pose = pose.ok_or_else(|| {
                        Error::config(
                            "could not place followers around the leader; arena too small",
                        )
                    })?;
                    placed.push(pose);
                    self.robots[i].pose = pose;
                }
            }
        }
        Ok(())
    }

    pub fn dt(&self) -> Real {
        self.dt
    }

    pub fn tick_count(&self) -> u64 {
        self.tick
    }

    /// Simulated time after the ticks taken so far.
    pub fn time(&self) -> Real {
        self.tick as Real * self.dt
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn log(&self) -> &RunLog {
        &self.log
    }

    pub fn into_log(self) -> RunLog {
        self.log
    }

    /// Current poses by robot id, ascending.
    pub fn poses(&self) -> Vec<(u32, Pose<Real>)> {
        let mut v: Vec<_> = self.robots.iter().map(|r| (r.spec.id, r.pose)).collect();
        v.sort_by_key(|(id, _)| *id);
        v
    }

    pub fn set_pose(&mut self, id: u32, pose: Pose<Real>) -> Result<()> {
        let r = self
            .robots
            .iter_mut()
            .find(|r| r.spec.id == id)
            .ok_or(Error::UnknownRobot(id))?;
        r.pose = pose;
        Ok(())
    }

    fn push_event(&mut self, time: Real, robot_id: u32, kind: EventKind, detail: String) {
        self.log.events.push(Event {
            time,
            robot_id,
            kind,
            detail,
        });
    }

    fn scenario_injection(&mut self, now: Real) {
        let ScenarioState::Case2 { config, sources } = &mut self.scenario else {
            return;
        };
        let mut entered = None;
        let leader_pose = self
            .robots
            .iter()
            .find(|r| r.spec.role == AgentRole::Leader)
            .map(|r| r.pose);
        for r in self.robots.iter_mut() {
            if r.spec.role == AgentRole::Predator && !r.active && config.predator_present(now) {
                if let Some(l) = &leader_pose {
                    r.pose = predator_entry(l, &self.arena, r.spec.body.diameter);
                }
                r.active = true;
                entered = Some(r.spec.id);
            }
        }
        let predator = self
            .robots
            .iter()
            .find(|r| r.spec.role == AgentRole::Predator && r.active)
            .map(|r| r.pose);
        let prey: Vec<(u32, Pose<Real>)> = self
            .robots
            .iter()
            .filter(|r| r.spec.role != AgentRole::Predator && r.active)
            .map(|r| (r.spec.id, r.pose))
            .collect();
        let triggers = case2_injection_update(
            sources,
            leader_pose.as_ref(),
            &prey,
            predator.as_ref(),
            now,
            config,
        );
        let agp: Vec<_> = sources.agp.iter().cloned().collect();
        let alp = sources.alp.clone();
        self.world.set_sources(AGP_ID, agp);
        self.world.set_sources(ALP_ID, alp);

        if let Some(id) = entered {
            self.push_event(now, id, EventKind::PredatorEnter, String::new());
        }
        for t in triggers {
            let kind = if t.refreshed {
                EventKind::AlarmRefresh
            } else {
                EventKind::AlarmEmit
            };
            let detail = format!("{} {}", t.position.0, t.position.1);
            self.push_event(now, t.robot_id, kind, detail);
        }
    }

    /// Advances the simulation by one timestep.
    pub fn tick(&mut self) -> Result<()> {
        let now = self.time();
        self.scenario_injection(now);
        self.world.step(now)?;

        let prev: Vec<(Pose<Real>, bool)> =
            self.robots.iter().map(|r| (r.pose, r.active)).collect();
        let leader_prev = self
            .robots
            .iter()
            .find(|r| r.spec.role == AgentRole::Leader)
            .map(|r| r.pose);
        let predator_mode = match &self.scenario {
            ScenarioState::Case2 { config, .. } => config.predator,
            _ => PredatorMode::Wander,
        };
        let image = self.world.image();
        let mut new_events = Vec::new();
        let mut next = Vec::with_capacity(self.robots.len());
        for (i, r) in self.robots.iter_mut().enumerate() {
            if !r.active {
                next.push(r.pose);
                continue;
            }
            let others: Vec<Pose<Real>> = prev
                .iter()
                .enumerate()
                .filter(|&(j, (_, active))| j != i && *active)
                .map(|(_, (p, _))| *p)
                .collect();
            let body = r.spec.body;
            let params = r.spec.params;
            let collision = detect_collision(&r.pose, &body, &others, &self.arena);
            let reading = read_sensors_noisy(image, &r.pose, &body, self.sensor_noise, &mut r.rng);
            let (wheels, state) = match r.spec.role {
                AgentRole::Forager => {
                    forage_step(&r.state, &reading, collision, &mut r.rng, &params)
                }
                AgentRole::Leader => {
                    leader_step(&r.state, &reading, collision, &mut r.rng, &params)
                }
                AgentRole::Follower => {
                    follower_step(&r.state, &reading, collision, &mut r.rng, &params)
                }
                AgentRole::Predator => predator_step(
                    &r.pose,
                    &r.state,
                    collision,
                    leader_prev.as_ref(),
                    predator_mode,
                    &mut r.rng,
                    &params,
                ),
            };
            if state.mode == Mode::Avoid && !r.state.is_avoiding() {
                new_events.push((r.spec.id, format!("{}", collision.unwrap_or(0.0))));
            }
            r.state = state;

            let moved = step_kinematics(&r.pose, &wheels, &body, self.dt);
            let (x, y) = self.arena.confine(moved.x, moved.y, body.radius());
            let mut pose = Pose::new(x, y, moved.heading);
            let blocked = others.iter().any(|o| {
                let d_new = pose.distance_to(o);
                d_new < body.diameter && d_new < r.pose.distance_to(o)
            });
            if blocked {
                pose = Pose::new(r.pose.x, r.pose.y, moved.heading);
            }
            next.push(pose);
        }
        for (r, p) in self.robots.iter_mut().zip(next) {
            r.pose = p;
        }

        self.tick += 1;
        let t = self.time();
        new_events.sort_by_key(|(id, _)| *id);
        for (id, detail) in new_events {
            self.push_event(t, id, EventKind::Collision, detail);
        }
        let tick = self.tick;
        for (robot_id, pose) in self.poses() {
            self.log.poses.push(PoseRecord {
                tick,
                time: t,
                robot_id,
                pose,
            });
        }

        if let ScenarioState::Case1 {
            config,
            endpoints,
            arrived,
        } = &mut self.scenario
        {
            if arrived.is_none() {
                let forager = self
                    .robots
                    .iter()
                    .find(|r| r.spec.role == AgentRole::Forager);
                if let Some(f) = forager {
                    if let Some(e) = detect_arrival(&f.pose, endpoints, config.arrival_radius) {
                        *arrived = Some(e);
                        let id = f.spec.id;
                        self.push_event(t, id, EventKind::Arrival, e.to_string());
                    }
                }
            }
        }

        if self.frame_stride > 0 && tick.is_multiple_of(self.frame_stride as u64) {
            let f = self.frame();
            self.log.frames.push(f);
        }
        Ok(())
    }

    /// The current composite, quantized, with current poses.
    pub fn frame(&self) -> Frame {
        let img = self.world.image();
        Frame {
            tick: self.tick,
            width: img.width(),
            height: img.height(),
            cell_size: img.cell_size(),
            rgb: img.pixels().iter().flat_map(|p| p.map(to_byte)).collect(),
            poses: self.poses(),
        }
    }

    /// Runs the configured scenario to completion and returns the log.
    pub fn run(mut self) -> Result<RunLog> {
        match self.scenario.clone() {
            ScenarioState::Case1 { config, .. } => self.run_case1(&config)?,
            ScenarioState::Case2 { config, .. } => {
                let n = (config.duration / self.dt).round() as u64;
                for _ in 0..n {
                    self.tick()?;
                }
            }
            ScenarioState::None => {}
        }
        self.log.final_frame = Some(self.frame());
        Ok(self.log)
    }

    fn run_case1(&mut self, config: &Case1Config) -> Result<()> {
        let max_warmup = (config.warmup_max / self.dt).ceil() as usize;
        self.log.warmup_steps = self.world.settle(0.0, max_warmup)?;

        let timeout_ticks = (config.trial_timeout / self.dt).round() as u64;
        let nest = config.layout.nest;
        let trunk = config.trunk_heading();
        for index in 0..config.trials {
            if let ScenarioState::Case1 { arrived, .. } = &mut self.scenario {
                *arrived = None;
            }
            let start = self.time();
            let mut forager_id = None;
            for r in self
                .robots
                .iter_mut()
                .filter(|r| r.spec.role == AgentRole::Forager)
            {
                let jitter = if config.start_jitter > 0.0 {
                    r.rng.gen_range(-config.start_jitter..=config.start_jitter)
                } else {
                    0.0
                };
                r.pose = Pose::new(nest.0, nest.1, trunk + jitter);
                r.state = BehaviorState::default();
                forager_id = Some(r.spec.id);
            }
            let id = forager_id.ok_or_else(|| Error::config("foraging needs a forager"))?;
            self.push_event(start, id, EventKind::TrialStart, index.to_string());

            let first = self.tick;
            let outcome = loop {
                self.tick()?;
                if let ScenarioState::Case1 {
                    arrived: Some(e), ..
                } = &self.scenario
                {
                    break TrialOutcome::Arrival(*e);
                }
                if self.tick - first >= timeout_ticks {
                    let t = self.time();
                    self.push_event(t, id, EventKind::Timeout, index.to_string());
                    break TrialOutcome::Timeout;
                }
            };
            self.log.trials.push(TrialRecord {
                index,
                start_time: start,
                end_time: self.time(),
                outcome,
            });
        }
        Ok(())
    }
}

/// Builds and runs the configured scenario.
pub fn run_simulation(config: &SimConfig) -> Result<RunLog> {
    Simulation::new(config.clone())?.run()
}
