use std::f64::consts::PI;

use rand::Rng;

use crate::agents::{Arena, Pose, WheelSpeeds};
use crate::behaviors::{
    heading_follow_speeds, wander_step, BehaviorParams, BehaviorState, ControlParams, Mode,
};
use crate::error::{Error, Result};
use crate::field::{GaussianSource, PheromoneId};
use crate::Real;

/// Shape and lifetime shared by every source of one Gaussian pheromone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPheromone {
    pub evaporation_e: Real,
    pub sigma_x: Real,
    pub sigma_y: Real,
    pub rho: Real,
    pub scale_k: Real,
}

impl GaussianPheromone {
    /// Isotropic pheromone whose fresh peak strength is exactly 1.
    pub fn unit_peak(evaporation_e: Real, sigma: Real) -> Self {
        Self {
            evaporation_e,
            sigma_x: sigma,
            sigma_y: sigma,
            rho: 0.0,
            scale_k: 2.0 * PI * sigma * sigma,
        }
    }

    pub fn source(
        &self,
        center: (Real, Real),
        birth_time: Real,
        pheromone: &str,
    ) -> GaussianSource<Real> {
        GaussianSource {
            scale_k: self.scale_k,
            sigma_x: self.sigma_x,
            sigma_y: self.sigma_y,
            rho: self.rho,
            center,
            birth_time,
            evaporation_e: self.evaporation_e,
            pheromone: PheromoneId::from(pheromone),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.source((0.0, 0.0), 0.0, "check").validate()
    }
}

/// How the predator moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredatorMode {
    /// Wanders from the start with wall avoidance.
    Wander,
    /// Absent until `approach_time`, then enters at the arena corner
    /// farthest from the leader and pursues it at `speed`.
    Scripted { approach_time: Real, speed: Real },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case2Config {
    /// Aggregation pheromone (green), bound to the leader.
    pub agp: GaussianPheromone,
    /// Alarm pheromone (red), emitted by robots near the predator.
    pub alp: GaussianPheromone,
    pub alarm_trigger_distance: Real,
    pub source_merge_radius: Real,
    pub duration: Real,
    pub followers: usize,
    pub leader_speed: Real,
    pub predator: PredatorMode,
    /// Followers start at this range of distances from the leader (cm).
    pub start_distance: (Real, Real),
}

impl Default for Case2Config {
    fn default() -> Self {
        Self {
            agp: GaussianPheromone::unit_peak(10.0, 40.0),
            alp: GaussianPheromone::unit_peak(5.0, 60.0),
            alarm_trigger_distance: 15.0,
            source_merge_radius: 5.0,
            duration: 120.0,
            followers: 3,
            leader_speed: 3.0,
            predator: PredatorMode::Scripted {
                approach_time: 60.0,
                speed: 10.0,
            },
            start_distance: (35.0, 55.0),
        }
    }
}

impl Case2Config {
    pub fn validate(&self) -> Result<()> {
        self.agp.validate()?;
        self.alp.validate()?;
        if !(self.alarm_trigger_distance > 0.0) {
            return Err(Error::range(
                "alarm_trigger_distance",
                self.alarm_trigger_distance,
                "alarm_trigger_distance > 0",
            ));
        }
        if !(self.source_merge_radius >= 0.0) {
            return Err(Error::range(
                "source_merge_radius",
                self.source_merge_radius,
                "source_merge_radius >= 0",
            ));
        }
        if !(self.duration > 0.0) {
            return Err(Error::range("duration", self.duration, "duration > 0"));
        }
        if !(self.leader_speed > 0.0) {
            return Err(Error::range(
                "leader_speed",
                self.leader_speed,
                "leader_speed > 0",
            ));
        }
        let (lo, hi) = self.start_distance;
        if !(lo > 0.0 && hi >= lo) {
            return Err(Error::range(
                "start_distance",
                hi,
                "0 < start_distance_min <= start_distance_max",
            ));
        }
        if let PredatorMode::Scripted {
            approach_time,
            speed,
        } = self.predator
        {
            if !(approach_time >= 0.0) {
                return Err(Error::range(
                    "approach_time",
                    approach_time,
                    "approach_time >= 0",
                ));
            }
            if !(speed > 0.0) {
                return Err(Error::range("predator_speed", speed, "predator_speed > 0"));
            }
        }
        Ok(())
    }

    /// Whether the predator is in the arena at time `now`.
    pub fn predator_present(&self, now: Real) -> bool {
        match self.predator {
            PredatorMode::Wander => true,
            PredatorMode::Scripted { approach_time, .. } => now >= approach_time,
        }
    }
}

/// Live Gaussian sources of the aggregation/alarm experiment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Case2Sources {
    pub agp: Option<GaussianSource<Real>>,
    pub alp: Vec<GaussianSource<Real>>,
}

/// An alarm emission caused by the predator this tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlarmTrigger {
    pub robot_id: u32,
    pub position: (Real, Real),
    /// An existing source nearby was refreshed instead of adding a new one.
    pub refreshed: bool,
}

pub const AGP_ID: &str = "AGP";
pub const ALP_ID: &str = "ALP";

/// Updates the source set for time `now`.
///
/// The aggregation source is re-centred on the leader. Alarm sources that
/// have expired are dropped. Then every robot within the trigger distance
/// of the predator, in ascending id order, emits an alarm source at its
/// own position or refreshes one already within the merge radius.
pub fn case2_injection_update(
    sources: &mut Case2Sources,
    leader: Option<&Pose<Real>>,
    robots: &[(u32, Pose<Real>)],
    predator: Option<&Pose<Real>>,
    now: Real,
    config: &Case2Config,
) -> Vec<AlarmTrigger> {
    sources.agp = leader.map(|l| config.agp.source(l.position(), now, AGP_ID));
    sources.alp.retain(|s| !s.is_expired(now));

    let mut triggers = Vec::new();
    let Some(pred) = predator else {
        return triggers;
    };
    let mut order: Vec<&(u32, Pose<Real>)> = robots.iter().collect();
    order.sort_by_key(|(id, _)| *id);
    for (id, pose) in order {
        if pose.distance_to(pred) > config.alarm_trigger_distance {
            continue;
        }
        let p = pose.position();
        let near = sources
            .alp
            .iter_mut()
            .find(|s| (s.center.0 - p.0).hypot(s.center.1 - p.1) <= config.source_merge_radius);
        let refreshed = match near {
            Some(s) => {
                s.birth_time = now;
                true
            }
            None => {
                sources.alp.push(config.alp.source(p, now, ALP_ID));
                false
            }
        };
        triggers.push(AlarmTrigger {
            robot_id: *id,
            position: p,
            refreshed,
        });
    }
    triggers
}

/// Entry pose of a scripted predator: the arena corner farthest from the
/// leader, inset by `inset`, facing the leader.
pub fn predator_entry(leader: &Pose<Real>, arena: &Arena<Real>, inset: Real) -> Pose<Real> {
    let corners = [
        (inset, inset),
        (arena.width - inset, inset),
        (inset, arena.height - inset),
        (arena.width - inset, arena.height - inset),
    ];
    let far = corners
        .into_iter()
        .max_by(|a, b| {
            let da = (a.0 - leader.x).hypot(a.1 - leader.y);
            let db = (b.0 - leader.x).hypot(b.1 - leader.y);
            da.total_cmp(&db)
        })
        .unwrap();
    Pose::new(far.0, far.1, (leader.y - far.1).atan2(leader.x - far.0))
}

/// One control step of the predator.
///
/// In wander mode it behaves like any wandering robot, avoiding walls and
/// robots. In scripted mode it steers straight at the leader.
pub fn predator_step<R: Rng + ?Sized>(
    pose: &Pose<Real>,
    state: &BehaviorState<Real>,
    collision: Option<Real>,
    leader: Option<&Pose<Real>>,
    mode: PredatorMode,
    rng: &mut R,
    params: &BehaviorParams<Real>,
) -> (WheelSpeeds<Real>, BehaviorState<Real>) {
    match (mode, leader) {
        (PredatorMode::Scripted { speed, .. }, Some(target)) => {
            let mut st = *state;
            st.clock += params.dt;
            st.mode = Mode::FollowHeading;
            let err = pose.bearing_to(target.position());
            let ctl = ControlParams::new(params.heading_p, speed, params.max_speed);
            (heading_follow_speeds(err, &ctl), st)
        }
        _ => wander_step(state, collision, rng, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn defaults_have_unit_peaks() {
        let c = Case2Config::default();
        let g = c.agp.source((0.0, 0.0), 0.0, AGP_ID);
        let r = c.alp.source((0.0, 0.0), 0.0, ALP_ID);
        assert_abs_diff_eq!(g.peak(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.peak(), 1.0, epsilon = 1e-12);
        assert_eq!((c.agp.evaporation_e, c.alp.evaporation_e), (10.0, 5.0));
        assert_eq!((c.agp.sigma_x, c.alp.sigma_x), (40.0, 60.0));
        c.validate().unwrap();
    }

    #[test]
    fn agp_follows_leader() {
        let c = Case2Config::default();
        let mut s = Case2Sources::default();
        let leader = Pose::new(10.0, 20.0, 0.0);
        let trig = case2_injection_update(&mut s, Some(&leader), &[], None, 3.0, &c);
        assert!(trig.is_empty());
        let agp = s.agp.unwrap();
        assert_eq!(agp.center, (10.0, 20.0));
        assert_eq!(agp.birth_time, 3.0);
    }

    #[test]
    fn alarm_trigger_merge_and_order() {
        let c = Case2Config::default();
        let mut s = Case2Sources::default();
        let pred = Pose::new(50.0, 40.0, 0.0);
        let robots = vec![
            (4, Pose::new(52.0, 40.0, 0.0)),
            (2, Pose::new(55.0, 40.0, 0.0)),
            (3, Pose::new(90.0, 40.0, 0.0)),
        ];
        let trig = case2_injection_update(&mut s, None, &robots, Some(&pred), 1.0, &c);
        // 2 emits first, 4 is 3 cm from it and refreshes the same source
        assert_eq!(
            trig.iter().map(|t| t.robot_id).collect::<Vec<_>>(),
            vec![2, 4]
        );
        assert!(!trig[0].refreshed && trig[1].refreshed);
        assert_eq!(s.alp.len(), 1);
        assert_eq!(s.alp[0].center, (55.0, 40.0));

        // later trigger refreshes the birth time rather than adding a source
        let trig = case2_injection_update(&mut s, None, &robots[1..2], Some(&pred), 2.5, &c);
        assert!(trig[0].refreshed);
        assert_eq!(s.alp.len(), 1);
        assert_eq!(s.alp[0].birth_time, 2.5);
    }

    #[test]
    fn expired_alarm_sources_are_dropped() {
        let c = Case2Config::default();
        let mut s = Case2Sources::default();
        s.alp.push(c.alp.source((1.0, 1.0), 0.0, ALP_ID));
        // 5 ln(1e4) ~ 46.05 s
        case2_injection_update(&mut s, None, &[], None, 46.0, &c);
        assert_eq!(s.alp.len(), 1);
        case2_injection_update(&mut s, None, &[], None, 46.1, &c);
        assert!(s.alp.is_empty());
    }

    #[test]
    fn entry_is_far_corner() {
        let arena = Arena::new(143.9, 80.9);
        let p = predator_entry(&Pose::new(20.0, 20.0, 0.0), &arena, 3.0);
        assert_eq!((p.x, p.y), (140.9, 77.9));
        assert_abs_diff_eq!(
            p.heading,
            (20.0f64 - 77.9).atan2(20.0 - 140.9),
            epsilon = 1e-12
        );
    }

    #[test]
    fn scripted_predator_turns_towards_leader() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = BehaviorParams::default();
        let mode = PredatorMode::Scripted {
            approach_time: 0.0,
            speed: 10.0,
        };
        let leader = Pose::new(0.0, 10.0, 0.0);
        let (w, _) = predator_step(
            &Pose::new(0.0, 0.0, 0.0),
            &BehaviorState::default(),
            None,
            Some(&leader),
            mode,
            &mut rng,
            &params,
        );
        // leader on the left: right wheel faster
        assert!(w.right > w.left);
        assert_abs_diff_eq!(w.linear(), 10.0, epsilon = 1e-12);
    }
}
