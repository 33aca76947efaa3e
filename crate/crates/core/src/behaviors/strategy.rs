use rand::Rng;

use crate::agents::{gradient_direction, SensorReading, WheelSpeeds};
use crate::field::Channel;
use crate::scalar::Scalar;

use super::classify::classify_trail;
use super::control::{
    branch_follow_speeds, heading_follow_speeds, split_signature, trail_follow_speeds,
    TrailSelector,
};
use super::{AlarmResponse, BehaviorParams, BehaviorState, Branch, LatchedBranch, Mode, Side};

fn uniform<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: T, hi: T) -> T {
    lo + (hi - lo) * T::lit(rng.gen::<f64>())
}

/// Starts an avoidance: draws a pivot angle in `[avoid_turn_min, avoid_turn_max]`
/// and turns away from the side the obstacle is on. An obstacle dead ahead
/// picks the side at random.
pub fn begin_avoid<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    bearing: T,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> BehaviorState<T> {
    let mut st = *state;
    let angle = uniform(rng, params.avoid_turn_min, params.avoid_turn_max);
    let turn_left = if bearing == T::zero() {
        rng.gen::<bool>()
    } else {
        bearing < T::zero()
    };
    st.avoid_turn_sign = if turn_left { T::one() } else { -T::one() };
    let pivot_rate = (params.base_speed_vb + params.base_speed_vb) / params.wheelbase;
    st.avoid_remaining = angle / pivot_rate;
    if st.mode != Mode::Avoid {
        st.resume_mode = st.mode;
    }
    st.mode = Mode::Avoid;
    st
}

/// Wandering and avoiding motions.
///
/// Wander drives at `v_b` with a turn rate drawn uniformly from
/// `[-wander_jitter, wander_jitter]` every call. Avoid pivots in place at
/// `+/-v_b` until the drawn angle is used up, then restores the previous mode.
pub fn reactive_motion<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    let mut st = *state;
    let vb = params.base_speed_vb;
    if st.is_avoiding() {
        let frac = if st.avoid_remaining >= params.dt {
            st.avoid_remaining -= params.dt;
            T::one()
        } else {
            let f = st.avoid_remaining / params.dt;
            st.avoid_remaining = T::zero();
            f
        };
        if st.avoid_remaining <= T::zero() {
            st.mode = st.resume_mode;
        }
        let s = st.avoid_turn_sign * vb * frac;
        return (WheelSpeeds::new(-s, s).clamped(params.max_speed), st);
    }
    st.mode = Mode::Wander;
    st.avoid_remaining = T::zero();
    let omega = uniform(rng, -params.wander_jitter, params.wander_jitter);
    st.wander_heading_bias = omega * params.dt;
    let half_diff = omega * params.wheelbase * T::lit(0.5);
    (
        WheelSpeeds::new(vb - half_diff, vb + half_diff).clamped(params.max_speed),
        st,
    )
}

/// Shared head of every decision procedure: advance the clock, continue an
/// avoidance in progress, or start one on contact.
fn preempt<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    collision: Option<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> Result<(WheelSpeeds<T>, BehaviorState<T>), BehaviorState<T>> {
    let mut st = *state;
    st.clock += params.dt;
    if st.is_avoiding() {
        return Ok(reactive_motion(&st, rng, params));
    }
    if let Some(bearing) = collision {
        let st = begin_avoid(&st, bearing, rng, params);
        return Ok(reactive_motion(&st, rng, params));
    }
    Err(st)
}

fn wander<T: Scalar, R: Rng + ?Sized>(
    st: &BehaviorState<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    let mut st = *st;
    st.mode = Mode::Wander;
    reactive_motion(&st, rng, params)
}

/// Contact handling plus wandering, with no sensory input.
pub fn wander_step<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    collision: Option<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    match preempt(state, collision, rng, params) {
        Ok(out) => out,
        Err(st) => wander(&st, rng, params),
    }
}

/// Trail foraging over blue (long-term attractive), green (short-term
/// attractive) and red (short-term repellent) trails.
///
/// Priority: contact, then off-trail wandering, then trail logic. On cyan,
/// a magenta-marked bifurcation keeps to cyan; a cyan/blue bifurcation
/// latches a random branch (cyan with `cyan_preference`) that is held until
/// the bifurcation has been out of view for `latch_release`. A fork whose
/// branches carry the same colour gets a fair coin for the side, held the
/// same way.
pub fn forage_step<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    reading: &SensorReading<T>,
    collision: Option<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    let mut st = match preempt(state, collision, rng, params) {
        Ok(out) => return out,
        Err(st) => st,
    };
    let cls = classify_trail(reading, params.presence_tau);
    if cls.bifurcation {
        st.signature_absent = T::zero();
    } else {
        st.signature_absent += params.dt;
        if st.signature_absent >= params.latch_release {
            st.latched_branch = None;
        }
    }
    if !cls.overall.is_on_trail() {
        return wander(&st, rng, params);
    }

    let latched = |st: &BehaviorState<T>| st.latched_branch.map(|l| l.choice);
    let selector = if cls.overall.has_cyan() {
        if cls.magenta_bifurcation() {
            // The marked branch is refused outright; latching keeps its blue
            // continuation past the red mark from looking like a fresh choice.
            if latched(&st) != Some(Branch::Cyan) {
                st.latched_branch = Some(LatchedBranch {
                    choice: Branch::Cyan,
                    entered_at: st.clock,
                });
            }
            TrailSelector::Cyan
        } else if cls.cyan_blue_bifurcation() || st.latched_branch.is_some() {
            if st.latched_branch.is_none() {
                let choice = if rng.gen::<f64>() < params.cyan_preference {
                    Branch::Cyan
                } else {
                    Branch::Blue
                };
                st.latched_branch = Some(LatchedBranch {
                    choice,
                    entered_at: st.clock,
                });
            }
            match latched(&st) {
                Some(Branch::Blue) => TrailSelector::BlueOnly,
                _ => TrailSelector::Cyan,
            }
        } else {
            TrailSelector::Cyan
        }
    } else if latched(&st) == Some(Branch::Blue) {
        TrailSelector::BlueOnly
    } else {
        TrailSelector::Blue
    };
    st.mode = Mode::FollowTrail;

    // Two branches that read the same cancel in the trail law and the robot
    // would run straight off between them; pick one and hold it.
    if split_signature(reading, selector, params.presence_tau) {
        st.split_absent = T::zero();
        if st.fork_side.is_none() {
            st.fork_side = Some(if rng.gen::<bool>() {
                Side::Left
            } else {
                Side::Right
            });
        }
    } else {
        st.split_absent += params.dt;
        if st.split_absent >= params.latch_release {
            st.fork_side = None;
        }
    }
    let speeds = match st.fork_side {
        Some(side) => branch_follow_speeds(reading, selector, side, &params.trail()),
        None => trail_follow_speeds(reading, selector, &params.trail()),
    };
    (speeds, st)
}

/// Heading target from the alarm (red) field, if it is present and has a gradient.
fn alarm_target<T: Scalar>(
    reading: &SensorReading<T>,
    params: &BehaviorParams<T>,
) -> Option<Option<T>> {
    if reading.mean_of(Channel::Red) < params.presence_tau {
        return None;
    }
    Some(
        gradient_direction(reading, Channel::Red, params.gradient_eps).map(|theta| {
            match params.alarm_response {
                AlarmResponse::Flee => theta + T::PI(),
                AlarmResponse::Approach => theta,
            }
        }),
    )
}

fn steer<T: Scalar>(
    mut st: BehaviorState<T>,
    target: T,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    st.mode = Mode::FollowHeading;
    (heading_follow_speeds(target, &params.heading()), st)
}

/// Leader: contact, then alarm response, otherwise wander.
pub fn leader_step<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    reading: &SensorReading<T>,
    collision: Option<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    let st = match preempt(state, collision, rng, params) {
        Ok(out) => return out,
        Err(st) => st,
    };
    match alarm_target(reading, params) {
        Some(Some(target)) => steer(st, target, params),
        _ => wander(&st, rng, params),
    }
}

/// Follower: contact, then alarm response, then climb the aggregation
/// (green) gradient, otherwise wander.
pub fn follower_step<T: Scalar, R: Rng + ?Sized>(
    state: &BehaviorState<T>,
    reading: &SensorReading<T>,
    collision: Option<T>,
    rng: &mut R,
    params: &BehaviorParams<T>,
) -> (WheelSpeeds<T>, BehaviorState<T>) {
    let st = match preempt(state, collision, rng, params) {
        Ok(out) => return out,
        Err(st) => st,
    };
    match alarm_target(reading, params) {
        Some(Some(target)) => return steer(st, target, params),
        Some(None) => return wander(&st, rng, params),
        None => {}
    }
    if reading.mean_of(Channel::Green) >= params.presence_tau {
        if let Some(theta) = gradient_direction(reading, Channel::Green, params.gradient_eps) {
            return steer(st, theta, params);
        }
    }
    wander(&st, rng, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behaviors::heading_follow_speeds;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    type P = BehaviorParams<f64>;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    const CYAN: [f64; 3] = [0.0, 1.0, 1.0];
    const BLUE: [f64; 3] = [0.0, 0.0, 1.0];
    const MAGENTA: [f64; 3] = [1.0, 0.0, 1.0];
    const OFF: [f64; 3] = [0.0; 3];

    fn cyan_blue_fork() -> SensorReading<f64> {
        SensorReading::from_sensors([CYAN, CYAN, BLUE, BLUE])
    }

    #[test]
    fn collision_preempts_everything() {
        let p = P::default();
        let r = SensorReading::uniform(CYAN);
        let (w, st) = forage_step(&BehaviorState::default(), &r, Some(0.3), &mut rng(), &p);
        assert_eq!(st.mode, Mode::Avoid);
        // obstacle on the left -> clockwise pivot
        assert_eq!(w, WheelSpeeds::new(6.0, -6.0));
        let red = SensorReading::uniform([1.0, 1.0, 0.0]);
        let (_, st) = follower_step(&BehaviorState::default(), &red, Some(-0.3), &mut rng(), &p);
        assert_eq!(st.mode, Mode::Avoid);
        let (_, st) = leader_step(&BehaviorState::default(), &red, Some(0.0), &mut rng(), &p);
        assert_eq!(st.mode, Mode::Avoid);
    }

    #[test]
    fn avoid_pivot_consumes_drawn_angle() {
        let p = P::default();
        let mut g = rng();
        let st = begin_avoid(&BehaviorState::default(), 0.0, &mut g, &p);
        let total_time = st.avoid_remaining;
        let angle = total_time * 2.0 * p.base_speed_vb / p.wheelbase;
        assert!((PI / 2.0..=PI).contains(&angle));
        let mut st = st;
        let mut turned = 0.0;
        let mut ticks = 0;
        while st.mode == Mode::Avoid {
            let (w, next) = reactive_motion(&st, &mut g, &p);
            assert_eq!(w.left, -w.right);
            assert!(w.left.abs() <= p.base_speed_vb);
            turned += w.angular(p.wheelbase) * p.dt;
            st = next;
            ticks += 1;
            assert!(ticks < 1000);
        }
        assert_abs_diff_eq!(turned.abs(), angle, epsilon = 1e-9);
        assert_eq!(st.mode, Mode::Wander);
    }

    #[test]
    fn off_trail_wanders() {
        let p = P::default();
        let (_, st) = forage_step(
            &BehaviorState::default(),
            &SensorReading::uniform(OFF),
            None,
            &mut rng(),
            &p,
        );
        assert_eq!(st.mode, Mode::Wander);
    }

    #[test]
    fn wander_without_jitter_is_straight() {
        let p = P {
            wander_jitter: 0.0,
            ..P::default()
        };
        let (w, _) = reactive_motion(&BehaviorState::default(), &mut rng(), &p);
        assert_eq!(w, WheelSpeeds::new(6.0, 6.0));
    }

    #[test]
    fn wander_turn_rate_is_unbiased() {
        let p = P::default();
        let mut g = rng();
        let n = 10_000;
        let mut st = BehaviorState::default();
        let mut sum = 0.0;
        for _ in 0..n {
            let (w, next) = reactive_motion(&st, &mut g, &p);
            sum += w.angular(p.wheelbase);
            st = next;
        }
        let mean = sum / n as f64;
        // uniform on [-1.5, 1.5]: sd = 1.5/sqrt(3); standard error over n draws
        let se = 1.5 / 3f64.sqrt() / (n as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn blue_trail_is_followed() {
        let p = P::default();
        let r = SensorReading::from_sensors([OFF, BLUE, OFF, BLUE]);
        let (w, st) = forage_step(&BehaviorState::default(), &r, None, &mut rng(), &p);
        assert_eq!(st.mode, Mode::FollowTrail);
        assert_eq!(w, WheelSpeeds::new(6.0, 6.0));
    }

    #[test]
    fn magenta_fork_keeps_cyan() {
        let p = P::default();
        // magenta under the right sensor, cyan under the left
        let r = SensorReading::from_sensors([MAGENTA, CYAN, CYAN, MAGENTA]);
        let mut g = rng();
        let before = g.clone();
        let (w, st) = forage_step(&BehaviorState::default(), &r, None, &mut g, &p);
        assert_eq!(st.latched_branch.map(|l| l.choice), Some(Branch::Cyan));
        // no random draw was spent on the choice
        assert_eq!(g, before);
        assert!(w.right > w.left, "should steer towards the cyan side");
    }

    #[test]
    fn fork_choice_is_latched() {
        let p = P::default();
        let mut g = rng();
        let (_, st) = forage_step(
            &BehaviorState::default(),
            &cyan_blue_fork(),
            None,
            &mut g,
            &p,
        );
        let first = st.latched_branch.unwrap();
        let mut st = st;
        for _ in 0..200 {
            let (_, next) = forage_step(&st, &cyan_blue_fork(), None, &mut g, &p);
            assert_eq!(next.latched_branch.unwrap().choice, first.choice);
            assert_eq!(next.latched_branch.unwrap().entered_at, first.entered_at);
            st = next;
        }
        // signature gone for longer than the release time -> latch cleared
        let plain = SensorReading::from_sensors([OFF, CYAN, OFF, CYAN]);
        for _ in 0..30 {
            st = forage_step(&st, &plain, None, &mut g, &p).1;
        }
        assert!(st.latched_branch.is_none());
    }

    #[test]
    fn fork_prefers_cyan_seventy_percent() {
        let p = P::default();
        let mut g = ChaCha8Rng::seed_from_u64(2024);
        let cyan = (0..10_000)
            .filter(|_| {
                let (_, st) = forage_step(
                    &BehaviorState::default(),
                    &cyan_blue_fork(),
                    None,
                    &mut g,
                    &p,
                );
                st.latched_branch.unwrap().choice == Branch::Cyan
            })
            .count();
        assert!((6900..=7100).contains(&cyan), "cyan chosen {cyan} times");
    }

    #[test]
    fn leader_behaviour() {
        let p = P::default();
        let none = SensorReading::uniform([0.0, 0.6, 0.0]);
        let (_, st) = leader_step(&BehaviorState::default(), &none, None, &mut rng(), &p);
        assert_eq!(st.mode, Mode::Wander);

        // Red rising towards the front: positive gradient 0, flee target pi.
        let red = SensorReading::from_sensors([
            [0.5, 0.0, 0.0],
            [0.7, 0.0, 0.0],
            [0.5, 0.0, 0.0],
            [0.3, 0.0, 0.0],
        ]);
        let (w, st) = leader_step(&BehaviorState::default(), &red, None, &mut rng(), &p);
        assert_eq!(st.mode, Mode::FollowHeading);
        assert_eq!(w, heading_follow_speeds(PI, &p.heading()));

        let flat = SensorReading::uniform([0.5, 0.0, 0.0]);
        let (_, st) = leader_step(&BehaviorState::default(), &flat, None, &mut rng(), &p);
        assert_eq!(st.mode, Mode::Wander);

        let literal = P {
            alarm_response: AlarmResponse::Approach,
            ..p
        };
        let (w, _) = leader_step(&BehaviorState::default(), &red, None, &mut rng(), &literal);
        assert_eq!(w, WheelSpeeds::new(6.0, 6.0));
    }

    #[test]
    fn follower_priorities() {
        let p = P::default();
        // green rises to the front-left at 45 degrees, red rises to the front
        let g = |v: [f64; 4]| v.map(|x| [0.0, x, 0.0]);
        let green = SensorReading::from_sensors(g([0.4, 0.6, 0.6, 0.4]));
        let (w, st) = follower_step(&BehaviorState::default(), &green, None, &mut rng(), &p);
        assert_eq!(st.mode, Mode::FollowHeading);
        let want = heading_follow_speeds(FRAC_PI_4, &p.heading());
        assert_abs_diff_eq!(w.left, want.left, epsilon = 1e-12);
        assert_abs_diff_eq!(w.right, want.right, epsilon = 1e-12);

        let both = SensorReading::from_sensors([
            [0.5, 0.4, 0.0],
            [0.7, 0.6, 0.0],
            [0.5, 0.6, 0.0],
            [0.3, 0.4, 0.0],
        ]);
        let (w, _) = follower_step(&BehaviorState::default(), &both, None, &mut rng(), &p);
        assert_eq!(w, heading_follow_speeds(PI, &p.heading()));

        let (_, st) = follower_step(
            &BehaviorState::default(),
            &SensorReading::uniform(OFF),
            None,
            &mut rng(),
            &p,
        );
        assert_eq!(st.mode, Mode::Wander);
    }

    #[test]
    fn steps_are_deterministic() {
        let p = P::default();
        let r = cyan_blue_fork();
        let a = forage_step(&BehaviorState::default(), &r, None, &mut rng(), &p);
        let b = forage_step(&BehaviorState::default(), &r, None, &mut rng(), &p);
        assert_eq!(a, b);
    }
}
