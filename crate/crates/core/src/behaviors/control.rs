use crate::agents::{SensorReading, WheelSpeeds, SENSOR_COUNT};
use crate::field::Channel;
use crate::scalar::{wrap_angle, Scalar};

use super::{ControlParams, Side};

/// Sensors feeding the left and right strengths of the trail law. Wiring is
/// crossed: the right-hand sensor (Y-) drives the left wheel, so a trail off
/// to one side turns the robot towards it. The front and rear sensors stay
/// out of the law; on a fork or bend they see the same colour from both
/// sides and only cancel the lateral signal.
const LEFT_INPUT: usize = 0;
const RIGHT_INPUT: usize = 2;
const FRONT: usize = 1;

/// Which trail the trail law tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrailSelector {
    /// Blue channel.
    Blue,
    /// Blue and green together: per-sensor minimum of the two.
    Cyan,
    /// Blue without green: per-sensor `min(blue, 1 - green)`, so a cyan
    /// sibling branch reads as empty.
    BlueOnly,
}

/// Per-sensor strength of the selected trail.
pub fn trail_strengths<T: Scalar>(
    reading: &SensorReading<T>,
    selector: TrailSelector,
) -> [T; SENSOR_COUNT] {
    let b = Channel::Blue.index();
    let g = Channel::Green.index();
    reading.per_sensor.map(|s| match selector {
        TrailSelector::Blue => s[b],
        TrailSelector::Cyan => s[b].min(s[g]),
        TrailSelector::BlueOnly => s[b].min(T::one() - s[g]),
    })
}

/// Trail law: `R_l = (phi_l - phi_r) p + v_b`, `R_r = (phi_r - phi_l) p + v_b`.
pub fn trail_follow_speeds<T: Scalar>(
    reading: &SensorReading<T>,
    selector: TrailSelector,
    params: &ControlParams<T>,
) -> WheelSpeeds<T> {
    let s = trail_strengths(reading, selector);
    let left = s[LEFT_INPUT];
    let right = s[RIGHT_INPUT];
    let p = params.sensitivity_p;
    let vb = params.base_speed_vb;
    WheelSpeeds::new((left - right) * p + vb, (right - left) * p + vb).clamped(params.max_speed)
}

/// Both lateral sensors are on the selected trail while the front one is
/// off it: the robot straddles two branches that diverge ahead.
pub fn split_signature<T: Scalar>(
    reading: &SensorReading<T>,
    selector: TrailSelector,
    tau: T,
) -> bool {
    let s = trail_strengths(reading, selector);
    s[LEFT_INPUT] >= tau && s[RIGHT_INPUT] >= tau && s[FRONT] < tau
}

/// Trail law restricted to one side: the other lateral input is dropped, so
/// the robot steers onto the branch on `side`. The law cannot break the tie
/// itself because equal branches cancel.
pub fn branch_follow_speeds<T: Scalar>(
    reading: &SensorReading<T>,
    selector: TrailSelector,
    side: Side,
    params: &ControlParams<T>,
) -> WheelSpeeds<T> {
    let s = trail_strengths(reading, selector);
    // sensor 0 sits on the right (Y-) and drives the left wheel
    let (left, right) = match side {
        Side::Right => (s[LEFT_INPUT], T::zero()),
        Side::Left => (T::zero(), s[RIGHT_INPUT]),
    };
    let p = params.sensitivity_p;
    let vb = params.base_speed_vb;
    WheelSpeeds::new((left - right) * p + vb, (right - left) * p + vb).clamped(params.max_speed)
}

/// Proportional heading law towards an egocentric target direction:
/// `R_l = v_b - p e`, `R_r = v_b + p e` with `e` the wrapped target angle.
pub fn heading_follow_speeds<T: Scalar>(
    target_egocentric: T,
    params: &ControlParams<T>,
) -> WheelSpeeds<T> {
    let err = wrap_angle(target_egocentric);
    let p = params.sensitivity_p;
    let vb = params.base_speed_vb;
    WheelSpeeds::new(vb - p * err, vb + p * err).clamped(params.max_speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn blue_reading(left: f64, right: f64) -> SensorReading<f64> {
        let px = |v: f64| [0.0, 0.0, v];
        // sensor 0 feeds the left strength, sensor 2 the right one; front
        // and rear values must not matter
        SensorReading::from_sensors([px(left), px(0.9), px(right), px(0.1)])
    }

    #[test]
    fn centred_on_trail_runs_at_base_speed() {
        let w = trail_follow_speeds(
            &blue_reading(0.5, 0.5),
            TrailSelector::Blue,
            &ControlParams::new(20.0, 6.0, 20.0),
        );
        assert_eq!(w, WheelSpeeds::new(6.0, 6.0));
    }

    #[test]
    fn direct_substitution() {
        let w = trail_follow_speeds(
            &blue_reading(0.6, 0.4),
            TrailSelector::Blue,
            &ControlParams::new(10.0, 5.0, 20.0),
        );
        assert_abs_diff_eq!(w.left, 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.right, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn saturates_at_max_speed() {
        let w = trail_follow_speeds(
            &blue_reading(0.0, 1.0),
            TrailSelector::Blue,
            &ControlParams::new(30.0, 5.0, 20.0),
        );
        assert_eq!(w, WheelSpeeds::new(-20.0, 20.0));
    }

    #[test]
    fn fork_signature_and_side() {
        let on = [0.0, 0.0, 0.8];
        let off = [0.0; 3];
        let r = SensorReading::from_sensors([on, off, on, off]);
        assert!(split_signature(&r, TrailSelector::Blue, 0.15));
        let p = ControlParams::new(10.0, 5.0, 20.0);
        assert_eq!(
            trail_follow_speeds(&r, TrailSelector::Blue, &p),
            WheelSpeeds::new(5.0, 5.0)
        );
        let w = branch_follow_speeds(&r, TrailSelector::Blue, Side::Right, &p);
        assert!(w.left > w.right);
        let w = branch_follow_speeds(&r, TrailSelector::Blue, Side::Left, &p);
        assert!(w.right > w.left);
        // front still on the trail: a plain trail, not a fork
        let r = SensorReading::from_sensors([on, on, on, off]);
        assert!(!split_signature(&r, TrailSelector::Blue, 0.15));
    }

    #[test]
    fn selectors() {
        let r = SensorReading::from_sensors([
            [0.0, 1.0, 1.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.4, 0.8],
            [0.0, 0.0, 0.0],
        ]);
        assert_eq!(
            trail_strengths(&r, TrailSelector::Blue),
            [1.0, 1.0, 0.8, 0.0]
        );
        assert_eq!(
            trail_strengths(&r, TrailSelector::Cyan),
            [1.0, 0.0, 0.4, 0.0]
        );
        assert_eq!(
            trail_strengths(&r, TrailSelector::BlueOnly),
            [0.0, 1.0, 0.6, 0.0]
        );
    }

    #[test]
    fn heading_law_substitution() {
        let p = ControlParams::new(4.0, 6.0, 20.0);
        assert_eq!(heading_follow_speeds(0.0, &p), WheelSpeeds::new(6.0, 6.0));
        let w = heading_follow_speeds(FRAC_PI_2, &p);
        assert_abs_diff_eq!(w.left, 6.0 - 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(w.right, 6.0 + 2.0 * PI, epsilon = 1e-12);
        // wrapped: 3pi/2 is -pi/2
        let w = heading_follow_speeds(1.5 * PI, &p);
        assert_abs_diff_eq!(w.left, 6.0 + 2.0 * PI, epsilon = 1e-12);
    }
}
