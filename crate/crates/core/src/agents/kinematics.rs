use crate::scalar::{wrap_angle, Scalar};

use super::{Pose, RobotBody};

/// Linear rim speeds of the two wheels in cm/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelSpeeds<T> {
    pub left: T,
    pub right: T,
}

impl<T: Scalar> WheelSpeeds<T> {
    pub fn new(left: T, right: T) -> Self {
        Self { left, right }
    }

    pub fn stop() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Limits both wheels to `[-max_speed, max_speed]`.
    pub fn clamped(self, max_speed: T) -> Self {
        Self {
            left: self.left.max(-max_speed).min(max_speed),
            right: self.right.max(-max_speed).min(max_speed),
        }
    }

    pub fn linear(&self) -> T {
        (self.left + self.right) * T::lit(0.5)
    }

    pub fn angular(&self, wheelbase: T) -> T {
        (self.right - self.left) / wheelbase
    }
}

/// Integrates unicycle motion over `dt` along the exact circular arc.
pub fn step_kinematics<T: Scalar>(
    pose: &Pose<T>,
    wheels: &WheelSpeeds<T>,
    body: &RobotBody<T>,
    dt: T,
) -> Pose<T> {
    debug_assert!(dt > T::zero());
    let v = wheels.linear();
    let omega = wheels.angular(body.wheelbase);
    let th0 = pose.heading;
    let th1 = th0 + omega * dt;
    let (x, y) = if omega.abs() < T::lit(1e-12) {
        let (s, c) = th0.sin_cos();
        (pose.x + v * c * dt, pose.y + v * s * dt)
    } else {
        let r = v / omega;
        (
            pose.x + r * (th1.sin() - th0.sin()),
            pose.y - r * (th1.cos() - th0.cos()),
        )
    };
    Pose {
        x,
        y,
        heading: wrap_angle(th1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn body(wb: f64) -> RobotBody<f64> {
        RobotBody {
            wheelbase: wb,
            ..RobotBody::default()
        }
    }

    #[test]
    fn straight_line() {
        let p = step_kinematics(
            &Pose::new(0.0, 0.0, 0.0),
            &WheelSpeeds::new(10.0, 10.0),
            &body(3.0),
            1.0,
        );
        assert_eq!(p, Pose::new(10.0, 0.0, 0.0));
    }

    #[test]
    fn pivot_in_place() {
        let p = step_kinematics(
            &Pose::new(3.0, 4.0, 0.0),
            &WheelSpeeds::new(-5.0, 5.0),
            &body(3.0),
            0.3,
        );
        assert_abs_diff_eq!(p.x, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.heading, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn arc_matches_circle_geometry() {
        // v = 7.5, omega = 5/3, radius 4.5; centre sits 4.5 cm to the left of
        // the start pose (heading 0 -> centre at (0, 4.5)).
        let (v, w, dt) = (7.5f64, 5.0f64 / 3.0, 2.0f64);
        let r = v / w;
        let ang = w * dt;
        let want = (r * ang.sin(), r - r * ang.cos());
        let p = step_kinematics(
            &Pose::new(0.0, 0.0, 0.0),
            &WheelSpeeds::new(5.0, 10.0),
            &body(3.0),
            dt,
        );
        assert_abs_diff_eq!(p.x, want.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, want.1, epsilon = 1e-12);
        assert_abs_diff_eq!(p.heading, wrap_angle(ang), epsilon = 1e-12);
        // Distance to the centre stays equal to the radius.
        assert_abs_diff_eq!(p.x.hypot(p.y - r), r, epsilon = 1e-12);
    }

    #[test]
    fn clamp_limits_both_wheels() {
        let w = WheelSpeeds::new(-25.0, 35.0).clamped(20.0);
        assert_eq!(w, WheelSpeeds::new(-20.0, 20.0));
    }
}
