use crate::scalar::Scalar;

use super::{Pose, RobotBody};

/// Rectangular arena `[0, width] x [0, height]` in centimetres, walled on all sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arena<T> {
    pub width: T,
    pub height: T,
}

impl<T: Scalar> Arena<T> {
    pub fn new(width: T, height: T) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= T::zero() && x <= self.width && y >= T::zero() && y <= self.height
    }

    pub fn diagonal(&self) -> T {
        self.width.hypot(self.height)
    }

    /// Moves a disc centre so the disc of `radius` lies inside the walls.
    pub fn confine(&self, x: T, y: T, radius: T) -> (T, T) {
        (
            x.max(radius).min(self.width - radius),
            y.max(radius).min(self.height - radius),
        )
    }

    /// Closest point on each wall to `(x, y)`: left, right, bottom, top.
    pub fn wall_points(&self, x: T, y: T) -> [(T, T); 4] {
        let cx = x.max(T::zero()).min(self.width);
        let cy = y.max(T::zero()).min(self.height);
        [
            (T::zero(), cy),
            (self.width, cy),
            (cx, T::zero()),
            (cx, self.height),
        ]
    }
}

/// Bearing of the nearest obstacle touching the front bumpers, if any.
///
/// Obstacles are other robots with the same body and the four walls. An
/// obstacle counts when its surface gap is at most `bumper_range` and its
/// egocentric bearing lies within +/-90 degrees of the heading.
pub fn detect_collision<T: Scalar>(
    me: &Pose<T>,
    body: &RobotBody<T>,
    others: &[Pose<T>],
    arena: &Arena<T>,
) -> Option<T> {
    let r = body.radius();
    let reach = body.bumper_range;
    let front = T::FRAC_PI_2();
    let mut best: Option<(T, T)> = None;
    let mut consider = |gap: T, bearing: T| {
        if gap <= reach && bearing.abs() <= front && best.is_none_or(|(g, _)| gap < g) {
            best = Some((gap, bearing));
        }
    };
    for o in others {
        let d = me.distance_to(o);
        if d == T::zero() {
            continue;
        }
        consider(d - r - r, me.bearing_to(o.position()));
    }
    for p in arena.wall_points(me.x, me.y) {
        let d = (p.0 - me.x).hypot(p.1 - me.y);
        consider(d - r, me.bearing_to(p));
    }
    best.map(|(_, b)| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn arena() -> Arena<f64> {
        Arena::new(100.0, 80.0)
    }

    #[test]
    fn far_robots_do_not_collide() {
        let me = Pose::new(40.0, 40.0, 0.0);
        let other = Pose::new(50.0, 40.0, PI);
        assert_eq!(
            detect_collision(&me, &RobotBody::default(), &[other], &arena()),
            None
        );
    }

    #[test]
    fn close_robot_dead_ahead() {
        let me = Pose::new(40.0, 40.0, 0.0);
        let other = Pose::new(45.5, 40.0, PI);
        let b = detect_collision(&me, &RobotBody::default(), &[other], &arena()).unwrap();
        assert_abs_diff_eq!(b, 0.0);
    }

    #[test]
    fn robot_behind_is_ignored() {
        let me = Pose::new(40.0, 40.0, 0.0);
        let other = Pose::new(35.0, 40.0, 0.0);
        assert_eq!(
            detect_collision(&me, &RobotBody::default(), &[other], &arena()),
            None
        );
    }

    /// Distance from a point to a segment and the closest point on it.
    fn point_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, (f64, f64)) {
        let (vx, vy) = (b.0 - a.0, b.1 - a.1);
        let t = (((p.0 - a.0) * vx + (p.1 - a.1) * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
        let q = (a.0 + t * vx, a.1 + t * vy);
        (((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt(), q)
    }

    #[test]
    fn oblique_wall_matches_segment_oracle() {
        // 2.5 cm from the right wall, heading 45 degrees off its normal either way.
        for heading in [FRAC_PI_4, -FRAC_PI_4] {
            let me = Pose::new(97.5, 40.0, heading);
            let (dist, q) = point_segment((me.x, me.y), (100.0, 0.0), (100.0, 80.0));
            assert_abs_diff_eq!(dist, 2.5, epsilon = 1e-12);
            let want = (q.1 - me.y).atan2(q.0 - me.x) - heading;
            let got = detect_collision(&me, &RobotBody::default(), &[], &arena()).unwrap();
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
            assert_abs_diff_eq!(got.abs(), FRAC_PI_4, epsilon = 1e-12);
        }
    }

    #[test]
    fn facing_pair_is_symmetric() {
        let a = Pose::new(40.0, 40.0, 0.2);
        let b = Pose::new(45.0, 41.0, PI + 0.1);
        let body = RobotBody::default();
        let ab = detect_collision(&a, &body, &[b], &arena()).is_some();
        let ba = detect_collision(&b, &body, &[a], &arena()).is_some();
        assert!(ab && ba);
    }

    #[test]
    fn confine_keeps_disc_inside() {
        assert_eq!(arena().confine(-3.0, 79.5, 2.0), (2.0, 78.0));
    }
}
