use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Scalar};

pub const SENSOR_COUNT: usize = 4;

/// Robot pose in the arena frame. Heading is counterclockwise from +X and
/// kept in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose<T> {
    pub x: T,
    pub y: T,
    pub heading: T,
}

impl<T: Scalar> Pose<T> {
    pub fn new(x: T, y: T, heading: T) -> Self {
        Self {
            x,
            y,
            heading: wrap_angle(heading),
        }
    }

    pub fn position(&self) -> (T, T) {
        (self.x, self.y)
    }

    pub fn distance_to(&self, other: &Pose<T>) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Maps a body-frame point (X forward, Y left) into the arena frame.
    pub fn to_world(&self, body_point: (T, T)) -> (T, T) {
        let (s, c) = self.heading.sin_cos();
        (
            self.x + c * body_point.0 - s * body_point.1,
            self.y + s * body_point.0 + c * body_point.1,
        )
    }

    /// Egocentric bearing (radians, wrapped) of an arena-frame point.
    pub fn bearing_to(&self, p: (T, T)) -> T {
        wrap_angle((p.1 - self.y).atan2(p.0 - self.x) - self.heading)
    }
}

/// Body geometry of one robot.
///
/// Four downward colour sensors sit on a 2x2 array at `sensor_radius` from the
/// array centre, labelled `0..4` at body directions Y-, X+, Y+, X- (right,
/// front, left, rear with X forward). The array centre sits
/// `sensor_array_offset` ahead of the wheel axle; with the array on the axle
/// the lateral sensors carry no heading information and trail following
/// cannot settle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotBody<T> {
    pub diameter: T,
    pub wheelbase: T,
    pub sensor_radius: T,
    pub sensor_array_offset: T,
    pub bumper_range: T,
}

impl<T: Scalar> Default for RobotBody<T> {
    fn default() -> Self {
        Self {
            diameter: T::lit(4.0),
            wheelbase: T::lit(3.0),
            sensor_radius: T::lit(1.5),
            sensor_array_offset: T::lit(1.0),
            bumper_range: T::lit(2.0),
        }
    }
}

impl<T: Scalar> RobotBody<T> {
    pub fn radius(&self) -> T {
        self.diameter * T::lit(0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diameter > T::zero()) {
            return Err(Error::range("diameter", self.diameter, "diameter > 0"));
        }
        if !(self.wheelbase > T::zero() && self.wheelbase < self.diameter) {
            return Err(Error::range(
                "wheelbase",
                self.wheelbase,
                "0 < wheelbase < diameter",
            ));
        }
        if !(self.sensor_radius > T::zero() && self.sensor_radius < self.radius()) {
            return Err(Error::range(
                "sensor_radius",
                self.sensor_radius,
                "0 < sensor_radius < diameter/2",
            ));
        }
        if !(self.sensor_array_offset.abs() < self.radius()) {
            return Err(Error::range(
                "sensor_array_offset",
                self.sensor_array_offset,
                "|sensor_array_offset| < diameter/2",
            ));
        }
        if !(self.bumper_range >= T::zero()) {
            return Err(Error::range(
                "bumper_range",
                self.bumper_range,
                "bumper_range >= 0",
            ));
        }
        Ok(())
    }

    /// Body-frame offset of sensor `n`.
    pub fn sensor_offset(&self, n: usize) -> (T, T) {
        let r = self.sensor_radius;
        let c = self.sensor_array_offset;
        let z = T::zero();
        match n {
            0 => (c, -r),
            1 => (c + r, z),
            2 => (c, r),
            3 => (c - r, z),
            _ => panic!("sensor index {n} out of range"),
        }
    }

    pub fn sensor_offsets(&self) -> [(T, T); SENSOR_COUNT] {
        [0, 1, 2, 3].map(|n| self.sensor_offset(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn sensor_layout_has_three_cm_diagonal() {
        let b = RobotBody::<f64>::default();
        let o = b.sensor_offsets();
        let d02 = ((o[0].0 - o[2].0).powi(2) + (o[0].1 - o[2].1).powi(2)).sqrt();
        let d13 = ((o[1].0 - o[3].0).powi(2) + (o[1].1 - o[3].1).powi(2)).sqrt();
        assert_eq!((d02, d13), (3.0, 3.0));
        assert_eq!(o[1], (2.5, 0.0));
        assert_eq!(o[0], (1.0, -1.5));
        b.validate().unwrap();
    }

    #[test]
    fn rejects_wide_wheelbase() {
        let b = RobotBody {
            wheelbase: 4.0,
            ..RobotBody::<f64>::default()
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn world_transform_rotates() {
        let p = Pose::new(10.0, 5.0, FRAC_PI_2);
        let (x, y) = p.to_world((1.5, 0.0));
        assert!((x - 10.0).abs() < 1e-12 && (y - 6.5).abs() < 1e-12);
        assert!((p.bearing_to((10.0, 8.0))).abs() < 1e-12);
        assert!((p.bearing_to((12.0, 5.0)) + FRAC_PI_2).abs() < 1e-12);
    }
}
