use rand::Rng;

use crate::field::{sample_bilinear, Channel, ColourImage};
use crate::scalar::Scalar;

use super::{Pose, RobotBody, SENSOR_COUNT};

/// Differences below this on both axes mean "no usable gradient".
pub const DEFAULT_GRADIENT_EPS: f64 = 1e-3;

/// Colour read by the four downward sensors plus their per-channel mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorReading<T> {
    pub per_sensor: [[T; 3]; SENSOR_COUNT],
    pub mean: [T; 3],
}

impl<T: Scalar> SensorReading<T> {
    pub fn from_sensors(per_sensor: [[T; 3]; SENSOR_COUNT]) -> Self {
        let quarter = T::lit(0.25);
        let mut mean = [T::zero(); 3];
        for (c, m) in mean.iter_mut().enumerate() {
            *m = (per_sensor[0][c] + per_sensor[1][c] + per_sensor[2][c] + per_sensor[3][c])
                * quarter;
        }
        Self { per_sensor, mean }
    }

    /// Every sensor reads the same colour.
    pub fn uniform(rgb: [T; 3]) -> Self {
        Self::from_sensors([rgb; SENSOR_COUNT])
    }

    /// One channel across the four sensors.
    pub fn channel(&self, channel: Channel) -> [T; SENSOR_COUNT] {
        self.per_sensor.map(|s| s[channel.index()])
    }

    pub fn mean_of(&self, channel: Channel) -> T {
        self.mean[channel.index()]
    }
}

fn sensor_positions<T: Scalar>(
    image: &ColourImage<T>,
    pose: &Pose<T>,
    body: &RobotBody<T>,
) -> [(T, T); SENSOR_COUNT] {
    let (ex, ey) = image.extent();
    body.sensor_offsets().map(|o| {
        let (x, y) = pose.to_world(o);
        (x.max(T::zero()).min(ex), y.max(T::zero()).min(ey))
    })
}

/// Samples the image under each sensor. Sensor positions beyond the image
/// edge are clamped onto it.
pub fn read_sensors<T: Scalar>(
    image: &ColourImage<T>,
    pose: &Pose<T>,
    body: &RobotBody<T>,
) -> SensorReading<T> {
    let per_sensor = sensor_positions(image, pose, body)
        .map(|p| sample_bilinear(image, p).expect("sensor position clamped into image"));
    SensorReading::from_sensors(per_sensor)
}

/// Like [`read_sensors`] with independent additive noise, uniform in
/// `[-amplitude, amplitude]`, on every channel of every sensor.
pub fn read_sensors_noisy<T: Scalar, R: Rng + ?Sized>(
    image: &ColourImage<T>,
    pose: &Pose<T>,
    body: &RobotBody<T>,
    amplitude: T,
    rng: &mut R,
) -> SensorReading<T> {
    let mut reading = read_sensors(image, pose, body);
    if amplitude > T::zero() {
        for s in reading.per_sensor.iter_mut() {
            for v in s.iter_mut() {
                let u = T::lit(rng.gen::<f64>() * 2.0 - 1.0);
                *v = (*v + amplitude * u).clamp01();
            }
        }
        reading = SensorReading::from_sensors(reading.per_sensor);
    }
    reading
}

/// Egocentric direction of increasing strength from four per-sensor values.
///
/// `atan2(v2 - v0, v1 - v3)`: left minus right over front minus rear.
/// Returns `None` when both differences are below `eps` in magnitude.
pub fn gradient_from_values<T: Scalar>(values: [T; SENSOR_COUNT], eps: T) -> Option<T> {
    let dy = values[2] - values[0];
    let dx = values[1] - values[3];
    if dx.abs() < eps && dy.abs() < eps {
        None
    } else {
        Some(dy.atan2(dx))
    }
}

pub fn gradient_direction<T: Scalar>(
    reading: &SensorReading<T>,
    channel: Channel,
    eps: T,
) -> Option<T> {
    gradient_from_values(reading.channel(channel), eps)
}
