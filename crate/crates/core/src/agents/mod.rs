//! Differential-drive robots: pose, body geometry, kinematics, colour
//! sensing and bumper contact.

mod body;
mod collision;
mod kinematics;
mod sensing;

pub use body::{Pose, RobotBody, SENSOR_COUNT};
pub use collision::{detect_collision, Arena};
pub use kinematics::{step_kinematics, WheelSpeeds};
pub use sensing::{
    gradient_direction, gradient_from_values, read_sensors, read_sensors_noisy, SensorReading,
    DEFAULT_GRADIENT_EPS,
};
