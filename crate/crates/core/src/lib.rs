//! Deterministic simulator for multi-pheromone swarm robotics.
//!
//! Pheromone fields live on cell grids ([`field`]), are composited into a
//! colour image, and sensed by differential-drive robots ([`agents`]) whose
//! control laws and decision procedures live in [`behaviors`]. The two
//! experiment families (three-pheromone trail foraging and
//! aggregation/alarm interaction) are assembled in [`scenarios`], run by the
//! fixed-timestep loop in [`sim`], and analysed/exported by [`io`].
//!
//! The numerical core is generic over [`Scalar`]; the simulation loop runs on
//! [`Real`] (`f64`). Type aliases for both precisions are provided below.

// Range checks are written as `!(x > 0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agents;
pub mod behaviors;
pub mod error;
pub mod field;
pub mod io;
pub mod scalar;
pub mod scenarios;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::{wrap_angle, Scalar};

/// Scalar type used by the simulation loop.
pub type Real = f64;

pub type FieldGrid64 = field::FieldGrid<f64>;
pub type FieldGrid32 = field::FieldGrid<f32>;
pub type ColourImage64 = field::ColourImage<f64>;
pub type ColourImage32 = field::ColourImage<f32>;
pub type GaussianSource64 = field::GaussianSource<f64>;
pub type PdeParams64 = field::PdeParams<f64>;
pub type Pose64 = agents::Pose<f64>;
pub type RobotBody64 = agents::RobotBody<f64>;
pub type SensorReading64 = agents::SensorReading<f64>;
pub type WheelSpeeds64 = agents::WheelSpeeds<f64>;
pub type BehaviorParams64 = behaviors::BehaviorParams<f64>;
pub type BehaviorState64 = behaviors::BehaviorState<f64>;
