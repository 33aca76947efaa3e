//! Pheromone field state and dynamics.
//!
//! Two field models are provided: a grid PDE with evaporation, diffusion and
//! constant-rate injection ([`step_pde`]), and a superposition of decaying
//! bivariate Gaussian blobs ([`accumulate_sources`]). Fields are composited
//! into a three-channel [`ColourImage`], which is what robots sense.

mod gaussian;
mod grid;
mod image;
mod pde;

pub use gaussian::{accumulate_sources, eval_gaussian, Accumulation, GaussianSource, EXPIRY_FLOOR};
pub use grid::{Channel, FieldGrid, PheromoneId};
pub use image::{compose_image, sample_bilinear, to_byte, Binding, ColourImage, ComposeSpec};
pub use pde::{step_pde, InjectionMask, PdeParams, StencilMode};
