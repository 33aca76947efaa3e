use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{FieldGrid, PheromoneId};

/// Sources whose decayed peak falls below this strength are reported expired.
pub const EXPIRY_FLOOR: f64 = 1e-4;

/// One injected bivariate-normal pheromone blob that decays exponentially with age.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSource<T> {
    pub scale_k: T,
    pub sigma_x: T,
    pub sigma_y: T,
    pub rho: T,
    /// Blob centre in arena centimetres.
    pub center: (T, T),
    pub birth_time: T,
    pub evaporation_e: T,
    pub pheromone: PheromoneId,
}

impl<T: Scalar> GaussianSource<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_x > T::zero()) {
            return Err(Error::range("sigma_x", self.sigma_x, "sigma_x > 0"));
        }
        if !(self.sigma_y > T::zero()) {
            return Err(Error::range("sigma_y", self.sigma_y, "sigma_y > 0"));
        }
        if !(self.rho > -T::one() && self.rho < T::one()) {
            return Err(Error::range("rho", self.rho, "-1 < rho < 1"));
        }
        if !(self.evaporation_e > T::zero()) {
            return Err(Error::range(
                "evaporation_e",
                self.evaporation_e,
                "evaporation_e > 0",
            ));
        }
        if !(self.scale_k > T::zero()) {
            return Err(Error::range("scale_k", self.scale_k, "scale_k > 0"));
        }
        Ok(())
    }

    /// Density at the centre when the source is born.
    pub fn peak(&self) -> T {
        let two_pi = T::PI() + T::PI();
        self.scale_k
            / (two_pi * self.sigma_x * self.sigma_y * (T::one() - self.rho * self.rho).sqrt())
    }

    /// Peak strength after `age` seconds of evaporation.
    pub fn decayed_peak(&self, age: T) -> T {
        self.peak() * (-age / self.evaporation_e).exp()
    }

    pub fn is_expired(&self, now: T) -> bool {
        self.decayed_peak(now - self.birth_time) < T::lit(EXPIRY_FLOOR)
    }
}

/// Evaluates a source at `(x, y)` at time `now`.
pub fn eval_gaussian<T: Scalar>(source: &GaussianSource<T>, x: T, y: T, now: T) -> Result<T> {
    if now < source.birth_time {
        return Err(Error::TemporalOrder {
            now: now.as_f64(),
            birth: source.birth_time.as_f64(),
        });
    }
    let t = now - source.birth_time;
    let dx = (x - source.center.0) / source.sigma_x;
    let dy = (y - source.center.1) / source.sigma_y;
    let rho = source.rho;
    let one_m = T::one() - rho * rho;
    let two = T::lit(2.0);
    let q = dx * dx + dy * dy - two * rho * dx * dy;
    Ok(source.decayed_peak(t) * (-q / (two * one_m)).exp())
}

/// Result of summing a set of Gaussian sources onto a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulation<T> {
    pub grid: FieldGrid<T>,
    /// Indices (into the input list) of sources below [`EXPIRY_FLOOR`].
    pub expired: Vec<usize>,
}

/// Sums all sources at every cell centre of `grid`'s lattice, clamped to `[0, 1]`.
///
/// `grid` supplies shape and pheromone only; its values are ignored. Sources
/// with `rho == 0` use a separable evaluation (one exponential per row and
/// column) which agrees with [`eval_gaussian`] to rounding.
pub fn accumulate_sources<T: Scalar>(
    sources: &[GaussianSource<T>],
    grid: &FieldGrid<T>,
    now: T,
) -> Result<Accumulation<T>> {
    for s in sources {
        if &s.pheromone != grid.pheromone() {
            return Err(Error::config(format!(
                "source pheromone `{}` does not match field `{}`",
                s.pheromone,
                grid.pheromone()
            )));
        }
        s.validate()?;
        if now < s.birth_time {
            return Err(Error::TemporalOrder {
                now: now.as_f64(),
                birth: s.birth_time.as_f64(),
            });
        }
    }

    let (w, h) = (grid.width(), grid.height());
    let mut out = grid.zeroed();
    let mut expired = Vec::new();
    let mut col = vec![T::zero(); w];
    let mut row = vec![T::zero(); h];
    let half = T::lit(0.5);

    for (idx, s) in sources.iter().enumerate() {
        if s.is_expired(now) {
            expired.push(idx);
        }
        let values = out.values_mut();
        if s.rho == T::zero() {
            let amp = s.decayed_peak(now - s.birth_time);
            for (x, c) in col.iter_mut().enumerate() {
                let dx = (grid.cell_center(x, 0).0 - s.center.0) / s.sigma_x;
                *c = (-half * dx * dx).exp();
            }
            for (y, r) in row.iter_mut().enumerate() {
                let dy = (grid.cell_center(0, y).1 - s.center.1) / s.sigma_y;
                *r = amp * (-half * dy * dy).exp();
            }
            for (y, &ry) in row.iter().enumerate() {
                let line = &mut values[y * w..(y + 1) * w];
                for (v, &cx) in line.iter_mut().zip(&col) {
                    *v += ry * cx;
                }
            }
        } else {
            for y in 0..h {
                for x in 0..w {
                    let (cx, cy) = grid.cell_center(x, y);
                    values[y * w + x] += eval_gaussian(s, cx, cy, now)?;
                }
            }
        }
    }
    for v in out.values_mut() {
        *v = v.clamp01();
    }
    Ok(Accumulation { grid: out, expired })
}
