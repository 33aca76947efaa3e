use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::FieldGrid;

/// Discrete spatial operator used for the diffusion term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilMode {
    /// One-sided stencil: `(left - c)/2 + (up - c)/2`. Not mass conserving.
    #[default]
    Faithful,
    /// Centred 5-point Laplacian with the same 1/2 weight per neighbour
    /// difference and zero-flux boundaries. Conserves total mass.
    Symmetric,
}

impl StencilMode {
    pub fn name(self) -> &'static str {
        match self {
            StencilMode::Faithful => "faithful",
            StencilMode::Symmetric => "symmetric",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "faithful" => Some(StencilMode::Faithful),
            "symmetric" => Some(StencilMode::Symmetric),
            _ => None,
        }
    }
}

/// Evaporation, diffusion and timestep of the grid PDE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeParams<T> {
    /// Evaporation time constant in seconds.
    pub evaporation_e: T,
    /// Diffusion rate.
    pub diffusion_d: T,
    /// Integration step in seconds.
    pub dt: T,
    pub mode: StencilMode,
}

impl<T: Scalar> PdeParams<T> {
    pub fn new(evaporation_e: T, diffusion_d: T, dt: T) -> Self {
        Self {
            evaporation_e,
            diffusion_d,
            dt,
            mode: StencilMode::Faithful,
        }
    }

    pub fn with_mode(mut self, mode: StencilMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.evaporation_e > T::zero()) {
            return Err(Error::range(
                "evaporation_e",
                self.evaporation_e,
                "evaporation_e > 0",
            ));
        }
        if !(self.diffusion_d >= T::zero()) {
            return Err(Error::range(
                "diffusion_d",
                self.diffusion_d,
                "diffusion_d >= 0",
            ));
        }
        if !(self.diffusion_d <= T::one()) {
            return Err(Error::range(
                "diffusion_d",
                self.diffusion_d,
                "diffusion_d <= 1",
            ));
        }
        if !(self.dt > T::zero() && self.dt <= self.evaporation_e) {
            return Err(Error::range("dt", self.dt, "0 < dt <= evaporation_e"));
        }
        Ok(())
    }
}

/// Sparse constant injection rates (per second) keyed by cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InjectionMask<T> {
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> InjectionMask<T> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Sets the injection rate of a cell. Negative or non-finite rates are rejected.
    pub fn insert(&mut self, x: usize, y: usize, rate: T) -> Result<()> {
        if !(rate >= T::zero()) || !rate.is_finite() {
            return Err(Error::range("injection rate", rate, "J >= 0"));
        }
        self.entries.insert((x, y), rate);
        Ok(())
    }

    pub fn get(&self, x: usize, y: usize) -> Option<T> {
        self.entries.get(&(x, y)).copied()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.entries.contains_key(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), T)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.keys().copied()
    }

    /// Verifies every entry lies inside a `width x height` grid.
    pub fn check_bounds(&self, width: usize, height: usize) -> Result<()> {
        match self
            .entries
            .keys()
            .find(|&&(x, y)| x >= width || y >= height)
        {
            Some(&(x, y)) => Err(Error::config(format!(
                "injection cell ({x}, {y}) outside {width}x{height} grid"
            ))),
            None => Ok(()),
        }
    }
}

/// Advances a PDE field by one explicit Euler step.
///
/// `next = clamp01(phi + dt * (-phi/e + d * lap(phi) + J))`. The input grid is
/// not modified.
pub fn step_pde<T: Scalar>(
    grid: &FieldGrid<T>,
    params: &PdeParams<T>,
    mask: &InjectionMask<T>,
) -> Result<FieldGrid<T>> {
    params.validate()?;
    let (w, h) = (grid.width(), grid.height());
    mask.check_bounds(w, h)?;

    let phi = grid.values();
    let dt = params.dt;
    let decay = T::one() / params.evaporation_e;
    let d = params.diffusion_d;
    let half = T::lit(0.5);
    let mut next = Vec::with_capacity(phi.len());

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let c = phi[i];
            let mut rate = -c * decay;
            if d != T::zero() {
                // Missing neighbours mirror the centre cell (zero flux).
                let left = if x > 0 { phi[i - 1] } else { c };
                let up = if y > 0 { phi[i - w] } else { c };
                let mut lap = (left - c) * half + (up - c) * half;
                if params.mode == StencilMode::Symmetric {
                    let right = if x + 1 < w { phi[i + 1] } else { c };
                    let down = if y + 1 < h { phi[i + w] } else { c };
                    lap += (right - c) * half + (down - c) * half;
                }
                rate += d * lap;
            }
            next.push(c + dt * rate);
        }
    }
    for ((x, y), j) in mask.iter() {
        next[y * w + x] += dt * j;
    }
    for (i, v) in next.iter_mut().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { x: i % w, y: i / w });
        }
        *v = v.clamp01();
    }
    Ok(grid.with_values(next))
}
