use crate::error::Result;
use crate::field::{
    accumulate_sources, compose_image, step_pde, ColourImage, ComposeSpec, FieldGrid,
    GaussianSource, InjectionMask, PdeParams,
};
use crate::Real;

/// One pheromone field and the model that advances it.
#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Pde {
        grid: FieldGrid<Real>,
        params: PdeParams<Real>,
        mask: InjectionMask<Real>,
        /// Set once a step reproduced its input bit for bit; later steps are skipped.
        stationary: bool,
    },
    Gaussian {
        grid: FieldGrid<Real>,
        sources: Vec<GaussianSource<Real>>,
    },
}

impl Layer {
    pub fn pde(grid: FieldGrid<Real>, params: PdeParams<Real>, mask: InjectionMask<Real>) -> Self {
        Layer::Pde {
            grid,
            params,
            mask,
            stationary: false,
        }
    }

    pub fn gaussian(grid: FieldGrid<Real>) -> Self {
        Layer::Gaussian {
            grid,
            sources: Vec::new(),
        }
    }

    pub fn grid(&self) -> &FieldGrid<Real> {
        match self {
            Layer::Pde { grid, .. } | Layer::Gaussian { grid, .. } => grid,
        }
    }

    pub fn is_stationary(&self) -> bool {
        matches!(
            self,
            Layer::Pde {
                stationary: true,
                ..
            }
        )
    }
}

/// All pheromone layers plus the composited image robots sense.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub layers: Vec<Layer>,
    pub compose: ComposeSpec<Real>,
    image: ColourImage<Real>,
}

impl World {
    pub fn new(layers: Vec<Layer>, compose: ComposeSpec<Real>) -> Result<Self> {
        let grids: Vec<&FieldGrid<Real>> = layers.iter().map(Layer::grid).collect();
        let image = compose_image(&grids, &compose)?;
        Ok(Self {
            layers,
            compose,
            image,
        })
    }

    pub fn image(&self) -> &ColourImage<Real> {
        &self.image
    }

    pub fn layer_by_pheromone(&self, name: &str) -> Option<&Layer> {
        self.layers
            .iter()
            .find(|l| l.grid().pheromone().as_str() == name)
    }

    pub fn set_sources(&mut self, name: &str, new_sources: Vec<GaussianSource<Real>>) {
        for l in &mut self.layers {
            if let Layer::Gaussian { grid, sources } = l {
                if grid.pheromone().as_str() == name {
                    *sources = new_sources;
                    return;
                }
            }
        }
    }

    /// Advances every layer to time `now` and recomposes the image.
    ///
    /// PDE layers take one explicit step; Gaussian layers are re-evaluated
    /// from their sources. Returns whether anything changed.
    pub fn step(&mut self, now: Real) -> Result<bool> {
        let changed = self.advance_layers(now)?;
        if changed {
            self.recompose()?;
        }
        Ok(changed)
    }

    fn recompose(&mut self) -> Result<()> {
        let grids: Vec<&FieldGrid<Real>> = self.layers.iter().map(Layer::grid).collect();
        self.image = compose_image(&grids, &self.compose)?;
        Ok(())
    }

    fn advance_layers(&mut self, now: Real) -> Result<bool> {
        let mut changed = false;
        for layer in &mut self.layers {
            match layer {
                Layer::Pde {
                    grid,
                    params,
                    mask,
                    stationary,
                } => {
                    if *stationary {
                        continue;
                    }
                    let next = step_pde(grid, params, mask)?;
                    if next == *grid {
                        *stationary = true;
                    } else {
                        *grid = next;
                        changed = true;
                    }
                }
                Layer::Gaussian { grid, sources } => {
                    let acc = accumulate_sources(sources, grid, now)?;
                    if acc.grid != *grid {
                        *grid = acc.grid;
                        changed = true;
                    }
                }
            }
        }
        Ok(changed)
    }

    /// Steps until every PDE layer is stationary or `max_steps` is reached.
    /// Returns the number of steps taken.
    pub fn settle(&mut self, now: Real, max_steps: usize) -> Result<usize> {
        let mut n = 0;
        let mut changed = false;
        while n < max_steps && !self.is_settled() {
            // intermediate images are never observed, so compose once at the end
            changed |= self.advance_layers(now)?;
            n += 1;
        }
        if changed {
            self.recompose()?;
        }
        Ok(n)
    }

    pub fn is_settled(&self) -> bool {
        self.layers.iter().all(|l| match l {
            Layer::Pde { stationary, .. } => *stationary,
            Layer::Gaussian { .. } => true,
        })
    }
}
