use std::collections::BTreeSet;
use std::fmt;

use crate::agents::Pose;
use crate::error::{Error, Result};
use crate::field::{FieldGrid, InjectionMask, PdeParams};
use crate::Real;

use super::map::{rasterize, Endpoint, MapLayout};

/// Which pheromones are displayed in a foraging group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// Long-term attractive (blue) only.
    G1,
    /// Blue plus short-term attractive (green).
    G2,
    /// Blue, green and short-term repellent (red).
    G3,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::G1, Group::G2, Group::G3];

    pub fn name(self) -> &'static str {
        match self {
            Group::G1 => "g1",
            Group::G2 => "g2",
            Group::G3 => "g3",
        }
    }

    pub fn parse(s: &str) -> Option<Group> {
        match s.to_ascii_lowercase().as_str() {
            "g1" => Some(Group::G1),
            "g2" => Some(Group::G2),
            "g3" => Some(Group::G3),
            _ => None,
        }
    }

    pub fn uses_sap(self) -> bool {
        self >= Group::G2
    }

    pub fn uses_srp(self) -> bool {
        self == Group::G3
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid-PDE parameters of one trail pheromone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrailPheromone {
    pub evaporation_e: Real,
    pub diffusion_d: Real,
    /// Injection rate (per second) on every mask cell.
    pub injection_rate: Real,
}

impl Default for TrailPheromone {
    fn default() -> Self {
        Self {
            evaporation_e: 50.0,
            diffusion_d: 0.0,
            injection_rate: 0.05,
        }
    }
}

impl TrailPheromone {
    pub fn pde(&self, dt: Real) -> PdeParams<Real> {
        PdeParams::new(self.evaporation_e, self.diffusion_d, dt)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case1Config {
    pub layout: MapLayout,
    /// Where the layout came from (`default` or a file path); echoed in configs.
    pub map_source: String,
    pub food_endpoints: BTreeSet<u32>,
    pub group: Group,
    pub trail_width: Real,
    /// Length (cm) of each repellent mark at a non-food branch entrance.
    pub srp_length: Real,
    pub lap: TrailPheromone,
    pub sap: TrailPheromone,
    pub srp: TrailPheromone,
    pub trial_timeout: Real,
    pub trials: usize,
    pub arrival_radius: Real,
    /// Half-width (rad) of the uniform start-heading perturbation.
    pub start_jitter: Real,
    /// Upper bound on field warm-up before the first trial (s).
    pub warmup_max: Real,
}

impl Default for Case1Config {
    fn default() -> Self {
        Self {
            layout: MapLayout::default_layout(),
            map_source: "default".into(),
            food_endpoints: [3, 10].into_iter().collect(),
            group: Group::G3,
            trail_width: 2.0,
            srp_length: 4.0,
            lap: TrailPheromone::default(),
            sap: TrailPheromone::default(),
            srp: TrailPheromone::default(),
            trial_timeout: 180.0,
            trials: 20,
            arrival_radius: 3.0,
            start_jitter: 30f64.to_radians(),
            warmup_max: 300.0,
        }
    }
}

impl Case1Config {
    pub fn validate(&self) -> Result<()> {
        self.layout.validate()?;
        for id in &self.food_endpoints {
            if self.layout.endpoint(*id).is_none() {
                return Err(Error::config(format!(
                    "food endpoint {id} is not in the layout"
                )));
            }
        }
        if !(self.trail_width > 0.0) {
            return Err(Error::range(
                "trail_width",
                self.trail_width,
                "trail_width > 0",
            ));
        }
        if !(self.srp_length > 0.0) {
            return Err(Error::range(
                "srp_length",
                self.srp_length,
                "srp_length > 0",
            ));
        }
        if !(self.trial_timeout > 0.0) {
            return Err(Error::range(
                "trial_timeout",
                self.trial_timeout,
                "trial_timeout > 0",
            ));
        }
        if self.trials == 0 {
            return Err(Error::range("trials", self.trials, "trials >= 1"));
        }
        if !(self.arrival_radius > 0.0) {
            return Err(Error::range(
                "arrival_radius",
                self.arrival_radius,
                "arrival_radius > 0",
            ));
        }
        if !(self.start_jitter >= 0.0) {
            return Err(Error::range(
                "start_jitter",
                self.start_jitter,
                "start_jitter >= 0",
            ));
        }
        for (name, p) in [("lap", &self.lap), ("sap", &self.sap), ("srp", &self.srp)] {
            p.pde(p.evaporation_e.min(0.02)).validate()?;
            if !(p.injection_rate >= 0.0) {
                return Err(Error::range(
                    &format!("{name}.injection_rate"),
                    p.injection_rate,
                    "injection_rate >= 0",
                ));
            }
        }
        Ok(())
    }

    /// Initial heading: from the nest along the first trunk segment.
    pub fn trunk_heading(&self) -> Real {
        let nest = self.layout.nest;
        let first = self
            .layout
            .segments
            .iter()
            .find(|s| s.parent == 0)
            .map(|s| s.to)
            .unwrap_or((nest.0 + 1.0, nest.1));
        (first.1 - nest.1).atan2(first.0 - nest.0)
    }
}

/// Injection masks for the three trail pheromones plus endpoint positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Case1Fields {
    /// Short-term repellent (red), at non-food branch entrances along food paths.
    pub d1: InjectionMask<Real>,
    /// Short-term attractive (green), along nest-to-food paths.
    pub d2: InjectionMask<Real>,
    /// Long-term attractive (blue), on every branch.
    pub d3: InjectionMask<Real>,
    pub endpoints: Vec<Endpoint>,
}

fn mask_from(cells: BTreeSet<(usize, usize)>, rate: Real) -> Result<InjectionMask<Real>> {
    let mut m = InjectionMask::new();
    for (x, y) in cells {
        m.insert(x, y, rate)?;
    }
    Ok(m)
}

/// Rasterizes the layout into the three injection masks for the configured group.
///
/// `grid` supplies the lattice. Masks of pheromones the group does not use are empty.
pub fn build_case1_fields(config: &Case1Config, grid: &FieldGrid<Real>) -> Result<Case1Fields> {
    config.validate()?;
    let layout = &config.layout;
    let w = config.trail_width;

    let d3 = mask_from(
        rasterize(&layout.segments, w, grid),
        config.lap.injection_rate,
    )?;

    let d2 = if config.group.uses_sap() {
        let segs = layout.path_segments(&config.food_endpoints)?;
        mask_from(rasterize(&segs, w, grid), config.sap.injection_rate)?
    } else {
        InjectionMask::new()
    };

    let d1 = if config.group.uses_srp() {
        let food = layout.path_branches(&config.food_endpoints)?;
        let mut segs = Vec::new();
        for &b in &food {
            for child in layout.children_of(b) {
                if !food.contains(&child) {
                    segs.extend(layout.branch_head(child, config.srp_length));
                }
            }
        }
        mask_from(rasterize(&segs, w, grid), config.srp.injection_rate)?
    } else {
        InjectionMask::new()
    };

    Ok(Case1Fields {
        d1,
        d2,
        d3,
        endpoints: layout.endpoints.clone(),
    })
}

/// Nearest endpoint within `radius` of the robot centre; ties go to the lower id.
pub fn detect_arrival(pose: &Pose<Real>, endpoints: &[Endpoint], radius: Real) -> Option<u32> {
    endpoints
        .iter()
        .map(|e| ((e.pos.0 - pose.x).hypot(e.pos.1 - pose.y), e.id))
        .filter(|&(d, _)| d <= radius)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::map::Segment;

    fn grid() -> FieldGrid<Real> {
        FieldGrid::covering(143.9, 80.9, 0.25, "LAP").unwrap()
    }

    fn fields(group: Group) -> Case1Fields {
        let cfg = Case1Config {
            group,
            ..Case1Config::default()
        };
        build_case1_fields(&cfg, &grid()).unwrap()
    }

    #[test]
    fn g1_has_only_lap() {
        let f = fields(Group::G1);
        assert!(!f.d3.is_empty());
        assert!(f.d2.is_empty() && f.d1.is_empty());
        assert_eq!(f.endpoints.len(), 10);
    }

    #[test]
    fn sap_lies_on_food_paths_only() {
        let cfg = Case1Config::default();
        let g = grid();
        let f = build_case1_fields(&cfg, &g).unwrap();
        let food_segs = cfg.layout.path_segments(&cfg.food_endpoints).unwrap();
        for (x, y) in f.d2.cells() {
            let c = g.cell_center(x, y);
            assert!(food_segs.iter().any(|s| s.distance(c) <= 1.0 + 1e-9));
            assert!(f.d3.contains(x, y));
        }
    }

    /// Tree-walk oracle: every fork on a food path with a non-food child gets
    /// a repellent mark at that child's entrance, and nowhere else.
    #[test]
    fn srp_marks_each_non_food_entrance_once() {
        let cfg = Case1Config::default();
        let g = grid();
        let f = build_case1_fields(&cfg, &g).unwrap();
        let layout = &cfg.layout;

        // Walk from the root, collecting (fork branch, non-food child).
        let food = layout.path_branches(&cfg.food_endpoints).unwrap();
        let mut expected = Vec::new();
        let mut stack = vec![1u32];
        while let Some(b) = stack.pop() {
            let kids = layout.children_of(b);
            let on_food: Vec<_> = kids.iter().filter(|k| food.contains(k)).collect();
            if food.contains(&b) && !on_food.is_empty() {
                for k in &kids {
                    if !food.contains(k) {
                        expected.push(*k);
                    }
                }
            }
            stack.extend(kids);
        }
        expected.sort();
        // Default layout: forks on branches 2, 6, 11 and 17.
        assert_eq!(expected, vec![3, 8, 12, 18]);

        for child in &expected {
            let head = layout.branch_head(*child, cfg.srp_length);
            let start = head[0].from;
            let end = head.last().unwrap().to;
            let near = |p: (f64, f64)| {
                f.d1.cells().any(|(x, y)| {
                    let c = g.cell_center(x, y);
                    (c.0 - p.0).hypot(c.1 - p.1) <= 0.5
                })
            };
            assert!(
                near(start) && near(end),
                "branch {child} entrance not marked"
            );
        }
        // Every red cell belongs to exactly one expected entrance head.
        for (x, y) in f.d1.cells() {
            let c = g.cell_center(x, y);
            let owners = expected
                .iter()
                .filter(|&&k| {
                    layout
                        .branch_head(k, cfg.srp_length)
                        .iter()
                        .any(|s| s.distance(c) <= 1.0 + 1e-9)
                })
                .count();
            assert!(owners >= 1);
            assert!(f.d3.contains(x, y));
        }
    }

    #[test]
    fn food_must_exist() {
        let cfg = Case1Config {
            food_endpoints: [11].into_iter().collect(),
            ..Case1Config::default()
        };
        assert!(build_case1_fields(&cfg, &grid()).unwrap_err().is_config());
    }

    #[test]
    fn arrival_detection() {
        let eps = vec![
            Endpoint {
                id: 3,
                pos: (10.0, 10.0),
            },
            Endpoint {
                id: 5,
                pos: (14.0, 10.0),
            },
            Endpoint {
                id: 4,
                pos: (12.0, 14.0),
            },
        ];
        assert_eq!(
            detect_arrival(&Pose::new(11.0, 10.0, 0.0), &eps, 3.0),
            Some(3)
        );
        assert_eq!(detect_arrival(&Pose::new(40.0, 40.0, 0.0), &eps, 3.0), None);
        // equidistant from 3 and 5 -> lower id
        assert_eq!(
            detect_arrival(&Pose::new(12.0, 10.0, 0.0), &eps, 3.0),
            Some(3)
        );
        let _ = Segment {
            from: (0.0, 0.0),
            to: (1.0, 0.0),
            branch: 1,
            parent: 0,
        };
    }

    #[test]
    fn trunk_heading_points_right() {
        assert_eq!(Case1Config::default().trunk_heading(), 0.0);
    }
}
