//! Deterministic fixed-timestep simulation loop.
//!
//! Each tick runs, in order: scenario injection updates, field dynamics,
//! image compositing, then sensing, decision and motion for every robot
//! against the poses of the previous tick, then logging. All randomness
//! comes from per-robot ChaCha8 streams keyed by robot id plus one scenario
//! stream, so results depend only on the configuration and seed.

mod engine;
mod log;
mod world;

pub use engine::{robot_rng, run_simulation, scenario_rng, Simulation};
pub use log::{Event, EventKind, Frame, PoseRecord, RunLog, TrialOutcome, TrialRecord};
pub use world::{Layer, World};

use std::fmt;

use crate::agents::{Arena, RobotBody};
use crate::behaviors::BehaviorParams;
use crate::error::{Error, Result};
use crate::field::{PdeParams, StencilMode};
use crate::scenarios::{AgentRole, Case1Config, Case2Config};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Foraging over static three-pheromone trails.
    Case1,
    /// Leader aggregation with predator-triggered alarm.
    Case2,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Case1 => "case1",
            ScenarioKind::Case2 => "case2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "case1" => Some(ScenarioKind::Case1),
            "case2" => Some(ScenarioKind::Case2),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One robot of the roster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotSpec {
    pub id: u32,
    pub role: AgentRole,
    pub body: RobotBody<Real>,
    pub params: BehaviorParams<Real>,
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub dt: Real,
    pub arena_width: Real,
    pub arena_height: Real,
    pub cell_size: Real,
    pub stencil: StencilMode,
    /// Uniform additive sensor noise amplitude (0 disables).
    pub sensor_noise: Real,
    /// Keep a composite frame every this many ticks (0 keeps none).
    pub frame_stride: usize,
    pub body: RobotBody<Real>,
    pub behavior: BehaviorParams<Real>,
    pub case1: Case1Config,
    pub case2: Case2Config,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::Case1,
            seed: 1,
            dt: 0.02,
            arena_width: 143.9,
            arena_height: 80.9,
            cell_size: 0.25,
            stencil: StencilMode::Faithful,
            sensor_noise: 0.0,
            frame_stride: 0,
            body: RobotBody::default(),
            behavior: BehaviorParams::default(),
            case1: Case1Config::default(),
            case2: Case2Config::default(),
        }
    }
}

impl SimConfig {
    pub fn case1() -> Self {
        Self::default()
    }

    pub fn case2() -> Self {
        Self {
            scenario: ScenarioKind::Case2,
            ..Self::default()
        }
    }

    pub fn arena(&self) -> Arena<Real> {
        Arena::new(self.arena_width, self.arena_height)
    }

    /// Number of ticks covering `seconds`.
    pub fn ticks_for(&self, seconds: Real) -> u64 {
        (seconds / self.dt).round().max(0.0) as u64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::range("dt", self.dt, "dt > 0"));
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return Err(Error::range("cell_size", self.cell_size, "cell_size > 0"));
        }
        if !(self.arena_width > self.body.diameter) {
            return Err(Error::range(
                "arena_width",
                self.arena_width,
                "arena_width > diameter",
            ));
        }
        if !(self.arena_height > self.body.diameter) {
            return Err(Error::range(
                "arena_height",
                self.arena_height,
                "arena_height > diameter",
            ));
        }
        if !(self.sensor_noise >= 0.0 && self.sensor_noise < 1.0) {
            return Err(Error::range(
                "sensor_noise",
                self.sensor_noise,
                "0 <= sensor_noise < 1",
            ));
        }
        self.body.validate()?;
        self.robot_params(AgentRole::Forager).validate()?;
        match self.scenario {
            ScenarioKind::Case1 => {
                self.case1.validate()?;
                for p in [&self.case1.lap, &self.case1.sap, &self.case1.srp] {
                    PdeParams::new(p.evaporation_e, p.diffusion_d, self.dt).validate()?;
                }
            }
            ScenarioKind::Case2 => self.case2.validate()?,
        }
        Ok(())
    }

    /// Behaviour parameters for a role, synchronized with the body and timestep.
    pub fn robot_params(&self, role: AgentRole) -> BehaviorParams<Real> {
        let mut p = self.behavior;
        p.dt = self.dt;
        p.wheelbase = self.body.wheelbase;
        if role == AgentRole::Leader {
            p.base_speed_vb = self.case2.leader_speed;
        }
        p
    }

    /// Default roster: one forager for foraging; leader 1, followers
    /// `2..=n+1` and the predator last for aggregation.
    pub fn roster(&self) -> Vec<RobotSpec> {
        let spec = |id, role| RobotSpec {
            id,
            role,
            body: self.body,
            params: self.robot_params(role),
        };
        match self.scenario {
            ScenarioKind::Case1 => vec![spec(1, AgentRole::Forager)],
            ScenarioKind::Case2 => {
                let n = self.case2.followers as u32;
                let mut r = vec![spec(1, AgentRole::Leader)];
                r.extend((2..n + 2).map(|id| spec(id, AgentRole::Follower)));
                r.push(spec(n + 2, AgentRole::Predator));
                r
            }
        }
    }
}
