//! Experiment construction: static three-pheromone trail maps for foraging
//! (Case I) and leader-bound aggregation plus predator-triggered alarm
//! sources (Case II).

mod case1;
mod case2;
pub mod map;

pub use case1::{
    build_case1_fields, detect_arrival, Case1Config, Case1Fields, Group, TrailPheromone,
};
pub use case2::{
    case2_injection_update, predator_entry, predator_step, AlarmTrigger, Case2Config, Case2Sources,
    GaussianPheromone, PredatorMode, AGP_ID, ALP_ID,
};
pub use map::{Endpoint, MapLayout, Segment};

use std::fmt;

/// Fixed role of a robot for a whole run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentRole {
    Forager,
    Leader,
    Follower,
    Predator,
}

impl AgentRole {
    pub fn name(self) -> &'static str {
        match self {
            AgentRole::Forager => "forager",
            AgentRole::Leader => "leader",
            AgentRole::Follower => "follower",
            AgentRole::Predator => "predator",
        }
    }
}

impl fmt::Display for AgentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
