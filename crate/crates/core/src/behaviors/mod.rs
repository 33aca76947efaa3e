//! Control laws and per-robot decision procedures.
//!
//! [`trail_follow_speeds`] and [`heading_follow_speeds`] are the two wheel
//! laws. [`forage_step`], [`leader_step`] and [`follower_step`] are the
//! decision procedures for the foraging and aggregation/alarm experiments;
//! they share the wandering and avoiding motions of [`reactive_motion`].

mod classify;
mod control;
mod params;
mod state;
mod strategy;

pub use classify::{classify_rgb, classify_trail, Classification, TrailClass};
pub use control::{
    branch_follow_speeds, heading_follow_speeds, split_signature, trail_follow_speeds,
    trail_strengths, TrailSelector,
};
pub use params::{AlarmResponse, BehaviorParams, ControlParams};
pub use state::{BehaviorState, Branch, LatchedBranch, Mode, Side};
pub use strategy::{
    begin_avoid, follower_step, forage_step, leader_step, reactive_motion, wander_step,
};
