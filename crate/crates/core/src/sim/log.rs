use std::fmt;

use crate::agents::Pose;
use crate::scenarios::AgentRole;
use crate::Real;

use super::SimConfig;

/// Pose of one robot after one tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseRecord {
    pub tick: u64,
    pub time: Real,
    pub robot_id: u32,
    pub pose: Pose<Real>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    TrialStart,
    Arrival,
    Timeout,
    Collision,
    AlarmEmit,
    AlarmRefresh,
    PredatorEnter,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::TrialStart => "trial_start",
            EventKind::Arrival => "arrival",
            EventKind::Timeout => "timeout",
            EventKind::Collision => "collision",
            EventKind::AlarmEmit => "alarm_emit",
            EventKind::AlarmRefresh => "alarm_refresh",
            EventKind::PredatorEnter => "predator_enter",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            EventKind::TrialStart,
            EventKind::Arrival,
            EventKind::Timeout,
            EventKind::Collision,
            EventKind::AlarmEmit,
            EventKind::AlarmRefresh,
            EventKind::PredatorEnter,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    /// Both kinds of alarm emission count as a trigger.
    pub fn is_alarm(self) -> bool {
        matches!(self, EventKind::AlarmEmit | EventKind::AlarmRefresh)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: Real,
    pub robot_id: u32,
    pub kind: EventKind,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    Arrival(u32),
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub index: usize,
    pub start_time: Real,
    pub end_time: Real,
    pub outcome: TrialOutcome,
}

/// A quantized composite image with the poses at that tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub tick: u64,
    pub width: usize,
    pub height: usize,
    pub cell_size: Real,
    /// Row-major RGB bytes, row 0 at `y = 0`.
    pub rgb: Vec<u8>,
    pub poses: Vec<(u32, Pose<Real>)>,
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    /// `None` for hand-assembled simulations.
    pub config: Option<SimConfig>,
    pub roster: Vec<(u32, AgentRole)>,
    pub dt: Real,
    pub poses: Vec<PoseRecord>,
    pub events: Vec<Event>,
    pub trials: Vec<TrialRecord>,
    pub frames: Vec<Frame>,
    /// Composite at the end of the run, for trajectory overlays.
    pub final_frame: Option<Frame>,
    /// Field steps taken before the first tick to bring static trails to steady state.
    pub warmup_steps: usize,
}

impl RunLog {
    pub fn new(config: Option<SimConfig>, roster: Vec<(u32, AgentRole)>, dt: Real) -> Self {
        Self {
            config,
            roster,
            dt,
            poses: Vec::new(),
            events: Vec::new(),
            trials: Vec::new(),
            frames: Vec::new(),
            final_frame: None,
            warmup_steps: 0,
        }
    }

    pub fn role_of(&self, id: u32) -> Option<AgentRole> {
        self.roster.iter().find(|(i, _)| *i == id).map(|(_, r)| *r)
    }

    pub fn trajectory(&self, id: u32) -> Vec<PoseRecord> {
        self.poses
            .iter()
            .filter(|p| p.robot_id == id)
            .copied()
            .collect()
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter().filter(move |e| e.kind == kind)
    }
}
