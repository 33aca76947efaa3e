use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Wander,
    FollowTrail,
    FollowHeading,
    Avoid,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Wander => "wander",
            Mode::FollowTrail => "follow_trail",
            Mode::FollowHeading => "follow_heading",
            Mode::Avoid => "avoid",
        }
    }
}

/// Branch picked at a cyan/blue bifurcation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Cyan,
    Blue,
}

/// Side of the robot a branch leaves on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatchedBranch<T> {
    pub choice: Branch,
    pub entered_at: T,
}

/// Per-robot bookkeeping carried across control ticks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorState<T> {
    pub mode: Mode,
    /// Pivot time left in the current avoidance (s).
    pub avoid_remaining: T,
    /// +1 pivots counterclockwise, -1 clockwise.
    pub avoid_turn_sign: T,
    /// Mode restored when the avoidance completes.
    pub resume_mode: Mode,
    pub latched_branch: Option<LatchedBranch<T>>,
    /// Time since the bifurcation signature was last seen (s).
    pub signature_absent: T,
    /// Branch taken at a fork whose two sides look alike.
    pub fork_side: Option<Side>,
    /// Time since such a fork was last under the sensors (s).
    pub split_absent: T,
    /// Heading change contributed by the last wander perturbation (rad).
    pub wander_heading_bias: T,
    /// Control time accumulated by this state (s).
    pub clock: T,
}

impl<T: Scalar> Default for BehaviorState<T> {
    fn default() -> Self {
        Self {
            mode: Mode::Wander,
            avoid_remaining: T::zero(),
            avoid_turn_sign: T::one(),
            resume_mode: Mode::Wander,
            latched_branch: None,
            signature_absent: T::zero(),
            fork_side: None,
            split_absent: T::zero(),
            wander_heading_bias: T::zero(),
            clock: T::zero(),
        }
    }
}

impl<T: Scalar> BehaviorState<T> {
    pub fn is_avoiding(&self) -> bool {
        self.mode == Mode::Avoid && self.avoid_remaining > T::zero()
    }
}
