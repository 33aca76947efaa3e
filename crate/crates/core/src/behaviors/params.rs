use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gain and speed limits for one wheel law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlParams<T> {
    pub sensitivity_p: T,
    /// Base forward speed in cm/s.
    pub base_speed_vb: T,
    pub max_speed: T,
}

impl<T: Scalar> ControlParams<T> {
    pub fn new(sensitivity_p: T, base_speed_vb: T, max_speed: T) -> Self {
        Self {
            sensitivity_p,
            base_speed_vb,
            max_speed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sensitivity_p > T::zero()) {
            return Err(Error::range(
                "sensitivity_p",
                self.sensitivity_p,
                "sensitivity_p > 0",
            ));
        }
        if !(self.base_speed_vb > T::zero() && self.base_speed_vb <= self.max_speed) {
            return Err(Error::range(
                "base_speed_vb",
                self.base_speed_vb,
                "0 < base_speed_vb <= max_speed",
            ));
        }
        Ok(())
    }
}

/// How the alarm pheromone gradient is turned into a motion target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlarmResponse {
    /// Move down the alarm gradient, away from the alarm site.
    #[default]
    Flee,
    /// Move up the alarm gradient.
    Approach,
}

impl AlarmResponse {
    pub fn name(self) -> &'static str {
        match self {
            AlarmResponse::Flee => "flee",
            AlarmResponse::Approach => "approach",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "flee" => Some(AlarmResponse::Flee),
            "approach" => Some(AlarmResponse::Approach),
            _ => None,
        }
    }
}

/// Everything the decision procedures need besides state and sensor input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorParams<T> {
    /// Gain of the trail-following law.
    pub trail_p: T,
    /// Gain of the heading-following law.
    pub heading_p: T,
    pub base_speed_vb: T,
    pub max_speed: T,
    /// Channel presence threshold on normalized strength.
    pub presence_tau: T,
    pub gradient_eps: T,
    /// Half-width of the uniform wander turn-rate perturbation (rad/s).
    pub wander_jitter: T,
    /// Avoidance turn angle range (rad).
    pub avoid_turn_min: T,
    pub avoid_turn_max: T,
    /// Probability of taking the cyan branch at a cyan/blue bifurcation.
    pub cyan_preference: f64,
    /// A latched branch choice is released once the bifurcation signature
    /// has been absent this long (s).
    pub latch_release: T,
    pub alarm_response: AlarmResponse,
    pub wheelbase: T,
    /// Control period (s).
    pub dt: T,
}

impl<T: Scalar> Default for BehaviorParams<T> {
    fn default() -> Self {
        Self {
            trail_p: T::lit(20.0),
            heading_p: T::lit(4.0),
            base_speed_vb: T::lit(6.0),
            max_speed: T::lit(20.0),
            presence_tau: T::lit(0.15),
            gradient_eps: T::lit(1e-3),
            wander_jitter: T::lit(1.5),
            avoid_turn_min: T::FRAC_PI_2(),
            avoid_turn_max: T::PI(),
            cyan_preference: 0.7,
            latch_release: T::lit(0.5),
            alarm_response: AlarmResponse::Flee,
            wheelbase: T::lit(3.0),
            dt: T::lit(0.02),
        }
    }
}

impl<T: Scalar> BehaviorParams<T> {
    pub fn trail(&self) -> ControlParams<T> {
        ControlParams::new(self.trail_p, self.base_speed_vb, self.max_speed)
    }

    pub fn heading(&self) -> ControlParams<T> {
        ControlParams::new(self.heading_p, self.base_speed_vb, self.max_speed)
    }

    pub fn validate(&self) -> Result<()> {
        self.trail().validate()?;
        self.heading().validate()?;
        if !(self.presence_tau > T::zero() && self.presence_tau < T::one()) {
            return Err(Error::range(
                "presence_tau",
                self.presence_tau,
                "0 < presence_tau < 1",
            ));
        }
        if !(self.gradient_eps >= T::zero()) {
            return Err(Error::range(
                "gradient_eps",
                self.gradient_eps,
                "gradient_eps >= 0",
            ));
        }
        if !(self.wander_jitter >= T::zero()) {
            return Err(Error::range(
                "wander_jitter",
                self.wander_jitter,
                "wander_jitter >= 0",
            ));
        }
        if !(self.avoid_turn_min > T::zero() && self.avoid_turn_min <= self.avoid_turn_max) {
            return Err(Error::range(
                "avoid_turn_min",
                self.avoid_turn_min,
                "0 < avoid_turn_min <= avoid_turn_max",
            ));
        }
        if !(0.0..=1.0).contains(&self.cyan_preference) {
            return Err(Error::range(
                "cyan_preference",
                self.cyan_preference,
                "0 <= cyan_preference <= 1",
            ));
        }
        if !(self.wheelbase > T::zero()) {
            return Err(Error::range("wheelbase", self.wheelbase, "wheelbase > 0"));
        }
        if !(self.dt > T::zero()) {
            return Err(Error::range("dt", self.dt, "dt > 0"));
        }
        Ok(())
    }
}
