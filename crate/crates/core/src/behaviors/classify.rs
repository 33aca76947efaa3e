use crate::agents::{SensorReading, SENSOR_COUNT};
use crate::field::Channel;
use crate::scalar::Scalar;

/// Trail colour under a sensor (or under the robot on average).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrailClass {
    OffTrail,
    Blue,
    Cyan,
    Magenta,
    WhiteMix,
}

impl TrailClass {
    pub fn is_on_trail(self) -> bool {
        self != TrailClass::OffTrail
    }

    /// Blue and green both present.
    pub fn has_cyan(self) -> bool {
        matches!(self, TrailClass::Cyan | TrailClass::WhiteMix)
    }

    /// Blue and red both present.
    pub fn has_magenta(self) -> bool {
        matches!(self, TrailClass::Magenta | TrailClass::WhiteMix)
    }
}

/// Classifies one colour: a channel is present when its value is at least `tau`.
pub fn classify_rgb<T: Scalar>(rgb: [T; 3], tau: T) -> TrailClass {
    let on = |c: Channel| rgb[c.index()] >= tau;
    match (on(Channel::Blue), on(Channel::Green), on(Channel::Red)) {
        (false, _, _) => TrailClass::OffTrail,
        (true, true, true) => TrailClass::WhiteMix,
        (true, true, false) => TrailClass::Cyan,
        (true, false, true) => TrailClass::Magenta,
        (true, false, false) => TrailClass::Blue,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// Class of the mean reading.
    pub overall: TrailClass,
    pub per_sensor: [TrailClass; SENSOR_COUNT],
    /// Sensors that are on a trail disagree about its colour.
    pub bifurcation: bool,
}

impl Classification {
    fn any(&self, pred: impl Fn(TrailClass) -> bool) -> bool {
        self.per_sensor.iter().any(|&c| pred(c))
    }

    /// Bifurcation where one branch carries the repellent (magenta) mark.
    pub fn magenta_bifurcation(&self) -> bool {
        self.bifurcation && self.any(TrailClass::has_magenta)
    }

    /// Bifurcation between a cyan branch and a plain blue branch.
    pub fn cyan_blue_bifurcation(&self) -> bool {
        self.bifurcation && self.any(TrailClass::has_cyan) && self.any(|c| c == TrailClass::Blue)
    }
}

pub fn classify_trail<T: Scalar>(reading: &SensorReading<T>, tau: T) -> Classification {
    let per_sensor = reading.per_sensor.map(|s| classify_rgb(s, tau));
    let mut on = per_sensor.iter().filter(|c| c.is_on_trail());
    let bifurcation = match on.next() {
        Some(first) => on.any(|c| c != first),
        None => false,
    };
    Classification {
        overall: classify_rgb(reading.mean, tau),
        per_sensor,
        bifurcation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 0.15;

    #[test]
    fn mean_classes() {
        let c = |rgb| classify_trail(&SensorReading::uniform(rgb), TAU).overall;
        assert_eq!(c([0.0, 0.0, 0.5]), TrailClass::Blue);
        assert_eq!(c([0.4, 0.0, 0.5]), TrailClass::Magenta);
        assert_eq!(c([0.0, 0.4, 0.5]), TrailClass::Cyan);
        assert_eq!(c([0.4, 0.4, 0.5]), TrailClass::WhiteMix);
        assert_eq!(c([0.9, 0.9, 0.1]), TrailClass::OffTrail);
    }

    #[test]
    fn mixed_sensors_flag_bifurcation() {
        let cyan = [0.0, 1.0, 1.0];
        let blue = [0.0, 0.0, 1.0];
        let r = SensorReading::from_sensors([cyan, cyan, blue, blue]);
        let cls = classify_trail(&r, TAU);
        assert!(cls.bifurcation);
        assert!(cls.cyan_blue_bifurcation());
        assert!(!cls.magenta_bifurcation());
    }

    #[test]
    fn trail_edge_is_not_a_bifurcation() {
        let blue = [0.0, 0.0, 1.0];
        let off = [0.0; 3];
        let r = SensorReading::from_sensors([off, blue, off, blue]);
        assert!(!classify_trail(&r, TAU).bifurcation);
    }

    #[test]
    fn magenta_signature() {
        let cyan = [0.0, 1.0, 1.0];
        let magenta = [1.0, 0.0, 1.0];
        let r = SensorReading::from_sensors([cyan, magenta, cyan, [0.0; 3]]);
        let cls = classify_trail(&r, TAU);
        assert!(cls.magenta_bifurcation());
        assert!(!cls.cyan_blue_bifurcation());
    }
}
