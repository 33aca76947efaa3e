use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scenarios::AgentRole;
use crate::sim::{RunLog, ScenarioKind, TrialOutcome};
use crate::Real;

/// Aggregation distance per logged tick: the summed distance from every
/// follower to the leader, as `(time, S)` pairs.
pub fn aggregation_series(log: &RunLog) -> Result<Vec<(Real, Real)>> {
    let leader = log
        .roster
        .iter()
        .find(|(_, r)| *r == AgentRole::Leader)
        .map(|(id, _)| *id)
        .ok_or_else(|| Error::ScenarioMismatch("aggregation series needs a leader".into()))?;
    let followers: Vec<u32> = log
        .roster
        .iter()
        .filter(|(_, r)| *r == AgentRole::Follower)
        .map(|(id, _)| *id)
        .collect();

    let mut out = Vec::new();
    let mut i = 0;
    let poses = &log.poses;
    while i < poses.len() {
        let tick = poses[i].tick;
        let mut j = i;
        while j < poses.len() && poses[j].tick == tick {
            j += 1;
        }
        let group = &poses[i..j];
        let lead = group.iter().find(|p| p.robot_id == leader);
        if let Some(l) = lead {
            let s: Real = group
                .iter()
                .filter(|p| followers.contains(&p.robot_id))
                .map(|p| p.pose.distance_to(&l.pose))
                .sum();
            out.push((group[0].time, s));
        }
        i = j;
    }
    Ok(out)
}

/// Trailing moving average over `window` seconds: each output point averages
/// the samples with time in `(t - window, t]`.
pub fn windowed_mean(series: &[(Real, Real)], window: Real) -> Vec<(Real, Real)> {
    let mut out = Vec::with_capacity(series.len());
    let mut start = 0;
    let mut sum = 0.0;
    for (k, &(t, v)) in series.iter().enumerate() {
        sum += v;
        while series[start].0 <= t - window {
            sum -= series[start].1;
            start += 1;
        }
        out.push((t, sum / (k + 1 - start) as Real));
    }
    out
}

/// First-arrival counts over foraging trials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArrivalHistogram {
    /// Every endpoint of the layout, including those never reached.
    pub counts: BTreeMap<u32, usize>,
    pub timeouts: usize,
}

impl ArrivalHistogram {
    pub fn trials(&self) -> usize {
        self.counts.values().sum::<usize>() + self.timeouts
    }

    pub fn arrivals(&self) -> usize {
        self.counts.values().sum()
    }

    /// Fraction of arrivals (timeouts excluded) that landed in `ids`.
    pub fn fraction_in(&self, ids: &[u32]) -> Real {
        let n = self.arrivals();
        if n == 0 {
            return 0.0;
        }
        let hit: usize = ids.iter().filter_map(|i| self.counts.get(i)).sum();
        hit as Real / n as Real
    }

    /// Number of endpoints reached at least once.
    pub fn distinct(&self) -> usize {
        self.counts.values().filter(|&&c| c > 0).count()
    }
}

/// Tallies the trial outcomes of one or more foraging logs.
pub fn arrival_histogram(logs: &[RunLog]) -> Result<ArrivalHistogram> {
    let mut h = ArrivalHistogram::default();
    for log in logs {
        let config = log
            .config
            .as_ref()
            .filter(|c| c.scenario == ScenarioKind::Case1)
            .ok_or_else(|| {
                Error::ScenarioMismatch("arrival histogram needs foraging logs".into())
            })?;
        for e in &config.case1.layout.endpoints {
            h.counts.entry(e.id).or_insert(0);
        }
        for t in &log.trials {
            match t.outcome {
                TrialOutcome::Arrival(id) => *h.counts.entry(id).or_insert(0) += 1,
                TrialOutcome::Timeout => h.timeouts += 1,
            }
        }
    }
    Ok(h)
}
