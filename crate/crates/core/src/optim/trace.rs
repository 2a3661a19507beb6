use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    /// System sum rate after this iteration, bits/s.
    pub sum_rate: f64,
    /// Accepted moves (user switches or phase changes) in this iteration.
    pub switches: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// A full pass changed nothing, or the change fell under the threshold.
    Converged,
    /// The round utility did not beat the best of the preceding window.
    NoImprovement,
    IterationCap,
    /// Every candidate was enumerated.
    Exhausted,
    /// Nothing to optimize.
    Trivial,
}

/// Per-iteration record of one optimizer run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub entries: Vec<TraceEntry>,
    pub termination: Termination,
    #[serde(skip)]
    started: Option<Instant>,
}

impl PartialEq for OptimizerTrace {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.termination == other.termination
    }
}

impl OptimizerTrace {
    pub fn start() -> Self {
        Self { entries: Vec::new(), termination: Termination::Trivial, started: Some(Instant::now()) }
    }

    pub fn record(&mut self, iteration: usize, sum_rate: f64, switches: usize) {
        let elapsed_ms = self.started.map_or(0.0, |t| t.elapsed().as_secs_f64() * 1e3);
        self.entries.push(TraceEntry { iteration, sum_rate, switches, elapsed_ms });
    }

    pub fn finish(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    pub fn sum_rates(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.sum_rate).collect()
    }

    /// Iterations after the initial record.
    pub fn iterations(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn total_switches(&self) -> usize {
        self.entries.iter().map(|e| e.switches).sum()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].sum_rate >= w[0].sum_rate)
    }

    /// Zeroes every wall-clock field so that serialized traces are reproducible.
    pub fn clear_timing(&mut self) {
        for e in &mut self.entries {
            e.elapsed_ms = 0.0;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut t = OptimizerTrace::start();
        t.record(0, 1.0, 0);
        t.record(1, 2.0, 3);
        let mut t = t.finish(Termination::Converged);
        t.clear_timing();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["termination"], "converged");
        assert_eq!(v["entries"][1]["switches"], 3);
        assert_eq!(v["entries"][1]["elapsed_ms"], 0.0);
        assert_eq!(t.iterations(), 1);
        assert!(t.is_non_decreasing());
    }
}
