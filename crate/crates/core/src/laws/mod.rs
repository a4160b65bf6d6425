//! Randomized checks of the equational laws of paths, fibrations, function
//! extensionality and the universe.
//!
//! Each law has a stable id and a fixed position in [`registry`]. Instance
//! `k` of the law at position `n` draws from a ChaCha8 stream seeded with
//! `seed ^ n` on stream `k`, so results never depend on filtering, ordering
//! or the number of worker threads.

pub mod gen;
mod suites;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::path::{SampleSpec, DEFAULT_PROBES, DEFAULT_SEED};
use crate::ring::{self, Mutation, RingInstance};
pub use gen::Case;

/// A failed instance: what was generated, and where it went wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: serde_json::Value,
    pub witness: String,
}

impl Failure {
    pub fn new(inputs: serde_json::Value, witness: impl Into<String>) -> Self {
        Failure { inputs, witness: witness.into() }
    }
}

pub type LawResult = Result<(), Failure>;

pub struct Law {
    pub id: &'static str,
    /// Ring instances on which the law is meaningful.
    pub rings: &'static [RingInstance],
    pub check: fn(&mut Case) -> LawResult,
}

const ALL_RINGS: &[RingInstance] = &RingInstance::ALL;

pub fn registry() -> &'static [Law] {
    suites::LAWS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: usize,
    pub inputs: serde_json::Value,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub instances: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Instances of a law run on the rayon pool; without the `parallel`
    /// feature this is the same as sequential.
    #[default]
    Parallel,
}

#[derive(Debug, Clone)]
pub struct LawConfig {
    pub seed: u64,
    pub count: usize,
    /// Comma-separated id prefixes; empty selects every law.
    pub filter: Option<String>,
    pub ring: RingInstance,
    pub mutation: Mutation,
    pub probes: usize,
    pub timing: bool,
    pub execution: Execution,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: DEFAULT_SEED,
            count: 1000,
            filter: None,
            ring: RingInstance::Rationals,
            mutation: Mutation::None,
            probes: DEFAULT_PROBES,
            timing: false,
            execution: Execution::default(),
        }
    }
}

impl LawConfig {
    fn selects(&self, law: &Law) -> bool {
        if !law.rings.contains(&self.ring) {
            return false;
        }
        match &self.filter {
            None => true,
            Some(f) => f.split(',').map(str::trim).filter(|t| !t.is_empty()).any(|t| law.id.starts_with(t)),
        }
    }
}

/// The laws `config` selects, with their registry positions.
pub fn selected(config: &LawConfig) -> Vec<(usize, &'static Law)> {
    registry().iter().enumerate().filter(|(_, l)| config.selects(l)).collect()
}

fn run_instance(config: &LawConfig, index: usize, law: &Law, k: usize) -> LawResult {
    let law_seed = config.seed ^ index as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(law_seed);
    rng.set_stream(k as u64);
    let spec = SampleSpec::new(law_seed.rotate_left(17) ^ k as u64, config.probes);
    let mut case = Case { rng, ring: config.ring, spec };
    ring::with_mutation(config.mutation, || (law.check)(&mut case))
}

fn first_failure(config: &LawConfig, index: usize, law: &Law) -> Option<(usize, Failure)> {
    let attempt = |k: usize| run_instance(config, index, law, k).err().map(|f| (k, f));
    #[cfg(feature = "parallel")]
    if config.execution == Execution::Parallel {
        use rayon::prelude::*;
        return (0..config.count).into_par_iter().find_map_first(attempt);
    }
    (0..config.count).find_map(attempt)
}

pub fn run_law(config: &LawConfig, index: usize, law: &Law) -> LawReport {
    let start = Instant::now();
    let failure = first_failure(config, index, law);
    LawReport {
        law: law.id.to_string(),
        instances: config.count,
        passed: failure.is_none(),
        counterexample: failure.map(|(instance, f)| Counterexample { instance, inputs: f.inputs, witness: f.witness }),
        elapsed_ms: config.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Runs every selected law, in registry order.
pub fn run(config: &LawConfig) -> Vec<LawReport> {
    selected(config).into_iter().map(|(i, law)| run_law(config, i, law)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(filter: &str) -> LawConfig {
        LawConfig { count: 12, filter: Some(filter.into()), ..LawConfig::default() }
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = registry().iter().map(|l| l.id).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn every_law_passes_a_few_instances() {
        let config = LawConfig { count: 6, ..LawConfig::default() };
        for report in run(&config) {
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut config = quick("groupoid");
        config.mutation = Mutation::SwappedTruncatedSub;
        let par = run(&config);
        config.execution = Execution::Sequential;
        assert_eq!(par, run(&config));
        assert!(par.iter().any(|r| !r.passed));
    }

    #[test]
    fn filtering_does_not_change_results() {
        let all = run(&quick("groupoid"));
        let one = run(&quick("groupoid.assoc"));
        assert_eq!(one.len(), 1);
        assert_eq!(all.iter().find(|r| r.law == "groupoid.assoc"), one.first());
    }

    #[test]
    fn ring_restricted_laws() {
        let degenerate = |ring| {
            let config = LawConfig { ring, ..quick("degeneracy") };
            selected(&config).len()
        };
        assert_eq!(degenerate(RingInstance::Rationals), 0);
        assert_eq!(degenerate(RingInstance::Integers), 1);
    }
}
