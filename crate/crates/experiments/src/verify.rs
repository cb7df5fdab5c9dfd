//! Seeded randomized checks of the concentration and gradient bounds.

use cleandirty::bounds::{random_check, CheckRecord};
use cleandirty::random::mix_seed;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub prop: u8,
    pub n: usize,
    pub n_d: usize,
    pub params: String,
    pub p: f64,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
}

impl From<CheckRecord> for VerifyRow {
    fn from(r: CheckRecord) -> Self {
        Self {
            prop: r.prop,
            n: r.n,
            n_d: r.n_dirty,
            params: r.params,
            p: r.p,
            seed: r.seed,
            lhs: r.check.lhs,
            rhs: r.check.rhs,
            margin: r.check.margin,
            passed: r.check.passed,
        }
    }
}

/// `trials` checks of proposition `prop`, trial `i` seeded by
/// `mix_seed(seed, [prop, i])`, returned in trial order.
pub fn verify_bounds(prop: u8, trials: usize, seed: u64, workers: usize) -> Result<Vec<VerifyRow>> {
    if !(1..=4).contains(&prop) {
        return Err(ExperimentError::Config(format!("proposition {prop} (expected 1-4)")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let s = mix_seed(seed, &[u64::from(prop), i as u64]);
                Ok(random_check(prop, s)?.into())
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_core_batches() {
        let rows = verify_bounds(1, 4, 9, 2).unwrap();
        let core = cleandirty::bounds::random_checks(1, 4, 9).unwrap();
        let want: Vec<VerifyRow> = core.into_iter().map(VerifyRow::from).collect();
        assert_eq!(rows, want);
        assert!(verify_bounds(0, 1, 0, 1).is_err());
    }
}
