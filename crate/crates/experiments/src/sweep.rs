//! Gradient-norm sweeps over the HVA grid.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use cleandirty::hva::HvaSimulator;
use cleandirty::noise::QubitLayout;
use cleandirty::random::{mix_seed, random_angles, rng_from_seed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{SweepConfig, SweepMode};
use crate::error::{ExperimentError, Result};

/// One simulated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub n_dirty: usize,
    pub f: f64,
    pub layers: usize,
}

impl GridPoint {
    /// Depends on `(n, L)` only: every noise setting at the same depth sees the
    /// same parameter draws, so curve comparisons are not swamped by sampling
    /// noise.
    pub fn seed(&self, master: u64) -> u64 {
        mix_seed(master, &[self.n as u64, self.layers as u64])
    }
}

/// `mean_grad_1norm` is the per-parameter gradient 1-norm `Σ_k |∂_k C| / 2L`
/// averaged over `samples` parameter draws, so a depth-independent gradient
/// gives a flat curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub n_d: usize,
    pub f: f64,
    #[serde(rename = "L")]
    pub layers: usize,
    pub noise_model: String,
    pub mean_grad_1norm: f64,
    pub std_grad_1norm: f64,
    pub total_error_rate: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Grid points in output order: for each `n`, the clean/dirty block (`n_d`
/// ascending, `f = 1`) then the rescaled block (`n_d = n`, `f` as listed), each
/// with `L` innermost. A point reachable from both blocks appears once.
pub fn grid(cfg: &SweepConfig) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        let mut blocks: Vec<(usize, f64)> = Vec::new();
        if cfg.mode != SweepMode::Rescaled {
            blocks.extend(cfg.dirty_counts(n).into_iter().map(|k| (k, 1.0)));
        }
        if cfg.mode != SweepMode::CleanDirty {
            for &f in &cfg.f {
                // all-dirty at f = 1 is already in the clean/dirty block
                if !blocks.contains(&(n, f)) {
                    blocks.push((n, f));
                }
            }
        }
        for (n_dirty, f) in blocks {
            out.extend(cfg.layers.iter().map(|&layers| GridPoint { n, n_dirty, f, layers }));
        }
    }
    out
}

/// Mean and population standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
    (m, var.sqrt())
}

pub fn run_point(cfg: &SweepConfig, pt: &GridPoint) -> Result<SweepRow> {
    let layout = QubitLayout::new(pt.n, pt.n_dirty, pt.f)?;
    let sim = HvaSimulator::new(pt.layers, layout, &cfg.noise)?;
    let seed = pt.seed(cfg.seed);
    let mut rng = rng_from_seed(seed);
    let mut norms = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let theta = random_angles(sim.num_params(), &mut rng);
        norms.push(sim.gradient(&theta)?.one_norm / theta.len().max(1) as f64);
    }
    let (mean, std) = mean_std(&norms);
    Ok(SweepRow {
        n: pt.n,
        n_d: pt.n_dirty,
        f: pt.f,
        layers: pt.layers,
        noise_model: cfg.noise.name().to_string(),
        mean_grad_1norm: mean,
        std_grad_1norm: std,
        total_error_rate: sim.total_error_rate(),
        samples: cfg.samples,
        seed,
    })
}

/// Runs the grid on `workers` threads and streams rows to `out` as CSV in grid
/// order, flushing after every row. On failure the rows preceding the failing
/// point are already written.
pub fn run_sweep<W: Write>(cfg: &SweepConfig, workers: usize, out: W) -> Result<Vec<SweepRow>> {
    let points = grid(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    let cancel = AtomicBool::new(false);
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = Vec::with_capacity(points.len());

    std::thread::scope(|s| -> Result<()> {
        let (tx, rx) = mpsc::channel();
        let (points, cancel) = (&points, &cancel);
        s.spawn(move || {
            pool.install(|| {
                points.par_iter().enumerate().for_each_with(tx, |tx, (i, pt)| {
                    if cancel.load(Ordering::Relaxed) {
                        return;
                    }
                    let r = run_point(cfg, pt);
                    if r.is_err() {
                        cancel.store(true, Ordering::Relaxed);
                    }
                    let _ = tx.send((i, r));
                });
            });
        });

        let mut pending = BTreeMap::new();
        let mut next = 0;
        let mut failure = None;
        for (i, r) in rx {
            pending.insert(i, r);
            while failure.is_none() {
                let Some(r) = pending.remove(&next) else { break };
                next += 1;
                let written = r.and_then(|row| {
                    writer.serialize(&row)?;
                    writer.flush()?;
                    rows.push(row);
                    Ok(())
                });
                if let Err(e) = written {
                    cancel.store(true, Ordering::Relaxed);
                    failure = Some(e);
                }
            }
        }
        failure.map_or(Ok(()), Err)
    })?;
    if rows.is_empty() {
        // header only, so an empty grid still yields a valid file
        writer.write_record(["n", "n_d", "f", "L", "noise_model", "mean_grad_1norm", "std_grad_1norm", "total_error_rate", "samples", "seed"])?;
        writer.flush()?;
    }
    Ok(rows)
}

pub fn read_rows<R: std::io::Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_reader(input);
    reader.deserialize().map(|r| r.map_err(ExperimentError::from)).collect()
}
