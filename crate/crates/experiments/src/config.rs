//! Sweep configuration, read from a flat TOML file.
//!
//! ```toml
//! n = [4]
//! n_d = "all"                              # or a list such as [0, 2, 4]
//! L = { from = 10, to = 100, step = 10 }   # or a list such as [10, 20, 40]
//! noise = "depolarizing"                   # "depolarizing", "trapped_ion" or "noiseless"
//! p = 2.425e-3
//! mode = "both"                            # "clean_dirty", "rescaled" or "both"
//! f = [0.25, 0.5, 0.75, 1.0]
//! samples = 8
//! seed = 1
//! output = "sweep.csv"
//! ```
//!
//! Trapped-ion rates default to the standard values; any of `p_d`, `p_dep`,
//! `p_d1`, `p_d2`, `p_alpha`, `p_xx`, `p_h`, `p_idle` may be overridden.

use std::path::{Path, PathBuf};

use cleandirty::noise::{NoiseModel, TrappedIonRates};
use serde::Deserialize;

use crate::error::{ExperimentError, Result};

pub const DEFAULT_SAMPLES: usize = 28;

#[derive(Debug, Clone, PartialEq)]
pub enum DirtySpec {
    All,
    List(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    CleanDirty,
    Rescaled,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub n_d: DirtySpec,
    pub layers: Vec<usize>,
    pub noise: NoiseModel,
    pub mode: SweepMode,
    /// Rescale factors for the all-dirty runs.
    pub f: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub output: PathBuf,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDirty {
    Word(String),
    List(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLayers {
    List(Vec<usize>),
    Range { from: usize, to: usize, step: Option<usize> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: OneOrMany,
    n_d: Option<RawDirty>,
    #[serde(rename = "L")]
    layers: RawLayers,
    noise: String,
    p: Option<f64>,
    p_d: Option<f64>,
    p_dep: Option<f64>,
    p_d1: Option<f64>,
    p_d2: Option<f64>,
    p_alpha: Option<f64>,
    p_xx: Option<f64>,
    p_h: Option<f64>,
    p_idle: Option<f64>,
    mode: Option<String>,
    f: Option<Vec<f64>>,
    samples: Option<usize>,
    seed: Option<u64>,
    output: Option<PathBuf>,
}

fn bad(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(msg.into())
}

impl SweepConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let n = match raw.n {
            OneOrMany::One(n) => vec![n],
            OneOrMany::Many(v) => v,
        };
        if n.is_empty() {
            return Err(bad("n must list at least one size"));
        }

        let mode = match raw.mode.as_deref().unwrap_or("clean_dirty") {
            "clean_dirty" => SweepMode::CleanDirty,
            "rescaled" => SweepMode::Rescaled,
            "both" => SweepMode::Both,
            other => return Err(bad(format!("unknown mode {other:?}"))),
        };

        let n_d = match raw.n_d {
            None => DirtySpec::All,
            Some(RawDirty::Word(w)) if w == "all" => DirtySpec::All,
            Some(RawDirty::Word(w)) => return Err(bad(format!("n_d must be a list or \"all\", got {w:?}"))),
            Some(RawDirty::List(v)) => {
                if mode == SweepMode::Rescaled {
                    return Err(bad("rescaled mode runs every qubit dirty; drop n_d"));
                }
                if let Some(&k) = v.iter().find(|&&k| n.iter().all(|&m| k > m)) {
                    return Err(bad(format!("n_d = {k} exceeds every n")));
                }
                DirtySpec::List(v)
            }
        };

        let layers = match raw.layers {
            RawLayers::List(v) => v,
            RawLayers::Range { from, to, step } => {
                let step = step.unwrap_or(1);
                if step == 0 || from > to {
                    return Err(bad("L range needs from ≤ to and step ≥ 1"));
                }
                (from..=to).step_by(step).collect()
            }
        };
        if layers.is_empty() {
            return Err(bad("L must list at least one depth"));
        }

        let noise = match raw.noise.as_str() {
            "noiseless" => NoiseModel::Noiseless,
            "depolarizing" => {
                let p = raw.p.ok_or_else(|| bad("depolarizing noise needs p"))?;
                NoiseModel::Depolarizing { p }
            }
            "trapped_ion" => {
                let d = TrappedIonRates::default();
                NoiseModel::TrappedIon(TrappedIonRates {
                    p_d: raw.p_d.unwrap_or(d.p_d),
                    p_dep: raw.p_dep.unwrap_or(d.p_dep),
                    p_d1: raw.p_d1.unwrap_or(d.p_d1),
                    p_d2: raw.p_d2.unwrap_or(d.p_d2),
                    p_alpha: raw.p_alpha.unwrap_or(d.p_alpha),
                    p_xx: raw.p_xx.unwrap_or(d.p_xx),
                    p_h: raw.p_h.unwrap_or(d.p_h),
                    p_idle: raw.p_idle.unwrap_or(d.p_idle),
                })
            }
            other => return Err(bad(format!("unknown noise model {other:?}"))),
        };
        match noise {
            NoiseModel::Depolarizing { p } if !(0.0..=1.0).contains(&p) => {
                return Err(bad(format!("p = {p} is outside [0, 1]")))
            }
            NoiseModel::TrappedIon(r) => r.validate().map_err(|e| bad(e.to_string()))?,
            _ => {}
        }

        let f = raw.f.unwrap_or_default();
        if mode != SweepMode::CleanDirty && f.is_empty() {
            return Err(bad("rescaled runs need a list of f values"));
        }
        if let Some(x) = f.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
            return Err(bad(format!("f = {x} is outside (0, 1]")));
        }

        let samples = raw.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(bad("samples must be at least 1"));
        }

        Ok(Self {
            n,
            n_d,
            layers,
            noise,
            mode,
            f,
            samples,
            seed: raw.seed.unwrap_or(0),
            output: raw.output.unwrap_or_else(|| PathBuf::from("sweep.csv")),
        })
    }

    /// Dirty-qubit counts swept for register size `n`.
    pub fn dirty_counts(&self, n: usize) -> Vec<usize> {
        match &self.n_d {
            DirtySpec::All => (0..=n).collect(),
            DirtySpec::List(v) => v.iter().copied().filter(|&k| k <= n).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let cfg = SweepConfig::from_toml_str(
            r#"
            n = [4]
            n_d = "all"
            L = { from = 10, to = 100, step = 10 }
            noise = "depolarizing"
            p = 2.425e-3
            mode = "both"
            f = [0.25, 0.5, 0.75, 1.0]
            samples = 8
            seed = 1
            "#,
        )
        .unwrap();
        assert_eq!(cfg.layers.len(), 10);
        assert_eq!(cfg.dirty_counts(4), vec![0, 1, 2, 3, 4]);
        assert_eq!(cfg.mode, SweepMode::Both);
        assert_eq!(cfg.output, PathBuf::from("sweep.csv"));
    }

    #[test]
    fn defaults_and_trapped_ion_overrides() {
        let cfg = SweepConfig::from_toml_str("n = 4\nL = [1, 2]\nnoise = \"trapped_ion\"\np_idle = 1e-5\n").unwrap();
        assert_eq!(cfg.samples, DEFAULT_SAMPLES);
        match cfg.noise {
            NoiseModel::TrappedIon(r) => {
                assert_eq!(r.p_idle, 1e-5);
                assert_eq!(r.p_xx, TrappedIonRates::default().p_xx);
            }
            _ => panic!("wrong model"),
        }
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "n = 4\nL = [1]\nnoise = \"depolarizing\"\n",
            "n = 4\nL = [1]\nnoise = \"depolarizing\"\np = 2.0\n",
            "n = 4\nL = [1]\nnoise = \"bogus\"\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nsamples = 0\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nmode = \"rescaled\"\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nmode = \"rescaled\"\nf = [0.0]\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nmode = \"rescaled\"\nf = [0.5]\nn_d = [1]\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nn_d = [5]\n",
            "n = 4\nL = { from = 5, to = 1 }\nnoise = \"noiseless\"\n",
            "n = 4\nL = [1]\nnoise = \"noiseless\"\nextra = 1\n",
        ] {
            assert!(matches!(SweepConfig::from_toml_str(text), Err(ExperimentError::Config(_))), "{text}");
        }
    }
}
