//! Tabulated ladder cycles for single strings or every string of a length.

use cleandirty::ladder::{cycle_of, gamma, z_hits, DEFAULT_EXHAUSTIVE_LIMIT};
use cleandirty::ZString;
use serde::Serialize;

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderRow {
    pub string: String,
    pub period: usize,
    /// Cycle members joined by `>`.
    pub cycle: String,
    pub z_hits_per_cycle: usize,
    #[serde(rename = "L")]
    pub layers: usize,
    pub z_hits: u64,
    pub gamma: u64,
    /// The string dodges the dirty block more often than `gamma` allows.
    pub below_gamma: bool,
}

fn row(s: &ZString, n_dirty: usize, layers: usize) -> Result<LadderRow> {
    let c = cycle_of(s, n_dirty)?;
    let hits = z_hits(s, n_dirty, layers)?;
    let g = gamma(s.len(), n_dirty, layers)?;
    Ok(LadderRow {
        string: s.to_string(),
        period: c.period,
        cycle: c.cycle.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(">"),
        z_hits_per_cycle: c.z_hits_first_nd,
        layers,
        z_hits: hits,
        gamma: g,
        // the identity string carries no weight in the bound
        below_gamma: !s.is_identity() && hits < g,
    })
}

/// Rows for `string` (a `ZIZZ`- or `1011`-style word of length `n`) or, when
/// `None`, for all `2^n` strings. `layers` defaults to `2^⌈log2 n⌉`.
pub fn ladder_analyze(n: usize, string: Option<&str>, n_dirty: usize, layers: Option<usize>) -> Result<Vec<LadderRow>> {
    let layers = layers.unwrap_or_else(|| n.next_power_of_two());
    match string {
        Some(text) => {
            let s: ZString = text.parse()?;
            if s.len() != n {
                return Err(ExperimentError::Input(format!("string {text:?} has length {}, not {n}", s.len())));
            }
            Ok(vec![row(&s, n_dirty, layers)?])
        }
        None => {
            if n > DEFAULT_EXHAUSTIVE_LIMIT {
                return Err(cleandirty::Error::ResourceLimit {
                    what: "exhaustive string length",
                    value: n,
                    limit: DEFAULT_EXHAUSTIVE_LIMIT,
                }
                .into());
            }
            (0..1u64 << n).map(|b| row(&ZString::new(n, b)?, n_dirty, layers)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zizz_report() {
        let r = ladder_analyze(4, Some("ZIZZ"), 1, None).unwrap();
        assert_eq!(r[0].period, 4);
        assert_eq!(r[0].cycle, "ZIZZ>ZZIZ>IZZZ>ZIIZ");
        assert_eq!(r[0].layers, 4);
        assert!(ladder_analyze(5, Some("ZIZZ"), 1, None).is_err());
    }

    #[test]
    fn all_strings() {
        let r = ladder_analyze(4, None, 0, None).unwrap();
        assert_eq!(r.len(), 16);
        assert!(r.iter().all(|x| [1, 2, 4].contains(&x.period)));
        assert!(r.iter().all(|x| x.z_hits == 0 && x.z_hits_per_cycle == 0));
        assert!(ladder_analyze(13, None, 0, None).is_err());
    }

    #[test]
    fn flags_strings_below_gamma() {
        let r = ladder_analyze(4, None, 2, Some(2)).unwrap();
        assert!(r.iter().any(|x| x.below_gamma));
        assert!(!r[0].below_gamma);
    }
}
