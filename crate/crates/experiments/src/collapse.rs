//! Comparison of clean/dirty curves with rescaled all-dirty curves on a common
//! total-error-rate axis.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{ExperimentError, Result};
use crate::sweep::SweepRow;

const F_TOL: f64 = 1e-9;

/// Which rescaled curve a clean/dirty curve with `n_d = k` is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `f = k/n`
    NdOverN,
    /// `f = (k−1)/n`
    NdMinus1OverN,
}

impl Pairing {
    pub fn partner_f(self, n: usize, n_dirty: usize) -> f64 {
        match self {
            Pairing::NdOverN => n_dirty as f64 / n as f64,
            Pairing::NdMinus1OverN => (n_dirty as f64 - 1.0) / n as f64,
        }
    }
}

impl FromStr for Pairing {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nd_over_n" => Ok(Pairing::NdOverN),
            "nd_minus_1_over_n" => Ok(Pairing::NdMinus1OverN),
            other => Err(ExperimentError::Config(format!(
                "unknown pairing {other:?} (expected nd_over_n or nd_minus_1_over_n)"
            ))),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::NdOverN => "nd_over_n",
            Pairing::NdMinus1OverN => "nd_minus_1_over_n",
        })
    }
}

/// Mean gradient norm against total error rate for one `(model, n, n_d, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub noise_model: String,
    pub n: usize,
    pub n_dirty: usize,
    pub f: f64,
    /// `(total_error_rate, mean_grad_1norm)`, sorted by error rate.
    pub points: Vec<(f64, f64)>,
}

pub fn curves(rows: &[SweepRow]) -> Vec<Curve> {
    let mut out: Vec<Curve> = Vec::new();
    for r in rows {
        let same = |c: &&mut Curve| {
            c.noise_model == r.noise_model && c.n == r.n && c.n_dirty == r.n_d && (c.f - r.f).abs() < F_TOL
        };
        match out.iter_mut().find(|c| same(c)) {
            Some(c) => c.points.push((r.total_error_rate, r.mean_grad_1norm)),
            None => out.push(Curve {
                noise_model: r.noise_model.clone(),
                n: r.n,
                n_dirty: r.n_d,
                f: r.f,
                points: vec![(r.total_error_rate, r.mean_grad_1norm)],
            }),
        }
    }
    for c in &mut out {
        c.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

/// `ln y` interpolated linearly in `x`; `None` outside the curve's range.
fn log_interp(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (points.first()?, points.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let i = points.partition_point(|p| p.0 < x);
    if i < points.len() && points[i].0 == x {
        return Some(points[i].1);
    }
    let (a, b) = (points[i - 1], points[i]);
    let t = (x - a.0) / (b.0 - a.0);
    Some(((1.0 - t) * a.1.ln() + t * b.1.ln()).exp())
}

/// Overlap of the two error-rate ranges and the largest relative gap
/// `|a − b| / b` at every sample point of either curve inside it, with the other
/// curve interpolated log-linearly. `None` when the ranges do not overlap or a
/// curve has a repeated error rate or non-positive mean.
pub fn curve_gap(a: &[(f64, f64)], b: &[(f64, f64)]) -> Option<(f64, f64, usize, f64)> {
    let usable = |c: &[(f64, f64)]| !c.is_empty() && c.iter().all(|p| p.1 > 0.0) && c.windows(2).all(|w| w[0].0 < w[1].0);
    if !usable(a) || !usable(b) {
        return None;
    }
    let lo = a[0].0.max(b[0].0);
    let hi = a[a.len() - 1].0.min(b[b.len() - 1].0);
    if lo > hi {
        return None;
    }
    let mut gap: f64 = 0.0;
    let mut count = 0;
    for &(x, ya) in a.iter().filter(|p| p.0 >= lo && p.0 <= hi) {
        let yb = log_interp(b, x)?;
        gap = gap.max((ya - yb).abs() / yb);
        count += 1;
    }
    for &(x, yb) in b.iter().filter(|p| p.0 >= lo && p.0 <= hi) {
        let ya = log_interp(a, x)?;
        gap = gap.max((ya - yb).abs() / yb);
        count += 1;
    }
    Some((lo, hi, count, gap))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseRow {
    pub noise_model: String,
    pub n: usize,
    pub n_d: usize,
    pub f: f64,
    pub overlap_lo: Option<f64>,
    pub overlap_hi: Option<f64>,
    pub points_compared: usize,
    pub max_rel_gap: Option<f64>,
    /// `ok`, `incomparable` (no usable overlap) or `missing` (no rescaled curve).
    pub status: String,
}

/// One row per clean/dirty curve with `n_d ≥ 1` whose partner factor is positive.
pub fn collapse_report(rows: &[SweepRow], pairing: Pairing) -> Vec<CollapseRow> {
    let all = curves(rows);
    let mut out = Vec::new();
    for c in all.iter().filter(|c| c.n_dirty >= 1 && (c.f - 1.0).abs() < F_TOL) {
        let f = pairing.partner_f(c.n, c.n_dirty);
        if f <= F_TOL {
            continue;
        }
        let partner = all.iter().find(|r| {
            r.noise_model == c.noise_model && r.n == c.n && r.n_dirty == r.n && (r.f - f).abs() < F_TOL
        });
        let mut row = CollapseRow {
            noise_model: c.noise_model.clone(),
            n: c.n,
            n_d: c.n_dirty,
            f,
            overlap_lo: None,
            overlap_hi: None,
            points_compared: 0,
            max_rel_gap: None,
            status: "missing".into(),
        };
        if let Some(p) = partner {
            row.status = "incomparable".into();
            if let Some((lo, hi, count, gap)) = curve_gap(&c.points, &p.points) {
                row.overlap_lo = Some(lo);
                row.overlap_hi = Some(hi);
                row.points_compared = count;
                row.max_rel_gap = Some(gap);
                row.status = "ok".into();
            }
        }
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n_d: usize, f: f64, layers: usize, ter: f64, mean: f64) -> SweepRow {
        SweepRow {
            n: 4,
            n_d,
            f,
            layers,
            noise_model: "depolarizing".into(),
            mean_grad_1norm: mean,
            std_grad_1norm: 0.0,
            total_error_rate: ter,
            samples: 1,
            seed: 0,
        }
    }

    #[test]
    fn identical_curves_have_zero_gap() {
        let c = [(0.1, 2.0), (0.2, 1.0), (0.4, 0.5)];
        assert_eq!(curve_gap(&c, &c).unwrap().3, 0.0);
    }

    #[test]
    fn interpolation_is_log_linear() {
        let b = [(0.0, 1.0), (1.0, 0.25)];
        assert!((log_interp(&b, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let a = [(0.5, 0.55)];
        let (_, _, count, gap) = curve_gap(&a, &b).unwrap();
        assert_eq!(count, 1);
        assert!((gap - 0.1).abs() < 1e-12);
    }

    #[test]
    fn disjoint_ranges_are_incomparable() {
        assert!(curve_gap(&[(0.1, 1.0), (0.2, 0.9)], &[(0.3, 1.0), (0.4, 0.9)]).is_none());
        let rows = vec![row(2, 1.0, 1, 0.1, 1.0), row(2, 1.0, 2, 0.2, 0.9), row(4, 0.5, 1, 0.3, 1.0), row(4, 0.5, 2, 0.4, 0.9)];
        let r = collapse_report(&rows, Pairing::NdOverN);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, "incomparable");
        assert_eq!(r[0].max_rel_gap, None);
    }

    #[test]
    fn pairings() {
        let rows = vec![
            row(1, 1.0, 1, 0.1, 1.0),
            row(2, 1.0, 1, 0.2, 1.0),
            row(4, 0.25, 1, 0.1, 1.1),
        ];
        let r = collapse_report(&rows, Pairing::NdOverN);
        assert_eq!(r.iter().map(|x| x.status.as_str()).collect::<Vec<_>>(), ["ok", "missing"]);
        assert!((r[0].max_rel_gap.unwrap() - 1.0 / 11.0).abs() < 1e-12);
        let r = collapse_report(&rows, Pairing::NdMinus1OverN);
        // n_d = 1 has no positive partner factor; n_d = 2 pairs with f = 1/4.
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].n_d, r[0].status.as_str()), (2, "incomparable"));
        assert!("nd_over_m".parse::<Pairing>().is_err());
    }
}
