//! Exponential-decay fits of gradient norm against depth.

use serde::Serialize;

use crate::error::{ExperimentError, Result};
use crate::sweep::SweepRow;

pub const DEFAULT_BURN_IN: usize = 10;
pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Slope of `ln(mean)` per layer.
    pub rate: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Least-squares fit of `ln y` against `L` over points with `L ≥ burn_in`.
pub fn fit_decay(points: &[(usize, f64)], burn_in: usize) -> Result<DecayFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 >= burn_in)
        .map(|&(l, y)| (l as f64, y))
        .collect();
    let mut depths: Vec<f64> = used.iter().map(|p| p.0).collect();
    depths.dedup();
    if depths.len() < MIN_FIT_POINTS {
        return Err(ExperimentError::FitDegenerate(format!(
            "{} distinct depths at L ≥ {burn_in}, need {MIN_FIT_POINTS}",
            depths.len()
        )));
    }
    if let Some(p) = used.iter().find(|p| !(p.1 > 0.0)) {
        return Err(ExperimentError::FitDegenerate(format!("non-positive mean {} at L = {}", p.1, p.0)));
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / k;
    let my = used.iter().map(|p| p.1.ln()).sum::<f64>() / k;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_res: f64 = used.iter().map(|p| (p.1.ln() - intercept - rate * p.0).powi(2)).sum();
    let ss_tot: f64 = used.iter().map(|p| (p.1.ln() - my).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(DecayFit { rate, intercept, r2, points: used.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub noise_model: String,
    pub n: usize,
    pub n_d: usize,
    pub f: f64,
    pub rate: Option<f64>,
    pub r2: Option<f64>,
    pub points: usize,
    /// `ok` or the reason the fit was skipped.
    pub status: String,
}

/// One fit per `(model, n, n_d, f)` curve, in order of first appearance.
pub fn fit_report(rows: &[SweepRow], burn_in: usize) -> Vec<FitRow> {
    let mut keys: Vec<(String, usize, usize, f64)> = Vec::new();
    for r in rows {
        let k = (r.noise_model.clone(), r.n, r.n_d, r.f);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(noise_model, n, n_d, f)| {
            let mut pts: Vec<(usize, f64)> = rows
                .iter()
                .filter(|r| r.noise_model == noise_model && r.n == n && r.n_d == n_d && r.f == f)
                .map(|r| (r.layers, r.mean_grad_1norm))
                .collect();
            pts.sort_by_key(|p| p.0);
            let (rate, r2, points, status) = match fit_decay(&pts, burn_in) {
                Ok(fit) => (Some(fit.rate), Some(fit.r2), fit.points, "ok".to_string()),
                Err(e) => (None, None, 0, e.to_string()),
            };
            FitRow { noise_model, n, n_d, f, rate, r2, points, status }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let pts: Vec<(usize, f64)> = (0..20).map(|l| (l * 5, 3.0 * (-0.02 * (l * 5) as f64).exp())).collect();
        let fit = fit_decay(&pts, 10).unwrap();
        assert!((fit.rate + 0.02).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.points, 18);
    }

    #[test]
    fn flat_curve_has_zero_slope() {
        let pts: Vec<(usize, f64)> = (10..20).map(|l| (l, 0.7)).collect();
        let fit = fit_decay(&pts, 0).unwrap();
        assert!(fit.rate.abs() < 1e-15);
        assert_eq!(fit.r2, 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        let few: Vec<(usize, f64)> = (0..20).map(|l| (l, 1.0)).collect();
        assert!(matches!(fit_decay(&few, 16), Err(ExperimentError::FitDegenerate(_))));
        let zero: Vec<(usize, f64)> = (10..20).map(|l| (l, if l == 12 { 0.0 } else { 1.0 })).collect();
        assert!(matches!(fit_decay(&zero, 10), Err(ExperimentError::FitDegenerate(_))));
    }
}
