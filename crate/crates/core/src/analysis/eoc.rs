use crate::{Error, Result};

use super::NormReport;

/// Least-squares slope of `log e` against `log h`.
pub fn least_squares_slope(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() as f64;
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fitted convergence orders per norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slopes {
    pub l2: f64,
    pub h1_semi: f64,
    pub l2_gamma: f64,
    pub energy: f64,
}

pub fn eoc(reports: &[NormReport]) -> Result<Slopes> {
    if reports.len() < 3 {
        return Err(Error::Rates(format!("at least 3 levels, got {}", reports.len())));
    }
    if reports.windows(2).any(|w| !(w[1].h < w[0].h)) {
        return Err(Error::Rates("strictly decreasing h".into()));
    }
    let h: Vec<f64> = reports.iter().map(|r| r.h).collect();
    let fit = |f: fn(&NormReport) -> f64| {
        let e: Vec<f64> = reports.iter().map(f).collect();
        least_squares_slope(&h, &e)
    };
    Ok(Slopes {
        l2: fit(|r| r.errors.l2),
        h1_semi: fit(|r| r.errors.h1_semi),
        l2_gamma: fit(|r| r.errors.l2_gamma),
        energy: fit(|r| r.errors.energy),
    })
}
