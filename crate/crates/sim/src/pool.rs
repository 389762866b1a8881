use serde::Serialize;

use crate::ols::Estimate;
use crate::SimError;

/// Rubin's rules applied to `m` per-imputation estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pooled {
    pub estimate: Estimate,
    pub m: usize,
    /// Mean within-imputation variance.
    pub within: f64,
    /// Between-imputation variance; zero by convention when `m == 1`.
    pub between: f64,
    /// False when `m == 1` and the between-imputation variance is undefined.
    pub between_defined: bool,
}

/// Pooled beta is the mean; pooled variance is `W + (1 + 1/m) B`.
pub fn pool_rubin(estimates: &[Estimate]) -> Result<Pooled, SimError> {
    let m = estimates.len();
    if m == 0 {
        return Err(SimError::InvalidParameter("nothing to pool".into()));
    }
    let mf = m as f64;
    // shifted by the first estimate, so identical inputs give exactly B = 0
    let shift = estimates[0].beta;
    let offset = estimates.iter().map(|e| e.beta - shift).sum::<f64>() / mf;
    let beta = shift + offset;
    let within = estimates.iter().map(|e| e.se * e.se).sum::<f64>() / mf;
    let between =
        if m > 1 { estimates.iter().map(|e| (e.beta - shift - offset).powi(2)).sum::<f64>() / (mf - 1.0) } else { 0.0 };
    let total = within + (1.0 + 1.0 / mf) * between;
    let n_used = estimates.iter().map(|e| e.n_used).max().unwrap_or(0);
    Ok(Pooled { estimate: Estimate { beta, se: total.sqrt(), n_used }, m, within, between, between_defined: m > 1 })
}
