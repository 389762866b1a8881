use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use crate::data::Dataset;
use crate::SimError;

/// The exposure coefficient of one fitted analysis model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub beta: f64,
    pub se: f64,
    pub n_used: usize,
}

/// Intercept-included least squares via the normal equations.
pub(crate) struct LinearFit {
    /// Intercept first, then one coefficient per predictor.
    pub coef: DVector<f64>,
    pub chol: Cholesky<f64, Dyn>,
    pub rss: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn params(&self) -> usize {
        self.coef.len()
    }

    /// Fits `y ~ 1 + x[0] + x[1] + ...` over `rows`.
    pub fn fit(y: &[f64], x: &[&[f64]], rows: &[usize]) -> Result<LinearFit, SimError> {
        let p = x.len() + 1;
        if rows.len() < p + 1 {
            return Err(SimError::InsufficientRows { rows: rows.len(), needed: p + 1 });
        }
        let mut xtx = DMatrix::<f64>::zeros(p, p);
        let mut xty = DVector::<f64>::zeros(p);
        let mut row = vec![1.0; p];
        for &i in rows {
            for (k, col) in x.iter().enumerate() {
                row[k + 1] = col[i];
            }
            for a in 0..p {
                xty[a] += row[a] * y[i];
                for b in 0..=a {
                    xtx[(a, b)] += row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                xtx[(b, a)] = xtx[(a, b)];
            }
        }
        let diag: Vec<f64> = (0..p).map(|a| xtx[(a, a)]).collect();
        let chol = Cholesky::new(xtx).ok_or(SimError::RankDeficient)?;
        // a pivot that lost almost all of its diagonal means a (near) linear dependence
        let l = chol.l_dirty();
        if (0..p).any(|a| l[(a, a)].powi(2) <= 1e-12 * diag[a]) {
            return Err(SimError::RankDeficient);
        }
        let coef = chol.solve(&xty);
        if coef.iter().any(|c| !c.is_finite()) {
            return Err(SimError::RankDeficient);
        }
        let mut rss = 0.0;
        for &i in rows {
            let fitted = coef[0] + x.iter().enumerate().map(|(k, col)| coef[k + 1] * col[i]).sum::<f64>();
            rss += (y[i] - fitted).powi(2);
        }
        Ok(LinearFit { coef, chol, rss, n: rows.len() })
    }
}

/// Regresses `response` on `predictors` (with an intercept) over `rows` and
/// reports the coefficient of the first predictor.
///
/// Reads values regardless of the observed mask; callers choose the rows.
pub fn fit_ols(data: &Dataset, response: &str, predictors: &[&str], rows: &[usize]) -> Result<Estimate, SimError> {
    let col = |name: &str| {
        data.column(name).map(|c| c.values.as_slice()).ok_or_else(|| SimError::UnknownVariable(name.into()))
    };
    let y = col(response)?;
    let x = predictors.iter().map(|p| col(p)).collect::<Result<Vec<_>, _>>()?;
    if x.is_empty() {
        return Err(SimError::InvalidParameter("at least one predictor is required".into()));
    }
    estimate(y, &x, rows)
}

pub(crate) fn estimate(y: &[f64], x: &[&[f64]], rows: &[usize]) -> Result<Estimate, SimError> {
    let fit = LinearFit::fit(y, x, rows)?;
    let sigma2 = fit.rss / (fit.n - fit.params()) as f64;
    let inv = fit.chol.inverse();
    let se = (sigma2 * inv[(1, 1)]).max(0.0).sqrt();
    Ok(Estimate { beta: fit.coef[1], se, n_used: fit.n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Column;

    fn dataset(cols: &[(&str, Vec<f64>)]) -> Dataset {
        Dataset {
            columns: cols
                .iter()
                .map(|(n, v)| Column { name: n.to_string(), observed: vec![true; v.len()], values: v.clone() })
                .collect(),
        }
    }

    #[test]
    fn exact_fit() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let d = dataset(&[("x", x), ("y", y)]);
        let rows: Vec<usize> = (0..10).collect();
        let e = fit_ols(&d, "y", &["x"], &rows).unwrap();
        assert!((e.beta - 2.0).abs() < 1e-12);
        assert!(e.se < 1e-6);
        assert_eq!(e.n_used, 10);
    }

    #[test]
    fn collinear_predictors() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let d = dataset(&[("a", x.clone()), ("b", x.clone()), ("y", x)]);
        let rows: Vec<usize> = (0..10).collect();
        assert!(matches!(fit_ols(&d, "y", &["a", "b"], &rows), Err(SimError::RankDeficient)));
    }

    #[test]
    fn too_few_rows() {
        let d = dataset(&[("x", vec![1.0, 2.0]), ("y", vec![1.0, 3.0])]);
        assert!(matches!(fit_ols(&d, "y", &["x"], &[0, 1]), Err(SimError::InsufficientRows { .. })));
    }
}
