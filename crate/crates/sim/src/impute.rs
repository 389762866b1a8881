//! Multiple imputation by fully conditional specification with Bayesian
//! normal linear regression draws.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::data::Dataset;
use crate::ols::LinearFit;
use crate::SimError;

/// Imputes `target` from a linear regression on `predictors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImputationModel {
    pub target: String,
    pub predictors: Vec<String>,
}

impl ImputationModel {
    pub fn new(target: impl Into<String>, predictors: impl IntoIterator<Item = impl Into<String>>) -> Self {
        ImputationModel { target: target.into(), predictors: predictors.into_iter().map(Into::into).collect() }
    }
}

/// Column-index form of the models, shared by all chains.
pub(crate) struct Plan {
    /// Columns the chains read or write, as dataset indices.
    pub columns: Vec<usize>,
    /// Per model: local target index, local predictor indices, observed rows, missing rows.
    pub steps: Vec<Step>,
}

pub(crate) struct Step {
    pub target: usize,
    pub predictors: Vec<usize>,
    pub observed: Vec<usize>,
    pub missing: Vec<usize>,
}

impl Plan {
    pub fn new(data: &Dataset, models: &[ImputationModel]) -> Result<Plan, SimError> {
        let mut columns: Vec<usize> = Vec::new();
        let mut local = |name: &str| -> Result<usize, SimError> {
            let j = data.index_of(name).ok_or_else(|| SimError::UnknownVariable(name.into()))?;
            Ok(match columns.iter().position(|&c| c == j) {
                Some(k) => k,
                None => {
                    columns.push(j);
                    columns.len() - 1
                }
            })
        };
        let mut steps = Vec::with_capacity(models.len());
        for m in models {
            let target = local(&m.target)?;
            let predictors = m.predictors.iter().map(|p| local(p)).collect::<Result<Vec<_>, _>>()?;
            steps.push(Step { target, predictors, observed: Vec::new(), missing: Vec::new() });
        }
        for s in &mut steps {
            let col = &data.columns[columns[s.target]];
            for (i, &o) in col.observed.iter().enumerate() {
                if o {
                    s.observed.push(i);
                } else {
                    s.missing.push(i);
                }
            }
            if s.observed.is_empty() {
                return Err(SimError::NoObservedValues(col.name.clone()));
            }
        }
        // every predictor is either fully observed or imputed itself
        for s in &steps {
            for &p in &s.predictors {
                let col = &data.columns[columns[p]];
                if !col.is_complete() && !steps.iter().any(|t| t.target == p) {
                    return Err(SimError::InvalidParameter(format!(
                        "predictor `{}` has missing values but no imputation model",
                        col.name
                    )));
                }
            }
        }
        Ok(Plan { columns, steps })
    }

    pub fn has_missing(&self) -> bool {
        self.steps.iter().any(|s| !s.missing.is_empty())
    }

    /// Runs one chain of `cycles` sweeps and returns the completed local columns.
    pub fn chain<R: Rng>(&self, data: &Dataset, cycles: usize, rng: &mut R) -> Result<Vec<Vec<f64>>, SimError> {
        let mut cur: Vec<Vec<f64>> = self.columns.iter().map(|&j| data.columns[j].values.clone()).collect();
        for s in &self.steps {
            for &i in &s.missing {
                let donor = s.observed[rng.random_range(0..s.observed.len())];
                cur[s.target][i] = cur[s.target][donor];
            }
        }
        for _ in 0..cycles {
            for s in &self.steps {
                if s.missing.is_empty() {
                    continue;
                }
                let draws = {
                    let x: Vec<&[f64]> = s.predictors.iter().map(|&p| cur[p].as_slice()).collect();
                    let fit = LinearFit::fit(&cur[s.target], &x, &s.observed)?;
                    let (beta, sigma) = posterior_draw(&fit, rng)?;
                    s.missing
                        .iter()
                        .map(|&i| {
                            let mean = beta[0] + x.iter().enumerate().map(|(k, c)| beta[k + 1] * c[i]).sum::<f64>();
                            let e: f64 = rng.sample(StandardNormal);
                            mean + sigma * e
                        })
                        .collect::<Vec<f64>>()
                };
                for (&i, v) in s.missing.iter().zip(draws) {
                    cur[s.target][i] = v;
                }
            }
        }
        Ok(cur)
    }
}

/// Draws `(beta*, sigma*)` from the posterior of a normal linear regression
/// under the standard noninformative prior.
fn posterior_draw<R: Rng>(fit: &LinearFit, rng: &mut R) -> Result<(DVector<f64>, f64), SimError> {
    let df = (fit.n - fit.params()) as f64;
    let chi = ChiSquared::new(df).map_err(|_| SimError::InsufficientRows { rows: fit.n, needed: fit.params() + 1 })?;
    let sigma = (fit.rss / chi.sample(rng)).sqrt();
    let z = DVector::from_fn(fit.params(), |_, _| rng.sample::<f64, _>(StandardNormal));
    // X'X = L L', so L'^{-1} z has covariance (X'X)^{-1}
    let offset = fit.chol.l_dirty().tr_solve_lower_triangular(&z).ok_or(SimError::RankDeficient)?;
    Ok((&fit.coef + offset * sigma, sigma))
}

/// Produces `m` completed copies of `data`, each from an independent chain
/// of `cycles` sweeps over `models` in order.
///
/// Missing cells start as draws from the observed values of their column.
/// Imputed cells are marked observed in the output.
pub fn impute_fcs<R: Rng>(
    data: &Dataset,
    models: &[ImputationModel],
    m: usize,
    cycles: usize,
    rng: &mut R,
) -> Result<Vec<Dataset>, SimError> {
    if m == 0 {
        return Err(SimError::InvalidParameter("m must be at least 1".into()));
    }
    let plan = Plan::new(data, models)?;
    if !plan.has_missing() {
        return Ok(vec![data.clone(); m]);
    }
    (0..m)
        .map(|_| {
            let cols = plan.chain(data, cycles, rng)?;
            let mut out = data.clone();
            for (k, values) in cols.into_iter().enumerate() {
                let c = &mut out.columns[plan.columns[k]];
                c.values = values;
                if plan.steps.iter().any(|s| s.target == k) {
                    c.observed.iter_mut().for_each(|o| *o = true);
                }
            }
            Ok(out)
        })
        .collect()
}
