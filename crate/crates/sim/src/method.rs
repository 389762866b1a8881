use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::data::Dataset;
use crate::dgp::DgpSpec;
use crate::impute::{ImputationModel, Plan};
use crate::ols::{estimate, Estimate};
use crate::pool::pool_rubin;
use crate::SimError;

/// The regression of `outcome` on `exposure` and `covariates`, with
/// `auxiliaries` added to every imputation model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisModel {
    pub outcome: String,
    pub exposure: String,
    pub covariates: Vec<String>,
    pub auxiliaries: Vec<String>,
}

impl AnalysisModel {
    pub fn of(spec: &DgpSpec) -> Self {
        AnalysisModel {
            outcome: spec.outcome.clone(),
            exposure: spec.exposure.clone(),
            covariates: spec.covariates.clone(),
            auxiliaries: Vec::new(),
        }
    }

    /// Exposure, covariates, outcome.
    fn analysis_variables(&self) -> Vec<&str> {
        let mut v = vec![self.exposure.as_str()];
        v.extend(self.covariates.iter().map(String::as_str));
        v.push(&self.outcome);
        v
    }

    fn imputation_variables(&self) -> Vec<&str> {
        let mut v = self.analysis_variables();
        v.extend(self.auxiliaries.iter().map(String::as_str));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Fit on the data before masking.
    FullData,
    Cra,
    FullMi,
    /// Restrict to rows with every listed variable observed, impute the rest.
    SubsampleMi(Vec<String>),
}

impl Method {
    pub fn subsample<I: IntoIterator<Item = S>, S: Into<String>>(q: I) -> Self {
        let mut q: Vec<String> = q.into_iter().map(Into::into).collect();
        q.sort();
        q.dedup();
        Method::SubsampleMi(q)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::FullData => f.write_str("full_data"),
            Method::Cra => f.write_str("cra"),
            Method::FullMi => f.write_str("full_mi"),
            Method::SubsampleMi(q) => write!(f, "sub({})", q.join(",")),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Method {
    type Err = SimError;

    /// Accepts `cra`, `full_mi`, `full_data`, `sub(X,Y)` and `sub:X,Y`.
    fn from_str(s: &str) -> Result<Self, SimError> {
        let s = s.trim();
        let list = if let Some(rest) = s.strip_prefix("sub(").and_then(|r| r.strip_suffix(')')) {
            Some(rest)
        } else {
            s.strip_prefix("sub:")
        };
        match (s, list) {
            ("cra", _) => Ok(Method::Cra),
            ("full_mi", _) => Ok(Method::FullMi),
            ("full_data", _) => Ok(Method::FullData),
            (_, Some(list)) => {
                let names: Vec<&str> = list.split(',').map(str::trim).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return Err(SimError::UnknownMethod(s.into()));
                }
                Ok(Method::subsample(names))
            }
            _ => Err(SimError::UnknownMethod(s.into())),
        }
    }
}

/// Rows of `data` with every named column observed (all rows for an empty list).
fn complete_rows(data: &Dataset, names: &[&str]) -> Result<Vec<usize>, SimError> {
    for n in names {
        data.column(n).ok_or_else(|| SimError::UnknownVariable((*n).into()))?;
    }
    Ok(data.rows_observed(names))
}

fn subset(data: &Dataset, rows: &[usize]) -> Dataset {
    let mut d = data.clone();
    for c in &mut d.columns {
        c.values = rows.iter().map(|&i| c.values[i]).collect();
        c.observed = rows.iter().map(|&i| c.observed[i]).collect();
    }
    d
}

fn analysis_fit(data: &Dataset, model: &AnalysisModel, cols: &[Vec<f64>], index: &[usize], rows: &[usize]) -> Result<Estimate, SimError> {
    let get = |name: &str| -> &[f64] {
        let j = data.index_of(name).expect("checked");
        match index.iter().position(|&k| k == j) {
            Some(k) => &cols[k],
            None => &data.columns[j].values,
        }
    };
    let y = get(&model.outcome);
    let mut x = vec![get(&model.exposure)];
    x.extend(model.covariates.iter().map(|c| get(c)));
    estimate(y, &x, rows)
}

/// Imputes every incomplete modelled variable of `data` and pools the analysis fits.
fn mi<R: Rng>(data: &Dataset, model: &AnalysisModel, m: usize, cycles: usize, rng: &mut R) -> Result<Estimate, SimError> {
    let vars = model.imputation_variables();
    let models: Vec<ImputationModel> = vars
        .iter()
        .filter(|v| !data.column(v).expect("checked").is_complete())
        .map(|&t| ImputationModel::new(t, vars.iter().filter(|&&p| p != t).copied()))
        .collect();
    let all: Vec<usize> = (0..data.rows()).collect();
    let plan = Plan::new(data, &models)?;
    if !plan.has_missing() {
        return analysis_fit(data, model, &[], &[], &all);
    }
    let mut fits = Vec::with_capacity(m);
    for _ in 0..m {
        let cols = plan.chain(data, cycles, rng)?;
        fits.push(analysis_fit(data, model, &cols, &plan.columns, &all)?);
    }
    Ok(pool_rubin(&fits)?.estimate)
}

/// Estimates the exposure coefficient of `model` from `data` with `method`.
pub fn run_method<R: Rng>(
    data: &Dataset,
    model: &AnalysisModel,
    method: &Method,
    m: usize,
    cycles: usize,
    rng: &mut R,
) -> Result<Estimate, SimError> {
    if m == 0 {
        return Err(SimError::InvalidParameter("m must be at least 1".into()));
    }
    let analysis = model.analysis_variables();
    let imputed = model.imputation_variables();
    for v in &imputed {
        data.column(v).ok_or_else(|| SimError::UnknownVariable((*v).into()))?;
    }
    match method {
        Method::FullData => {
            let rows: Vec<usize> = (0..data.rows()).collect();
            analysis_fit(data, model, &[], &[], &rows)
        }
        Method::Cra => {
            let rows = complete_rows(data, &analysis)?;
            analysis_fit(data, model, &[], &[], &rows)
        }
        Method::FullMi => mi(data, model, m, cycles, rng),
        Method::SubsampleMi(q) => {
            let q: Vec<&str> = q.iter().map(String::as_str).collect();
            if let Some(bad) = q.iter().find(|v| !imputed.contains(v)) {
                return Err(SimError::InvalidParameter(format!("`{bad}` is not a modelled variable")));
            }
            let rows = complete_rows(data, &q)?;
            if rows.is_empty() {
                return Err(SimError::EmptySubsample(q.join(",")));
            }
            mi(&subset(data, &rows), model, m, cycles, rng)
        }
    }
}
