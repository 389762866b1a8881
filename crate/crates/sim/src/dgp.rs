//! Built-in data-generating mechanisms.
//!
//! Every normal distribution is written `N(mean, variance)`. Missingness
//! thresholds are quantiles of the realized sample, recomputed for every
//! generated dataset.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::data::{quantile, Column, Dataset};
use crate::SimError;

/// The target coefficient of `X` in every built-in mechanism.
pub const TRUE_BETA: f64 = 0.15;

/// Scenario ids with a built-in mechanism.
pub const SIMULABLE: &[&str] = &["fig1a", "fig1b", "fig4", "fig5a", "fig5b", "fig5c"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub variable: String,
    pub coef: f64,
}

/// `name = intercept + sum(coef * variable) + noise_sd * e`, `e ~ N(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariableSpec {
    pub name: String,
    pub measured: bool,
    pub intercept: f64,
    pub terms: Vec<Term>,
    pub noise_sd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
}

/// `variable` strictly below or above its sample `quantile`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cond {
    pub variable: String,
    pub side: Side,
    pub quantile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub when: Vec<Cond>,
    pub prob: f64,
}

/// Probability that `variable` is observed: the first case whose conditions
/// all hold, else `otherwise`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObserveRule {
    pub variable: String,
    pub cases: Vec<Case>,
    pub otherwise: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DgpSpec {
    pub scenario: String,
    /// Generated in this order.
    pub variables: Vec<VariableSpec>,
    /// Measured variables without a rule are always observed.
    pub observe: Vec<ObserveRule>,
    pub outcome: String,
    pub exposure: String,
    pub covariates: Vec<String>,
    pub truth: f64,
    pub notes: Vec<String>,
}

fn var(name: &str, intercept: f64, terms: &[(&str, f64)], noise_sd: f64) -> VariableSpec {
    VariableSpec {
        name: name.into(),
        measured: true,
        intercept,
        terms: terms.iter().map(|&(v, c)| Term { variable: v.into(), coef: c }).collect(),
        noise_sd,
    }
}

fn cond(variable: &str, side: Side, quantile: f64) -> Cond {
    Cond { variable: variable.into(), side, quantile }
}

fn constant(variable: &str, p: f64) -> ObserveRule {
    ObserveRule { variable: variable.into(), cases: Vec::new(), otherwise: p }
}

/// 0.9 if `by` is below its median, 0.1 otherwise.
fn below_median(variable: &str, by: &str) -> ObserveRule {
    ObserveRule {
        variable: variable.into(),
        cases: vec![Case { when: vec![cond(by, Side::Below, 0.5)], prob: 0.9 }],
        otherwise: 0.1,
    }
}

/// 0.9 if both are below their medians, 0.1 if both are above, else 0.5.
fn joint_median(variable: &str, a: &str, b: &str) -> ObserveRule {
    ObserveRule {
        variable: variable.into(),
        cases: vec![
            Case { when: vec![cond(a, Side::Below, 0.5), cond(b, Side::Below, 0.5)], prob: 0.9 },
            Case { when: vec![cond(a, Side::Above, 0.5), cond(b, Side::Above, 0.5)], prob: 0.1 },
        ],
        otherwise: 0.5,
    }
}

fn fig1_variables() -> Vec<VariableSpec> {
    vec![
        // X ~ N(1, 0.5)
        var("X", 1.0, &[], 0.5f64.sqrt()),
        var("Y", 0.85, &[("X", 0.15)], (0.5f64.powi(2) - 0.15f64.powi(2)).sqrt()),
    ]
}

fn fig4_variables() -> Vec<VariableSpec> {
    let s = 0.5f64.sqrt();
    let y_sd = (0.25 - (0.15f64.powi(2) + 0.5f64.powi(2) / 4.0 - 2.0 * 0.15 * 0.5 * (0.5f64 / 4.0).sqrt())).sqrt();
    vec![
        var("W", 1.0, &[], s),
        var("X", 1.0 - s, &[("W", s)], 0.5f64.powi(2).sqrt() * 0.5),
        var("Y", 1.35, &[("X", 0.15), ("W", -0.5)], y_sd),
    ]
}

fn fig5b_variables() -> Vec<VariableSpec> {
    let s = 0.5f64.sqrt();
    let u_coef = (2.0 * (0.25 - (0.15f64.powi(2) / 4.0 + 0.5f64.powi(2) / 4.0 - 2.0 * 0.15 * 0.5 * s / 4.0))).sqrt();
    let e_coef =
        0.5 * (2.0 * (0.25 - (0.15f64.powi(2) / 4.0 + 0.5f64.powi(2) / 4.0 - 2.0 * 0.15 * 0.5 * (0.5f64 / 4.0).sqrt())))
            .sqrt();
    let mut u = var("U", 1.0, &[], s);
    u.measured = false;
    vec![
        var("W", 1.0, &[], s),
        u,
        var("X", 1.0 - s, &[("W", s)], s * 0.5),
        var("Y", 2.0, &[("X", 0.15), ("W", -0.5), ("U", -u_coef)], e_coef),
    ]
}

const NORMAL_NOTE: &str = "N(a, b) means mean a and variance b; each structural equation is used as written";

/// The built-in mechanism for `scenario`.
pub fn builtin(scenario: &str) -> Result<DgpSpec, SimError> {
    let two = |observe| DgpSpec {
        scenario: scenario.into(),
        variables: fig1_variables(),
        observe,
        outcome: "Y".into(),
        exposure: "X".into(),
        covariates: Vec::new(),
        truth: TRUE_BETA,
        notes: vec![NORMAL_NOTE.into()],
    };
    let three = |variables, observe| DgpSpec {
        scenario: scenario.into(),
        variables,
        observe,
        outcome: "Y".into(),
        exposure: "X".into(),
        covariates: vec!["W".into()],
        truth: TRUE_BETA,
        notes: vec![NORMAL_NOTE.into()],
    };
    let spec = match scenario {
        "fig1a" => {
            let mut s = two(vec![constant("X", 0.5), below_median("Y", "X")]);
            s.notes.push("mirror of the fig1b mechanism: missingness in Y is driven by X".into());
            s
        }
        "fig1b" => two(vec![below_median("X", "Y"), constant("Y", 0.5)]),
        "fig4" => three(
            fig4_variables(),
            vec![below_median("W", "X"), below_median("X", "W"), constant("Y", 0.5)],
        ),
        "fig5a" => three(
            fig4_variables(),
            vec![joint_median("W", "X", "Y"), constant("X", 1.0), joint_median("Y", "X", "W")],
        ),
        "fig5b" => three(
            fig5b_variables(),
            vec![joint_median("W", "X", "U"), constant("X", 1.0), joint_median("Y", "X", "W")],
        ),
        "fig5c" => three(
            fig4_variables(),
            vec![
                below_median("W", "Y"),
                ObserveRule {
                    variable: "X".into(),
                    cases: vec![Case { when: vec![cond("W", Side::Above, 0.7)], prob: 0.8 }],
                    otherwise: 0.4,
                },
                below_median("Y", "W"),
            ],
        ),
        other => return Err(SimError::UnknownScenario(other.into())),
    };
    spec.validate()?;
    Ok(spec)
}

impl DgpSpec {
    fn position(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Variables in the analysis model, exposure first, then covariates, then the outcome.
    pub fn analysis_variables(&self) -> Vec<&str> {
        let mut out = vec![self.exposure.as_str()];
        out.extend(self.covariates.iter().map(String::as_str));
        out.push(&self.outcome);
        out
    }

    /// Measured variables that can be missing, in generation order.
    pub fn incomplete_variables(&self) -> Vec<&str> {
        self.variables
            .iter()
            .filter(|v| v.measured)
            .filter(|v| self.observe.iter().any(|r| r.variable == v.name && r.can_miss()))
            .map(|v| v.name.as_str())
            .collect()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidSpec(format!("{}: {msg}", self.scenario)));
        for (i, v) in self.variables.iter().enumerate() {
            if self.position(&v.name) != Some(i) {
                return bad(format!("variable `{}` defined twice", v.name));
            }
            for t in &v.terms {
                match self.position(&t.variable) {
                    Some(j) if j < i => {}
                    _ => return bad(format!("`{}` uses `{}` before it is defined", v.name, t.variable)),
                }
            }
            if !(v.noise_sd >= 0.0 && v.noise_sd.is_finite()) {
                return bad(format!("`{}` has noise sd {}", v.name, v.noise_sd));
            }
        }
        for r in &self.observe {
            match self.position(&r.variable) {
                Some(i) if self.variables[i].measured => {}
                _ => return bad(format!("observation rule for unknown or unmeasured `{}`", r.variable)),
            }
            let probs = r.cases.iter().map(|c| c.prob).chain([r.otherwise]);
            for p in probs {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("probability {p} for `{}`", r.variable));
                }
            }
            for c in r.cases.iter().flat_map(|c| &c.when) {
                if self.position(&c.variable).is_none() || !(0.0..=1.0).contains(&c.quantile) {
                    return bad(format!("bad condition on `{}`", c.variable));
                }
            }
        }
        for name in self.analysis_variables() {
            match self.position(name) {
                Some(i) if self.variables[i].measured => {}
                _ => return bad(format!("analysis variable `{name}` is not a measured variable")),
            }
        }
        Ok(())
    }
}

impl ObserveRule {
    fn can_miss(&self) -> bool {
        self.otherwise < 1.0 || self.cases.iter().any(|c| c.prob < 1.0)
    }
}

/// Simulates `n` rows from `spec` and draws the observation masks.
pub fn generate<R: Rng>(spec: &DgpSpec, n: usize, rng: &mut R) -> Result<Dataset, SimError> {
    if n < 10 {
        return Err(SimError::InvalidParameter(format!("n must be at least 10, got {n}")));
    }
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(spec.variables.len());
    for v in &spec.variables {
        let parents: Vec<(usize, f64)> = v
            .terms
            .iter()
            .map(|t| (spec.position(&t.variable).expect("validated"), t.coef))
            .collect();
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let e: f64 = rng.sample(StandardNormal);
                v.intercept + parents.iter().map(|&(j, c)| c * values[j][i]).sum::<f64>() + v.noise_sd * e
            })
            .collect();
        values.push(col);
    }

    let mut observed: Vec<Vec<bool>> = spec.variables.iter().map(|v| vec![v.measured; n]).collect();
    for rule in &spec.observe {
        let conds: Vec<Vec<(usize, Side, f64)>> = rule
            .cases
            .iter()
            .map(|c| {
                c.when
                    .iter()
                    .map(|w| {
                        let j = spec.position(&w.variable).expect("validated");
                        (j, w.side, quantile(&values[j], w.quantile))
                    })
                    .collect()
            })
            .collect();
        let target = spec.position(&rule.variable).expect("validated");
        for i in 0..n {
            let p = conds
                .iter()
                .zip(&rule.cases)
                .find(|(cs, _)| {
                    cs.iter().all(|&(j, side, t)| match side {
                        Side::Below => values[j][i] < t,
                        Side::Above => values[j][i] > t,
                    })
                })
                .map_or(rule.otherwise, |(_, c)| c.prob);
            observed[target][i] = rng.random_bool(p);
        }
    }

    let columns = spec
        .variables
        .iter()
        .zip(values.into_iter().zip(observed))
        .map(|(v, (values, observed))| Column { name: v.name.clone(), values, observed })
        .collect();
    Ok(Dataset { columns })
}
