use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dgp::{builtin, generate, DgpSpec};
use crate::method::{run_method, AnalysisModel, Method};
use crate::SimError;

pub const DEFAULT_N: usize = 1000;
pub const DEFAULT_M: usize = 25;
pub const DEFAULT_CYCLES: usize = 10;
pub const DEFAULT_REPS: usize = 500;

/// Columns of [`StudyResult::write_csv`].
pub const CSV_HEADER: [&str; 9] = ["scenario", "method", "reps", "n", "m", "mean_bias", "empirical_se", "mcse", "failures"];

/// The methods compared for each built-in scenario.
pub fn default_methods(scenario: &str) -> Result<Vec<Method>, SimError> {
    let sub = |q: &[&str]| Method::subsample(q.iter().copied());
    let mut out = vec![Method::Cra, Method::FullMi];
    out.extend(match scenario {
        "fig1a" | "fig1b" => vec![sub(&["Y"]), sub(&["X"])],
        "fig4" => vec![sub(&["X"]), sub(&["W"]), sub(&["W", "X"])],
        "fig5a" | "fig5b" => vec![sub(&["Y"]), sub(&["W"])],
        "fig5c" => vec![sub(&["Y"]), sub(&["W"]), sub(&["X", "Y"])],
        other => return Err(SimError::UnknownScenario(other.into())),
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub scenario: String,
    pub reps: usize,
    pub n: usize,
    pub m: usize,
    pub cycles: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl StudyConfig {
    /// Defaults for `scenario`: every listed method at full replication.
    pub fn new(scenario: &str) -> Result<Self, SimError> {
        Ok(StudyConfig {
            scenario: scenario.into(),
            reps: DEFAULT_REPS,
            n: DEFAULT_N,
            m: DEFAULT_M,
            cycles: DEFAULT_CYCLES,
            seed: 1,
            methods: default_methods(scenario)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: Method,
    /// Replications requested.
    pub reps: usize,
    /// Mean of `beta - truth` over successful replications.
    pub mean_bias: f64,
    /// Standard deviation of `beta` across successful replications.
    pub empirical_se: f64,
    /// Monte Carlo standard error of `mean_bias`.
    pub mcse: f64,
    pub failures: usize,
}

impl MethodResult {
    /// `|mean_bias|` in Monte Carlo standard errors.
    pub fn z(&self) -> f64 {
        self.mean_bias.abs() / self.mcse
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub truth: f64,
    pub methods: Vec<MethodResult>,
    pub notes: Vec<String>,
}

impl StudyResult {
    pub fn method(&self, m: &Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| &r.method == m)
    }

    pub fn write_csv<W: Write>(&self, out: W, header: bool) -> Result<(), SimError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        if header {
            w.write_record(CSV_HEADER)?;
        }
        let c = &self.config;
        for r in &self.methods {
            w.write_record([
                c.scenario.clone(),
                r.method.label(),
                r.reps.to_string(),
                c.n.to_string(),
                c.m.to_string(),
                r.mean_bias.to_string(),
                r.empirical_se.to_string(),
                r.mcse.to_string(),
                r.failures.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("study results serialize")
    }
}

/// Stable per-method stream offset, so a method's numbers do not depend on
/// which other methods run alongside it.
fn method_key(m: &Method) -> u64 {
    m.label().bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn replicate(spec: &DgpSpec, config: &StudyConfig, rep: usize) -> Result<Vec<Result<f64, SimError>>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(rep as u64);
    let data = generate(spec, config.n, &mut rng)?;
    let model = AnalysisModel::of(spec);
    Ok(config
        .methods
        .iter()
        .map(|method| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ method_key(method));
            rng.set_stream(rep as u64);
            run_method(&data, &model, method, config.m, config.cycles, &mut rng).map(|e| e.beta)
        })
        .collect())
}

/// Runs `config.reps` replications of the built-in mechanism for
/// `config.scenario` in parallel.
///
/// Replication `r` draws from stream `r` of a generator seeded with
/// `config.seed`, and results are combined in replication order, so the
/// output does not depend on the number of threads.
pub fn run_study(config: &StudyConfig) -> Result<StudyResult, SimError> {
    if config.reps < 2 {
        return Err(SimError::InvalidParameter(format!("reps must be at least 2, got {}", config.reps)));
    }
    if config.m == 0 || config.cycles == 0 {
        return Err(SimError::InvalidParameter("m and cycles must be at least 1".into()));
    }
    if config.methods.is_empty() {
        return Err(SimError::InvalidParameter("no methods requested".into()));
    }
    let spec = builtin(&config.scenario)?;
    let per_rep: Vec<Vec<Result<f64, SimError>>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| replicate(&spec, config, rep))
        .collect::<Result<_, _>>()?;

    let mut methods = Vec::with_capacity(config.methods.len());
    for (k, method) in config.methods.iter().enumerate() {
        let betas: Vec<f64> = per_rep.iter().filter_map(|r| r[k].as_ref().ok().copied()).collect();
        let failures = config.reps - betas.len();
        // more than 1% failed replications invalidates the summary
        if failures * 100 > config.reps || betas.len() < 2 {
            let first = per_rep.iter().find_map(|r| r[k].as_ref().err()).map_or_else(String::new, |e| e.to_string());
            return Err(SimError::TooManyFailures { method: method.label(), failures, reps: config.reps, first });
        }
        let ok = betas.len() as f64;
        let mean = betas.iter().sum::<f64>() / ok;
        let var = betas.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (ok - 1.0);
        let empirical_se = var.sqrt();
        methods.push(MethodResult {
            method: method.clone(),
            reps: config.reps,
            mean_bias: mean - spec.truth,
            empirical_se,
            mcse: empirical_se / ok.sqrt(),
            failures,
        });
    }
    Ok(StudyResult { config: config.clone(), truth: spec.truth, methods, notes: spec.notes.clone() })
}
