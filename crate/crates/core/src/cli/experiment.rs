use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{
    error_f64, make_all_functions, make_negpt, make_random, make_thresholds, Distribution,
    Hypothesis, HypothesisClass,
};
use crate::dp::PrivacyBudget;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::learners::{plan, poly_pri_learn_with, ppp_learn_with, ppp_plan, LearnerConfig};
use crate::rng::RandomSource;

/// Version of the report layout; bump on any schema change.
pub const REPORT_SCHEMA: &str = "plearn-report/1";

pub const DESK_SCALE_WARNING: &str = "desk-scale constants: m, n0 and k' are the smallest values \
meeting the proof's inequalities with C0 = 1, not the asymptotic closed forms";

/// Where the hypothesis class comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSource {
    Generator {
        name: String,
        n: usize,
        #[serde(default)]
        size: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    File {
        path: PathBuf,
    },
}

impl ClassSource {
    /// Parses `name:n[:size[:seed]]` for generators, anything else as a path.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let generators = ["thresholds", "negpt", "all", "random"];
        if generators.contains(&parts[0]) && !Path::new(s).exists() {
            let num = |i: usize| -> Result<Option<u64>> {
                parts
                    .get(i)
                    .map(|p| p.parse::<u64>().map_err(|_| Error::Argument(format!("bad number {p:?} in {s:?}"))))
                    .transpose()
            };
            let n = num(1)?.ok_or_else(|| Error::Argument(format!("{s:?} needs a domain size")))?;
            return Ok(ClassSource::Generator {
                name: parts[0].to_string(),
                n: n as usize,
                size: num(2)?.map(|v| v as usize),
                seed: num(3)?,
            });
        }
        Ok(ClassSource::File { path: s.into() })
    }

    pub fn load(&self) -> Result<HypothesisClass> {
        match self {
            ClassSource::File { path } => HypothesisClass::load(path),
            ClassSource::Generator { name, n, size, seed } => match name.as_str() {
                "thresholds" => make_thresholds(*n),
                "negpt" => make_negpt(*n),
                "all" => make_all_functions(*n),
                "random" => make_random(
                    *n,
                    size.ok_or_else(|| Error::Argument("random classes need a size".into()))?,
                    seed.unwrap_or(0),
                ),
                other => Err(Error::Argument(format!("unknown class generator {other:?}"))),
            },
        }
    }
}

/// How each trial's distribution is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    /// The same distribution on every trial.
    File { path: PathBuf },
    /// Labels from a class member; `target` is a class index or random per
    /// trial, the marginal uniform or random integer weights per trial.
    Realizable {
        #[serde(default)]
        target: Option<usize>,
        #[serde(default)]
        random_marginal: bool,
    },
}

impl DistSpec {
    /// Parses `uniform[:target]`, `random[:target]` or a path.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if matches!(parts[0], "uniform" | "random") && !Path::new(s).exists() {
            let target = parts
                .get(1)
                .map(|p| p.parse::<usize>().map_err(|_| Error::Argument(format!("bad target in {s:?}"))))
                .transpose()?;
            return Ok(DistSpec::Realizable {
                target,
                random_marginal: parts[0] == "random",
            });
        }
        Ok(DistSpec::File { path: s.into() })
    }

    /// Distribution and target (when known) for one trial.
    pub fn instance(
        &self,
        class: &HypothesisClass,
        rng: &mut RandomSource,
    ) -> Result<(Distribution, Option<Hypothesis>)> {
        match self {
            DistSpec::File { path } => Ok((Distribution::load(path)?, None)),
            DistSpec::Realizable {
                target,
                random_marginal,
            } => {
                let i = match target {
                    Some(i) => *i,
                    None => rng.random_range(0..class.len()),
                };
                let f = class
                    .get(i)
                    .ok_or_else(|| Error::Argument(format!("target {i} is outside the class")))?
                    .clone();
                let n = class.domain_size();
                let marginal = if *random_marginal {
                    let w: Vec<u64> = (0..n).map(|_| rng.random_range(1..=10)).collect();
                    let total: u64 = w.iter().sum();
                    w.into_iter()
                        .map(|v| BigRational::new(BigInt::from(v), BigInt::from(total)))
                        .collect()
                } else {
                    Distribution::uniform_marginal(n)
                };
                Ok((Distribution::labeled_by(&f, &marginal)?, Some(f)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    /// PPPLearn: proper.
    Ppp,
    /// PolyPriLearn alone: improper.
    Poly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub class: ClassSource,
    pub distribution: DistSpec,
    #[serde(default = "default_learner")]
    pub learner: LearnerKind,
    pub config: LearnerConfig,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Values of eta for the optional accuracy curve.
    #[serde(default)]
    pub curve: Vec<f64>,
}

fn default_learner() -> LearnerKind {
    LearnerKind::Ppp
}

impl ExperimentSpec {
    /// Lists every failing field in one error.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.trials < 1 {
            bad.push("trials must be at least 1".to_string());
        }
        if let Err(Error::Argument(m)) = self.config.validate() {
            bad.push(format!("config: {m}"));
        }
        for e in &self.curve {
            if !(*e > 0.0 && *e < 1.0) {
                bad.push(format!("curve: eta {e} outside (0,1)"));
            }
        }
        if let ClassSource::Generator { name, .. } = &self.class {
            if !["thresholds", "negpt", "all", "random"].contains(&name.as_str()) {
                bad.push(format!("class: unknown generator {name:?}"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Argument(bad.join("; ")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub stream: String,
    pub target: Option<Hypothesis>,
    pub hypothesis: Option<Hypothesis>,
    /// Exact population error, when a hypothesis was produced.
    pub error: Option<f64>,
    pub success: bool,
    pub proper: bool,
    pub failure: Option<String>,
    pub support: usize,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub proper: usize,
    pub failures: usize,
    pub mean_error: Option<f64>,
}

impl Aggregate {
    pub fn of(trials: &[TrialOutcome]) -> Self {
        let successes = trials.iter().filter(|t| t.success).count();
        let errors: Vec<f64> = trials.iter().filter_map(|t| t.error).collect();
        Aggregate {
            trials: trials.len(),
            successes,
            success_rate: successes as f64 / trials.len() as f64,
            proper: trials.iter().filter(|t| t.proper).count(),
            failures: trials.iter().filter(|t| t.failure.is_some()).count(),
            mean_error: (!errors.is_empty()).then(|| errors.iter().sum::<f64>() / errors.len() as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eta: f64,
    pub samples: u64,
    pub success_rate: f64,
    pub mean_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub generated_at: u64,
    pub warning: Option<String>,
    pub spec: ExperimentSpec,
    pub plan: serde_json::Value,
    pub budget: PrivacyBudget,
    pub aggregate: Aggregate,
    pub trials: Vec<TrialOutcome>,
    pub curve: Vec<CurvePoint>,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Per-trial rows.
    pub fn trials_csv(&self) -> String {
        let mut s = String::from("trial,error,success,proper,failure,samples\n");
        for t in &self.trials {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                t.trial,
                t.error.map(|e| e.to_string()).unwrap_or_default(),
                t.success,
                t.proper,
                t.failure.as_deref().unwrap_or("").replace(',', ";"),
                t.samples
            );
        }
        s
    }

    /// Error against sample size, one row per curve point.
    pub fn curve_csv(&self) -> String {
        let mut s = String::from("eta,samples,success_rate,mean_error\n");
        for p in &self.curve {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                p.eta,
                p.samples,
                p.success_rate,
                p.mean_error.map(|e| e.to_string()).unwrap_or_default()
            );
        }
        s
    }
}

/// Runs every trial of `spec` in parallel; results are ordered by trial.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report> {
    spec.validate()?;
    let class = spec.class.load()?;
    let lat = Lattice::new(&class)?;
    let (plan_json, trials) = run_trials(&lat, spec, &spec.config)?;
    let mut curve = Vec::new();
    for &eta in &spec.curve {
        let mut cfg = spec.config.clone();
        cfg.eta = eta;
        let (_, ts) = run_trials(&lat, spec, &cfg)?;
        let agg = Aggregate::of(&ts);
        curve.push(CurvePoint {
            eta,
            samples: ts.first().map(|t| t.samples).unwrap_or(0),
            success_rate: agg.success_rate,
            mean_error: agg.mean_error,
        });
    }
    let report = Report {
        schema: REPORT_SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        generated_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        warning: spec.config.desk_scale.then(|| DESK_SCALE_WARNING.to_string()),
        spec: spec.clone(),
        plan: plan_json,
        budget: PrivacyBudget::new(spec.config.epsilon, spec.config.delta)?,
        aggregate: Aggregate::of(&trials),
        trials,
        curve,
    };
    if let Some(path) = &spec.output {
        std::fs::write(path, report.to_json()?)?;
    }
    Ok(report)
}

fn run_trials(
    lat: &Lattice,
    spec: &ExperimentSpec,
    cfg: &LearnerConfig,
) -> Result<(serde_json::Value, Vec<TrialOutcome>)> {
    let class = lat.base();
    let root = RandomSource::from_seed(spec.seed);
    match spec.learner {
        LearnerKind::Ppp => {
            let p = ppp_plan(class, cfg)?;
            let trials = (0..spec.trials)
                .into_par_iter()
                .map(|i| {
                    let rng = root.child_indexed("trial", i as u64);
                    let (dist, target) = spec.distribution.instance(class, &mut rng.child("instance"))?;
                    let out = ppp_learn_with(lat, &dist, &p, &rng.child("learner"));
                    outcome(i, &rng, class, &dist, target, cfg.eta, p.samples, out.map(|o| (o.hypothesis, o.poly.support)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((serde_json::to_value(&p)?, trials))
        }
        LearnerKind::Poly => {
            let p = plan(class, cfg)?;
            let trials = (0..spec.trials)
                .into_par_iter()
                .map(|i| {
                    let rng = root.child_indexed("trial", i as u64);
                    let (dist, target) = spec.distribution.instance(class, &mut rng.child("instance"))?;
                    let out = poly_pri_learn_with(lat, &dist, &p, &rng.child("learner")).and_then(|o| {
                        let h = o.hypothesis()?.clone();
                        Ok((h, o.support))
                    });
                    outcome(i, &rng, class, &dist, target, cfg.eta, p.samples, out)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((serde_json::to_value(&p)?, trials))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn outcome(
    trial: usize,
    rng: &RandomSource,
    class: &HypothesisClass,
    dist: &Distribution,
    target: Option<Hypothesis>,
    eta: f64,
    samples: u64,
    result: Result<(Hypothesis, usize)>,
) -> Result<TrialOutcome> {
    match result {
        Ok((h, support)) => {
            let err = error_f64(&h, dist)?;
            Ok(TrialOutcome {
                trial,
                stream: rng.label().to_string(),
                target,
                proper: class.contains(&h),
                success: err <= eta,
                error: Some(err),
                hypothesis: Some(h),
                failure: None,
                support,
                samples,
            })
        }
        Err(Error::LearnerFailure(m)) => Ok(TrialOutcome {
            trial,
            stream: rng.label().to_string(),
            target,
            hypothesis: None,
            error: None,
            success: false,
            proper: false,
            failure: Some(m),
            support: 0,
            samples,
        }),
        Err(e) => Err(e),
    }
}
