use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classes::HypothesisClass;
use crate::cli::experiment::{run_experiment, ClassSource, DistSpec, ExperimentSpec, Report};
use crate::cli::suites::run_suite;
use crate::dimensions::{dimension_report, tdim};
use crate::dp::{
    adjacent_datasets, adjacent_score_vectors, adjacent_set_systems, verify_dp, CountingSpec,
    DpReport, ExponentialSpec, GenericLearnerSpec, SparseSelectionParams, SparseSelectionSpec,
};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ORDER_INFINITE};
use crate::learners::{reduce_tree_in, ReduceTreeConfig};
use crate::rng::RandomSource;
use crate::structure::{find_reducing_witness_in, soa};

/// Cap on the tree dimension search printed by `dims`.
const TDIM_CAP: usize = 8;

/// What a command produced: always JSON, sometimes a CSV rendering.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub json: Value,
    pub csv: Option<String>,
}

impl CommandOutput {
    fn json(v: impl Serialize) -> Result<Self> {
        Ok(CommandOutput {
            json: serde_json::to_value(v)?,
            csv: None,
        })
    }
}

/// JSON body written to stderr on failure.
pub fn error_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code()}})
}

pub fn dims(class: &HypothesisClass) -> Result<CommandOutput> {
    let report = dimension_report(class)?;
    let mut v = serde_json::to_value(&report)?;
    v["tdim_capped"] = json!(tdim(class, TDIM_CAP));
    v["tdim_cap"] = json!(TDIM_CAP);
    Ok(CommandOutput { json: v, csv: None })
}

pub fn irreducible(class: &HypothesisClass, k: u64) -> Result<CommandOutput> {
    let lat = Lattice::new(class)?;
    let full = lat.full();
    let order = lat.order(full);
    let irreducible = lat.is_k_irreducible(full, k);
    let witness = if !irreducible && lat.ldim(full) >= 1 {
        find_reducing_witness_in(&lat, full, k)?
    } else {
        None
    };
    CommandOutput::json(json!({
        "k": k,
        "ldim": lat.ldim(full),
        "irreducible": irreducible,
        "order": (order != ORDER_INFINITE).then_some(order),
        "witness": witness,
    }))
}

pub fn soa_command(class: &HypothesisClass) -> Result<CommandOutput> {
    let h = soa(class)?;
    CommandOutput::json(json!({
        "soa": h,
        "signs": h.signs(),
        "in_class": class.contains(&h),
    }))
}

pub fn reduce_tree_command(
    class: &HypothesisClass,
    dist: &DistSpec,
    cfg: &ReduceTreeConfig,
    seed: u64,
) -> Result<CommandOutput> {
    let lat = Lattice::new(class)?;
    let (p, _) = dist.instance(class, &mut RandomSource::from_seed(seed).child("instance"))?;
    CommandOutput::json(reduce_tree_in(&lat, &p, cfg)?)
}

pub fn learn(spec: &ExperimentSpec) -> Result<(Report, CommandOutput)> {
    let report = run_experiment(spec)?;
    let csv = if report.curve.is_empty() {
        report.trials_csv()
    } else {
        report.curve_csv()
    };
    let out = CommandOutput {
        json: serde_json::to_value(&report)?,
        csv: Some(csv),
    };
    Ok((report, out))
}

/// Size parameters of an exhaustive audit; unused fields are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditInstance {
    /// Candidates of the score-vector exponential mechanism.
    #[serde(default = "three")]
    pub candidates: usize,
    #[serde(default = "three")]
    pub max_score: u32,
    #[serde(default = "one")]
    pub sensitivity: f64,
    #[serde(default = "three")]
    pub universe: usize,
    #[serde(default = "three")]
    pub n: usize,
    #[serde(default)]
    pub class: Option<HypothesisClass>,
    #[serde(default = "two")]
    pub ell: usize,
    #[serde(default = "three")]
    pub m: usize,
    #[serde(default = "tenth")]
    pub beta: f64,
}

fn one() -> f64 {
    1.0
}
fn tenth() -> f64 {
    0.1
}
fn two() -> usize {
    2
}
fn three<T: From<u8>>() -> T {
    T::from(3)
}

impl Default for AuditInstance {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields default")
    }
}

pub const AUDIT_MECHANISMS: [&str; 4] = ["exponential", "counting", "generic_learner", "sparse_selection"];

/// Exhaustive privacy audit of a named mechanism.
pub fn dp_audit(mechanism: &str, inst: &AuditInstance, epsilon: f64, delta: f64) -> Result<DpReport> {
    match mechanism {
        "exponential" => verify_dp(
            &ExponentialSpec {
                epsilon,
                sensitivity: inst.sensitivity,
            },
            &adjacent_score_vectors(inst.candidates, inst.max_score),
            epsilon,
            delta,
        ),
        "counting" => verify_dp(
            &CountingSpec {
                universe: inst.universe,
                epsilon,
                sensitivity: inst.sensitivity,
            },
            &adjacent_datasets(inst.universe, inst.n),
            epsilon,
            delta,
        ),
        "generic_learner" => {
            let class = match &inst.class {
                Some(c) => c.clone(),
                None => crate::classes::make_thresholds(inst.universe)?,
            };
            verify_dp(
                &GenericLearnerSpec { class, epsilon },
                &adjacent_datasets(inst.universe, inst.n),
                epsilon,
                delta,
            )
        }
        "sparse_selection" => verify_dp(
            &SparseSelectionSpec {
                params: SparseSelectionParams::new(inst.ell, epsilon, delta, inst.beta)?,
            },
            &adjacent_set_systems(inst.universe as u32, inst.ell, inst.m),
            epsilon,
            delta,
        ),
        other => Err(Error::Argument(format!(
            "unknown mechanism {other:?}; expected one of {AUDIT_MECHANISMS:?}"
        ))),
    }
}

pub fn suite(name: &str, seed: u64) -> Result<CommandOutput> {
    let r = run_suite(name, seed)?;
    let mut csv = String::from("check,passed,detail\n");
    for c in &r.checks {
        csv.push_str(&format!("{},{},{}\n", c.name, c.passed, c.detail.replace(',', ";")));
    }
    Ok(CommandOutput {
        json: serde_json::to_value(&r)?,
        csv: Some(csv),
    })
}

/// Loads a class given as a path or generator spec such as `thresholds:16`.
pub fn load_class(s: &str) -> Result<HypothesisClass> {
    ClassSource::parse(s)?.load()
}
