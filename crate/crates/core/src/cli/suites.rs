use serde::{Deserialize, Serialize};

use crate::classes::{make_all_functions, make_negpt, make_random, make_thresholds};
use crate::cli::commands::{dp_audit, AuditInstance};
use crate::cli::experiment::{run_experiment, ClassSource, DistSpec, ExperimentSpec, LearnerKind};
use crate::dimensions::{ldim, vcdim};
use crate::dp::{selection_error, sparse_selection, SparseSelectionParams};
use crate::error::{Error, Result};
use crate::learners::LearnerConfig;
use crate::rng::RandomSource;
use crate::structure::{find_reducing_witness, is_k_irreducible, is_k_irreducible_oracle, tilde_class};

pub const SUITES: [&str; 6] = ["dimensions", "irreducibility", "tilde", "dp", "sparse", "learn"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = match name {
        "dimensions" => dimensions()?,
        "irreducibility" => irreducibility(seed)?,
        "tilde" => tilde(seed)?,
        "dp" => dp()?,
        "sparse" => sparse(seed)?,
        "learn" => learn(seed)?,
        other => {
            return Err(Error::Argument(format!(
                "unknown suite {other:?}; expected one of {SUITES:?}"
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.into(),
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn dimensions() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in 1..=4u32 {
        let d = ldim(&make_thresholds(1 << k)?)?;
        out.push(check(format!("ldim thresholds {}", 1 << k), d == k as i32, format!("ldim {d}")));
    }
    for d in 1..=3usize {
        let c = make_all_functions(d)?;
        let (l, v) = (ldim(&c)?, vcdim(&c));
        out.push(check(
            format!("all functions on {d} points"),
            l == d as i32 && v == d as i32,
            format!("ldim {l}, vc {v}"),
        ));
    }
    let c = make_negpt(8)?;
    let (l, v) = (ldim(&c)?, vcdim(&c));
    out.push(check("negpt 8", l == 3 && v == 3, format!("ldim {l}, vc {v}")));
    Ok(out)
}

fn irreducibility(seed: u64) -> Result<Vec<Check>> {
    let mut mismatches = 0;
    let mut bad_witnesses = 0;
    let trials = 50;
    for i in 0..trials {
        let c = make_random(3, 1 + (i % 6), seed.wrapping_add(i as u64))?;
        for k in 0..=2u64 {
            let fast = is_k_irreducible(&c, k)?;
            if fast != is_k_irreducible_oracle(&c, k)? {
                mismatches += 1;
            }
            if !fast && ldim(&c)? >= 1 {
                match find_reducing_witness(&c, k)? {
                    Some(w) if w.verify(&c)? => {}
                    _ => bad_witnesses += 1,
                }
            }
        }
    }
    Ok(vec![
        check("recursion matches definition", mismatches == 0, format!("{mismatches} mismatches over {trials} classes")),
        check("reducing witnesses verify", bad_witnesses == 0, format!("{bad_witnesses} bad witnesses")),
    ])
}

fn tilde(seed: u64) -> Result<Vec<Check>> {
    let mut bad = 0;
    let trials = 30;
    for i in 0..trials {
        let c = make_random(3, 1 + (i % 8), seed.wrapping_add(1000 + i as u64))?;
        let d = ldim(&c)?;
        if ldim(&tilde_class(&c, (d + 1) as u64)?)? != d {
            bad += 1;
        }
    }
    Ok(vec![check("tilde class keeps Ldim", bad == 0, format!("{bad} of {trials} changed"))])
}

fn dp() -> Result<Vec<Check>> {
    let small = AuditInstance {
        candidates: 3,
        max_score: 2,
        universe: 2,
        n: 3,
        ell: 1,
        m: 2,
        ..AuditInstance::default()
    };
    let mut out = Vec::new();
    for mech in ["exponential", "counting", "generic_learner"] {
        let r = dp_audit(mech, &small, 1.0, 0.0)?;
        out.push(check(format!("{mech} is 1-DP"), r.passed, format!("max excess {:e}", r.max_excess)));
    }
    let r = dp_audit("sparse_selection", &small, 1.0, 1e-3)?;
    out.push(check(
        "sparse_selection is (1, 1e-3)-DP",
        r.passed,
        format!("max excess {:e}", r.max_excess),
    ));
    let halved = AuditInstance {
        sensitivity: 0.5,
        ..small
    };
    let r = dp_audit("counting", &halved, 1.0, 0.0)?;
    out.push(check(
        "halved sensitivity is flagged",
        !r.passed,
        format!("violation {:e}", r.violation),
    ));
    Ok(out)
}

fn sparse(seed: u64) -> Result<Vec<Check>> {
    let (m, ell, trials) = (50usize, 4usize, 200usize);
    let params = SparseSelectionParams::new(ell, 1.0, 1e-6, 0.1)?;
    let bound = params.error_shape(m, 4.0);
    let root = RandomSource::from_seed(seed);
    let mut ok = 0;
    for t in 0..trials {
        let mut rng = root.child_indexed("trial", t as u64);
        let sets: Vec<Vec<u32>> = (0..m)
            .map(|_| {
                let mut s: Vec<u32> = (0..ell).map(|_| rand::Rng::random_range(&mut rng, 0..12)).collect();
                s.sort();
                s.dedup();
                s
            })
            .collect();
        let sel = sparse_selection(&sets, &params, &mut rng.child("select"))?;
        if (selection_error(&sets, &sel) as f64) <= bound {
            ok += 1;
        }
    }
    let rate = ok as f64 / trials as f64;
    Ok(vec![check(
        "sparse selection error bound",
        rate >= 1.0 - params.beta,
        format!("{ok}/{trials} within {bound:.2}"),
    )])
}

fn learn(seed: u64) -> Result<Vec<Check>> {
    let spec = ExperimentSpec {
        class: ClassSource::parse("thresholds:8")?,
        distribution: DistSpec::parse("random")?,
        learner: LearnerKind::Ppp,
        config: LearnerConfig::new(1.0, 1e-6, 0.25, 0.1).desk_scale(true),
        trials: 20,
        seed,
        output: None,
        curve: Vec::new(),
    };
    let r = run_experiment(&spec)?;
    let a = &r.aggregate;
    Ok(vec![
        check(
            "PPPLearn accuracy",
            a.success_rate >= 0.9,
            format!("{}/{} within eta", a.successes, a.trials),
        ),
        check("PPPLearn is proper", a.proper == a.trials, format!("{}/{} proper", a.proper, a.trials)),
    ])
}
