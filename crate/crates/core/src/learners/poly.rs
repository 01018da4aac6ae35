use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{empirical_distribution, Dataset, Distribution, Hypothesis, HypothesisClass};
use crate::dimensions::{alpha_bound, vcdim};
use crate::dp::{sparse_selection, MechanismTranscript, PrivacyBudget, Selection, SparseSelectionParams};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::learners::reduce_tree::{reduce_tree_in, ReduceTreeConfig, Schedule};
use crate::rng::RandomSource;

/// Iteration cap for the desk-scale fixed point between `m` and `n0`.
const PLAN_ITERATIONS: usize = 64;

/// Individual parameter overrides; each replaces the planned value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanOverrides {
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub n0: Option<u64>,
    #[serde(default)]
    pub alpha_delta: Option<f64>,
    #[serde(default)]
    pub k_prime: Option<u64>,
    #[serde(default)]
    pub n_gen: Option<u64>,
    #[serde(default)]
    pub cover_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub eta: f64,
    pub beta: f64,
    /// Leading constant of the `m` and `n0` formulas.
    #[serde(default = "default_c")]
    pub c: f64,
    /// Uniform convergence constant in `alpha(n, gamma)`.
    #[serde(default = "default_c0")]
    pub c0: f64,
    /// The 64 in `k' >= 64 C0 d / eta^2`.
    #[serde(default = "default_k_prime_constant")]
    pub k_prime_constant: f64,
    /// Constant of the generic learner sample size.
    #[serde(default = "default_generic_constant")]
    pub generic_constant: f64,
    /// Pick the smallest `m`, `n0` meeting the proof's inequalities instead
    /// of the closed forms.
    #[serde(default)]
    pub desk_scale: bool,
    /// Feed the true distribution to every ReduceTree call.
    #[serde(default)]
    pub idealized: bool,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub overrides: PlanOverrides,
}

fn default_c() -> f64 {
    1.0
}
fn default_c0() -> f64 {
    1.0
}
fn default_k_prime_constant() -> f64 {
    64.0
}
fn default_generic_constant() -> f64 {
    8.0
}

impl LearnerConfig {
    pub fn new(epsilon: f64, delta: f64, eta: f64, beta: f64) -> Self {
        LearnerConfig {
            epsilon,
            delta,
            eta,
            beta,
            c: default_c(),
            c0: default_c0(),
            k_prime_constant: default_k_prime_constant(),
            generic_constant: default_generic_constant(),
            desk_scale: false,
            idealized: false,
            strict: false,
            overrides: PlanOverrides::default(),
        }
    }

    pub fn desk_scale(mut self, on: bool) -> Self {
        self.desk_scale = on;
        self
    }

    /// Collects every failing field into one error.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            bad.push(format!("epsilon must lie in (0,1], got {}", self.epsilon));
        }
        for (name, v) in [("delta", self.delta), ("eta", self.eta), ("beta", self.beta)] {
            if !(v > 0.0 && v < 1.0) {
                bad.push(format!("{name} must lie in (0,1), got {v}"));
            }
        }
        for (name, v) in [
            ("c", self.c),
            ("c0", self.c0),
            ("k_prime_constant", self.k_prime_constant),
            ("generic_constant", self.generic_constant),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("{name} must be positive, got {v}"));
            }
        }
        let o = &self.overrides;
        if o.m == Some(0) {
            bad.push("overrides.m must be at least 1".into());
        }
        if o.n0 == Some(0) {
            bad.push("overrides.n0 must be at least 1".into());
        }
        if o.k_prime == Some(0) {
            bad.push("overrides.k_prime must be at least 1".into());
        }
        if o.n_gen == Some(0) {
            bad.push("overrides.n_gen must be at least 1".into());
        }
        if o.cover_size == Some(0) {
            bad.push("overrides.cover_size must be at least 1".into());
        }
        if let Some(a) = o.alpha_delta {
            if !(a > 0.0 && a.is_finite()) {
                bad.push(format!("overrides.alpha_delta must be positive, got {a}"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Argument(bad.join("; ")))
        }
    }
}

/// Resolved parameters of one PolyPriLearn run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerPlan {
    pub epsilon: f64,
    pub delta: f64,
    pub eta: f64,
    pub beta: f64,
    pub d_l: i32,
    pub d_v: i32,
    pub class_size: usize,
    pub m: usize,
    pub n0: u64,
    pub gamma: f64,
    pub alpha_delta: f64,
    pub k_prime: u64,
    /// `prod_{t=1..d} (k_t + 1)` as a float.
    pub product_bound: f64,
    /// Public bound on `|S_hat|`: the product bound capped at `|F|`.
    pub ell: usize,
    pub sparse: SparseSelectionParams,
    /// Sparse selection error at confidence `1 - beta/2`.
    pub sparse_error: f64,
    /// `ceil(m / (d + 1))`: the support some output is guaranteed.
    pub guaranteed_support: usize,
    /// `(d + 3) alpha_delta < eta`.
    pub step_condition: bool,
    /// `ceil(m / (d + 1)) > sparse_error`.
    pub support_condition: bool,
    pub desk_scale: bool,
    pub idealized: bool,
    pub strict: bool,
    pub samples: u64,
}

impl LearnerPlan {
    pub fn schedule(&self) -> Schedule {
        Schedule {
            d: self.d_l,
            alpha_delta: self.alpha_delta,
            k_prime: self.k_prime,
        }
    }

    pub fn reduce_tree_config(&self) -> ReduceTreeConfig {
        ReduceTreeConfig {
            n: self.n0,
            k_prime: self.k_prime,
            gamma: self.gamma,
            alpha_delta: Some(self.alpha_delta),
            c0: 1.0,
            d: Some(self.d_l),
            strict: self.strict,
        }
    }

    pub fn budget(&self) -> PrivacyBudget {
        PrivacyBudget {
            epsilon: self.epsilon,
            delta: self.delta,
        }
    }
}

/// Plans PolyPriLearn for `class`.
pub fn plan(class: &HypothesisClass, cfg: &LearnerConfig) -> Result<LearnerPlan> {
    cfg.validate()?;
    let lat = Lattice::new(class)?;
    let d_l = lat.ldim(lat.full());
    if d_l < 0 {
        return Err(Error::Argument("cannot learn an empty class".into()));
    }
    plan_with(class.len(), d_l, vcdim(class).max(1), cfg)
}

/// Planning from the class summary `(|F|, Ldim, VC)`.
pub fn plan_with(class_size: usize, d_l: i32, d_v: i32, cfg: &LearnerConfig) -> Result<LearnerPlan> {
    cfg.validate()?;
    let (eps, delta, eta, beta) = (cfg.epsilon, cfg.delta, cfg.eta, cfg.beta);
    let d = d_l.max(1) as f64;
    let dv = d_v.max(1) as f64;
    let o = &cfg.overrides;

    let derived = |m: usize, n0_fixed: Option<u64>| -> Result<(u64, f64, f64, u64)> {
        let gamma = beta / (2.0 * m as f64);
        let n0 = match n0_fixed {
            Some(n) => n,
            None if cfg.desk_scale => desk_n0(d_l, dv, gamma, eta, cfg.c0)?,
            None => {
                let v = cfg.c * d * d * dv * (d * m as f64 / (eta * beta)).ln() / (eta * eta);
                v.ceil().max(1.0) as u64
            }
        };
        let alpha_delta = match o.alpha_delta {
            Some(a) => a,
            None => 6.0 * alpha_bound(n0, gamma, dv, cfg.c0)?,
        };
        let k_prime = match o.k_prime {
            Some(k) => k,
            None => {
                let a = (n0 as f64 * (d_l as f64 + 3.0) * alpha_delta).ceil();
                let b = (cfg.k_prime_constant * cfg.c0 * d_l as f64 / (eta * eta)).ceil();
                a.max(b).max(1.0) as u64
            }
        };
        Ok((n0, gamma, alpha_delta, k_prime))
    };
    let ell_of = |alpha_delta: f64, k_prime: u64| -> (f64, usize) {
        let s = Schedule {
            d: d_l,
            alpha_delta,
            k_prime,
        };
        let prod = s.output_bound();
        (prod as f64, prod.min(class_size as u128).max(1) as usize)
    };
    let sparse_for = |ell: usize| SparseSelectionParams::new(ell, eps, delta, beta / 2.0);

    let m = match o.m {
        Some(m) => m,
        None if cfg.desk_scale => {
            let mut m = 1usize;
            let mut settled = false;
            for _ in 0..PLAN_ITERATIONS {
                let (_, _, alpha_delta, k_prime) = derived(m, o.n0)?;
                let (_, ell) = ell_of(alpha_delta, k_prime);
                let next = desk_m(d_l, &sparse_for(ell)?)?;
                if next == m {
                    settled = true;
                    break;
                }
                m = next;
            }
            if !settled {
                return Err(Error::Contract("desk-scale planning did not settle".into()));
            }
            m
        }
        None => {
            let v = cfg.c * d.powi(3) * (1.0 / (eps * delta * beta * eta)).ln() / eps;
            v.ceil().max(1.0) as usize
        }
    };
    let (n0, gamma, alpha_delta, k_prime) = derived(m, o.n0)?;
    let (product_bound, ell) = ell_of(alpha_delta, k_prime);
    let sparse = sparse_for(ell)?;
    let sparse_error = sparse.error_guarantee(m);
    let guaranteed_support = m.div_ceil(d_l as usize + 1);
    Ok(LearnerPlan {
        epsilon: eps,
        delta,
        eta,
        beta,
        d_l,
        d_v,
        class_size,
        m,
        n0,
        gamma,
        alpha_delta,
        k_prime,
        product_bound,
        ell,
        sparse,
        sparse_error,
        guaranteed_support,
        step_condition: (d_l as f64 + 3.0) * alpha_delta < eta,
        support_condition: guaranteed_support as f64 > sparse_error,
        desk_scale: cfg.desk_scale,
        idealized: cfg.idealized,
        strict: cfg.strict,
        samples: (m as u64).saturating_mul(n0),
    })
}

/// Smallest `n0` with `(d + 3) * 6 * alpha(n0, gamma) < eta`.
fn desk_n0(d_l: i32, dv: f64, gamma: f64, eta: f64, c0: f64) -> Result<u64> {
    let scale = 6.0 * (d_l as f64 + 3.0) * c0 / eta;
    let mut n = (scale * scale * (dv + (1.0 / gamma).ln())).floor().max(0.0) as u64 + 1;
    while (d_l as f64 + 3.0) * 6.0 * alpha_bound(n, gamma, dv, c0)? >= eta {
        n += 1;
    }
    // float rounding can make the closed form overshoot by one
    while n > 1 && (d_l as f64 + 3.0) * 6.0 * alpha_bound(n - 1, gamma, dv, c0)? < eta {
        n -= 1;
    }
    Ok(n)
}

/// Smallest `m` with `ceil(m / (d + 1)) > E(m)`.
fn desk_m(d_l: i32, sparse: &SparseSelectionParams) -> Result<usize> {
    let groups = d_l as usize + 1;
    (1..=50_000_000usize)
        .find(|&m| m.div_ceil(groups) as f64 > sparse.error_guarantee(m))
        .ok_or_else(|| Error::Capacity("no user count satisfies the sparse selection bound".into()))
}

/// Sample positions `[start, end)` and RNG stream behind one ReduceTree call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub index: usize,
    pub start: u64,
    pub end: u64,
    pub stream: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPriOutcome {
    pub selection: Selection<Hypothesis>,
    pub plan: LearnerPlan,
    pub set_sizes: Vec<usize>,
    pub t_finals: Vec<usize>,
    /// Number of sets containing the selected hypothesis.
    pub support: usize,
    pub chunks: Vec<ChunkRecord>,
    pub transcript: MechanismTranscript,
    #[serde(skip)]
    pub sets: Vec<Vec<Hypothesis>>,
}

impl PolyPriOutcome {
    /// The selected hypothesis, or a learner failure on bottom.
    pub fn hypothesis(&self) -> Result<&Hypothesis> {
        self.selection
            .element()
            .ok_or_else(|| Error::LearnerFailure("sparse selection returned bottom".into()))
    }
}

/// PolyPriLearn with a sampler: each of the `m` ReduceTree calls gets the
/// empirical distribution of `n0` fresh draws.
pub fn poly_pri_learn(
    class: &HypothesisClass,
    sampler: &Distribution,
    cfg: &LearnerConfig,
    rng: &RandomSource,
) -> Result<PolyPriOutcome> {
    let lat = Lattice::new(class)?;
    let plan = plan(class, cfg)?;
    poly_pri_learn_with(&lat, sampler, &plan, rng)
}

pub fn poly_pri_learn_with(
    lat: &Lattice,
    sampler: &Distribution,
    plan: &LearnerPlan,
    rng: &RandomSource,
) -> Result<PolyPriOutcome> {
    if plan.strict && !sampler.is_realizable_by(lat.base()) {
        return Err(Error::Contract("sampler is not realizable by the class".into()));
    }
    let n0 = plan.n0;
    let chunks: Vec<ChunkRecord> = (0..plan.m)
        .map(|j| ChunkRecord {
            index: j,
            start: j as u64 * n0,
            end: (j as u64 + 1) * n0,
            stream: rng.child_indexed("chunk", j as u64).label().to_string(),
        })
        .collect();
    let sets = (0..plan.m)
        .into_par_iter()
        .map(|j| {
            if plan.idealized {
                Ok(sampler.clone())
            } else {
                sampler.sample_empirical(n0, &mut rng.child_indexed("chunk", j as u64))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    finish(lat, sets, chunks, plan, rng)
}

/// PolyPriLearn on an explicit dataset: chunk `j` is examples
/// `[j n0, (j+1) n0)`.
pub fn poly_pri_learn_on_data(
    lat: &Lattice,
    data: &Dataset,
    plan: &LearnerPlan,
    rng: &RandomSource,
) -> Result<PolyPriOutcome> {
    let need = plan.samples as usize;
    if data.len() < need {
        return Err(Error::Argument(format!(
            "PolyPriLearn needs {need} examples, got {}",
            data.len()
        )));
    }
    let n0 = plan.n0 as usize;
    let mut dists = Vec::with_capacity(plan.m);
    let mut chunks = Vec::with_capacity(plan.m);
    for j in 0..plan.m {
        dists.push(empirical_distribution(&data.slice(j * n0, (j + 1) * n0))?);
        chunks.push(ChunkRecord {
            index: j,
            start: (j * n0) as u64,
            end: ((j + 1) * n0) as u64,
            stream: String::new(),
        });
    }
    finish(lat, dists, chunks, plan, rng)
}

/// The `S_hat` set of every chunk.
pub fn reduce_tree_sets(lat: &Lattice, dists: &[Distribution], plan: &LearnerPlan) -> Result<Vec<(Vec<Hypothesis>, usize)>> {
    let cfg = plan.reduce_tree_config();
    dists
        .par_iter()
        .map(|p| reduce_tree_in(lat, p, &cfg).map(|o| (o.s_hat, o.t_final)))
        .collect()
}

fn finish(
    lat: &Lattice,
    dists: Vec<Distribution>,
    chunks: Vec<ChunkRecord>,
    plan: &LearnerPlan,
    rng: &RandomSource,
) -> Result<PolyPriOutcome> {
    let outputs = reduce_tree_sets(lat, &dists, plan)?;
    let sets: Vec<Vec<Hypothesis>> = outputs.iter().map(|(s, _)| s.clone()).collect();
    let t_finals = outputs.iter().map(|(_, t)| *t).collect();
    let mut stream = rng.child("sparse-selection");
    let selection = sparse_selection(&sets, &plan.sparse, &mut stream)?;
    let support = selection
        .element()
        .map(|h| sets.iter().filter(|s| s.contains(h)).count())
        .unwrap_or(0);
    let transcript = MechanismTranscript::new("sparse_selection", &sets, &selection, &stream, plan.budget())?;
    Ok(PolyPriOutcome {
        selection,
        plan: plan.clone(),
        set_sizes: sets.iter().map(Vec::len).collect(),
        t_finals,
        support,
        chunks,
        transcript,
        sets,
    })
}
