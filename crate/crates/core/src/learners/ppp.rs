use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::classes::{empirical_distribution, sample, Dataset, Distribution, Hypothesis, HypothesisClass, Label, LabeledExample};
use crate::dimensions::{dual_vcdim, vcdim};
use crate::dp::{
    generic_learner, generic_learner_distribution, generic_learner_sample_size,
    sparse_selection_distribution, ExactMechanism, Selection,
};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::learners::cover::{build_cover_sized, cover_size, Cover};
use crate::learners::poly::{
    plan_with, poly_pri_learn_on_data, poly_pri_learn_with, reduce_tree_sets, LearnerConfig,
    LearnerPlan, PolyPriOutcome,
};
use crate::rng::RandomSource;

/// Resolved parameters of PPPLearn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PppPlan {
    /// PolyPriLearn at `(eps, delta, eta/4, beta/2)`.
    pub poly: LearnerPlan,
    pub eta: f64,
    pub beta: f64,
    /// `eta / 8`.
    pub cover_alpha: f64,
    pub d_star: usize,
    pub cover_size: usize,
    /// Accuracy target `eta / 2` of the generic learner.
    pub generic_alpha: f64,
    pub n_gen: u64,
    pub samples: u64,
}

pub fn ppp_plan(class: &HypothesisClass, cfg: &LearnerConfig) -> Result<PppPlan> {
    cfg.validate()?;
    let lat = Lattice::new(class)?;
    let d_l = lat.ldim(lat.full());
    if d_l < 0 {
        return Err(Error::Argument("cannot learn an empty class".into()));
    }
    let mut inner = cfg.clone();
    inner.eta = cfg.eta / 4.0;
    inner.beta = cfg.beta / 2.0;
    let poly = plan_with(class.len(), d_l, vcdim(class).max(1), &inner)?;
    let cover_alpha = cfg.eta / 8.0;
    let d_star = dual_vcdim(class).max(1) as usize;
    let cover_size = match cfg.overrides.cover_size {
        Some(m) => m,
        None => cover_size(cover_alpha, d_star, cfg.c0)?,
    };
    let generic_alpha = cfg.eta / 2.0;
    let n_gen = match cfg.overrides.n_gen {
        Some(n) => n,
        None => generic_learner_sample_size(
            cover_size as f64,
            generic_alpha,
            cfg.beta / 2.0,
            cfg.epsilon,
            cfg.generic_constant,
        )?,
    };
    Ok(PppPlan {
        samples: poly.samples.saturating_add(n_gen),
        poly,
        eta: cfg.eta,
        beta: cfg.beta,
        cover_alpha,
        d_star,
        cover_size,
        generic_alpha,
        n_gen,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PppOutcome {
    pub hypothesis: Hypothesis,
    pub f_hat: Hypothesis,
    pub game_value: f64,
    pub cover_members: usize,
    pub cover_attempts: u32,
    pub poly: PolyPriOutcome,
    pub plan: PppPlan,
    /// Positions of the generic learner's sample after the PolyPriLearn
    /// chunks; the two samples never overlap.
    pub generic_range: (u64, u64),
    pub generic_stream: String,
}

/// PPPLearn with a sampler.
pub fn ppp_learn(
    class: &HypothesisClass,
    sampler: &Distribution,
    cfg: &LearnerConfig,
    rng: &RandomSource,
) -> Result<PppOutcome> {
    let lat = Lattice::new(class)?;
    let plan = ppp_plan(class, cfg)?;
    ppp_learn_with(&lat, sampler, &plan, rng)
}

pub fn ppp_learn_with(
    lat: &Lattice,
    sampler: &Distribution,
    plan: &PppPlan,
    rng: &RandomSource,
) -> Result<PppOutcome> {
    let poly = poly_pri_learn_with(lat, sampler, &plan.poly, &rng.child("poly"))?;
    let mut stream = rng.child("generic-sample");
    let data = sample(sampler, plan.n_gen as usize, &mut stream)?;
    let label = stream.label().to_string();
    finish(lat.base(), poly, &data, plan, rng, label)
}

/// PPPLearn on an explicit dataset: the first `m n0` examples feed
/// PolyPriLearn, the next `n_gen` the generic learner.
pub fn ppp_learn_on_data(
    lat: &Lattice,
    data: &Dataset,
    plan: &PppPlan,
    rng: &RandomSource,
) -> Result<PppOutcome> {
    if data.len() < plan.samples as usize {
        return Err(Error::Argument(format!(
            "PPPLearn needs {} examples, got {}",
            plan.samples,
            data.len()
        )));
    }
    let split = plan.poly.samples as usize;
    let poly = poly_pri_learn_on_data(lat, &data.slice(0, split), &plan.poly, &rng.child("poly"))?;
    let rest = data.slice(split, split + plan.n_gen as usize);
    finish(lat.base(), poly, &rest, plan, rng, String::new())
}

fn finish(
    class: &HypothesisClass,
    poly: PolyPriOutcome,
    data: &Dataset,
    plan: &PppPlan,
    rng: &RandomSource,
    generic_stream: String,
) -> Result<PppOutcome> {
    let f_hat = poly.hypothesis()?.clone();
    let cover = build_cover_sized(class, &f_hat, plan.cover_alpha, plan.cover_size)?;
    let hypothesis = generic_learner(
        &cover.hypotheses,
        data,
        plan.poly.epsilon,
        &mut rng.child("generic-learner"),
    )?;
    if !class.contains(&hypothesis) {
        return Err(Error::Contract("generic learner left the class".into()));
    }
    let start = plan.poly.samples;
    Ok(PppOutcome {
        hypothesis,
        f_hat,
        game_value: cover.game.value,
        cover_members: cover.hypotheses.len(),
        cover_attempts: cover.attempts,
        poly,
        plan: plan.clone(),
        generic_range: (start, start + plan.n_gen),
        generic_stream,
    })
}

/// Exact output distribution of [`ppp_learn_on_data`] for tiny instances.
/// `None` stands for the learner failing on a bottom selection.
pub struct PipelineSpec {
    pub class: HypothesisClass,
    pub plan: PppPlan,
    lat: Lattice,
    chunk_memo: Mutex<HashMap<Vec<(usize, Label)>, Vec<Hypothesis>>>,
    cover_memo: Mutex<BTreeMap<Hypothesis, Cover>>,
}

impl PipelineSpec {
    pub fn new(class: HypothesisClass, plan: PppPlan) -> Result<Self> {
        Ok(PipelineSpec {
            lat: Lattice::new(&class)?,
            class,
            plan,
            chunk_memo: Mutex::new(HashMap::new()),
            cover_memo: Mutex::new(BTreeMap::new()),
        })
    }

    fn chunk_set(&self, chunk: &Dataset) -> Result<Vec<Hypothesis>> {
        let mut key: Vec<(usize, Label)> = chunk.examples().iter().map(|e| (e.point, e.label)).collect();
        key.sort();
        if let Some(s) = self.chunk_memo.lock().expect("memo lock").get(&key) {
            return Ok(s.clone());
        }
        let p = empirical_distribution(chunk)?;
        let (s, _) = reduce_tree_sets(&self.lat, &[p], &self.plan.poly)?.remove(0);
        self.chunk_memo.lock().expect("memo lock").insert(key, s.clone());
        Ok(s)
    }

    fn cover(&self, f_hat: &Hypothesis) -> Result<Cover> {
        if let Some(c) = self.cover_memo.lock().expect("memo lock").get(f_hat) {
            return Ok(c.clone());
        }
        let c = build_cover_sized(&self.class, f_hat, self.plan.cover_alpha, self.plan.cover_size)?;
        self.cover_memo.lock().expect("memo lock").insert(f_hat.clone(), c.clone());
        Ok(c)
    }
}

impl std::fmt::Debug for PipelineSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PipelineSpec").field("plan", &self.plan).finish()
    }
}

impl ExactMechanism for PipelineSpec {
    type Input = Dataset;
    type Output = Option<Hypothesis>;

    fn name(&self) -> String {
        "ppp_learn".into()
    }

    fn output_distribution(&self, input: &Dataset) -> Result<Vec<(Option<Hypothesis>, f64)>> {
        let p = &self.plan.poly;
        if input.len() != self.plan.samples as usize {
            return Err(Error::Argument(format!(
                "pipeline input must have {} examples",
                self.plan.samples
            )));
        }
        let n0 = p.n0 as usize;
        let sets = (0..p.m)
            .map(|j| self.chunk_set(&input.slice(j * n0, (j + 1) * n0)))
            .collect::<Result<Vec<_>>>()?;
        let split = p.samples as usize;
        let rest = input.slice(split, input.len());
        let mut out = Vec::new();
        for (sel, q) in sparse_selection_distribution(&sets, &p.sparse)? {
            match sel {
                Selection::Bottom => out.push((None, q)),
                Selection::Element(f_hat) => {
                    let cover = self.cover(&f_hat)?;
                    let probs = generic_learner_distribution(&cover.hypotheses, &rest, p.epsilon)?;
                    for (h, r) in cover.hypotheses.iter().zip(probs) {
                        out.push((Some(h.clone()), q * r));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Ordered replace-one pairs of length-`n` sequences over `universe` points
/// and both labels. Needed where the mechanism depends on positions.
pub fn adjacent_sequences(universe: usize, n: usize) -> Vec<(Dataset, Dataset)> {
    let symbols = 2 * universe;
    let total = symbols.pow(n as u32);
    let decode = |mut code: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let s = code % symbols;
                code /= symbols;
                s
            })
            .collect()
    };
    let to_ds = |v: &[usize]| {
        Dataset::new(
            v.iter()
                .map(|&a| LabeledExample::new(a / 2, if a % 2 == 0 { Label::Neg } else { Label::Pos }))
                .collect(),
        )
    };
    let mut out = Vec::new();
    for code in 0..total {
        let s = decode(code);
        for i in 0..n {
            for a in 0..symbols {
                if a > s[i] {
                    let mut t = s.clone();
                    t[i] = a;
                    out.push((to_ds(&s), to_ds(&t)));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_returns_itself() {
        let f = Hypothesis::from_signs(&[-1, 1]).unwrap();
        let class = HypothesisClass::singleton(f.clone());
        let p = Distribution::labeled_by(&f, &Distribution::uniform_marginal(2)).unwrap();
        let cfg = LearnerConfig::new(1.0, 1e-6, 0.5, 0.1).desk_scale(true);
        let out = ppp_learn(&class, &p, &cfg, &RandomSource::from_seed(9)).unwrap();
        assert_eq!(out.hypothesis, f);
        assert!(out.generic_range.0 >= out.poly.chunks.last().unwrap().end);
    }

    #[test]
    fn sequences_count() {
        // 4 sequences, each with one upward replacement per position holding symbol 0
        assert_eq!(adjacent_sequences(1, 2).len(), 4);
    }
}
