use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classes::{Dataset, Hypothesis, HypothesisClass};
use crate::error::{Error, Result};
use crate::rng::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyBudget {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Argument(format!("delta must lie in [0,1), got {delta}")));
        }
        Ok(PrivacyBudget { epsilon, delta })
    }

    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate<T> {
    pub candidate: T,
    pub score: f64,
}

impl<T> ScoredCandidate<T> {
    pub fn new(candidate: T, score: f64) -> Self {
        ScoredCandidate { candidate, score }
    }
}

/// Audit record of one mechanism invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MechanismTranscript {
    pub mechanism: String,
    pub input_fingerprint: String,
    pub output: String,
    pub stream: String,
    pub budget: PrivacyBudget,
}

impl MechanismTranscript {
    pub fn new(
        mechanism: &str,
        input: &impl Serialize,
        output: &impl Serialize,
        rng: &RandomSource,
        budget: PrivacyBudget,
    ) -> Result<Self> {
        let bytes = serde_json::to_vec(input)?;
        let digest = Sha256::digest(&bytes);
        Ok(MechanismTranscript {
            mechanism: mechanism.to_string(),
            input_fingerprint: digest.iter().map(|b| format!("{b:02x}")).collect(),
            output: serde_json::to_string(output)?,
            stream: rng.label().to_string(),
            budget,
        })
    }
}

/// Output probabilities `prop. to exp(eps * score / (2 * sensitivity))`.
pub fn exponential_probabilities(scores: &[f64], sensitivity: f64, epsilon: f64) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::Argument("exponential mechanism over no candidates".into()));
    }
    if !(sensitivity > 0.0) || !(epsilon > 0.0) {
        return Err(Error::Argument("sensitivity and epsilon must be positive".into()));
    }
    let logits: Vec<f64> = scores.iter().map(|s| epsilon * s / (2.0 * sensitivity)).collect();
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|v| v / z).collect())
}

/// Draws an index from a probability vector.
pub fn sample_index(probs: &[f64], rng: &mut RandomSource) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

pub fn exponential_mechanism_index(
    scores: &[f64],
    sensitivity: f64,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<usize> {
    let p = exponential_probabilities(scores, sensitivity, epsilon)?;
    Ok(sample_index(&p, rng))
}

pub fn exponential_mechanism<T: Clone>(
    candidates: &[ScoredCandidate<T>],
    sensitivity: f64,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<T> {
    let scores: Vec<f64> = candidates.iter().map(|c| c.score).collect();
    let i = exponential_mechanism_index(&scores, sensitivity, epsilon, rng)?;
    Ok(candidates[i].candidate.clone())
}

/// Result of sparse selection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Selection<T> {
    Element(T),
    Bottom,
}

impl<T> Selection<T> {
    pub fn element(&self) -> Option<&T> {
        match self {
            Selection::Element(t) => Some(t),
            Selection::Bottom => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSelectionParams {
    pub ell: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
}

impl SparseSelectionParams {
    pub fn new(ell: usize, epsilon: f64, delta: f64, beta: f64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Argument("set size bound must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Argument(format!("epsilon must lie in (0,1], got {epsilon}")));
        }
        for (name, v) in [("delta", delta), ("beta", beta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Argument(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        Ok(SparseSelectionParams {
            ell,
            epsilon,
            delta,
            beta,
        })
    }

    /// Score of the bottom element,
    /// `ceil((2/eps) ln(ell (e^eps + e^{eps/2}) / delta))`.
    pub fn threshold(&self) -> f64 {
        let e = self.epsilon;
        ((2.0 / e) * ((self.ell as f64) * (e.exp() + (e / 2.0).exp()) / self.delta).ln()).ceil()
    }

    /// Error guaranteed with probability `1 - beta` for `m` users:
    /// `tau + (2/eps) ln((m ell + 1) / beta)`.
    pub fn error_guarantee(&self, m: usize) -> f64 {
        self.threshold()
            + (2.0 / self.epsilon) * (((m * self.ell + 1) as f64) / self.beta).ln()
    }

    /// `constant * (1/eps) ln(m ell / (eps delta beta))`.
    pub fn error_shape(&self, m: usize, constant: f64) -> f64 {
        let e = self.epsilon;
        constant / e * ((m * self.ell) as f64 / (e * self.delta * self.beta)).ln()
    }
}

/// Containment counts over the union of the sets; each set counts an
/// element at most once.
pub fn containment_counts<T: Ord + Clone>(sets: &[Vec<T>]) -> BTreeMap<T, usize> {
    let mut counts = BTreeMap::new();
    for s in sets {
        let mut s = s.clone();
        s.sort();
        s.dedup();
        for u in s {
            *counts.entry(u).or_insert(0) += 1;
        }
    }
    counts
}

/// Error of a selection: the maximum containment count minus its own
/// (bottom counts as zero).
pub fn selection_error<T: Ord + Clone>(sets: &[Vec<T>], sel: &Selection<T>) -> usize {
    let counts = containment_counts(sets);
    let best = counts.values().copied().max().unwrap_or(0);
    let own = sel.element().and_then(|u| counts.get(u)).copied().unwrap_or(0);
    best - own
}

fn check_sets<T: Ord + Clone>(sets: &[Vec<T>], params: &SparseSelectionParams) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::Argument("sparse selection needs at least one user".into()));
    }
    for (i, s) in sets.iter().enumerate() {
        let mut d = s.clone();
        d.sort();
        d.dedup();
        if d.len() > params.ell {
            return Err(Error::Argument(format!(
                "set {i} has {} elements, more than ell = {}",
                d.len(),
                params.ell
            )));
        }
    }
    Ok(())
}

/// Exact output distribution of [`sparse_selection`], in element order
/// with bottom last.
pub fn sparse_selection_distribution<T: Ord + Clone>(
    sets: &[Vec<T>],
    params: &SparseSelectionParams,
) -> Result<Vec<(Selection<T>, f64)>> {
    check_sets(sets, params)?;
    let counts = containment_counts(sets);
    let mut outcomes: Vec<Selection<T>> = counts.keys().cloned().map(Selection::Element).collect();
    let mut scores: Vec<f64> = counts.values().map(|&c| c as f64).collect();
    outcomes.push(Selection::Bottom);
    scores.push(params.threshold());
    let p = exponential_probabilities(&scores, 1.0, params.epsilon)?;
    Ok(outcomes.into_iter().zip(p).collect())
}

/// Private selection of an element contained in many of the users' sets.
///
/// Exponential mechanism with sensitivity 1 over the union of the sets,
/// scored by containment count, plus a bottom element at the fixed score
/// [`SparseSelectionParams::threshold`]. Replacing one user's set changes
/// each count by at most one and can introduce at most `ell` new elements,
/// whose total mass the bottom score caps below `delta`.
pub fn sparse_selection<T: Ord + Clone>(
    sets: &[Vec<T>],
    params: &SparseSelectionParams,
    rng: &mut RandomSource,
) -> Result<Selection<T>> {
    let dist = sparse_selection_distribution(sets, params)?;
    let p: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
    let i = sample_index(&p, rng);
    Ok(dist[i].0.clone())
}

/// Output distribution of the generic learner over `class` indices.
pub fn generic_learner_distribution(
    class: &HypothesisClass,
    s: &Dataset,
    epsilon: f64,
) -> Result<Vec<f64>> {
    if class.is_empty() {
        return Err(Error::Argument("generic learner over an empty class".into()));
    }
    if s.is_empty() {
        return Err(Error::Argument("generic learner needs at least one example".into()));
    }
    // score -err_S(h) with sensitivity 1/n, i.e. -mistakes with sensitivity 1
    let scores: Vec<f64> = class.iter().map(|h| -(s.mistakes(h) as f64)).collect();
    exponential_probabilities(&scores, 1.0, epsilon)
}

/// Exponential mechanism over `class` with score `-err_S(h)`, sensitivity `1/n`.
pub fn generic_learner(
    class: &HypothesisClass,
    s: &Dataset,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<Hypothesis> {
    let p = generic_learner_distribution(class, s, epsilon)?;
    Ok(class.hypotheses()[sample_index(&p, rng)].clone())
}

/// `ceil(c * (ln |H| + ln(1/beta)) / (alpha * eps))`.
pub fn generic_learner_sample_size(h_size: f64, alpha: f64, beta: f64, epsilon: f64, c: f64) -> Result<u64> {
    if !(h_size >= 1.0) || !(alpha > 0.0) || !(beta > 0.0 && beta < 1.0) || !(epsilon > 0.0) || !(c > 0.0) {
        return Err(Error::Argument("invalid generic learner sample-size parameters".into()));
    }
    Ok((c * (h_size.ln() + (1.0 / beta).ln()) / (alpha * epsilon)).ceil().max(1.0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Label;

    #[test]
    fn odds_ratio_is_exact() {
        let p = exponential_probabilities(&[1.0, 0.0], 1.0, 2.0).unwrap();
        assert!((p[0] / p[1] - std::f64::consts::E).abs() < 1e-12);
        let u = exponential_probabilities(&[3.0, 3.0, 3.0], 1.0, 1.0).unwrap();
        assert!(u.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        assert!(exponential_probabilities(&[], 1.0, 1.0).is_err());
    }

    #[test]
    fn shift_invariance() {
        let a = exponential_probabilities(&[0.5, 2.0, -1.0], 0.7, 1.3).unwrap();
        let b = exponential_probabilities(&[100.5, 102.0, 99.0], 0.7, 1.3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn single_candidate() {
        let mut rng = RandomSource::from_seed(1);
        let c = vec![ScoredCandidate::new("only", -5.0)];
        assert_eq!(exponential_mechanism(&c, 1.0, 0.1, &mut rng).unwrap(), "only");
    }

    #[test]
    fn sparse_selection_stays_in_universe() {
        let params = SparseSelectionParams::new(1, 1.0, 1e-6, 0.1).unwrap();
        let mut rng = RandomSource::from_seed(4);
        for _ in 0..50 {
            let s = sparse_selection(&[vec![7u32]], &params, &mut rng).unwrap();
            assert!(matches!(s, Selection::Element(7) | Selection::Bottom));
        }
        assert!(sparse_selection(&[vec![1u32, 2]], &params, &mut rng).is_err());
    }

    #[test]
    fn generic_learner_singleton() {
        let h = Hypothesis::from_signs(&[1, -1]).unwrap();
        let class = HypothesisClass::singleton(h.clone());
        let s = Dataset::from_pairs(&[(0, Label::Neg)]);
        let mut rng = RandomSource::from_seed(0);
        assert_eq!(generic_learner(&class, &s, 1.0, &mut rng).unwrap(), h);
    }
}
