use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::classes::{Dataset, DomainPoint, HypothesisClass, Label, LabeledExample};
use crate::dp::mechanisms::{
    exponential_probabilities, generic_learner_distribution, sparse_selection_distribution,
    Selection, SparseSelectionParams,
};
use crate::error::{Error, Result};

/// Probabilities are accepted as a distribution within this slack.
pub const DISTRIBUTION_SLACK: f64 = 1e-9;

/// A mechanism whose output distribution can be computed exactly.
pub trait ExactMechanism: Sync {
    type Input: Clone + Debug + Send + Sync;
    type Output: Ord + Clone + Debug + Send;

    fn name(&self) -> String;

    fn output_distribution(&self, input: &Self::Input) -> Result<Vec<(Self::Output, f64)>>;
}

/// Output distribution as a map, checked to sum to one.
pub fn exact_output_distribution<M: ExactMechanism>(
    mech: &M,
    input: &M::Input,
) -> Result<BTreeMap<M::Output, f64>> {
    let mut out = BTreeMap::new();
    for (o, p) in mech.output_distribution(input)? {
        *out.entry(o).or_insert(0.0) += p;
    }
    let total: f64 = out.values().sum();
    if (total - 1.0).abs() > DISTRIBUTION_SLACK {
        return Err(Error::Contract(format!(
            "{} output probabilities sum to {total}",
            mech.name()
        )));
    }
    Ok(out)
}

/// `sup_T P[T] - e^eps P'[T]`, attained by the event of all outcomes where
/// the difference is positive.
pub fn privacy_excess<O: Ord>(p: &BTreeMap<O, f64>, q: &BTreeMap<O, f64>, epsilon: f64) -> (f64, f64) {
    let e = epsilon.exp();
    let mut union = 0.0;
    let mut single = f64::NEG_INFINITY;
    for (o, &pv) in p {
        let diff = pv - e * q.get(o).copied().unwrap_or(0.0);
        single = single.max(diff);
        union += diff.max(0.0);
    }
    (union, single.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DpReport {
    pub mechanism: String,
    pub epsilon: f64,
    pub delta: f64,
    pub pairs_checked: usize,
    /// Largest `P[T] - e^eps P'[T]` over events and ordered pairs.
    pub max_excess: f64,
    /// Largest excess over singleton events.
    pub max_singleton_excess: f64,
    /// `max(0, max_excess - delta)`.
    pub violation: f64,
    pub worst_pair: Option<String>,
    pub passed: bool,
}

/// Checks the `(eps, delta)` inequality in both directions for every pair.
pub fn verify_dp<M: ExactMechanism>(
    mech: &M,
    pairs: &[(M::Input, M::Input)],
    epsilon: f64,
    delta: f64,
) -> Result<DpReport> {
    use rayon::prelude::*;
    let per_pair: Vec<(f64, f64, usize)> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let p = exact_output_distribution(mech, a)?;
            let q = exact_output_distribution(mech, b)?;
            let (u1, s1) = privacy_excess(&p, &q, epsilon);
            let (u2, s2) = privacy_excess(&q, &p, epsilon);
            Ok((u1.max(u2), s1.max(s2), i))
        })
        .collect::<Result<_>>()?;
    let mut max_excess = 0.0;
    let mut max_single = 0.0;
    let mut worst = None;
    for (u, s, i) in per_pair {
        if u > max_excess {
            max_excess = u;
            worst = Some(i);
        }
        max_single = f64::max(max_single, s);
    }
    let violation = (max_excess - delta).max(0.0);
    Ok(DpReport {
        mechanism: mech.name(),
        epsilon,
        delta,
        pairs_checked: pairs.len(),
        max_excess,
        max_singleton_excess: max_single,
        violation,
        worst_pair: worst.map(|i| format!("{:?}", pairs[i])),
        passed: violation <= DISTRIBUTION_SLACK,
    })
}

/// Exponential mechanism on raw score vectors; adjacent inputs differ by at
/// most the sensitivity in every coordinate.
#[derive(Clone, Debug)]
pub struct ExponentialSpec {
    pub epsilon: f64,
    pub sensitivity: f64,
}

impl ExactMechanism for ExponentialSpec {
    type Input = Vec<f64>;
    type Output = usize;

    fn name(&self) -> String {
        format!("exponential(sensitivity={})", self.sensitivity)
    }

    fn output_distribution(&self, input: &Vec<f64>) -> Result<Vec<(usize, f64)>> {
        Ok(exponential_probabilities(input, self.sensitivity, self.epsilon)?
            .into_iter()
            .enumerate()
            .collect())
    }
}

/// Exponential mechanism selecting a domain point scored by how often it
/// occurs in the dataset. Counts have sensitivity 1 under replacement, so
/// declaring a smaller sensitivity breaks privacy.
#[derive(Clone, Debug)]
pub struct CountingSpec {
    pub universe: usize,
    pub epsilon: f64,
    pub sensitivity: f64,
}

impl ExactMechanism for CountingSpec {
    type Input = Dataset;
    type Output = DomainPoint;

    fn name(&self) -> String {
        format!("counting-exponential(sensitivity={})", self.sensitivity)
    }

    fn output_distribution(&self, input: &Dataset) -> Result<Vec<(DomainPoint, f64)>> {
        let mut counts = vec![0.0; self.universe];
        for e in input.examples() {
            counts[e.point] += 1.0;
        }
        Ok(exponential_probabilities(&counts, self.sensitivity, self.epsilon)?
            .into_iter()
            .enumerate()
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct GenericLearnerSpec {
    pub class: HypothesisClass,
    pub epsilon: f64,
}

impl ExactMechanism for GenericLearnerSpec {
    type Input = Dataset;
    type Output = usize;

    fn name(&self) -> String {
        "generic_learner".into()
    }

    fn output_distribution(&self, input: &Dataset) -> Result<Vec<(usize, f64)>> {
        Ok(generic_learner_distribution(&self.class, input, self.epsilon)?
            .into_iter()
            .enumerate()
            .collect())
    }
}

#[derive(Clone, Debug)]
pub struct SparseSelectionSpec {
    pub params: SparseSelectionParams,
}

impl ExactMechanism for SparseSelectionSpec {
    type Input = Vec<Vec<u32>>;
    type Output = Selection<u32>;

    fn name(&self) -> String {
        "sparse_selection".into()
    }

    fn output_distribution(&self, input: &Vec<Vec<u32>>) -> Result<Vec<(Selection<u32>, f64)>> {
        sparse_selection_distribution(input, &self.params)
    }
}

fn multisets(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, alphabet: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in start..alphabet {
            cur.push(a);
            go(a, alphabet, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, alphabet, n, &mut Vec::new(), &mut out);
    out
}

/// Unordered pairs of multisets of size `n` over `alphabet` symbols that
/// differ by replacing one element. The audited mechanisms depend on the
/// input only through its histogram, so multisets cover every ordered
/// dataset pair.
pub fn replace_one_pairs(alphabet: usize, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for s in multisets(alphabet, n) {
        for i in 0..n {
            if i > 0 && s[i] == s[i - 1] {
                continue;
            }
            for a in 0..alphabet {
                if a == s[i] {
                    continue;
                }
                let mut t = s.clone();
                t[i] = a;
                t.sort();
                if s < t {
                    out.push((s.clone(), t));
                }
            }
        }
    }
    out
}

/// All replace-one dataset pairs of size `n` over `universe` points and both
/// labels.
pub fn adjacent_datasets(universe: usize, n: usize) -> Vec<(Dataset, Dataset)> {
    let to_ds = |v: &[usize]| {
        Dataset::new(
            v.iter()
                .map(|&a| LabeledExample::new(a / 2, if a % 2 == 0 { Label::Neg } else { Label::Pos }))
                .collect(),
        )
    };
    replace_one_pairs(2 * universe, n)
        .into_iter()
        .map(|(a, b)| (to_ds(&a), to_ds(&b)))
        .collect()
}

/// All replace-one pairs of `m` users' sets, each a subset of
/// `{0..universe-1}` of size at most `ell`.
pub fn adjacent_set_systems(universe: u32, ell: usize, m: usize) -> Vec<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    let subsets: Vec<Vec<u32>> = (0u32..1 << universe)
        .filter(|b| b.count_ones() as usize <= ell)
        .map(|b| (0..universe).filter(|i| b >> i & 1 == 1).collect())
        .collect();
    replace_one_pairs(subsets.len(), m)
        .into_iter()
        .map(|(a, b)| {
            (
                a.iter().map(|&i| subsets[i].clone()).collect(),
                b.iter().map(|&i| subsets[i].clone()).collect(),
            )
        })
        .collect()
}

/// Score vectors over `{0..=max_score}^c` paired with every vector at
/// sup-distance exactly one.
pub fn adjacent_score_vectors(c: usize, max_score: u32) -> Vec<(Vec<f64>, Vec<f64>)> {
    let side = max_score as usize + 1;
    let all: Vec<Vec<u32>> = (0..side.pow(c as u32))
        .map(|mut code| {
            (0..c)
                .map(|_| {
                    let v = (code % side) as u32;
                    code /= side;
                    v
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            let dist = a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0);
            if a < b && dist == 1 {
                out.push((
                    a.iter().map(|&v| v as f64).collect(),
                    b.iter().map(|&v| v as f64).collect(),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_have_no_excess() {
        let m = ExponentialSpec {
            epsilon: 1.0,
            sensitivity: 1.0,
        };
        let r = verify_dp(&m, &[(vec![1.0, 2.0], vec![1.0, 2.0])], 0.0, 0.0).unwrap();
        assert!(r.max_excess.abs() < 1e-15);
    }

    #[test]
    fn pair_generators() {
        // multisets of size 2 over 3 symbols: 6; each has 2*2 or 1*2 neighbours
        let p = replace_one_pairs(3, 2);
        assert!(p.iter().all(|(a, b)| a.len() == 2 && a < b));
        let diff = |a: &Vec<usize>, b: &Vec<usize>| {
            let mut x = a.clone();
            for v in b {
                if let Some(i) = x.iter().position(|w| w == v) {
                    x.remove(i);
                }
            }
            x.len()
        };
        assert!(p.iter().all(|(a, b)| diff(a, b) == 1));
        assert_eq!(adjacent_score_vectors(1, 2).len(), 2);
    }

    #[test]
    fn halved_sensitivity_is_flagged() {
        let pairs = adjacent_datasets(2, 3);
        let good = CountingSpec {
            universe: 2,
            epsilon: 1.0,
            sensitivity: 1.0,
        };
        let bad = CountingSpec {
            sensitivity: 0.5,
            ..good.clone()
        };
        assert!(verify_dp(&good, &pairs, 1.0, 0.0).unwrap().passed);
        assert!(!verify_dp(&bad, &pairs, 1.0, 0.0).unwrap().passed);
    }
}
