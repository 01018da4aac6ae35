//! Finite hypothesis classes over an enumerated domain `{0, .., N-1}`,
//! labeled examples, datasets and finite-support distributions.
//!
//! Probabilities are exact rationals so that set identities between error
//! bands (e.g. nesting of empirical and population bands) are decidable.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Binomial, Distribution as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Index of a point in the enumerated domain.
pub type DomainPoint = usize;

/// Tolerance for float-derived probability checks.
pub const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn from_sign(v: i64) -> Result<Label> {
        match v {
            1 => Ok(Label::Pos),
            -1 => Ok(Label::Neg),
            other => Err(Error::Argument(format!("label must be +1 or -1, got {other}"))),
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub const BOTH: [Label; 2] = [Label::Pos, Label::Neg];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Label::from_sign(v).map_err(serde::de::Error::custom)
    }
}

/// A labeling `f : X -> {-1, +1}` stored as its full label vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hypothesis {
    labels: Vec<Label>,
}

impl Hypothesis {
    pub fn new(labels: Vec<Label>) -> Self {
        Hypothesis { labels }
    }

    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        signs
            .iter()
            .map(|&s| Label::from_sign(s))
            .collect::<Result<Vec<_>>>()
            .map(Hypothesis::new)
    }

    pub fn constant(domain_size: usize, label: Label) -> Self {
        Hypothesis::new(vec![label; domain_size])
    }

    pub fn domain_size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: DomainPoint) -> Label {
        self.labels[x]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn signs(&self) -> Vec<i8> {
        self.labels.iter().map(|l| l.sign()).collect()
    }

    pub fn negate(&self) -> Hypothesis {
        Hypothesis::new(self.labels.iter().map(|l| l.flip()).collect())
    }

    /// Number of domain points where the two hypotheses disagree.
    pub fn disagreements(&self, other: &Hypothesis) -> usize {
        self.labels.iter().zip(&other.labels).filter(|(a, b)| a != b).count()
    }

    pub fn consistent_with(&self, constraints: &ConstraintSet) -> bool {
        constraints.pairs().iter().all(|&(x, b)| self.labels[x] == b)
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .labels
            .iter()
            .map(|l| if *l == Label::Pos { '+' } else { '-' })
            .collect();
        write!(f, "h[{s}]")
    }
}

/// A finite set of hypotheses sharing one domain. Duplicates are removed on
/// construction, keeping first-occurrence order. Equality is set equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ClassFile", into = "ClassFile")]
pub struct HypothesisClass {
    domain_size: usize,
    hypotheses: Vec<Hypothesis>,
}

#[derive(Serialize, Deserialize)]
struct ClassFile {
    domain_size: usize,
    hypotheses: Vec<Hypothesis>,
}

impl TryFrom<ClassFile> for HypothesisClass {
    type Error = Error;
    fn try_from(f: ClassFile) -> Result<Self> {
        HypothesisClass::new(f.domain_size, f.hypotheses)
    }
}

impl From<HypothesisClass> for ClassFile {
    fn from(c: HypothesisClass) -> Self {
        ClassFile {
            domain_size: c.domain_size,
            hypotheses: c.hypotheses,
        }
    }
}

impl HypothesisClass {
    pub fn new(domain_size: usize, hypotheses: impl IntoIterator<Item = Hypothesis>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for h in hypotheses {
            if h.domain_size() != domain_size {
                return Err(Error::Domain(format!(
                    "hypothesis has {} labels but the domain has {domain_size} points",
                    h.domain_size()
                )));
            }
            if seen.insert(h.clone()) {
                kept.push(h);
            }
        }
        Ok(HypothesisClass {
            domain_size,
            hypotheses: kept,
        })
    }

    pub fn empty(domain_size: usize) -> Self {
        HypothesisClass {
            domain_size,
            hypotheses: Vec::new(),
        }
    }

    pub fn singleton(h: Hypothesis) -> Self {
        HypothesisClass {
            domain_size: h.domain_size(),
            hypotheses: vec![h],
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Hypothesis> {
        self.hypotheses.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Hypothesis> {
        self.hypotheses.get(i)
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        self.hypotheses.contains(h)
    }

    pub fn index_of(&self, h: &Hypothesis) -> Option<usize> {
        self.hypotheses.iter().position(|g| g == h)
    }

    pub fn is_subset_of(&self, other: &HypothesisClass) -> bool {
        self.hypotheses.iter().all(|h| other.contains(h))
    }

    /// Canonical form: label vectors in sorted order.
    pub fn fingerprint(&self) -> Vec<Hypothesis> {
        let mut v = self.hypotheses.clone();
        v.sort();
        v
    }

    /// Subclass selected by a predicate, preserving order.
    pub fn filter(&self, mut keep: impl FnMut(&Hypothesis) -> bool) -> HypothesisClass {
        HypothesisClass {
            domain_size: self.domain_size,
            hypotheses: self.hypotheses.iter().filter(|h| keep(h)).cloned().collect(),
        }
    }

    pub fn check_point(&self, x: DomainPoint) -> Result<()> {
        if x >= self.domain_size {
            return Err(Error::Domain(format!(
                "point {x} outside domain of size {}",
                self.domain_size
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

impl PartialEq for HypothesisClass {
    fn eq(&self, other: &Self) -> bool {
        self.domain_size == other.domain_size
            && self.len() == other.len()
            && self.is_subset_of(other)
    }
}

impl Eq for HypothesisClass {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledExample {
    pub point: DomainPoint,
    pub label: Label,
}

impl LabeledExample {
    pub fn new(point: DomainPoint, label: Label) -> Self {
        LabeledExample { point, label }
    }
}

/// A sequence of examples; duplicates allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Self {
        Dataset { examples }
    }

    pub fn from_pairs(pairs: &[(DomainPoint, Label)]) -> Self {
        Dataset::new(pairs.iter().map(|&(x, y)| LabeledExample::new(x, y)).collect())
    }

    /// Dataset labeled by `target` at the given points.
    pub fn labeled_by(target: &Hypothesis, points: &[DomainPoint]) -> Self {
        Dataset::new(points.iter().map(|&x| LabeledExample::new(x, target.label(x))).collect())
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    /// Number of examples `f` gets wrong.
    pub fn mistakes(&self, f: &Hypothesis) -> usize {
        self.examples.iter().filter(|e| f.label(e.point) != e.label).count()
    }

    /// Contiguous slice `[start, end)` as its own dataset.
    pub fn slice(&self, start: usize, end: usize) -> Dataset {
        Dataset::new(self.examples[start..end].to_vec())
    }
}

/// Multiset of constraints `(x, b)` used to restrict classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintSet {
    pairs: Vec<(DomainPoint, Label)>,
}

impl ConstraintSet {
    pub fn new(pairs: Vec<(DomainPoint, Label)>) -> Self {
        ConstraintSet { pairs }
    }

    pub fn empty() -> Self {
        ConstraintSet::default()
    }

    pub fn pairs(&self) -> &[(DomainPoint, Label)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, x: DomainPoint, b: Label) {
        self.pairs.push((x, b));
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        ConstraintSet { pairs }
    }

    /// Distinct constraints in sorted order.
    pub fn canonical(&self) -> Vec<(DomainPoint, Label)> {
        let mut v = self.pairs.clone();
        v.sort();
        v.dedup();
        v
    }

    /// Same constraints as sets, ignoring multiplicity and order.
    pub fn same_set(&self, other: &ConstraintSet) -> bool {
        self.canonical() == other.canonical()
    }
}

/// `G|_S`: the hypotheses consistent with every constraint.
pub fn restrict(class: &HypothesisClass, constraints: &ConstraintSet) -> Result<HypothesisClass> {
    for &(x, _) in constraints.pairs() {
        class.check_point(x)?;
    }
    Ok(class.filter(|h| h.consistent_with(constraints)))
}

fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Argument(format!("non-finite value {v}")))
}

fn parse_weight(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Ok(r) = BigRational::from_str(s) {
        return Ok(r);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Argument(format!("cannot parse weight {s:?}")))?;
    rational_from_f64(v)
}

/// A finite-support probability measure over `X x {-1, +1}` with exact
/// rational weights. Zero-weight atoms are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    atoms: BTreeMap<(DomainPoint, Label), BigRational>,
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    x: DomainPoint,
    y: Label,
    w: WeightRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Text(String),
    Number(f64),
}

#[derive(Serialize, Deserialize)]
struct DistributionFile {
    atoms: Vec<AtomRecord>,
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let file = DistributionFile {
            atoms: self
                .atoms
                .iter()
                .map(|(&(x, y), w)| AtomRecord {
                    x,
                    y,
                    w: WeightRepr::Text(w.to_string()),
                })
                .collect(),
        };
        file.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = DistributionFile::deserialize(d)?;
        let mut atoms = Vec::with_capacity(file.atoms.len());
        for a in file.atoms {
            let w = match a.w {
                WeightRepr::Text(s) => parse_weight(&s),
                WeightRepr::Number(v) => rational_from_f64(v),
            }
            .map_err(serde::de::Error::custom)?;
            atoms.push(((a.x, a.y), w));
        }
        Distribution::from_weights(atoms).map_err(serde::de::Error::custom)
    }
}

impl Distribution {
    /// Builds a distribution, merging repeated atoms. Weights must be
    /// nonnegative and sum to one (exactly, or within `PROB_TOLERANCE` for
    /// float-derived weights).
    pub fn from_weights(
        weights: impl IntoIterator<Item = ((DomainPoint, Label), BigRational)>,
    ) -> Result<Self> {
        let mut atoms: BTreeMap<(DomainPoint, Label), BigRational> = BTreeMap::new();
        for (key, w) in weights {
            if w.is_negative() {
                return Err(Error::Argument(format!("negative weight {w} at {key:?}")));
            }
            if w.is_zero() {
                continue;
            }
            *atoms.entry(key).or_insert_with(BigRational::zero) += w;
        }
        let total: BigRational = atoms.values().cloned().sum();
        let gap = (total.clone() - BigRational::one()).abs();
        if !gap.is_zero() && gap.to_f64().unwrap_or(f64::INFINITY) > PROB_TOLERANCE {
            return Err(Error::Argument(format!("weights sum to {total}, expected 1")));
        }
        Ok(Distribution { atoms })
    }

    pub fn point_mass(x: DomainPoint, y: Label) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert((x, y), BigRational::one());
        Distribution { atoms }
    }

    /// Realizable distribution: marginal weights over points, labels from `target`.
    pub fn labeled_by(target: &Hypothesis, marginal: &[BigRational]) -> Result<Self> {
        if marginal.len() != target.domain_size() {
            return Err(Error::Domain("marginal length differs from domain size".into()));
        }
        Distribution::from_weights(
            marginal
                .iter()
                .enumerate()
                .map(|(x, w)| ((x, target.label(x)), w.clone())),
        )
    }

    /// Uniform marginal over `n` points as exact rationals.
    pub fn uniform_marginal(n: usize) -> Vec<BigRational> {
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        vec![w; n]
    }

    pub fn atoms(&self) -> impl Iterator<Item = (DomainPoint, Label, &BigRational)> {
        self.atoms.iter().map(|(&(x, y), w)| (x, y, w))
    }

    pub fn weight(&self, x: DomainPoint, y: Label) -> BigRational {
        self.atoms.get(&(x, y)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn total(&self) -> BigRational {
        self.atoms.values().cloned().sum()
    }

    /// Largest domain point carrying mass, plus one.
    pub fn min_domain_size(&self) -> usize {
        self.atoms.keys().map(|&(x, _)| x + 1).max().unwrap_or(0)
    }

    /// Whether some hypothesis of `class` has zero error.
    pub fn is_realizable_by(&self, class: &HypothesisClass) -> bool {
        class.iter().any(|f| self.error_unchecked(f).is_zero())
    }

    fn error_unchecked(&self, f: &Hypothesis) -> BigRational {
        self.atoms
            .iter()
            .filter(|(&(x, y), _)| f.label(x) != y)
            .map(|(_, w)| w.clone())
            .sum()
    }

    /// Marginal over points, as floats.
    pub fn marginal_f64(&self, domain_size: usize) -> Vec<f64> {
        let mut m = vec![0.0; domain_size];
        for (&(x, _), w) in &self.atoms {
            if x < domain_size {
                m[x] += w.to_f64().unwrap_or(0.0);
            }
        }
        m
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    fn cumulative(&self) -> (Vec<(DomainPoint, Label)>, Vec<f64>) {
        let mut keys = Vec::with_capacity(self.atoms.len());
        let mut cdf = Vec::with_capacity(self.atoms.len());
        let mut acc = 0.0;
        for (&k, w) in &self.atoms {
            acc += w.to_f64().unwrap_or(0.0);
            keys.push(k);
            cdf.push(acc);
        }
        (keys, cdf)
    }

    /// Multinomial atom counts for `n` i.i.d. draws.
    pub fn sample_counts(&self, n: u64, rng: &mut RandomSource) -> Vec<((DomainPoint, Label), u64)> {
        let mut remaining_n = n;
        let mut remaining_p = 1.0f64;
        let len = self.atoms.len();
        let mut out = Vec::with_capacity(len);
        for (i, (&k, w)) in self.atoms.iter().enumerate() {
            let c = if i + 1 == len || remaining_n == 0 {
                remaining_n
            } else {
                let p = (w.to_f64().unwrap_or(0.0) / remaining_p).clamp(0.0, 1.0);
                let c = Binomial::new(remaining_n, p).map(|b| b.sample(rng)).unwrap_or(0);
                remaining_p -= w.to_f64().unwrap_or(0.0);
                c
            };
            remaining_n -= c;
            if c > 0 {
                out.push((k, c));
            }
        }
        out
    }

    /// Empirical measure of `n` i.i.d. draws without materializing them.
    pub fn sample_empirical(&self, n: u64, rng: &mut RandomSource) -> Result<Distribution> {
        if n == 0 {
            return Err(Error::Argument("sample size must be at least 1".into()));
        }
        let denom = BigInt::from(n);
        Distribution::from_weights(
            self.sample_counts(n, rng)
                .into_iter()
                .map(|(k, c)| (k, BigRational::new(BigInt::from(c), denom.clone()))),
        )
    }
}

/// `err_D(f) = P_{(x,y)~D}[f(x) != y]`, exactly.
pub fn error(f: &Hypothesis, d: &Distribution) -> Result<BigRational> {
    if d.min_domain_size() > f.domain_size() {
        return Err(Error::Domain(format!(
            "distribution has mass on point {} but the hypothesis covers {} points",
            d.min_domain_size() - 1,
            f.domain_size()
        )));
    }
    Ok(d.error_unchecked(f))
}

/// Float view of [`error`].
pub fn error_f64(f: &Hypothesis, d: &Distribution) -> Result<f64> {
    Ok(error(f, d)?.to_f64().unwrap_or(f64::NAN))
}

/// `P_hat_S = (1/n) sum delta_(x_i, y_i)`.
pub fn empirical_distribution(s: &Dataset) -> Result<Distribution> {
    if s.is_empty() {
        return Err(Error::Argument("empirical distribution of an empty dataset".into()));
    }
    let n = BigInt::from(s.len());
    let mut counts: BTreeMap<(DomainPoint, Label), u64> = BTreeMap::new();
    for e in s.examples() {
        *counts.entry((e.point, e.label)).or_default() += 1;
    }
    Distribution::from_weights(
        counts
            .into_iter()
            .map(|(k, c)| (k, BigRational::new(BigInt::from(c), n.clone()))),
    )
}

/// Exact rational threshold for a float error level.
pub fn alpha_threshold(alpha: f64) -> Result<BigRational> {
    rational_from_f64(alpha)
}

/// `F_{D, alpha} = { f in F : err_D(f) <= alpha }`.
pub fn error_band(class: &HypothesisClass, d: &Distribution, alpha: f64) -> Result<HypothesisClass> {
    let threshold = alpha_threshold(alpha)?;
    let mut keep = Vec::new();
    for f in class.iter() {
        if error(f, d)? <= threshold {
            keep.push(f.clone());
        }
    }
    HypothesisClass::new(class.domain_size(), keep)
}

/// `n` i.i.d. examples from `d`.
pub fn sample(d: &Distribution, n: usize, rng: &mut RandomSource) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Argument("sample size must be at least 1".into()));
    }
    let (keys, cdf) = d.cumulative();
    let total = *cdf.last().unwrap_or(&1.0);
    let examples = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            let i = cdf.partition_point(|&c| c <= u).min(keys.len() - 1);
            LabeledExample::new(keys[i].0, keys[i].1)
        })
        .collect();
    Ok(Dataset::new(examples))
}

/// Thresholds `h_t(x) = +1 iff x >= t` for `t in 0..=n`.
pub fn make_thresholds(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::Argument("domain size must be at least 1".into()));
    }
    HypothesisClass::new(
        n,
        (0..=n).map(|t| {
            Hypothesis::new((0..n).map(|x| if x >= t { Label::Pos } else { Label::Neg }).collect())
        }),
    )
}

/// Point functions and negated point functions `{delta_x, -delta_x}`.
///
/// For `n <= 2` some of these coincide and are deduplicated, so the class
/// has exactly `2n` members only from `n = 3` on.
pub fn make_negpt(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::Argument("domain size must be at least 1".into()));
    }
    let point = |x: usize| {
        Hypothesis::new((0..n).map(|y| if y == x { Label::Pos } else { Label::Neg }).collect())
    };
    let mut hs: Vec<Hypothesis> = (0..n).map(point).collect();
    hs.extend((0..n).map(|x| point(x).negate()));
    HypothesisClass::new(n, hs)
}

/// Hypothesis whose label at `x` is `+1` iff bit `x` of `code` is set.
pub fn hypothesis_from_code(n: usize, code: u64) -> Hypothesis {
    Hypothesis::new(
        (0..n)
            .map(|x| if code >> x & 1 == 1 { Label::Pos } else { Label::Neg })
            .collect(),
    )
}

/// All `2^n` labelings of `n` points.
pub fn make_all_functions(n: usize) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::Argument("domain size must be at least 1".into()));
    }
    if n > 16 {
        return Err(Error::Capacity(format!("2^{n} hypotheses is too many to enumerate")));
    }
    HypothesisClass::new(n, (0..1u64 << n).map(|c| hypothesis_from_code(n, c)))
}

/// `m` distinct hypotheses drawn uniformly without replacement.
pub fn make_random(n: usize, m: usize, seed: u64) -> Result<HypothesisClass> {
    if n == 0 {
        return Err(Error::Argument("domain size must be at least 1".into()));
    }
    let mut rng = RandomSource::from_seed(seed).child("make_random");
    if n <= 24 {
        let total = 1usize << n;
        if m > total {
            return Err(Error::Argument(format!("cannot draw {m} distinct hypotheses from 2^{n}")));
        }
        let idx = rand::seq::index::sample(&mut rng, total, m);
        return HypothesisClass::new(n, idx.into_iter().map(|c| hypothesis_from_code(n, c as u64)));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let h = Hypothesis::new(
            (0..n)
                .map(|_| if rng.random::<bool>() { Label::Pos } else { Label::Neg })
                .collect(),
        );
        if seen.insert(h.clone()) {
            out.push(h);
        }
    }
    HypothesisClass::new(n, out)
}
