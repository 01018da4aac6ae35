use serde::{Deserialize, Serialize};

use crate::classes::{ConstraintSet, DomainPoint, HypothesisClass, Label};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};

/// Tuples `b^1, .., b^{k+1}` with `b^j` of length `min(j, k)`, where
/// `b^{j+1}` agrees with `b^j` below coordinate `j` and flips coordinate `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct ReducingArray {
    tuples: Vec<Vec<Label>>,
}

impl TryFrom<Vec<Vec<Label>>> for ReducingArray {
    type Error = Error;
    fn try_from(t: Vec<Vec<Label>>) -> Result<Self> {
        ReducingArray::new(t)
    }
}

impl From<ReducingArray> for Vec<Vec<Label>> {
    fn from(a: ReducingArray) -> Self {
        a.tuples
    }
}

impl ReducingArray {
    pub fn new(tuples: Vec<Vec<Label>>) -> Result<Self> {
        if tuples.len() < 2 {
            return Err(Error::Argument("a reducing array has depth at least 1".into()));
        }
        let k = tuples.len() - 1;
        for (j, t) in tuples.iter().enumerate() {
            // j is zero-based here: tuple j+1 has length min(j+1, k)
            if t.len() != (j + 1).min(k) {
                return Err(Error::Argument(format!(
                    "tuple {} has length {}, expected {}",
                    j + 1,
                    t.len(),
                    (j + 1).min(k)
                )));
            }
        }
        for j in 0..k {
            let (a, b) = (&tuples[j], &tuples[j + 1]);
            if a[..j] != b[..j] || b[j] != a[j].flip() {
                return Err(Error::Argument(format!(
                    "tuple {} does not flip coordinate {} of tuple {}",
                    j + 2,
                    j + 1,
                    j + 1
                )));
            }
        }
        Ok(ReducingArray { tuples })
    }

    /// Depth `k`; the array labels `k + 1` edges.
    pub fn depth(&self) -> usize {
        self.tuples.len() - 1
    }

    pub fn tuples(&self) -> &[Vec<Label>] {
        &self.tuples
    }

    pub fn tuple(&self, j: usize) -> &[Label] {
        &self.tuples[j]
    }
}

/// Points `x_1..x_k` and a depth-k reducing array certifying that a class
/// is not k-irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionWitness {
    pub points: Vec<DomainPoint>,
    pub array: ReducingArray,
}

impl ReductionWitness {
    pub fn new(points: Vec<DomainPoint>, array: ReducingArray) -> Result<Self> {
        if points.len() != array.depth() {
            return Err(Error::Argument(format!(
                "{} points for an array of depth {}",
                points.len(),
                array.depth()
            )));
        }
        Ok(ReductionWitness { points, array })
    }

    pub fn depth(&self) -> usize {
        self.points.len()
    }

    /// Constraints `(x_i, b^j_i)` labeling edge `j` (zero-based).
    pub fn edge_constraints(&self, j: usize) -> ConstraintSet {
        ConstraintSet::new(
            self.array
                .tuple(j)
                .iter()
                .enumerate()
                .map(|(i, &b)| (self.points[i], b))
                .collect(),
        )
    }

    /// Checks `0 <= Ldim(G|edge) < Ldim(G)` on every edge.
    pub fn verify(&self, class: &HypothesisClass) -> Result<bool> {
        let lat = Lattice::new(class)?;
        Ok(self.verify_in(&lat, lat.full()))
    }

    pub fn verify_in(&self, lat: &Lattice, m: Mask) -> bool {
        let d = lat.ldim(m);
        (0..=self.depth()).all(|j| {
            let l = lat.ldim(lat.restrict_set(m, &self.edge_constraints(j)));
            0 <= l && l < d
        })
    }
}

/// Witness that `class` is not k-irreducible, of the smallest failing depth
/// `k_v <= k`, or `None` if it is k-irreducible.
pub fn find_reducing_witness(class: &HypothesisClass, k: u64) -> Result<Option<ReductionWitness>> {
    let lat = Lattice::new(class)?;
    find_reducing_witness_in(&lat, lat.full(), k)
}

pub fn find_reducing_witness_in(
    lat: &Lattice,
    m: Mask,
    k: u64,
) -> Result<Option<ReductionWitness>> {
    if m.is_empty() {
        return Err(Error::Argument("reducing witness of an empty class".into()));
    }
    if lat.ldim(m) < 1 {
        return Err(Error::Argument("reducing witness needs Ldim >= 1".into()));
    }
    if lat.is_k_irreducible(m, k) {
        return Ok(None);
    }
    Ok(Some(witness_at_order(lat, m, lat.order(m))))
}

/// Builds a depth `order + 1` witness for a class that is exactly
/// `order`-irreducible.
fn witness_at_order(lat: &Lattice, m: Mask, order: u32) -> ReductionWitness {
    let d = lat.ldim(m);
    let splits = |x: DomainPoint| {
        !lat.restrict(m, x, Label::Pos).is_empty() && !lat.restrict(m, x, Label::Neg).is_empty()
    };
    if order == 0 {
        let x = (0..lat.domain_size())
            .find(|&x| splits(x) && Label::BOTH.iter().all(|&b| lat.ldim(lat.restrict(m, x, b)) < d))
            .expect("a 0-irreducible-only class has a point losing Ldim on both sides");
        let array = ReducingArray::new(vec![vec![Label::Pos], vec![Label::Neg]]).expect("depth-1 array");
        return ReductionWitness::new(vec![x], array).expect("one point");
    }
    let (x1, b) = (0..lat.domain_size())
        .filter(|&x| splits(x))
        .find_map(|x| {
            let b = lat.full_bit(m, x)?;
            (lat.order(lat.restrict(m, x, b)) < order).then_some((x, b))
        })
        .expect("an exactly order-irreducible class has a point whose full branch loses one order");
    let inner = witness_at_order(lat, lat.restrict(m, x1, b), order - 1);
    let mut points = vec![x1];
    points.extend_from_slice(&inner.points);
    let mut tuples = vec![vec![b.flip()]];
    for t in inner.array.tuples() {
        let mut v = vec![b];
        v.extend_from_slice(t);
        tuples.push(v);
    }
    let array = ReducingArray::new(tuples).expect("prefixing a reducing array keeps its shape");
    ReductionWitness::new(points, array).expect("lengths agree")
}
