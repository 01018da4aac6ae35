//! Littlestone, VC, dual and threshold dimensions, plus the uniform
//! convergence radius `alpha(n, gamma)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::classes::{DomainPoint, Hypothesis, HypothesisClass, Label};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};

/// Default search cap for [`tdim`].
pub const DEFAULT_TDIM_CAP: usize = 12;

/// Complete binary tree of internal nodes labeled by domain points, in heap
/// order: node `i` has child `2i+1` for bit `-1` and `2i+2` for bit `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatteredTree {
    pub depth: usize,
    pub nodes: Vec<DomainPoint>,
}

impl ShatteredTree {
    pub fn new(depth: usize, nodes: Vec<DomainPoint>) -> Result<Self> {
        if depth == 0 || nodes.len() != (1 << depth) - 1 {
            return Err(Error::Argument(format!(
                "a depth-{depth} tree needs {} nodes, got {}",
                (1usize << depth).saturating_sub(1),
                nodes.len()
            )));
        }
        Ok(ShatteredTree { depth, nodes })
    }

    /// Constraints met along the root path selected by `bits`.
    pub fn path(&self, bits: &[Label]) -> Vec<(DomainPoint, Label)> {
        let mut i = 0;
        let mut out = Vec::with_capacity(bits.len());
        for &b in bits {
            out.push((self.nodes[i], b));
            i = 2 * i + if b == Label::Neg { 1 } else { 2 };
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub ldim: i32,
    pub vc: i32,
    pub witness: Option<ShatteredTree>,
}

/// Littlestone dimension (`-1` for the empty class).
pub fn ldim(class: &HypothesisClass) -> Result<i32> {
    let lat = Lattice::new(class)?;
    Ok(lat.ldim(lat.full()))
}

/// A shattered tree of depth `ldim(class)`, or `None` when `ldim <= 0`.
///
/// At every node the smallest domain point keeping the required depth on
/// both sides is chosen.
pub fn ldim_witness(class: &HypothesisClass) -> Result<Option<ShatteredTree>> {
    let lat = Lattice::new(class)?;
    let d = lat.ldim(lat.full());
    if d <= 0 {
        return Ok(None);
    }
    let depth = d as usize;
    let mut nodes = vec![0; (1 << depth) - 1];
    fill_witness(&lat, lat.full(), depth, 0, &mut nodes);
    Ok(Some(ShatteredTree { depth, nodes }))
}

fn fill_witness(lat: &Lattice, m: Mask, depth: usize, at: usize, nodes: &mut [DomainPoint]) {
    if depth == 0 {
        return;
    }
    let need = depth as i32 - 1;
    let x = (0..lat.domain_size())
        .find(|&x| {
            lat.ldim(lat.restrict(m, x, Label::Neg)) >= need
                && lat.ldim(lat.restrict(m, x, Label::Pos)) >= need
        })
        .expect("ldim >= depth guarantees a splitting point");
    nodes[at] = x;
    fill_witness(lat, lat.restrict(m, x, Label::Neg), depth - 1, 2 * at + 1, nodes);
    fill_witness(lat, lat.restrict(m, x, Label::Pos), depth - 1, 2 * at + 2, nodes);
}

/// Every root-to-leaf sign pattern of `tree` is realized by some hypothesis.
pub fn verify_shattered(class: &HypothesisClass, tree: &ShatteredTree) -> bool {
    if tree.nodes.iter().any(|&x| x >= class.domain_size()) {
        return false;
    }
    (0..1u64 << tree.depth).all(|code| {
        let bits: Vec<Label> = (0..tree.depth)
            .map(|i| if code >> i & 1 == 1 { Label::Pos } else { Label::Neg })
            .collect();
        let path = tree.path(&bits);
        class
            .iter()
            .any(|h| path.iter().all(|&(x, b)| h.label(x) == b))
    })
}

fn shatters(class: &HypothesisClass, points: &[DomainPoint]) -> bool {
    let patterns: HashSet<u64> = class
        .iter()
        .map(|h| {
            points
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &x)| acc | ((h.label(x) == Label::Pos) as u64) << i)
        })
        .collect();
    patterns.len() == 1usize << points.len()
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// VC dimension (`-1` for the empty class).
pub fn vcdim(class: &HypothesisClass) -> i32 {
    if class.is_empty() {
        return -1;
    }
    let n = class.domain_size();
    let mut best = 0;
    // shattering is hereditary, so sizes can be tried in increasing order
    for size in 1..=n.min(63) {
        if 1usize << size > class.len() {
            break;
        }
        let mut c: Vec<usize> = (0..size).collect();
        let mut found = false;
        loop {
            if shatters(class, &c) {
                found = true;
                break;
            }
            if !next_combination(&mut c, n) {
                break;
            }
        }
        if !found {
            break;
        }
        best = size as i32;
    }
    best
}

/// The dual class: one hypothesis per domain point `x`, acting on `F` by
/// `f -> f(x)`. Its domain is indexed by the hypotheses of `class`.
pub fn dual_class(class: &HypothesisClass) -> HypothesisClass {
    HypothesisClass::new(
        class.len(),
        (0..class.domain_size()).map(|x| Hypothesis::new(class.iter().map(|f| f.label(x)).collect())),
    )
    .expect("dual rows have one label per hypothesis")
}

/// `vc*(F)`, the VC dimension of the dual class.
pub fn dual_vcdim(class: &HypothesisClass) -> i32 {
    vcdim(&dual_class(class))
}

/// Largest `T <= cap` with points `x_1..x_T` and hypotheses `f_1..f_T` such
/// that `f_i(x_j) = +1` iff `i >= j`.
pub fn tdim(class: &HypothesisClass, cap: usize) -> usize {
    let pairs: Vec<(usize, DomainPoint)> = class
        .iter()
        .enumerate()
        .flat_map(|(i, h)| {
            (0..class.domain_size())
                .filter(move |&x| h.label(x) == Label::Pos)
                .map(move |x| (i, x))
        })
        .collect();
    let mut chosen = Vec::new();
    let mut best = 0;
    tdim_search(class, &pairs, cap, &mut chosen, &mut best);
    best
}

fn tdim_search(
    class: &HypothesisClass,
    pairs: &[(usize, DomainPoint)],
    cap: usize,
    chosen: &mut Vec<(usize, DomainPoint)>,
    best: &mut usize,
) {
    *best = (*best).max(chosen.len());
    if *best >= cap {
        return;
    }
    let hs = class.hypotheses();
    for &(f, x) in pairs {
        let ok = chosen
            .iter()
            .all(|&(g, y)| hs[f].label(y) == Label::Pos && hs[g].label(x) == Label::Neg);
        if ok {
            chosen.push((f, x));
            tdim_search(class, pairs, cap, chosen, best);
            chosen.pop();
            if *best >= cap {
                return;
            }
        }
    }
}

/// `alpha(n, gamma) = C0 * sqrt((d_V + ln(1/gamma)) / n)`.
pub fn alpha_bound(n: u64, gamma: f64, d_v: f64, c0: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("alpha_bound needs n >= 1".into()));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Argument(format!("gamma must lie in (0,1), got {gamma}")));
    }
    if !(d_v >= 1.0) || !(c0 > 0.0) {
        return Err(Error::Argument(format!("need d_V >= 1 and C0 > 0, got {d_v}, {c0}")));
    }
    Ok(c0 * ((d_v + (1.0 / gamma).ln()) / n as f64).sqrt())
}

pub fn dimension_report(class: &HypothesisClass) -> Result<DimensionReport> {
    Ok(DimensionReport {
        ldim: ldim(class)?,
        vc: vcdim(class),
        witness: ldim_witness(class)?,
    })
}
