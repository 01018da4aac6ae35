use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classes::{Distribution, Hypothesis, HypothesisClass};
use crate::dimensions::{alpha_bound, vcdim};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};
use crate::structure::{find_reducing_witness_in, GeneralizedTree, NodeId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceTreeConfig {
    /// Sample size behind the empirical distribution.
    pub n: u64,
    pub k_prime: u64,
    pub gamma: f64,
    /// Step size; `6 * alpha(n, gamma)` when absent.
    #[serde(default)]
    pub alpha_delta: Option<f64>,
    #[serde(default = "one")]
    pub c0: f64,
    /// `Ldim(F)`; computed when absent and checked when given.
    #[serde(default)]
    pub d: Option<i32>,
    /// Reject non-realizable empirical distributions.
    #[serde(default)]
    pub strict: bool,
}

fn one() -> f64 {
    1.0
}

impl ReduceTreeConfig {
    pub fn new(n: u64, k_prime: u64, gamma: f64) -> Self {
        ReduceTreeConfig {
            n,
            k_prime,
            gamma,
            alpha_delta: None,
            c0: 1.0,
            d: None,
            strict: false,
        }
    }

    pub fn with_alpha_delta(mut self, alpha_delta: f64) -> Self {
        self.alpha_delta = Some(alpha_delta);
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    /// Resolves `d` and `alpha_delta` against the class.
    pub fn schedule(&self, lat: &Lattice) -> Result<Schedule> {
        if self.k_prime < 1 {
            return Err(Error::Argument("k' must be at least 1".into()));
        }
        let d = lat.ldim(lat.full());
        if d < 0 {
            return Err(Error::Argument("ReduceTree needs a nonempty class".into()));
        }
        if let Some(given) = self.d {
            if given != d {
                return Err(Error::Argument(format!("config says d = {given}, but Ldim(F) = {d}")));
            }
        }
        let alpha_delta = match self.alpha_delta {
            Some(a) => a,
            None => {
                let d_v = vcdim(lat.base()).max(1) as f64;
                6.0 * alpha_bound(self.n, self.gamma, d_v, self.c0)?
            }
        };
        if !(alpha_delta > 0.0 && alpha_delta.is_finite()) {
            return Err(Error::Argument(format!("alpha_delta must be positive, got {alpha_delta}")));
        }
        Ok(Schedule {
            d,
            alpha_delta,
            k_prime: self.k_prime,
        })
    }
}

/// `alpha_t = (d + 3 - t) alpha_delta` and `k_t = k' 2^t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub d: i32,
    pub alpha_delta: f64,
    pub k_prime: u64,
}

impl Schedule {
    pub fn alpha(&self, t: usize) -> f64 {
        self.alpha_minus_sixths(t, 0)
    }

    /// `alpha_t - j alpha_delta / 6`. Every level is an integer multiple of
    /// `alpha_delta / 6` computed the same way, so `alpha_t - alpha_delta`
    /// and `alpha_{t+1}` are the same float.
    pub fn alpha_minus_sixths(&self, t: usize, j: i64) -> f64 {
        let sixths = 6 * (self.d as i64 + 3 - t as i64) - j;
        sixths as f64 * self.alpha_delta / 6.0
    }

    pub fn k(&self, t: usize) -> u64 {
        self.k_prime.saturating_mul(1u64.checked_shl(t as u32).unwrap_or(u64::MAX))
    }

    /// `prod_{t=1..d} (k_t + 1)`, saturating.
    pub fn output_bound(&self) -> u128 {
        (1..=self.d.max(0) as usize).fold(1u128, |acc, t| acc.saturating_mul(self.k(t) as u128 + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub t: usize,
    pub alpha: f64,
    pub k: u64,
    pub w_star: i32,
    pub argmax_leaves: Vec<NodeId>,
    pub broke: bool,
    /// Leaves whose Ldim dropped at `alpha_t - alpha_delta`.
    pub dropped: Vec<NodeId>,
    /// `(leaf, k_v)` for every expanded leaf.
    pub expanded: Vec<(NodeId, usize)>,
    /// Argmax leaves with an empty class, left alone (non-realizable input).
    pub skipped_empty: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputMember {
    pub leaf: NodeId,
    pub class_size: usize,
    pub hypothesis: Hypothesis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceTreeOutput {
    /// Distinct output hypotheses, sorted.
    pub s_hat: Vec<Hypothesis>,
    /// Leaves contributing to `s_hat`.
    pub members: Vec<OutputMember>,
    pub tree: GeneralizedTree,
    /// `L'` at `t_final + 1`.
    pub leaves: Vec<NodeId>,
    pub t_final: usize,
    pub w_star_final: i32,
    pub schedule: Schedule,
    pub realizable: bool,
    pub trace: Vec<StepTrace>,
}

/// State shared between the loop and the caller: empirical errors and the
/// restriction mask of every node.
pub struct TreeState<'a> {
    lat: &'a Lattice,
    errors: Vec<num_rational::BigRational>,
    masks: HashMap<NodeId, Mask>,
    bands: HashMap<u64, Mask>,
}

impl<'a> TreeState<'a> {
    pub fn new(lat: &'a Lattice, p_hat: &Distribution) -> Result<Self> {
        let mut masks = HashMap::new();
        masks.insert(0, lat.full());
        Ok(TreeState {
            lat,
            errors: lat.errors(p_hat)?,
            masks,
            bands: HashMap::new(),
        })
    }

    fn band(&mut self, alpha: f64) -> Result<Mask> {
        if let Some(m) = self.bands.get(&alpha.to_bits()) {
            return Ok(*m);
        }
        let m = self.lat.band(&self.errors, alpha)?;
        self.bands.insert(alpha.to_bits(), m);
        Ok(m)
    }

    fn node_mask(&mut self, tree: &GeneralizedTree, v: NodeId) -> Result<Mask> {
        if let Some(m) = self.masks.get(&v) {
            return Ok(*m);
        }
        let m = self.lat.restrict_set(self.lat.full(), &tree.ancestor_set(v)?);
        self.masks.insert(v, m);
        Ok(m)
    }

    /// `G(alpha, v) = F_{P_hat, alpha} | ba(v)`.
    pub fn g(&mut self, tree: &GeneralizedTree, alpha: f64, v: NodeId) -> Result<Mask> {
        Ok(self.band(alpha)?.and(self.node_mask(tree, v)?))
    }
}

pub fn reduce_tree(
    class: &HypothesisClass,
    p_hat: &Distribution,
    cfg: &ReduceTreeConfig,
) -> Result<ReduceTreeOutput> {
    let lat = Lattice::new(class)?;
    reduce_tree_in(&lat, p_hat, cfg)
}

/// ReduceTree over the base class of `lat`, reusing its memo tables.
pub fn reduce_tree_in(
    lat: &Lattice,
    p_hat: &Distribution,
    cfg: &ReduceTreeConfig,
) -> Result<ReduceTreeOutput> {
    let sched = cfg.schedule(lat)?;
    let realizable = p_hat.is_realizable_by(lat.base());
    if cfg.strict && !realizable {
        return Err(Error::Contract(
            "empirical distribution is not realizable by the class".into(),
        ));
    }
    let mut st = TreeState::new(lat, p_hat)?;
    let mut tree = GeneralizedTree::new();
    let mut trace = Vec::new();
    let d = sched.d as usize;
    let mut t_final = d;
    let mut prev_w: Option<i32> = None;

    for t in 1..=d {
        let (alpha, k) = (sched.alpha(t), sched.k(t));
        let (w_star, argmax) = argmax_leaves(&mut st, &tree, alpha)?;
        check_descent(prev_w, w_star, t)?;
        prev_w = Some(w_star);
        let lower = sched.alpha_minus_sixths(t, 6);
        let mut step = StepTrace {
            t,
            alpha,
            k,
            w_star,
            argmax_leaves: argmax.clone(),
            broke: false,
            dropped: Vec::new(),
            expanded: Vec::new(),
            skipped_empty: Vec::new(),
        };
        let mut broke = false;
        for &v in &argmax {
            let lo = st.g(&tree, lower, v)?;
            if lat.ldim(lo) == w_star && lat.is_k_irreducible(lo, k) {
                broke = true;
                break;
            }
        }
        if broke {
            step.broke = true;
            trace.push(step);
            t_final = t - 1;
            break;
        }
        for &v in &argmax {
            let lo = st.g(&tree, lower, v)?;
            let l = lat.ldim(lo);
            if l < w_star {
                step.dropped.push(v);
                continue;
            }
            if lo.is_empty() {
                step.skipped_empty.push(v);
                continue;
            }
            let w = find_reducing_witness_in(lat, lo, k)?.ok_or_else(|| {
                Error::Contract(format!("leaf {v} is {k}-irreducible but did not break"))
            })?;
            let kids = tree.expand(v, &w)?;
            let base = st.node_mask(&tree, v)?;
            for (j, c) in kids.into_iter().enumerate() {
                st.masks.insert(c, lat.restrict_set(base, &w.edge_constraints(j)));
            }
            step.expanded.push((v, w.depth()));
        }
        trace.push(step);
    }

    let t_out = t_final + 1;
    let (w_final, leaves) = argmax_leaves(&mut st, &tree, sched.alpha(t_out))?;
    if t_final == d {
        check_descent(prev_w, w_final, t_out)?;
    }
    let out_alpha = sched.alpha_minus_sixths(t_out, 4);
    let mut members = Vec::new();
    for &v in &leaves {
        let g = st.g(&tree, out_alpha, v)?;
        if !g.is_empty() && lat.is_k_irreducible(g, sched.k_prime) {
            members.push(OutputMember {
                leaf: v,
                class_size: g.len(),
                hypothesis: lat.soa(g)?,
            });
        }
    }
    let mut s_hat: Vec<Hypothesis> = members.iter().map(|m| m.hypothesis.clone()).collect();
    s_hat.sort();
    s_hat.dedup();
    Ok(ReduceTreeOutput {
        s_hat,
        members,
        tree,
        leaves,
        t_final,
        w_star_final: w_final,
        schedule: sched,
        realizable,
        trace,
    })
}

fn argmax_leaves(
    st: &mut TreeState<'_>,
    tree: &GeneralizedTree,
    alpha: f64,
) -> Result<(i32, Vec<NodeId>)> {
    let mut best = i32::MIN;
    let mut arg = Vec::new();
    for v in tree.leaves() {
        let l = st.lat.ldim(st.g(tree, alpha, v)?);
        if l > best {
            best = l;
            arg.clear();
        }
        if l == best {
            arg.push(v);
        }
    }
    Ok((best, arg))
}

/// Runtime check that the maximal leaf Ldim strictly decreases whenever it
/// was nonnegative.
fn check_descent(prev: Option<i32>, now: i32, t: usize) -> Result<()> {
    match prev {
        Some(p) if p >= 0 && now >= p => Err(Error::Contract(format!(
            "Littlestone descent violated at step {t}: {now} after {p}"
        ))),
        _ => Ok(()),
    }
}
