//! Subclasses of a fixed base class as bitmasks, with memoised Littlestone
//! dimension and irreducibility order.
//!
//! Every structural computation (Ldim recursion, k-irreducibility, SOA,
//! reducing witnesses, ReduceTree) walks the lattice of restrictions of one
//! base class, so subclasses are represented as 256-bit masks over the base
//! class indices and memo tables are keyed on those masks.

use std::fmt;

use dashmap::DashMap;
use num_rational::BigRational;

use crate::classes::{
    alpha_threshold, error, ConstraintSet, DomainPoint, Distribution, Hypothesis, HypothesisClass,
    Label,
};
use crate::error::{Error, Result};

/// Largest base class the lattice can index.
pub const MAX_CLASS_SIZE: usize = 256;

/// Irreducibility order of a singleton: irreducible for every `k`.
pub const ORDER_INFINITE: u32 = u32::MAX;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask([u64; 4]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; 4]);

    pub fn full(n: usize) -> Mask {
        let mut m = Mask::EMPTY;
        for i in 0..n {
            m.insert(i);
        }
        m
    }

    pub fn single(i: usize) -> Mask {
        let mut m = Mask::EMPTY;
        m.insert(i);
        m
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Mask {
        let mut m = Mask::EMPTY;
        for i in idx {
            m.insert(i);
        }
        m
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn and(self, o: Mask) -> Mask {
        Mask([
            self.0[0] & o.0[0],
            self.0[1] & o.0[1],
            self.0[2] & o.0[2],
            self.0[3] & o.0[3],
        ])
    }

    pub fn or(self, o: Mask) -> Mask {
        Mask([
            self.0[0] | o.0[0],
            self.0[1] | o.0[1],
            self.0[2] | o.0[2],
            self.0[3] | o.0[3],
        ])
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn is_subset_of(&self, o: &Mask) -> bool {
        self.and(*o) == *self
    }

    /// Set bits in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| {
            let mut word = self.0[w];
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Memoised structure over the restrictions of one base class.
pub struct Lattice {
    base: HypothesisClass,
    full: Mask,
    pos: Vec<Mask>,
    neg: Vec<Mask>,
    ldim_memo: DashMap<Mask, i32>,
    order_memo: DashMap<Mask, u32>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("size", &self.base.len())
            .field("domain_size", &self.base.domain_size())
            .field("memo", &self.ldim_memo.len())
            .finish()
    }
}

impl Lattice {
    pub fn new(base: &HypothesisClass) -> Result<Self> {
        if base.len() > MAX_CLASS_SIZE {
            return Err(Error::Capacity(format!(
                "class has {} hypotheses; the subclass lattice holds at most {MAX_CLASS_SIZE}",
                base.len()
            )));
        }
        let n = base.domain_size();
        let mut pos = vec![Mask::EMPTY; n];
        let mut neg = vec![Mask::EMPTY; n];
        for (i, h) in base.iter().enumerate() {
            for x in 0..n {
                match h.label(x) {
                    Label::Pos => pos[x].insert(i),
                    Label::Neg => neg[x].insert(i),
                }
            }
        }
        Ok(Lattice {
            base: base.clone(),
            full: Mask::full(base.len()),
            pos,
            neg,
            ldim_memo: DashMap::new(),
            order_memo: DashMap::new(),
        })
    }

    pub fn base(&self) -> &HypothesisClass {
        &self.base
    }

    pub fn domain_size(&self) -> usize {
        self.base.domain_size()
    }

    pub fn full(&self) -> Mask {
        self.full
    }

    pub fn hypothesis(&self, i: usize) -> &Hypothesis {
        &self.base.hypotheses()[i]
    }

    /// Mask of a subclass of the base class.
    pub fn mask_of(&self, sub: &HypothesisClass) -> Result<Mask> {
        let mut m = Mask::EMPTY;
        for h in sub.iter() {
            let i = self
                .base
                .index_of(h)
                .ok_or_else(|| Error::Argument(format!("{h:?} is not in the base class")))?;
            m.insert(i);
        }
        Ok(m)
    }

    pub fn class_of(&self, m: Mask) -> HypothesisClass {
        HypothesisClass::new(
            self.base.domain_size(),
            m.iter().map(|i| self.base.hypotheses()[i].clone()),
        )
        .expect("subclass of a valid class")
    }

    pub fn restrict(&self, m: Mask, x: DomainPoint, b: Label) -> Mask {
        match b {
            Label::Pos => m.and(self.pos[x]),
            Label::Neg => m.and(self.neg[x]),
        }
    }

    pub fn restrict_set(&self, m: Mask, s: &ConstraintSet) -> Mask {
        s.pairs().iter().fold(m, |acc, &(x, b)| self.restrict(acc, x, b))
    }

    /// Littlestone dimension of a subclass; `-1` for the empty class.
    pub fn ldim(&self, m: Mask) -> i32 {
        let size = m.len();
        if size <= 1 {
            return size as i32 - 1;
        }
        if let Some(v) = self.ldim_memo.get(&m) {
            return *v;
        }
        // Ldim(G) <= floor(log2 |G|): a shattered depth-d tree needs 2^d hypotheses.
        let cap = (usize::BITS - 1 - size.leading_zeros()) as i32;
        let mut best = 0;
        for x in 0..self.domain_size() {
            let p = m.and(self.pos[x]);
            let n = m.and(self.neg[x]);
            if p.is_empty() || n.is_empty() {
                continue;
            }
            let (small, large) = if p.len() <= n.len() { (p, n) } else { (n, p) };
            // the smaller side bounds the min, so skip points that cannot improve
            let small_cap = (usize::BITS - 1 - small.len().leading_zeros()) as i32;
            if small_cap + 1 <= best {
                continue;
            }
            let a = self.ldim(small);
            if a + 1 <= best {
                continue;
            }
            let v = 1 + a.min(self.ldim(large));
            if v > best {
                best = v;
                if best == cap {
                    break;
                }
            }
        }
        self.ldim_memo.insert(m, best);
        best
    }

    /// The unique bit `b` with `Ldim(G|(x,b)) = Ldim(G)`, if any.
    pub fn full_bit(&self, m: Mask, x: DomainPoint) -> Option<Label> {
        let d = self.ldim(m);
        Label::BOTH
            .into_iter()
            .find(|&b| self.ldim(self.restrict(m, x, b)) == d)
    }

    /// Largest `k` such that the subclass is k-irreducible
    /// (`ORDER_INFINITE` for singletons, 0 for the empty class).
    pub fn order(&self, m: Mask) -> u32 {
        match m.len() {
            0 => return 0,
            1 => return ORDER_INFINITE,
            _ => {}
        }
        if let Some(v) = self.order_memo.get(&m) {
            return *v;
        }
        let mut best = ORDER_INFINITE;
        for x in 0..self.domain_size() {
            let p = m.and(self.pos[x]);
            let n = m.and(self.neg[x]);
            if p.is_empty() || n.is_empty() {
                // G|(x,b) = G for one b: the condition at x reduces to G itself
                continue;
            }
            let v = match self.full_bit(m, x) {
                None => 0,
                Some(b) => 1u32.saturating_add(self.order(self.restrict(m, x, b))),
            };
            best = best.min(v);
            if best == 0 {
                break;
            }
        }
        self.order_memo.insert(m, best);
        best
    }

    pub fn is_k_irreducible(&self, m: Mask, k: u64) -> bool {
        let o = self.order(m);
        k == 0 || o == ORDER_INFINITE || o as u64 >= k
    }

    /// SOA classifier of a nonempty subclass; ties go to `+1`.
    pub fn soa(&self, m: Mask) -> Result<Hypothesis> {
        if m.is_empty() {
            return Err(Error::Argument("soa of an empty class".into()));
        }
        Ok(Hypothesis::new(
            (0..self.domain_size())
                .map(|x| {
                    let p = self.ldim(self.restrict(m, x, Label::Pos));
                    let n = self.ldim(self.restrict(m, x, Label::Neg));
                    if p >= n {
                        Label::Pos
                    } else {
                        Label::Neg
                    }
                })
                .collect(),
        ))
    }

    /// Exact error of every base hypothesis under `d`, in base order.
    pub fn errors(&self, d: &Distribution) -> Result<Vec<BigRational>> {
        self.base.iter().map(|h| error(h, d)).collect()
    }

    /// `F_{D, alpha}` as a mask, given precomputed errors.
    pub fn band(&self, errors: &[BigRational], alpha: f64) -> Result<Mask> {
        let t = alpha_threshold(alpha)?;
        Ok(Mask::from_indices(
            errors.iter().enumerate().filter(|(_, e)| **e <= t).map(|(i, _)| i),
        ))
    }

    pub fn memo_sizes(&self) -> (usize, usize) {
        (self.ldim_memo.len(), self.order_memo.len())
    }
}
