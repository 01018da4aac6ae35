use serde::{Deserialize, Serialize};

use crate::classes::{ConstraintSet, DomainPoint, Distribution, Hypothesis, HypothesisClass, Label};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};
use crate::learners::reduce_tree::Schedule;

/// Enumeration guard for [`compute_sigma_star`].
pub const SIGMA_ENUM_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaStar {
    pub constraints: ConstraintSet,
    pub ell_star: i32,
    pub sigma: Hypothesis,
}

/// Number of consistent constraint sets with between 1 and `max_size`
/// distinct pairs over `n` points.
pub fn constraint_set_count(n: usize, max_size: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for s in 1..=max_size.min(n) {
        binom = binom * (n - s + 1) as u128 / s as u128;
        total = total.saturating_add(binom.saturating_mul(1u128 << s.min(120)));
    }
    total
}

/// Brute-force `sigma*_{alpha,t}` under the true distribution `p`.
///
/// A tuple in `(X x {-1,+1})^L` with `L = k_t - k'` restricts a class only
/// through its set of distinct pairs, so candidates are the consistent sets
/// of size `1..=min(L, |X|)` (the empty set when `L = 0`), enumerated in
/// lexicographic order; the first maximizer wins ties.
pub fn compute_sigma_star(
    class: &HypothesisClass,
    p: &Distribution,
    alpha: f64,
    t: usize,
    sched: &Schedule,
) -> Result<Option<SigmaStar>> {
    let lat = Lattice::new(class)?;
    compute_sigma_star_in(&lat, p, alpha, t, sched)
}

pub fn compute_sigma_star_in(
    lat: &Lattice,
    p: &Distribution,
    alpha: f64,
    t: usize,
    sched: &Schedule,
) -> Result<Option<SigmaStar>> {
    let n = lat.domain_size();
    let k_t = sched.k(t);
    let len = k_t - sched.k_prime;
    let max_size = (len.min(n as u64)) as usize;
    let count = constraint_set_count(n, max_size);
    if count > SIGMA_ENUM_LIMIT {
        return Err(Error::Capacity(format!(
            "{count} constraint sets exceed the enumeration limit {SIGMA_ENUM_LIMIT}"
        )));
    }
    let errors = lat.errors(p)?;
    let third = sched.alpha_delta / 3.0;
    let lo = lat.band(&errors, alpha - third)?;
    let mid = lat.band(&errors, alpha)?;
    let hi = lat.band(&errors, alpha + third)?;

    let mut best: Option<(i32, Vec<(DomainPoint, Label)>)> = None;
    let mut consider = |pairs: &[(DomainPoint, Label)], r: Mask| {
        let g = lo.and(r);
        if g.is_empty() || !lat.is_k_irreducible(g, k_t) || lat.ldim(g) != lat.ldim(hi.and(r)) {
            return;
        }
        let l = lat.ldim(mid.and(r));
        if best.as_ref().is_none_or(|(b, _)| l > *b) {
            best = Some((l, pairs.to_vec()));
        }
    };
    if len == 0 {
        consider(&[], lat.full());
    } else {
        let mut stack = Vec::new();
        walk(lat, 0, lat.full(), max_size, &mut stack, &mut consider);
    }
    let Some((ell_star, pairs)) = best else {
        return Ok(None);
    };
    let constraints = ConstraintSet::new(pairs);
    let s_mask = lat.restrict_set(lat.full(), &constraints);
    Ok(Some(SigmaStar {
        constraints,
        ell_star,
        sigma: lat.soa(mid.and(s_mask))?,
    }))
}

/// Preorder walk over sorted pair lists, which is lexicographic order.
fn walk(
    lat: &Lattice,
    from: DomainPoint,
    r: Mask,
    max_size: usize,
    stack: &mut Vec<(DomainPoint, Label)>,
    visit: &mut impl FnMut(&[(DomainPoint, Label)], Mask),
) {
    if stack.len() == max_size {
        return;
    }
    for x in from..lat.domain_size() {
        for b in [Label::Neg, Label::Pos] {
            stack.push((x, b));
            let r2 = lat.restrict(r, x, b);
            if r2.is_empty() {
                // every extension restricts to the empty class as well
                stack.pop();
                continue;
            }
            visit(stack, r2);
            walk(lat, x + 1, r2, max_size, stack, visit);
            stack.pop();
        }
    }
}
