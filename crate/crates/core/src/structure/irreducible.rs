use crate::classes::{DomainPoint, Hypothesis, HypothesisClass, Label};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Tree-count guard for the definitional oracle.
pub const ORACLE_TREE_LIMIT: u128 = 1_000_000;

/// Whether `class` is k-irreducible. `k = 0` is vacuously true; the empty
/// class is not irreducible for any `k >= 1`.
pub fn is_k_irreducible(class: &HypothesisClass, k: u64) -> Result<bool> {
    let lat = Lattice::new(class)?;
    Ok(lat.is_k_irreducible(lat.full(), k))
}

/// Largest `k` for which `class` is k-irreducible (`None` for singletons,
/// which are irreducible for every `k`).
pub fn irreducibility_order(class: &HypothesisClass) -> Result<Option<u32>> {
    let lat = Lattice::new(class)?;
    let o = lat.order(lat.full());
    Ok((o != crate::lattice::ORDER_INFINITE).then_some(o))
}

/// Literal check: every complete depth-k tree over the domain has a root
/// path along which the restricted class keeps its Littlestone dimension.
pub fn is_k_irreducible_oracle(class: &HypothesisClass, k: u64) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    if class.is_empty() {
        return Ok(false);
    }
    if k >= 32 {
        return Err(Error::Capacity(format!("trees of depth {k} cannot be enumerated")));
    }
    let n = class.domain_size();
    let internal = (1usize << k) - 1;
    let trees = (n as u128).checked_pow(internal as u32).unwrap_or(u128::MAX);
    if trees > ORACLE_TREE_LIMIT {
        return Err(Error::Capacity(format!(
            "{trees} trees of depth {k} over {n} points exceeds {ORACLE_TREE_LIMIT}"
        )));
    }
    let lat = Lattice::new(class)?;
    let full = lat.full();
    let d = lat.ldim(full);
    let mut nodes: Vec<DomainPoint> = vec![0; internal];
    loop {
        let preserved = (0..1u64 << k).any(|code| {
            let mut m = full;
            let mut i = 0;
            for level in 0..k {
                let b = if code >> level & 1 == 1 { Label::Pos } else { Label::Neg };
                m = lat.restrict(m, nodes[i], b);
                i = 2 * i + if b == Label::Neg { 1 } else { 2 };
            }
            lat.ldim(m) == d
        });
        if !preserved {
            return Ok(false);
        }
        // next tree in base-n counting order
        let mut pos = 0;
        loop {
            if pos == internal {
                return Ok(true);
            }
            nodes[pos] += 1;
            if nodes[pos] < n {
                break;
            }
            nodes[pos] = 0;
            pos += 1;
        }
    }
}

/// SOA classifier: `+1` at `x` iff `Ldim(G|(x,+1)) >= Ldim(G|(x,-1))`.
pub fn soa(class: &HypothesisClass) -> Result<Hypothesis> {
    let lat = Lattice::new(class)?;
    lat.soa(lat.full())
}
