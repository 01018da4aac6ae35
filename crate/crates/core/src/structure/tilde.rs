use std::collections::BTreeSet;

use crate::classes::{Hypothesis, HypothesisClass};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};

/// Largest class for which [`tilde_class`] enumerates subclasses.
pub const TILDE_LIMIT: usize = 12;

/// Largest class for which [`soa_closure_unfiltered`] enumerates subclasses.
pub const CLOSURE_LIMIT: usize = 16;

/// `{ soa(G) : G subset of F nonempty and k-irreducible }`.
pub fn tilde_class(class: &HypothesisClass, k: u64) -> Result<HypothesisClass> {
    soa_closure(class, Some(k), TILDE_LIMIT)
}

/// SOA hypotheses of every nonempty subclass, with no irreducibility filter.
pub fn soa_closure_unfiltered(class: &HypothesisClass) -> Result<HypothesisClass> {
    soa_closure(class, None, CLOSURE_LIMIT)
}

fn soa_closure(class: &HypothesisClass, k: Option<u64>, limit: usize) -> Result<HypothesisClass> {
    if class.len() > limit {
        return Err(Error::Capacity(format!(
            "subclass enumeration over {} hypotheses exceeds the limit of {limit}",
            class.len()
        )));
    }
    let lat = Lattice::new(class)?;
    let mut out: BTreeSet<Hypothesis> = BTreeSet::new();
    for bits in 1u64..1 << class.len() {
        let m = Mask::from_indices((0..class.len()).filter(|i| bits >> i & 1 == 1));
        if k.is_none_or(|k| lat.is_k_irreducible(m, k)) {
            out.insert(lat.soa(m)?);
        }
    }
    HypothesisClass::new(class.domain_size(), out)
}
