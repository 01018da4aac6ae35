use crate::classes::{ConstraintSet, HypothesisClass};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};
use crate::structure::gentree::{unique_full_ldim_leaf_in, GeneralizedTree, NodeId};

/// Conclusions checked at the selected leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableLeafReport {
    pub leaf: NodeId,
    pub ell_star: i32,
    pub ldims_match: bool,
    pub irreducible: bool,
}

/// For `H subset of G` and constraints `S*` with `H|S*` k-irreducible and
/// `Ldim(G|S*) = Ldim(H|S*) >= 0`, and a generalized tree of height at most
/// `k - k'` whose leaves all satisfy `Ldim(G|ba(v)) <= Ldim(H|S*)`, returns
/// the leaf `v` that keeps `Ldim(H|S* + ba(v)) = Ldim(H|S*)`.
///
/// Masks are over `lat`'s base class.
pub fn stable_leaf(
    lat: &Lattice,
    h: Mask,
    g: Mask,
    s_star: &ConstraintSet,
    tree: &GeneralizedTree,
    k: u64,
    k_prime: u64,
) -> Result<StableLeafReport> {
    if !h.is_subset_of(&g) {
        return Err(Error::Argument("H must be a subclass of G".into()));
    }
    if k <= k_prime || tree.height() > (k - k_prime) as usize {
        return Err(Error::Contract(format!(
            "tree height {} exceeds k - k' = {}",
            tree.height(),
            k.saturating_sub(k_prime)
        )));
    }
    let hs = lat.restrict_set(h, s_star);
    let ell = lat.ldim(hs);
    if ell < 0 || lat.ldim(lat.restrict_set(g, s_star)) != ell || !lat.is_k_irreducible(hs, k) {
        return Err(Error::Contract(
            "need Ldim(G|S*) = Ldim(H|S*) >= 0 with H|S* k-irreducible".into(),
        ));
    }
    for l in tree.leaves() {
        if lat.ldim(lat.restrict_set(g, &tree.ancestor_set(l)?)) > ell {
            return Err(Error::Contract(format!("leaf {l} keeps more than Ldim {ell} of G")));
        }
    }
    let leaf = unique_full_ldim_leaf_in(lat, hs, tree)?;
    let ba = tree.ancestor_set(leaf)?;
    let h_leaf = lat.restrict_set(h, &ba);
    Ok(StableLeafReport {
        leaf,
        ell_star: ell,
        ldims_match: lat.ldim(lat.restrict_set(g, &ba)) == ell && lat.ldim(h_leaf) == ell,
        irreducible: lat.is_k_irreducible(h_leaf, k_prime),
    })
}

/// `soa(J|S*) = soa(J'|ba(leaf))` for a sandwiched pair `H <= J, J' <= G`.
pub fn soa_agrees(
    lat: &Lattice,
    j: Mask,
    j_prime: Mask,
    s_star: &ConstraintSet,
    tree: &GeneralizedTree,
    leaf: NodeId,
) -> Result<bool> {
    let a = lat.soa(lat.restrict_set(j, s_star))?;
    let b = lat.soa(lat.restrict_set(j_prime, &tree.ancestor_set(leaf)?))?;
    Ok(a == b)
}

/// Convenience wrapper over plain classes sharing one base.
pub fn stable_leaf_for_classes(
    base: &HypothesisClass,
    h: &HypothesisClass,
    g: &HypothesisClass,
    s_star: &ConstraintSet,
    tree: &GeneralizedTree,
    k: u64,
    k_prime: u64,
) -> Result<StableLeafReport> {
    let lat = Lattice::new(base)?;
    stable_leaf(&lat, lat.mask_of(h)?, lat.mask_of(g)?, s_star, tree, k, k_prime)
}
