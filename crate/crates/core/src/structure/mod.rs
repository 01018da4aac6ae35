//! k-irreducibility, reducing arrays, SOA classifiers and generalized trees.

mod gentree;
mod irreducible;
mod reducing;
mod stable;
mod tilde;

pub use gentree::{
    gen_to_binary, unique_full_ldim_leaf, unique_full_ldim_leaf_in, BinaryNode, BinaryTree,
    GenNode, GeneralizedTree, NodeId,
};
pub use irreducible::{
    irreducibility_order, is_k_irreducible, is_k_irreducible_oracle, soa, ORACLE_TREE_LIMIT,
};
pub use reducing::{find_reducing_witness, find_reducing_witness_in, ReducingArray, ReductionWitness};
pub use stable::{soa_agrees, stable_leaf, stable_leaf_for_classes, StableLeafReport};
pub use tilde::{soa_closure_unfiltered, tilde_class, CLOSURE_LIMIT, TILDE_LIMIT};
