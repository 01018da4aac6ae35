//! Differential-privacy mechanisms and an exact small-instance auditor.

mod audit;
mod mechanisms;

pub use audit::{
    adjacent_datasets, adjacent_score_vectors, adjacent_set_systems, exact_output_distribution,
    privacy_excess, replace_one_pairs, verify_dp, CountingSpec, DpReport, ExactMechanism,
    ExponentialSpec, GenericLearnerSpec, SparseSelectionSpec, DISTRIBUTION_SLACK,
};
pub use mechanisms::{
    containment_counts, exponential_mechanism, exponential_mechanism_index,
    exponential_probabilities, generic_learner, generic_learner_distribution,
    generic_learner_sample_size, sample_index, selection_error, sparse_selection,
    sparse_selection_distribution, MechanismTranscript, PrivacyBudget, ScoredCandidate, Selection,
    SparseSelectionParams,
};
