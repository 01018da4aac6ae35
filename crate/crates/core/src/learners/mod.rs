//! ReduceTree, PolyPriLearn, the SOA game cover and PPPLearn.

mod cover;
mod game;
mod poly;
mod ppp;
mod reduce_tree;
mod sigma;

pub use cover::{build_cover, build_cover_sized, cover_size, Cover, COVER_MAX_ATTEMPTS};
pub use game::{simplex_max, solve_soa_game, GameSolution, GAME_TOLERANCE};
pub use poly::{
    plan, plan_with, poly_pri_learn, poly_pri_learn_on_data, poly_pri_learn_with,
    reduce_tree_sets, ChunkRecord, LearnerConfig, LearnerPlan, PlanOverrides, PolyPriOutcome,
};
pub use ppp::{
    adjacent_sequences, ppp_learn, ppp_learn_on_data, ppp_learn_with, ppp_plan, PipelineSpec,
    PppOutcome, PppPlan,
};
pub use reduce_tree::{
    reduce_tree, reduce_tree_in, OutputMember, ReduceTreeConfig, ReduceTreeOutput, Schedule,
    StepTrace, TreeState,
};
pub use sigma::{
    compute_sigma_star, compute_sigma_star_in, constraint_set_count, SigmaStar, SIGMA_ENUM_LIMIT,
};
