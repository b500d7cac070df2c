//! Juniper Green solved through matchings.
//!
//! The winning first moves of Juniper Green on `1..=n` are the inessential
//! vertices of the divisibility graph `G_n`, i.e. the `D` part of its
//! Gallai-Edmonds decomposition. This crate builds `G_n`, computes maximum
//! matchings and the decomposition, plays the follow-the-matching
//! strategies, and checks all of it against an exhaustive solver.

pub mod analysis;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod game;
pub mod graph;
pub mod layout;
pub mod matching;
pub mod solver;

pub use decomposition::{decompose, decompose_naive, is_inessential, Class, Decomposition};
pub use engine::{
    engine_move, evaluate_position, plan_first_player, plan_second_player, winning_openings,
    EnginePlan, Evaluation, Role,
};
pub use error::{Error, Result};
pub use game::{FirstMove, GameResult, GameState, IllegalMove, Player, Ruleset, Status, Transcript};
pub use graph::{Graph, Label};
pub use layout::{circular_layout, LayoutPoint};
pub use matching::{
    enumerate_maximum_matchings, find_augmenting_path, maximum_matching, verify_matching,
    AlternatingPath, Matching,
};
pub use solver::{solve_openings, solve_state, SolveReport, Solver, SolverKey};
