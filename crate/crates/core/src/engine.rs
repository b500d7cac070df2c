//! Perfect play from maximum matchings.
//!
//! The winning openings are exactly the inessential vertices `D(G_n)`. The
//! side that should win fixes one maximum matching at the start and from
//! then on always answers with the partner of the opponent's last number:
//!
//! * first mover: a maximum matching that leaves the opening exposed;
//! * second mover: any maximum matching (it covers every essential opening).
//!
//! Mid-game, the continuation from a position is the same game on the graph
//! induced by the unused numbers, so a move `w` wins iff `w` is inessential
//! in that graph.

use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose, is_inessential, Class};
use crate::error::{Error, Result};
use crate::game::{FirstMove, GameState, Player};
use crate::graph::{Graph, Label};
use crate::matching::{matching_number, maximum_matching, Matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "first")]
    FirstMover,
    #[serde(rename = "second")]
    SecondMover,
}

impl Role {
    pub fn player(self) -> Player {
        match self {
            Role::FirstMover => Player::One,
            Role::SecondMover => Player::Two,
        }
    }
}

/// A frozen strategy: follow `matching` for the whole game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnginePlan {
    pub role: Role,
    pub matching: Matching,
    pub opening: Label,
}

/// `D(g)` restricted to openings allowed by `constraint`, ascending.
pub fn winning_openings(g: &Graph, constraint: FirstMove) -> Vec<Label> {
    decompose(g)
        .d
        .into_iter()
        .filter(|&v| constraint.allows(v))
        .collect()
}

/// Plan for opening at `opening`, which must be inessential.
pub fn plan_first_player(g: &Graph, opening: Label) -> Result<EnginePlan> {
    let rest = g.without(opening)?;
    let m = maximum_matching(&rest);
    if m.size() != matching_number(g) {
        return Err(Error::EssentialOpening(opening));
    }
    Ok(EnginePlan {
        role: Role::FirstMover,
        matching: Matching::from_pairs_in(g, &m.pairs()),
        opening,
    })
}

/// Plan for answering `opening`, which must be essential.
pub fn plan_second_player(g: &Graph, opening: Label) -> Result<EnginePlan> {
    if is_inessential(g, opening)? {
        return Err(Error::InessentialOpening(opening));
    }
    Ok(EnginePlan {
        role: Role::SecondMover,
        matching: maximum_matching(g),
        opening,
    })
}

/// The plan's move in `s`: the opening, or the partner of the current number.
pub fn engine_move(plan: &EnginePlan, s: &GameState) -> Result<Label> {
    if s.is_over() {
        return Err(Error::GameOver);
    }
    if s.to_move() != plan.role.player() {
        return Err(Error::BrokenInvariant(format!(
            "engine asked to move for {} as {:?}",
            s.to_move(),
            plan.role
        )));
    }
    if s.history().first().is_some_and(|&v| v != plan.opening) {
        return Err(Error::BrokenInvariant(format!(
            "plan built for opening {} but the game opened with {}",
            plan.opening,
            s.history()[0]
        )));
    }
    let reply = match s.current() {
        None => plan.opening,
        Some(c) => plan.matching.partner(c).ok_or_else(|| {
            Error::BrokenInvariant(format!("current number {c} is exposed in the plan"))
        })?,
    };
    s.check_move(reply)
        .map_err(|e| Error::BrokenInvariant(format!("planned reply {reply} is illegal: {e}")))?;
    Ok(reply)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub player_to_move_wins: bool,
    pub winning_moves: Vec<Label>,
}

/// Exact value of an ongoing position on `g = G_n`, with all winning moves.
pub fn evaluate_position(g: &Graph, s: &GameState) -> Result<Evaluation> {
    if s.is_over() {
        return Err(Error::GameOver);
    }
    if g.vertex_count() != s.n() as usize {
        return Err(Error::InvalidGraph("graph does not match the game".into()));
    }
    let remaining = g.induced_subgraph(&s.unused())?;
    let dec = decompose(&remaining);
    let winning_moves: Vec<Label> = s
        .legal_moves()
        .into_iter()
        .filter(|&w| dec.class_of(w) == Some(Class::D))
        .collect();
    Ok(Evaluation {
        player_to_move_wins: !winning_moves.is_empty(),
        winning_moves,
    })
}
