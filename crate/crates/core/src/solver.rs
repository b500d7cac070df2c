//! Exhaustive game-tree solver for snake-in-the-box on small graphs.
//!
//! A position is fully described by the set of used vertices and the current
//! vertex, so values are memoized on `(used bitmask, current)`. The solver
//! never looks at matchings; it is the ground truth the engine is checked
//! against.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{FirstMove, GameState, Ruleset};
use crate::graph::{Graph, Label};

/// Largest vertex count the solver accepts; the memo table has `n * 2^n` slots.
pub const SOLVER_LIMIT: usize = 20;

const UNKNOWN: u8 = 0;
const WIN: u8 = 1;
const LOSS: u8 = 2;

/// `used` has bit `i` set when the vertex with index `i` (label `i + 1` in
/// `G_n`) has been played. `current`'s own bit must be set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolverKey {
    pub used: u32,
    pub current: Label,
}

impl SolverKey {
    pub fn from_labels(g: &Graph, used: &[Label], current: Label) -> Result<SolverKey> {
        let mut mask = 0u32;
        for &v in used {
            let i = g.index_of(v).ok_or(Error::UnknownLabel(v))?;
            if i >= SOLVER_LIMIT {
                return Err(oversized(g.vertex_count()));
            }
            mask |= 1 << i;
        }
        Ok(SolverKey { used: mask, current })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub n: u32,
    pub constraint: FirstMove,
    pub winning_openings: Vec<Label>,
    pub states_visited: u64,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn oversized(actual: usize) -> Error {
    Error::Oversized {
        what: "exhaustive solver (vertices)",
        actual,
        limit: SOLVER_LIMIT,
    }
}

pub struct Solver<'g> {
    g: &'g Graph,
    neighbors: Vec<u32>,
    memo: Vec<u8>,
    visited: u64,
}

impl<'g> Solver<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        let n = g.vertex_count();
        if n > SOLVER_LIMIT {
            return Err(oversized(n));
        }
        let neighbors = (0..n)
            .map(|i| g.adj_index(i).iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect();
        Ok(Solver {
            g,
            neighbors,
            memo: vec![UNKNOWN; n << n],
            visited: 0,
        })
    }

    /// Number of distinct positions evaluated so far.
    pub fn states_visited(&self) -> u64 {
        self.visited
    }

    /// Whether the player to move wins from `key`.
    pub fn solve_state(&mut self, key: SolverKey) -> Result<bool> {
        let cur = self.check_key(key)?;
        Ok(self.solve(key.used, cur))
    }

    /// Moves from `key` that leave the opponent lost, ascending.
    pub fn winning_moves(&mut self, key: SolverKey) -> Result<Vec<Label>> {
        let cur = self.check_key(key)?;
        let mut out = Vec::new();
        let mut options = self.neighbors[cur] & !key.used;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            if !self.solve(key.used | (1 << w), w) {
                out.push(self.g.label_at(w));
            }
        }
        Ok(out)
    }

    /// Value and winning moves of a game position on this graph, which must
    /// be the `G_n` of the game. Handles the empty-history opening case.
    pub fn analyse(&mut self, state: &GameState) -> Result<(bool, Vec<Label>)> {
        if self.g.vertex_count() != state.n() as usize {
            return Err(Error::InvalidGraph("solver graph does not match the game".into()));
        }
        let used = state
            .history()
            .iter()
            .fold(0u32, |m, &k| m | (1 << (k - 1)));
        let winning: Vec<Label> = state
            .legal_moves()
            .into_iter()
            .filter(|&w| !self.solve(used | (1 << (w - 1)), w as usize - 1))
            .collect();
        Ok((!winning.is_empty(), winning))
    }

    fn check_key(&self, key: SolverKey) -> Result<usize> {
        let cur = self
            .g
            .index_of(key.current)
            .ok_or(Error::UnknownLabel(key.current))?;
        if key.used >> self.g.vertex_count() != 0 {
            return Err(Error::InvalidGraph("used mask names vertices outside the graph".into()));
        }
        if key.used & (1 << cur) == 0 {
            return Err(Error::InvalidGraph("current vertex must be marked used".into()));
        }
        Ok(cur)
    }

    fn solve(&mut self, used: u32, cur: usize) -> bool {
        let slot = ((used as usize) * self.neighbors.len()) + cur;
        match self.memo[slot] {
            WIN => return true,
            LOSS => return false,
            _ => {}
        }
        self.visited += 1;
        let mut options = self.neighbors[cur] & !used;
        let mut wins = false;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            if !self.solve(used | (1 << w), w) {
                wins = true;
                break;
            }
        }
        self.memo[slot] = if wins { WIN } else { LOSS };
        wins
    }
}

/// One-shot memoized solve of a single position.
pub fn solve_state(g: &Graph, key: SolverKey) -> Result<bool> {
    Solver::new(g)?.solve_state(key)
}

/// Plain recursion without memo; only for cross-checking at tiny sizes.
pub fn solve_state_unmemoized(g: &Graph, key: SolverKey) -> Result<bool> {
    let solver = Solver::new(g)?;
    let cur = solver.check_key(key)?;
    fn go(nbrs: &[u32], used: u32, cur: usize) -> bool {
        let mut options = nbrs[cur] & !used;
        while options != 0 {
            let w = options.trailing_zeros() as usize;
            options &= options - 1;
            if !go(nbrs, used | (1 << w), w) {
                return true;
            }
        }
        false
    }
    Ok(go(&solver.neighbors, key.used, cur))
}

/// Solves every opening of Juniper Green on `1..=n` under `constraint`.
pub fn solve_openings(n: u32, constraint: FirstMove) -> Result<SolveReport> {
    if n as usize > SOLVER_LIMIT {
        return Err(oversized(n as usize));
    }
    let rules = Ruleset::new(n, constraint)?;
    let g = Graph::divisibility(n)?;
    let mut solver = Solver::new(&g)?;
    let (_, winning_openings) = solver.analyse(&GameState::new(rules))?;
    Ok(SolveReport {
        n,
        constraint,
        winning_openings,
        states_visited: solver.states_visited(),
    })
}
