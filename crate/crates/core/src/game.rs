//! Juniper Green on `1..=n`.
//!
//! Players alternately name an unused number that is a factor or multiple of
//! the previous one. A player with no legal move loses. An optional rule
//! restricts the opening to even numbers, or to composites.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::Label;

/// Restriction on the first move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstMove {
    #[default]
    None,
    Even,
    Composite,
}

impl FirstMove {
    pub fn allows(self, k: Label) -> bool {
        match self {
            FirstMove::None => true,
            FirstMove::Even => k.is_multiple_of(2),
            FirstMove::Composite => is_composite(k),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FirstMove::None => "none",
            FirstMove::Even => "even",
            FirstMove::Composite => "composite",
        }
    }
}

impl fmt::Display for FirstMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FirstMove {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(FirstMove::None),
            "even" => Ok(FirstMove::Even),
            "composite" => Ok(FirstMove::Composite),
            other => Err(format!(
                "unknown constraint `{other}` (expected none, even or composite)"
            )),
        }
    }
}

/// Has a divisor other than 1 and itself; so 1 and primes are excluded.
pub fn is_composite(k: Label) -> bool {
    k >= 4 && (2..).take_while(|d| d * d <= k).any(|d| k.is_multiple_of(d))
}

pub fn is_prime(k: Label) -> bool {
    k >= 2 && !is_composite(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ruleset {
    pub n: u32,
    #[serde(rename = "constraint")]
    pub first_move: FirstMove,
}

impl Ruleset {
    pub fn new(n: u32, first_move: FirstMove) -> Result<Ruleset> {
        if n == 0 {
            return Err(Error::InvalidSize);
        }
        Ok(Ruleset { n, first_move })
    }

    /// Openings permitted by the first-move rule, ascending.
    pub fn legal_openings(&self) -> Vec<Label> {
        (1..=self.n).filter(|&k| self.first_move.allows(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "player1")]
    One,
    #[serde(rename = "player2")]
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::One => "player1",
            Player::Two => "player2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Ongoing,
    Won(Player),
}

/// Why a move was refused.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("{0} is outside 1..={1}")]
    OutOfRange(Label, u32),
    #[error("{0} has already been used")]
    AlreadyUsed(Label),
    #[error("{to} is neither a factor nor a multiple of {from}")]
    NotAdjacent { from: Label, to: Label },
    #[error("opening {0} violates the first-move constraint `{1}`")]
    Constraint(Label, FirstMove),
    #[error("the game is over")]
    GameOver,
}

/// Immutable game position. `apply_move` returns a new state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    ruleset: Ruleset,
    history: Vec<Label>,
    used: Vec<bool>,
    status: Status,
}

impl GameState {
    /// Fresh game. If the first-move rule leaves no legal opening, the state
    /// is already terminal and won by player 2.
    pub fn new(ruleset: Ruleset) -> GameState {
        let mut s = GameState {
            ruleset,
            history: Vec::new(),
            used: vec![false; ruleset.n as usize],
            status: Status::Ongoing,
        };
        s.refresh_status();
        s
    }

    /// Plays `moves` from the start, validating each.
    pub fn replay(ruleset: Ruleset, moves: &[Label]) -> Result<GameState> {
        moves
            .iter()
            .try_fold(GameState::new(ruleset), |s, &k| s.apply_move(k).map_err(Error::from))
    }

    pub fn ruleset(&self) -> Ruleset {
        self.ruleset
    }

    pub fn n(&self) -> u32 {
        self.ruleset.n
    }

    pub fn history(&self) -> &[Label] {
        &self.history
    }

    pub fn current(&self) -> Option<Label> {
        self.history.last().copied()
    }

    pub fn to_move(&self) -> Player {
        if self.history.len().is_multiple_of(2) {
            Player::One
        } else {
            Player::Two
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_over(&self) -> bool {
        self.status != Status::Ongoing
    }

    pub fn is_used(&self, k: Label) -> bool {
        k >= 1 && self.used.get(k as usize - 1).copied().unwrap_or(false)
    }

    /// Unused numbers, ascending.
    pub fn unused(&self) -> Vec<Label> {
        (1..=self.ruleset.n).filter(|&k| !self.is_used(k)).collect()
    }

    /// Legal moves, ascending. Empty iff the position is terminal.
    pub fn legal_moves(&self) -> Vec<Label> {
        match self.current() {
            None => self
                .ruleset
                .legal_openings()
                .into_iter()
                .filter(|&k| !self.is_used(k))
                .collect(),
            Some(c) => {
                let mut out: Vec<Label> = divisors_below(c)
                    .into_iter()
                    .chain((2 * c..=self.ruleset.n).step_by(c as usize))
                    .filter(|&k| !self.is_used(k))
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }

    pub fn check_move(&self, k: Label) -> Result<(), IllegalMove> {
        if self.is_over() {
            return Err(IllegalMove::GameOver);
        }
        if k == 0 || k > self.ruleset.n {
            return Err(IllegalMove::OutOfRange(k, self.ruleset.n));
        }
        if self.is_used(k) {
            return Err(IllegalMove::AlreadyUsed(k));
        }
        match self.current() {
            None if !self.ruleset.first_move.allows(k) => {
                Err(IllegalMove::Constraint(k, self.ruleset.first_move))
            }
            Some(c) if c % k != 0 && !k.is_multiple_of(c) => Err(IllegalMove::NotAdjacent { from: c, to: k }),
            _ => Ok(()),
        }
    }

    pub fn apply_move(&self, k: Label) -> Result<GameState, IllegalMove> {
        self.check_move(k)?;
        let mut next = self.clone();
        next.history.push(k);
        next.used[k as usize - 1] = true;
        next.refresh_status();
        Ok(next)
    }

    fn refresh_status(&mut self) {
        self.status = if self.legal_moves().is_empty() {
            Status::Won(self.to_move().opponent())
        } else {
            Status::Ongoing
        };
    }

    pub fn to_transcript(&self) -> Transcript {
        Transcript {
            n: self.ruleset.n,
            constraint: self.ruleset.first_move,
            moves: self.history.clone(),
            result: self.status.into(),
        }
    }
}

fn divisors_below(c: Label) -> Vec<Label> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= c {
        if c.is_multiple_of(d) {
            for k in [d, c / d] {
                if k != c && !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        d += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameResult {
    Player1,
    Player2,
    Ongoing,
}

impl From<Status> for GameResult {
    fn from(s: Status) -> Self {
        match s {
            Status::Ongoing => GameResult::Ongoing,
            Status::Won(Player::One) => GameResult::Player1,
            Status::Won(Player::Two) => GameResult::Player2,
        }
    }
}

/// On-disk record of a game:
/// `{"n":..,"constraint":"none|even|composite","moves":[..],"result":"player1|player2|ongoing"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transcript {
    pub n: u32,
    pub constraint: FirstMove,
    pub moves: Vec<Label>,
    pub result: GameResult,
}

impl Transcript {
    pub fn from_json(text: &str) -> Result<Transcript> {
        serde_json::from_str(text).map_err(|e| Error::InvalidTranscript(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    /// Replays the moves and checks the recorded result.
    pub fn load(&self) -> Result<GameState> {
        let rules = Ruleset::new(self.n, self.constraint)
            .map_err(|e| Error::InvalidTranscript(e.to_string()))?;
        let state = GameState::replay(rules, &self.moves)
            .map_err(|e| Error::InvalidTranscript(e.to_string()))?;
        let actual = GameResult::from(state.status());
        if actual != self.result {
            return Err(Error::InvalidTranscript(format!(
                "recorded result {:?} but the moves give {:?}",
                self.result, actual
            )));
        }
        Ok(state)
    }
}
