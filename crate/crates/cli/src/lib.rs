//! `juniper` command line: decompositions, openings, exhaustive solving,
//! analysis sweeps, position evaluation, self-play and the HTTP service.
//!
//! Exit status: 0 success, 1 usage error, 2 domain error (bad input, game
//! over, oversized instance), 3 internal invariant breach.

pub mod server;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use juniper_core::analysis::Sweep;
use juniper_core::{
    decompose, decompose_naive, engine_move, evaluate_position, plan_first_player,
    plan_second_player, solve_openings, winning_openings, Error, FirstMove, GameState, Graph,
    Label, Ruleset, Solver, Status, Transcript,
};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "juniper", version, about = "Juniper Green solved via Gallai-Edmonds decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Gallai-Edmonds decomposition of G_n as JSON.
    Decompose {
        #[arg(long)]
        n: u32,
        /// Use the vertex-deletion oracle instead of the blossom forest.
        #[arg(long)]
        naive: bool,
    },
    /// Print the winning first moves for 1..=n.
    Openings {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "none")]
        constraint: FirstMove,
    },
    /// Solve all openings by exhaustive search (n <= 20).
    Solve {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "none")]
        constraint: FirstMove,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Sweep decompositions for n = 1..=n_max and write the CSV reports.
    Analyze {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the winning moves in the position recorded by a transcript.
    Bestmove {
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Play the matching engine against a perfect adversary and print the game.
    Selfplay {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        opening: Label,
        #[arg(long, default_value = "none")]
        constraint: FirstMove,
    },
    /// Run the HTTP/JSON service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Largest n accepted by the service.
        #[arg(long, env = "JG_N_LIMIT", default_value_t = server::DEFAULT_N_LIMIT)]
        n_limit: u32,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Domain(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DOMAIN
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
    }
}

fn join(labels: &[Label]) -> String {
    if labels.is_empty() {
        return "none".into();
    }
    labels.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Decompose { n, naive } => {
            let g = Graph::divisibility(n)?;
            let dec = if naive { decompose_naive(&g) } else { decompose(&g) };
            writeln!(out, "{}", dec.to_json())?;
        }
        Command::Openings { n, constraint } => {
            Ruleset::new(n, constraint)?;
            let g = Graph::divisibility(n)?;
            writeln!(out, "{}", join(&winning_openings(&g, constraint)))?;
        }
        Command::Solve { n, constraint, json } => {
            let report = solve_openings(n, constraint)?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                writeln!(out, "{}", join(&report.winning_openings))?;
            }
        }
        Command::Analyze { n_max, out: dir } => {
            fs::create_dir_all(&dir)?;
            let sweep = Sweep::compute(n_max)?;
            sweep.write_all(&dir)?;
            for f in ["sweep.csv", "membership.csv", "bands.csv", "lemoine.csv", "summary.json"] {
                writeln!(out, "{}", dir.join(f).display())?;
            }
        }
        Command::Bestmove { transcript } => {
            let text = fs::read_to_string(&transcript)
                .map_err(|e| Failure::Domain(format!("{}: {e}", transcript.display())))?;
            let state = Transcript::from_json(&text)?.load()?;
            let g = Graph::divisibility(state.n())?;
            let eval = evaluate_position(&g, &state)?;
            writeln!(out, "{}", join(&eval.winning_moves))?;
        }
        Command::Selfplay { n, opening, constraint } => {
            let (state, engine_won) = selfplay(n, opening, constraint)?;
            writeln!(out, "{}", state.to_transcript().to_json())?;
            if !engine_won {
                return Err(Failure::Internal(format!(
                    "the engine lost a theoretically won game: {:?}",
                    state.history()
                )));
            }
        }
        Command::Serve { port, host, n_limit } => {
            server::serve(&host, port, server::ServerConfig { n_limit })?;
        }
    }
    Ok(0)
}

/// Adversary for self-play: the exhaustive solver for small n, the matching
/// evaluator (also exact) beyond that. Prefers the smallest winning move,
/// otherwise the smallest legal one.
fn adversary_move(g: &Graph, solver: &mut Option<Solver<'_>>, s: &GameState) -> Result<Label, Error> {
    let winning = match solver {
        Some(solver) => solver.analyse(s)?.1,
        None => evaluate_position(g, s)?.winning_moves,
    };
    match winning.first() {
        Some(&k) => Ok(k),
        None => s.legal_moves().first().copied().ok_or(Error::GameOver),
    }
}

/// Engine on the winning side of `opening` versus a perfect adversary.
/// Returns the final state and whether the engine won.
pub fn selfplay(n: u32, opening: Label, constraint: FirstMove) -> Result<(GameState, bool), Error> {
    let rules = Ruleset::new(n, constraint)?;
    let mut state = GameState::new(rules);
    state.check_move(opening)?;
    let g = Graph::divisibility(n)?;
    let engine_first = decompose(&g).d.contains(&opening);
    let plan = if engine_first {
        plan_first_player(&g, opening)?
    } else {
        plan_second_player(&g, opening)?
    };
    let engine = plan.role.player();
    let mut solver = if g.vertex_count() <= juniper_core::solver::SOLVER_LIMIT {
        Some(Solver::new(&g)?)
    } else {
        None
    };
    if !engine_first {
        state = state.apply_move(opening)?;
    }
    while !state.is_over() {
        let k = if state.to_move() == engine {
            engine_move(&plan, &state)?
        } else {
            adversary_move(&g, &mut solver, &state)?
        };
        state = state
            .apply_move(k)
            .map_err(|e| Error::BrokenInvariant(format!("self-play produced an illegal move: {e}")))?;
    }
    let won = state.status() == Status::Won(engine);
    Ok((state, won))
}
