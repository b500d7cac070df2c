//! Exhaustive cross-checks between the matching engine and the game-tree solver.

#![allow(dead_code)]

use std::collections::HashSet;

use juniper_core::{
    decompose, engine_move, evaluate_position, plan_first_player, plan_second_player, Error,
    FirstMove, GameState, Graph, Label, Ruleset, Solver, Status,
};

pub fn rules(n: u32) -> Ruleset {
    Ruleset::new(n, FirstMove::None).unwrap()
}

fn mask(s: &GameState) -> u32 {
    s.history().iter().fold(0, |m, &k| m | (1 << (k - 1)))
}

/// One representative per distinct (used set, current) position, in DFS order,
/// including the empty board and terminal positions.
pub fn reachable_states(n: u32) -> Vec<GameState> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![GameState::new(rules(n))];
    while let Some(s) = stack.pop() {
        if !seen.insert((mask(&s), s.current())) {
            continue;
        }
        for k in s.legal_moves() {
            stack.push(s.apply_move(k).unwrap());
        }
        out.push(s);
    }
    out
}

/// Compares `evaluate_position` with the solver on every ongoing reachable
/// position of the game on `1..=n`. Returns the number of positions checked.
pub fn check_evaluator(n: u32) -> Result<usize, String> {
    let g = Graph::divisibility(n).unwrap();
    let mut solver = Solver::new(&g).unwrap();
    let mut checked = 0;
    for s in reachable_states(n) {
        if s.is_over() {
            continue;
        }
        let eval = evaluate_position(&g, &s).map_err(|e| e.to_string())?;
        let (wins, moves) = solver.analyse(&s).unwrap();
        if eval.player_to_move_wins != wins || eval.winning_moves != moves {
            return Err(format!(
                "n={n} history={:?}: evaluator {:?} vs solver ({wins}, {moves:?})",
                s.history(),
                eval
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Plays the engine on the theoretically winning side of `opening` against
/// every possible sequence of replies. Also confirms with the solver that the
/// adversary never has a winning option, so this covers the optimal adversary.
/// Returns the number of distinct positions explored.
pub fn check_adversarial(n: u32, opening: Label) -> Result<usize, String> {
    let g = Graph::divisibility(n).unwrap();
    let dec = decompose(&g);
    let engine_first = dec.d.contains(&opening);
    let plan = if engine_first {
        plan_first_player(&g, opening)
    } else {
        plan_second_player(&g, opening)
    }
    .map_err(|e| format!("n={n} opening={opening}: {e}"))?;
    let engine_side = plan.role.player();
    let mut solver = Solver::new(&g).unwrap();

    let start = GameState::new(rules(n));
    let start = if engine_first {
        let k = engine_move(&plan, &start).map_err(|e| e.to_string())?;
        if k != opening {
            return Err(format!("engine opened {k}, expected {opening}"));
        }
        start.apply_move(k).unwrap()
    } else {
        start.apply_move(opening).unwrap()
    };

    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if !seen.insert((mask(&s), s.current())) {
            continue;
        }
        match s.status() {
            Status::Won(p) if p == engine_side => continue,
            Status::Won(_) => {
                return Err(format!("n={n} opening={opening}: engine lost {:?}", s.history()))
            }
            Status::Ongoing => {}
        }
        if s.to_move() == engine_side {
            let k = engine_move(&plan, &s).map_err(|e| match e {
                Error::BrokenInvariant(msg) => {
                    format!("n={n} opening={opening}: broken invariant at {:?}: {msg}", s.history())
                }
                other => other.to_string(),
            })?;
            stack.push(s.apply_move(k).unwrap());
        } else {
            let (adversary_wins, _) = solver.analyse(&s).unwrap();
            if adversary_wins {
                return Err(format!(
                    "n={n} opening={opening}: adversary has a winning reply at {:?}",
                    s.history()
                ));
            }
            for k in s.legal_moves() {
                stack.push(s.apply_move(k).unwrap());
            }
        }
    }
    Ok(seen.len())
}

/// Solver winning openings vs `D(G_n)` restricted to the constraint.
pub fn check_openings_are_d(n: u32, solver: &mut Solver, d: &[Label]) -> Result<(), String> {
    for c in [FirstMove::None, FirstMove::Even, FirstMove::Composite] {
        let state = GameState::new(Ruleset::new(n, c).unwrap());
        let (_, solved) = solver.analyse(&state).unwrap();
        let expected: Vec<Label> = d.iter().copied().filter(|&v| c.allows(v)).collect();
        if solved != expected {
            return Err(format!("n={n} {c}: solver {solved:?} vs D {expected:?}"));
        }
    }
    Ok(())
}
