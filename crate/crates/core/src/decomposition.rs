//! Gallai-Edmonds partition `V = D ∪ A ∪ C`.
//!
//! * `D`: inessential vertices, missed by at least one maximum matching.
//! * `A`: essential vertices with a neighbor in `D`.
//! * `C`: every other vertex.
//!
//! [`decompose`] finds `D` as the outer vertices of one alternating forest
//! grown from all exposed vertices of a maximum matching. [`decompose_naive`]
//! tests every vertex by deletion and is kept as an independent oracle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};
use crate::matching::{matching_number, maximum_mates, BlossomSearch, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    D,
    A,
    C,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::D => "D",
            Class::A => "A",
            Class::C => "C",
        })
    }
}

/// The partition, with each part sorted ascending. Serializes as
/// `{"n": .., "d": [..], "a": [..], "c": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: usize,
    pub d: Vec<Label>,
    pub a: Vec<Label>,
    pub c: Vec<Label>,
}

impl Decomposition {
    fn from_inessential(g: &Graph, inessential: &[bool]) -> Decomposition {
        let mut dec = Decomposition {
            n: g.vertex_count(),
            d: Vec::new(),
            a: Vec::new(),
            c: Vec::new(),
        };
        for (i, &label) in g.labels().iter().enumerate() {
            if inessential[i] {
                dec.d.push(label);
            } else if g.adj_index(i).iter().any(|&j| inessential[j]) {
                dec.a.push(label);
            } else {
                dec.c.push(label);
            }
        }
        dec
    }

    pub fn class_of(&self, v: Label) -> Option<Class> {
        if self.d.binary_search(&v).is_ok() {
            Some(Class::D)
        } else if self.a.binary_search(&v).is_ok() {
            Some(Class::A)
        } else if self.c.binary_search(&v).is_ok() {
            Some(Class::C)
        } else {
            None
        }
    }

    /// Checks the partition and neighbor rules against `g`.
    pub fn is_consistent_with(&self, g: &Graph) -> bool {
        let mut all: Vec<Label> = self.d.iter().chain(&self.a).chain(&self.c).copied().collect();
        all.sort_unstable();
        if all != g.labels() || self.n != g.vertex_count() {
            return false;
        }
        let touches_d = |v: Label| {
            g.neighbors(v)
                .map(|mut it| it.any(|w| self.class_of(w) == Some(Class::D)))
                .unwrap_or(false)
        };
        self.a.iter().all(|&v| touches_d(v)) && self.c.iter().all(|&v| !touches_d(v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }
}

/// True iff some maximum matching of `g` misses `v`, i.e. `ν(g − v) = ν(g)`.
pub fn is_inessential(g: &Graph, v: Label) -> Result<bool> {
    let without = g.without(v)?;
    Ok(matching_number(&without) == matching_number(g))
}

/// Fast decomposition from one maximum matching and one forest search.
pub fn decompose(g: &Graph) -> Decomposition {
    let mut mates = maximum_mates(g);
    let mut search = BlossomSearch::new(g);
    loop {
        let roots: Vec<usize> = (0..mates.len()).filter(|&i| mates[i] == NONE).collect();
        match search.run(&mates, &roots) {
            None => break,
            // unreachable for a maximum matching; augment rather than trust it
            Some(path) => {
                for pair in path.chunks_exact(2) {
                    mates[pair[0]] = pair[1];
                    mates[pair[1]] = pair[0];
                }
            }
        }
    }
    Decomposition::from_inessential(g, search.outer())
}

/// Oracle decomposition: one matching computation per deleted vertex.
pub fn decompose_naive(g: &Graph) -> Decomposition {
    let nu = matching_number(g);
    let inessential: Vec<bool> = g
        .labels()
        .iter()
        .map(|&v| {
            let without = g.without(v).expect("label from the graph itself");
            matching_number(&without) == nu
        })
        .collect();
    Decomposition::from_inessential(g, &inessential)
}

/// `odd(g − removed) − |removed|`: the Tutte-Berge bound on the number of
/// exposed vertices of a maximum matching. Equality holds for `removed = A`.
pub fn tutte_berge_bound(g: &Graph, removed: &[Label]) -> Result<i64> {
    for &v in removed {
        if !g.contains(v) {
            return Err(Error::UnknownLabel(v));
        }
    }
    let keep: Vec<Label> = g
        .labels()
        .iter()
        .copied()
        .filter(|v| !removed.contains(v))
        .collect();
    let odd = if keep.is_empty() {
        0
    } else {
        g.induced_subgraph(&keep)?
            .connected_components()
            .iter()
            .filter(|c| c.len() % 2 == 1)
            .count()
    };
    Ok(odd as i64 - removed.len() as i64)
}
