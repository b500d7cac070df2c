//! Undirected simple graphs on positive integer labels, and the divisibility
//! graph `G_n` on `1..=n` where `i ~ j` iff one of them divides the other.
//!
//! Labels are what callers see. Internally every vertex also has a dense index
//! (its position in the ascending label list); adjacency is stored by index,
//! sorted ascending, which is the same order as by label.

use std::collections::VecDeque;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// A vertex label. For `G_n` these are exactly `1..=n`.
pub type Label = u32;

/// Immutable undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Label>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds `G_n` by enumerating multiples, about `n * H(n)` insertions.
    pub fn divisibility(n: u32) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidSize);
        }
        let size = n as usize;
        let mut adj = vec![Vec::new(); size];
        for i in 1..=size {
            for m in (2 * i..=size).step_by(i) {
                adj[i - 1].push(m - 1);
                adj[m - 1].push(i - 1);
            }
        }
        // divisors of j arrive in ascending order before its multiples
        debug_assert!(adj.iter().all(|a| a.windows(2).all(|w| w[0] < w[1])));
        Ok(Graph {
            labels: (1..=n).collect(),
            adj,
        })
    }

    /// Builds a graph from explicit labels and edges. Duplicate edges are
    /// merged; self-loops, label 0 and edges to unknown labels are rejected.
    pub fn from_edges<I>(labels: I, edges: &[(Label, Label)]) -> Result<Graph>
    where
        I: IntoIterator<Item = Label>,
    {
        let mut labels: Vec<Label> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidSize);
        }
        if labels[0] == 0 {
            return Err(Error::InvalidGraph("label 0 is not allowed".into()));
        }
        let mut g = Graph {
            adj: vec![Vec::new(); labels.len()],
            labels,
        };
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            let iu = g.index_of(u).ok_or(Error::UnknownLabel(u))?;
            let iv = g.index_of(v).ok_or(Error::UnknownLabel(v))?;
            g.adj[iu].push(iv);
            g.adj[iv].push(iu);
        }
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(g)
    }

    /// Subgraph induced by `keep`, preserving the original labels.
    pub fn induced_subgraph(&self, keep: &[Label]) -> Result<Graph> {
        let mut kept = vec![false; self.labels.len()];
        for &label in keep {
            let i = self.index_of(label).ok_or(Error::UnknownLabel(label))?;
            kept[i] = true;
        }
        Ok(self.induced_by_mask(&kept))
    }

    /// The graph with one vertex and its edges deleted.
    pub fn without(&self, label: Label) -> Result<Graph> {
        let i = self.index_of(label).ok_or(Error::UnknownLabel(label))?;
        let mut kept = vec![true; self.labels.len()];
        kept[i] = false;
        Ok(self.induced_by_mask(&kept))
    }

    pub(crate) fn induced_by_mask(&self, kept: &[bool]) -> Graph {
        let mut remap = vec![usize::MAX; self.labels.len()];
        let mut labels = Vec::new();
        for (i, &k) in kept.iter().enumerate() {
            if k {
                remap[i] = labels.len();
                labels.push(self.labels[i]);
            }
        }
        let adj = (0..self.labels.len())
            .filter(|&i| kept[i])
            .map(|i| {
                self.adj[i]
                    .iter()
                    .filter(|&&j| kept[j])
                    .map(|&j| remap[j])
                    .collect()
            })
            .collect();
        Graph { labels, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertex labels, ascending.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index_of(label).is_some()
    }

    /// Neighbors of `label`, ascending.
    pub fn neighbors(&self, label: Label) -> Result<impl Iterator<Item = Label> + '_> {
        let i = self.index_of(label).ok_or(Error::UnknownLabel(label))?;
        Ok(self.adj[i].iter().map(move |&j| self.labels[j]))
    }

    pub fn degree(&self, label: Label) -> Result<usize> {
        let i = self.index_of(label).ok_or(Error::UnknownLabel(label))?;
        Ok(self.adj[i].len())
    }

    pub fn is_edge(&self, i: Label, j: Label) -> Result<bool> {
        let a = self.index_of(i).ok_or(Error::UnknownLabel(i))?;
        let b = self.index_of(j).ok_or(Error::UnknownLabel(j))?;
        Ok(self.has_index_edge(a, b))
    }

    /// All edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i < j {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Label>> {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(self.labels[v]);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Writes the `i,j` edge file: `i < j`, rows sorted lexicographically.
    pub fn write_edges_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "i,j")?;
        for (i, j) in self.edges() {
            writeln!(w, "{i},{j}")?;
        }
        Ok(())
    }

    pub(crate) fn index_of(&self, label: Label) -> Option<usize> {
        let guess = (label as usize).wrapping_sub(1);
        if self.labels.get(guess) == Some(&label) {
            return Some(guess);
        }
        self.labels.binary_search(&label).ok()
    }

    pub(crate) fn label_at(&self, index: usize) -> Label {
        self.labels[index]
    }

    pub(crate) fn adj_index(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub(crate) fn has_index_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}
