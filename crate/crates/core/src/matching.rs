//! Maximum cardinality matching in general graphs (Edmonds' blossom search),
//! Berge certificates, and an exhaustive enumerator used as an oracle.
//!
//! The search works on dense vertex indices and contracts blossoms by
//! relabelling their base, in the usual array-based formulation. It runs as
//! a forest: every root given to it grows its own alternating tree. A
//! single-root forest is the classic augmentation phase; a forest rooted at
//! every exposed vertex is what the Gallai-Edmonds extraction needs.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Label};

pub(crate) const NONE: usize = usize::MAX;

/// A set of disjoint edges, stored as a partner map over vertex labels.
///
/// Vertices that are absent from the map, or map to `None`, are exposed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    partner: HashMap<Label, Option<Label>>,
}

impl Matching {
    /// The empty matching with an explicit exposed entry for every vertex of `g`.
    pub fn empty(g: &Graph) -> Matching {
        Matching {
            partner: g.labels().iter().map(|&v| (v, None)).collect(),
        }
    }

    /// Builds a partner map from raw pairs without validation. Later pairs
    /// overwrite earlier entries, so a vertex listed twice leaves the map
    /// asymmetric and [`verify_matching`] rejects it.
    pub fn from_pairs(pairs: &[(Label, Label)]) -> Matching {
        let mut partner = HashMap::new();
        for &(u, v) in pairs {
            partner.insert(u, Some(v));
            partner.insert(v, Some(u));
        }
        Matching { partner }
    }

    /// Like [`Matching::from_pairs`] but also records every other vertex of
    /// `g` as exposed.
    pub fn from_pairs_in(g: &Graph, pairs: &[(Label, Label)]) -> Matching {
        let mut m = Matching::empty(g);
        for &(u, v) in pairs {
            m.partner.insert(u, Some(v));
            m.partner.insert(v, Some(u));
        }
        m
    }

    pub fn partner(&self, v: Label) -> Option<Label> {
        self.partner.get(&v).copied().flatten()
    }

    pub fn is_exposed(&self, v: Label) -> bool {
        self.partner(v).is_none()
    }

    /// Number of matched pairs.
    pub fn size(&self) -> usize {
        self.pairs().len()
    }

    /// Matched pairs `(u, v)` with `u < v`, sorted. Only symmetric entries count.
    pub fn pairs(&self) -> Vec<(Label, Label)> {
        let mut out: Vec<(Label, Label)> = self
            .partner
            .iter()
            .filter_map(|(&u, &p)| p.map(|v| (u, v)))
            .filter(|&(u, v)| u < v && self.partner(v) == Some(u))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices of `g` left uncovered, ascending.
    pub fn exposed(&self, g: &Graph) -> Vec<Label> {
        g.labels()
            .iter()
            .copied()
            .filter(|&v| self.is_exposed(v))
            .collect()
    }

    /// Symmetric difference with the edges of `path`.
    pub fn augmented(&self, path: &AlternatingPath) -> Matching {
        let mut next = self.clone();
        for pair in path.vertices.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            next.partner.insert(a, Some(b));
            next.partner.insert(b, Some(a));
        }
        next
    }

    pub(crate) fn to_mates(&self, g: &Graph) -> Vec<usize> {
        g.labels()
            .iter()
            .map(|&v| {
                self.partner(v)
                    .and_then(|p| g.index_of(p))
                    .unwrap_or(NONE)
            })
            .collect()
    }

    pub(crate) fn from_mates(g: &Graph, mates: &[usize]) -> Matching {
        Matching {
            partner: mates
                .iter()
                .enumerate()
                .map(|(i, &m)| (g.label_at(i), (m != NONE).then(|| g.label_at(m))))
                .collect(),
        }
    }
}

/// A path whose edges alternate between non-matching and matching edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingPath {
    pub vertices: Vec<Label>,
}

impl AlternatingPath {
    /// Whether this is an augmenting path for `m` in `g`: simple, adjacent
    /// steps, first/last edges outside `m`, alternating, exposed endpoints.
    pub fn is_augmenting(&self, g: &Graph, m: &Matching) -> bool {
        let vs = &self.vertices;
        if vs.len() < 2 || !vs.len().is_multiple_of(2) {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        if !vs.iter().all(|&v| g.contains(v) && seen.insert(v)) {
            return false;
        }
        if !m.is_exposed(vs[0]) || !m.is_exposed(vs[vs.len() - 1]) {
            return false;
        }
        vs.windows(2).enumerate().all(|(k, w)| {
            let in_matching = m.partner(w[0]) == Some(w[1]);
            g.is_edge(w[0], w[1]).unwrap_or(false) && in_matching == (k % 2 == 1)
        })
    }
}

/// True iff `m` is a symmetric partner map whose pairs are edges of `g`.
pub fn verify_matching(g: &Graph, m: &Matching) -> bool {
    m.partner.iter().all(|(&u, &p)| {
        if !g.contains(u) {
            return false;
        }
        match p {
            None => true,
            Some(v) => {
                u != v
                    && m.partner(v) == Some(u)
                    && g.is_edge(u, v).unwrap_or(false)
            }
        }
    })
}

/// Maximum matching. Deterministic: greedy seed in ascending order, then one
/// blossom search per exposed root in ascending order.
pub fn maximum_matching(g: &Graph) -> Matching {
    Matching::from_mates(g, &maximum_mates(g))
}

/// Size of a maximum matching.
pub fn matching_number(g: &Graph) -> usize {
    maximum_mates(g).iter().filter(|&&m| m != NONE).count() / 2
}

pub(crate) fn maximum_mates(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut mates = vec![NONE; n];
    for v in 0..n {
        if mates[v] == NONE {
            if let Some(&w) = g.adj_index(v).iter().find(|&&w| mates[w] == NONE) {
                mates[v] = w;
                mates[w] = v;
            }
        }
    }
    let mut search = BlossomSearch::new(g);
    for root in 0..n {
        if mates[root] == NONE {
            if let Some(path) = search.run(&mates, &[root]) {
                flip(&mut mates, &path);
            }
        }
    }
    mates
}

/// Returns an augmenting path for `m` if one exists; `None` certifies that
/// `m` is maximum.
pub fn find_augmenting_path(g: &Graph, m: &Matching) -> Result<Option<AlternatingPath>> {
    if !verify_matching(g, m) {
        return Err(Error::InvalidMatching(
            "not a valid matching of the graph".into(),
        ));
    }
    let mates = m.to_mates(g);
    let roots: Vec<usize> = (0..mates.len()).filter(|&i| mates[i] == NONE).collect();
    let mut search = BlossomSearch::new(g);
    Ok(search.run(&mates, &roots).map(|path| AlternatingPath {
        vertices: path.iter().map(|&i| g.label_at(i)).collect(),
    }))
}

/// All maximum matchings, by backtracking over the edge list. Exponential,
/// so guarded at 24 edges.
pub fn enumerate_maximum_matchings(g: &Graph) -> Result<Vec<Matching>> {
    const EDGE_LIMIT: usize = 24;
    let edges = g.edges();
    if edges.len() > EDGE_LIMIT {
        return Err(Error::Oversized {
            what: "matching enumeration (edges)",
            actual: edges.len(),
            limit: EDGE_LIMIT,
        });
    }

    struct Enumerator<'a> {
        edges: &'a [(Label, Label)],
        used: HashMap<Label, bool>,
        chosen: Vec<(Label, Label)>,
        best: usize,
        found: Vec<Vec<(Label, Label)>>,
    }

    impl Enumerator<'_> {
        fn go(&mut self, k: usize) {
            if self.chosen.len() + (self.edges.len() - k) < self.best {
                return;
            }
            if k == self.edges.len() {
                if self.chosen.len() > self.best {
                    self.best = self.chosen.len();
                    self.found.clear();
                }
                self.found.push(self.chosen.clone());
                return;
            }
            let (u, v) = self.edges[k];
            if !self.used[&u] && !self.used[&v] {
                self.used.insert(u, true);
                self.used.insert(v, true);
                self.chosen.push((u, v));
                self.go(k + 1);
                self.chosen.pop();
                self.used.insert(u, false);
                self.used.insert(v, false);
            }
            self.go(k + 1);
        }
    }

    let mut e = Enumerator {
        edges: &edges,
        used: g.labels().iter().map(|&v| (v, false)).collect(),
        chosen: Vec::new(),
        best: 0,
        found: Vec::new(),
    };
    e.go(0);
    // a non-maximal subset can be recorded before a larger one resets the list
    let best = e.best;
    Ok(e
        .found
        .into_iter()
        .filter(|pairs| pairs.len() == best)
        .map(|pairs| Matching::from_pairs_in(g, &pairs))
        .collect())
}

fn flip(mates: &mut [usize], path: &[usize]) {
    for pair in path.chunks_exact(2) {
        mates[pair[0]] = pair[1];
        mates[pair[1]] = pair[0];
    }
}

/// Reusable state for alternating-forest searches over one graph.
pub(crate) struct BlossomSearch<'g> {
    g: &'g Graph,
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    root: Vec<usize>,
    in_blossom: Vec<bool>,
    mark: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl<'g> BlossomSearch<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        BlossomSearch {
            g,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            root: vec![NONE; n],
            in_blossom: vec![false; n],
            mark: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    /// Outer (even) vertices of the last search.
    pub(crate) fn outer(&self) -> &[bool] {
        &self.outer
    }

    /// Grows alternating trees from `roots` (all exposed under `mates`).
    /// Returns an augmenting path as a list of vertex indices, oriented from
    /// one exposed endpoint to the other, or `None` once the forest is
    /// exhausted. After `None`, [`Self::outer`] holds every vertex reachable
    /// from a root by an even-length alternating path.
    pub(crate) fn run(&mut self, mates: &[usize], roots: &[usize]) -> Option<Vec<usize>> {
        let n = self.g.vertex_count();
        self.parent.fill(NONE);
        self.outer.fill(false);
        self.root.fill(NONE);
        self.queue.clear();
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        for &r in roots {
            debug_assert_eq!(mates[r], NONE);
            self.outer[r] = true;
            self.root[r] = r;
            self.queue.push_back(r);
        }

        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.adj_index(v) {
                if self.base[v] == self.base[to] || mates[v] == to {
                    continue;
                }
                if self.outer[to] {
                    if self.root[v] != self.root[to] {
                        let mut path = self.walk_to_root(mates, v);
                        path.reverse();
                        path.extend(self.walk_to_root(mates, to));
                        return Some(path);
                    }
                    let lca = self.lca(mates, v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(mates, v, lca, to);
                    self.mark_path(mates, to, lca, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = lca;
                            if !self.outer[i] {
                                self.outer[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.root[to] = self.root[v];
                    let next = mates[to];
                    if next == NONE {
                        let mut path = vec![to];
                        path.extend(self.walk_to_root(mates, v));
                        path.reverse();
                        return Some(path);
                    }
                    self.outer[next] = true;
                    self.root[next] = self.root[v];
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    /// Even alternating path from outer vertex `v` back to its tree root.
    fn walk_to_root(&self, mates: &[usize], mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while mates[v] != NONE {
            let odd = mates[v];
            v = self.parent[odd];
            out.push(odd);
            out.push(v);
        }
        out
    }

    fn lca(&mut self, mates: &[usize], mut a: usize, mut b: usize) -> usize {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.fill(0);
            self.stamp = 1;
        }
        loop {
            a = self.base[a];
            self.mark[a] = self.stamp;
            if mates[a] == NONE {
                break;
            }
            a = self.parent[mates[a]];
        }
        loop {
            b = self.base[b];
            if self.mark[b] == self.stamp {
                return b;
            }
            b = self.parent[mates[b]];
        }
    }

    fn mark_path(&mut self, mates: &[usize], mut v: usize, lca: usize, mut child: usize) {
        while self.base[v] != lca {
            let odd = mates[v];
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[odd]] = true;
            self.parent[v] = child;
            child = odd;
            v = self.parent[odd];
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(1..=n, &edges).unwrap()
    }

    fn g(n: u32) -> Graph {
        Graph::divisibility(n).unwrap()
    }

    #[test]
    fn examples() {
        let m4 = maximum_matching(&g(4));
        assert_eq!(m4.size(), 2);
        assert!(m4.exposed(&g(4)).is_empty());

        let path = Graph::divisibility(3).unwrap();
        assert_eq!(maximum_matching(&path).size(), 1);

        let m16 = maximum_matching(&g(16));
        assert_eq!(m16.size(), 7);
        assert_eq!(m16.exposed(&g(16)).len(), 2);

        let m6 = maximum_matching(&g(6));
        assert_eq!(m6.size(), 3);
        assert!(verify_matching(&g(6), &Matching::from_pairs(&[(1, 5), (2, 4), (3, 6)])));
    }

    #[test]
    fn odd_cycle_needs_a_blossom() {
        // 5-cycle with a pendant on vertex 3; exposed root 1 must go around
        let graph = Graph::from_edges(1..=6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (3, 6)])
            .unwrap();
        let seed = Matching::from_pairs_in(&graph, &[(2, 3), (4, 5)]);
        let path = find_augmenting_path(&graph, &seed).unwrap().unwrap();
        assert!(path.is_augmenting(&graph, &seed));
        assert_eq!(seed.augmented(&path).size(), 3);
        assert_eq!(maximum_matching(&graph).size(), 3);
    }

    #[test]
    fn augmenting_path_examples() {
        let g4 = g(4);
        let partial = Matching::from_pairs_in(&g4, &[(1, 2)]);
        let p = find_augmenting_path(&g4, &partial).unwrap().unwrap();
        assert!(p.is_augmenting(&g4, &partial));

        let perfect = Matching::from_pairs_in(&g4, &[(1, 3), (2, 4)]);
        assert_eq!(find_augmenting_path(&g4, &perfect).unwrap(), None);

        let g2 = g(2);
        let p = find_augmenting_path(&g2, &Matching::empty(&g2)).unwrap().unwrap();
        assert_eq!(p.vertices, vec![1, 2]);

        let bad = Matching::from_pairs(&[(4, 6)]);
        assert!(find_augmenting_path(&g(10), &bad).is_err());
    }

    #[test]
    fn verify_examples() {
        let g4 = g(4);
        assert!(verify_matching(&g4, &Matching::from_pairs(&[(1, 3), (2, 4)])));
        assert!(!verify_matching(&g4, &Matching::from_pairs(&[(1, 2), (2, 4)])));
        assert!(!verify_matching(&g(10), &Matching::from_pairs(&[(4, 6)])));
        assert!(!verify_matching(&g4, &Matching::from_pairs(&[(1, 7)])));
    }

    #[test]
    fn enumeration_examples() {
        let pairs = |ms: Vec<Matching>| ms.iter().map(Matching::pairs).collect::<Vec<_>>();
        assert_eq!(
            pairs(enumerate_maximum_matchings(&g(3)).unwrap()),
            vec![vec![(1, 2)], vec![(1, 3)]]
        );
        assert_eq!(pairs(enumerate_maximum_matchings(&g(2)).unwrap()), vec![vec![(1, 2)]]);
        assert_eq!(
            pairs(enumerate_maximum_matchings(&g(5)).unwrap()),
            vec![vec![(1, 3), (2, 4)], vec![(1, 5), (2, 4)]]
        );
        assert!(matches!(
            enumerate_maximum_matchings(&g(30)),
            Err(Error::Oversized { .. })
        ));
    }

    #[test]
    fn agrees_with_enumeration_on_small_divisibility_graphs() {
        for n in 1..=10 {
            let graph = g(n);
            let best = enumerate_maximum_matchings(&graph).unwrap();
            let m = maximum_matching(&graph);
            assert!(verify_matching(&graph, &m));
            assert_eq!(m.size(), best[0].size(), "n={n}");
        }
    }

    #[test]
    fn agrees_with_enumeration_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.random_range(1..=10);
            let graph = random_graph(&mut rng, n, 0.3);
            if graph.edge_count() > 24 {
                continue;
            }
            let best = enumerate_maximum_matchings(&graph).unwrap();
            let m = maximum_matching(&graph);
            assert!(verify_matching(&graph, &m));
            assert_eq!(m.size(), best[0].size());
            assert_eq!(find_augmenting_path(&graph, &m).unwrap(), None);
            checked += 1;
        }
    }

    #[test]
    fn augmenting_paths_on_random_partial_matchings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(2..=14);
            let graph = random_graph(&mut rng, n, 0.35);
            // random maximal-ish matching by shuffled greedy
            let mut edges = graph.edges();
            for i in (1..edges.len()).rev() {
                edges.swap(i, rng.random_range(0..=i));
            }
            let mut taken = std::collections::HashSet::new();
            let mut pairs = Vec::new();
            for (u, v) in edges {
                if !taken.contains(&u) && !taken.contains(&v) && rng.random_bool(0.7) {
                    taken.insert(u);
                    taken.insert(v);
                    pairs.push((u, v));
                }
            }
            let m = Matching::from_pairs_in(&graph, &pairs);
            let nu = matching_number(&graph);
            match find_augmenting_path(&graph, &m).unwrap() {
                Some(path) => {
                    assert!(m.size() < nu);
                    assert!(path.is_augmenting(&graph, &m), "{path:?}");
                    let bigger = m.augmented(&path);
                    assert!(verify_matching(&graph, &bigger));
                    assert_eq!(bigger.size(), m.size() + 1);
                }
                None => assert_eq!(m.size(), nu),
            }
        }
    }

    #[test]
    fn deterministic() {
        for n in [16, 97, 300] {
            assert_eq!(maximum_matching(&g(n)), maximum_matching(&g(n)));
        }
    }

    #[test]
    fn berge_certificate_on_divisibility_graphs() {
        for n in 1..=120 {
            let graph = g(n);
            let m = maximum_matching(&graph);
            assert!(verify_matching(&graph, &m));
            assert_eq!(find_augmenting_path(&graph, &m).unwrap(), None, "n={n}");
        }
    }
}
