//! Maximum-cardinality matching on general graphs.
//!
//! Small graphs are solved by exhaustive branch-and-bound. Larger graphs start
//! from a greedy matching and grow it with Edmonds' augmenting-path search
//! (blossom contraction), which is also exact.

use std::collections::VecDeque;

use crate::graph::MeshGraph;

/// Default vertex count up to which the exhaustive search is used.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingMethod {
    Exhaustive,
    Augmenting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Indices into `MeshGraph::edges` of the matched edges, ascending.
    pub edges: Vec<usize>,
    pub method: MatchingMethod,
}

impl Matching {
    pub fn cardinality(&self) -> usize {
        self.edges.len()
    }
}

/// Size of a maximum matching, using the default brute-force limit.
pub fn max_matching_cardinality(g: &MeshGraph) -> usize {
    max_matching(g, DEFAULT_BRUTE_FORCE_LIMIT).cardinality()
}

/// A maximum matching: exhaustive for `V <= brute_force_limit`, augmenting
/// paths otherwise.
pub fn max_matching(g: &MeshGraph, brute_force_limit: usize) -> Matching {
    if g.vertex_count() <= brute_force_limit {
        exhaustive_matching(g)
    } else {
        augmenting_matching(g)
    }
}

/// Exhaustive search over all matchings with a simple cardinality bound.
pub fn exhaustive_matching(g: &MeshGraph) -> Matching {
    let n = g.vertex_count();
    let incident = g.incident_edges();
    let mut state = Search {
        edges: g.edges(),
        incident: &incident,
        used: vec![false; n],
        current: Vec::new(),
        best: Vec::new(),
    };
    state.descend(0, n);
    let mut edges = state.best;
    edges.sort_unstable();
    Matching {
        edges,
        method: MatchingMethod::Exhaustive,
    }
}

struct Search<'a> {
    edges: &'a [[usize; 2]],
    incident: &'a [Vec<usize>],
    used: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Search<'_> {
    /// Decide vertex `v`: leave it unmatched or match it to a later free neighbor.
    fn descend(&mut self, mut v: usize, free_left: usize) {
        let n = self.used.len();
        while v < n && self.used[v] {
            v += 1;
        }
        if self.current.len() + free_left / 2 <= self.best.len() {
            return;
        }
        if v == n {
            self.best = self.current.clone();
            return;
        }
        for &e in &self.incident[v] {
            let [a, b] = self.edges[e];
            let u = if a == v { b } else { a };
            if !self.used[u] {
                self.used[v] = true;
                self.used[u] = true;
                self.current.push(e);
                self.descend(v + 1, free_left - 2);
                self.current.pop();
                self.used[u] = false;
                self.used[v] = false;
            }
        }
        self.used[v] = true;
        self.descend(v + 1, free_left - 1);
        self.used[v] = false;
    }
}

/// Greedy initial matching grown to maximum with Edmonds' blossom algorithm.
pub fn augmenting_matching(g: &MeshGraph) -> Matching {
    let n = g.vertex_count();
    let adj = g.neighbors();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    for &[u, v] in g.edges() {
        if mate[u].is_none() && mate[v].is_none() {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
    }
    let mut blossom = Blossom::new(n);
    for root in 0..n {
        if mate[root].is_none() {
            if let Some(end) = blossom.find_path(root, &adj, &mate) {
                augment(end, &blossom.parent, &mut mate);
            }
        }
    }
    let mut edges: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &[u, v])| mate[u] == Some(v))
        .map(|(i, _)| i)
        .collect();
    edges.sort_unstable();
    Matching {
        edges,
        method: MatchingMethod::Augmenting,
    }
}

fn augment(mut v: usize, parent: &[Option<usize>], mate: &mut [Option<usize>]) {
    loop {
        let pv = parent[v].expect("augmenting path is rooted");
        let next = mate[pv];
        mate[v] = Some(pv);
        mate[pv] = Some(v);
        match next {
            Some(w) => v = w,
            None => break,
        }
    }
}

struct Blossom {
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        Blossom {
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    /// BFS over alternating paths from `root`; returns the free vertex that
    /// ends an augmenting path, with `parent` links describing it.
    fn find_path(&mut self, root: usize, adj: &[Vec<usize>], mate: &[Option<usize>]) -> Option<usize> {
        let n = adj.len();
        self.parent.iter_mut().for_each(|p| *p = None);
        self.used.iter_mut().for_each(|u| *u = false);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || mate[v] == Some(to) {
                    continue;
                }
                if to == root || mate[to].is_some_and(|m| self.parent[m].is_some()) {
                    let cur_base = self.lca(v, to, mate);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur_base, to, mate);
                    self.mark_path(to, cur_base, v, mate);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur_base;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn lca(&self, mut a: usize, mut b: usize, mate: &[Option<usize>]) -> usize {
        let mut seen = vec![false; self.base.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match mate[a].and_then(|m| self.parent[m]) {
                Some(next) => a = next,
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b].expect("inner vertex is matched")].expect("tree link");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, mate: &[Option<usize>]) {
        while self.base[v] != b {
            let m = mate[v].expect("outer vertex below the base is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("tree link");
        }
    }
}
