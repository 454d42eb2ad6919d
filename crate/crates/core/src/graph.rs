//! Simple undirected graphs over `0..n` and dense vertex sets.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A set of vertex ids drawn from `0..capacity`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        Self { bits: FixedBitSet::with_capacity(capacity) }
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_ids(capacity: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::new(capacity);
        for v in ids {
            if v >= capacity {
                return domain(format!("vertex {v} out of range 0..{capacity}"));
            }
            set.bits.insert(v);
        }
        Ok(set)
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.capacity()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Inserts `v`, returning `true` if it was absent. Panics if `v` is out of range.
    pub fn insert(&mut self, v: usize) -> bool {
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    /// Image of the set under `map`, into a set of the given capacity.
    pub fn mapped(&self, capacity: usize, mut map: impl FnMut(usize) -> usize) -> Result<Self> {
        Self::from_ids(capacity, self.iter().map(&mut map))
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn open_neighborhood(&self, v: usize) -> Result<VertexSet> {
        if v >= self.n() {
            return domain(format!("vertex {v} out of range 0..{}", self.n()));
        }
        VertexSet::from_ids(self.n(), self.adjacency[v].iter().copied())
    }

    /// `N[S]`: the set together with every neighbor of a member.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        let mut out = s.clone();
        for v in s.iter() {
            for &w in &self.adjacency[v] {
                out.insert(w);
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> Result<usize> {
        match self.adjacency.iter().map(Vec::len).max() {
            Some(d) => Ok(d),
            None => domain("maximum degree of the empty graph"),
        }
    }

    pub(crate) fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.capacity() != self.n() {
            return domain(format!("vertex set over 0..{} used with a graph on {} vertices", s.capacity(), self.n()));
        }
        Ok(())
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n() {
            return domain("permutation length differs from vertex count");
        }
        let mut b = GraphBuilder::new(self.n());
        for (u, v) in self.edges() {
            b.add_edge(perm[u], perm[v])?;
        }
        let g = b.build();
        if g.edge_count != self.edge_count {
            return domain("relabeling is not a permutation");
        }
        Ok(g)
    }

    /// Text format: `n m` on the first line, then one `u v` line per edge with `u < v`, ascending.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut b = GraphBuilder::new(n);
        let mut seen = 0;
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            let fresh = b.add_edge(u, v).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            if !fresh {
                return Err(Error::Parse { line, msg: format!("duplicate edge {u} {v}") });
            }
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse { line: hline, msg: format!("header promises {m} edges, found {seen}") });
        }
        Ok(b.build())
    }

    /// Graphviz export. `label` supplies an optional display label per vertex.
    pub fn to_dot(&self, label: impl Fn(usize) -> Option<String>) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            match label(v) {
                Some(l) => {
                    let _ = writeln!(out, "  {v} [label=\"{l}\"];");
                }
                None => {
                    let _ = writeln!(out, "  {v};");
                }
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize)> {
    let mut it =
        l.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line, msg: format!("{t:?}: {e}") }));
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse { line, msg: "expected two integers".into() }),
    }
}

/// Parses whitespace-separated vertex ids.
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>> {
    let mut ids = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap_or("");
        for t in l.split(|c: char| c.is_whitespace() || c == ',') {
            if t.is_empty() {
                continue;
            }
            ids.push(t.parse().map_err(|e| Error::Parse { line: i + 1, msg: format!("{t:?}: {e}") })?);
        }
    }
    Ok(ids)
}

#[derive(Clone, Debug)]
pub struct GraphBuilder {
    adjacency: Vec<Vec<usize>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self { adjacency: vec![Vec::new(); n] }
    }

    /// Adds `{u, v}`. Returns `Ok(false)` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adjacency.len();
        if u >= n || v >= n {
            return domain(format!("edge {u} {v} out of range 0..{n}"));
        }
        if u == v {
            return domain(format!("self-loop at {u}"));
        }
        if self.adjacency[u].contains(&v) {
            return Ok(false);
        }
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        Ok(true)
    }

    pub fn build(mut self) -> Graph {
        let mut degree_sum = 0;
        for adj in &mut self.adjacency {
            adj.sort_unstable();
            degree_sum += adj.len();
        }
        Graph { adjacency: self.adjacency, edge_count: degree_sum / 2 }
    }
}

/// Serializable sorted id list, used by JSON outputs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct IdList(pub Vec<usize>);

impl From<&VertexSet> for IdList {
    fn from(s: &VertexSet) -> Self {
        IdList(s.to_vec())
    }
}
