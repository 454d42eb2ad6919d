//! Butterfly network generation and its two vertex labelings.
//!
//! Vertices of `BF(r)` are pairs `(x, i)` with `x` in `0..2^r` (bit `j-1` of
//! `x` is the `j`-th coordinate of the binary vector) and level `i` in `0..=r`.
//! Level `i` is joined to level `i - 1` by `(x, i-1) ~ (x, i)` and
//! `(x, i-1) ~ (x ^ 2^(i-1), i)`.
//!
//! Internally the layer id of `(x, i)` is `i * 2^r + x`. The recursive
//! numbering `f(x, i)` (1-based) orders vertices so that the adjacency matrix
//! of `BF(r)` contains two copies of the one for `BF(r-1)` on its diagonal.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::linalg::{ExactMatrix, FieldTag};

/// Default cap on `(r+1) 2^r`, about 16.7 million vertices.
pub const DEFAULT_MAX_VERTICES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerVertex {
    pub x: usize,
    pub i: u32,
}

impl std::fmt::Display for LayerVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.i)
    }
}

/// Which vertex order a matrix or vertex set is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// Layer id `i * 2^r + x`.
    Layer,
    /// Recursive number `f(x, i) - 1`.
    Recursive,
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "layer" => Ok(Ordering::Layer),
            "recursive" => Ok(Ordering::Recursive),
            _ => domain(format!("unknown ordering {s:?}, expected layer|recursive")),
        }
    }
}

/// `g(x)`: the bit length of `x`, with `g(0) = -1`.
pub fn g_of(x: i64) -> Result<i32> {
    match x {
        x if x < 0 => domain(format!("g is undefined for negative input {x}")),
        0 => Ok(-1),
        x => Ok(64 - x.leading_zeros() as i32),
    }
}

/// The recursive vertex number `f(x, i)`, 1-based.
///
/// Evaluated by peeling the top set bit of `x` while `i < g(x)`; each peel
/// adds `g 2^(g-1)`. Panics on `u64` overflow (only for `i` above about 57).
pub fn f_of(x: u64, i: u32) -> u64 {
    let mut x = x;
    let mut acc: u64 = 0;
    while x > 0 {
        let g = 64 - x.leading_zeros();
        if i >= g {
            break;
        }
        acc += u64::from(g) << (g - 1);
        x -= 1 << (g - 1);
    }
    let base = u64::from(i).checked_mul(1u64 << i).expect("f(x, i) overflows u64");
    acc + base + x + 1
}

/// Bijection between layer ids and recursive numbers for a fixed `r`.
#[derive(Clone, Debug)]
pub struct ButterflyLabeling {
    r: u32,
    to_recursive: Vec<usize>,
    to_layer: Vec<usize>,
}

impl ButterflyLabeling {
    pub fn new(r: u32) -> Result<Self> {
        let n = vertex_count(r).ok_or_else(|| Error::Resource(format!("BF({r}) is too large")))?;
        let width = 1usize << r;
        let mut to_recursive = vec![0; n];
        let mut to_layer = vec![usize::MAX; n];
        for i in 0..=r {
            for x in 0..width {
                let id = i as usize * width + x;
                let label = f_of(x as u64, i) as usize;
                if label == 0 || label > n || to_layer[label - 1] != usize::MAX {
                    return Err(Error::Invariant(format!("f is not a bijection at ({x},{i})")));
                }
                to_recursive[id] = label;
                to_layer[label - 1] = id;
            }
        }
        Ok(Self { r, to_recursive, to_layer })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.to_layer.len()
    }

    pub fn width(&self) -> usize {
        1 << self.r
    }

    pub fn layer_id(&self, v: LayerVertex) -> usize {
        v.i as usize * self.width() + v.x
    }

    pub fn layer_vertex(&self, id: usize) -> LayerVertex {
        LayerVertex { x: id % self.width(), i: (id / self.width()) as u32 }
    }

    /// 1-based recursive number of a layer id.
    pub fn recursive_label(&self, layer_id: usize) -> usize {
        self.to_recursive[layer_id]
    }

    /// Layer id carrying the 1-based recursive number `label`.
    pub fn layer_of_label(&self, label: usize) -> usize {
        self.to_layer[label - 1]
    }

    /// Permutation sending layer ids to 0-based recursive indices.
    pub fn layer_to_recursive_index(&self) -> Vec<usize> {
        self.to_recursive.iter().map(|l| l - 1).collect()
    }

    /// Re-expresses a layer-ordered vertex set in 0-based recursive indices.
    pub fn set_to_recursive(&self, s: &VertexSet) -> Result<VertexSet> {
        s.mapped(self.n(), |v| self.to_recursive[v] - 1)
    }

    pub fn set_to_layer(&self, s: &VertexSet) -> Result<VertexSet> {
        s.mapped(self.n(), |v| self.to_layer[v])
    }
}

/// `BF(r)` in layer ids together with its labeling.
#[derive(Clone, Debug)]
pub struct Butterfly {
    pub graph: Graph,
    pub labeling: ButterflyLabeling,
}

impl Butterfly {
    pub fn r(&self) -> u32 {
        self.labeling.r
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// The graph relabeled by `f - 1`.
    pub fn recursive_graph(&self) -> Graph {
        self.graph.permuted(&self.labeling.layer_to_recursive_index()).expect("labeling is a permutation")
    }

    pub fn adjacency_matrix(&self, ordering: Ordering, field: FieldTag) -> ExactMatrix {
        match ordering {
            Ordering::Layer => ExactMatrix::from_graph(&self.graph, field),
            Ordering::Recursive => ExactMatrix::from_graph(&self.recursive_graph(), field),
        }
    }

    /// Display label for a layer id in the requested ordering.
    pub fn label(&self, layer_id: usize, ordering: Ordering) -> String {
        match ordering {
            Ordering::Layer => self.labeling.layer_vertex(layer_id).to_string(),
            Ordering::Recursive => self.labeling.recursive_label(layer_id).to_string(),
        }
    }
}

/// `(r + 1) 2^r`, or `None` on overflow.
pub fn vertex_count(r: u32) -> Option<usize> {
    if r >= usize::BITS - 8 {
        return None;
    }
    (r as usize + 1).checked_mul(1usize << r)
}

pub fn generate(r: u32) -> Result<Butterfly> {
    generate_with_cap(r, DEFAULT_MAX_VERTICES)
}

pub fn generate_with_cap(r: u32, max_vertices: usize) -> Result<Butterfly> {
    if r < 1 {
        return domain("butterfly order must be at least 1");
    }
    let n = match vertex_count(r) {
        Some(n) if n <= max_vertices => n,
        _ => return Err(Error::Resource(format!("BF({r}) exceeds the vertex cap of {max_vertices}"))),
    };
    let width = 1usize << r;
    let mut b = GraphBuilder::new(n);
    for i in 1..=r as usize {
        let bit = 1usize << (i - 1);
        for x in 0..width {
            let lower = (i - 1) * width + x;
            b.add_edge(lower, i * width + x)?;
            b.add_edge(lower, i * width + (x ^ bit))?;
        }
    }
    Ok(Butterfly { graph: b.build(), labeling: ButterflyLabeling::new(r)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_values() {
        assert_eq!(g_of(0).unwrap(), -1);
        assert_eq!(g_of(1).unwrap(), 1);
        assert_eq!(g_of(6).unwrap(), 3);
        assert_eq!(g_of(8).unwrap(), 4);
        assert!(g_of(-1).is_err());
    }

    #[test]
    fn f_worked_examples() {
        assert_eq!(f_of(6, 3), 31);
        assert_eq!(f_of(6, 2), 23);
        assert_eq!(f_of(6, 1), 19);
        assert_eq!(f_of(0, 0), 1);
    }

    #[test]
    fn small_orders() {
        let bf = generate(1).unwrap();
        assert_eq!((bf.n(), bf.graph.edge_count()), (4, 4));
        assert!((0..4).all(|v| bf.graph.degree(v) == 2));
        let bf = generate(3).unwrap();
        assert_eq!((bf.n(), bf.graph.edge_count()), (32, 48));
        let bf = generate(4).unwrap();
        assert_eq!((bf.n(), bf.graph.edge_count()), (80, 128));
    }

    #[test]
    fn generation_errors() {
        assert!(matches!(generate(0), Err(Error::Domain(_))));
        assert!(matches!(generate_with_cap(5, 100), Err(Error::Resource(_))));
        assert!(matches!(generate(60), Err(Error::Resource(_))));
    }

    #[test]
    fn bf1_neighborhood_of_origin() {
        let bf = generate(1).unwrap();
        let l = &bf.labeling;
        let v = l.layer_id(LayerVertex { x: 0, i: 0 });
        let nbrs = bf.graph.open_neighborhood(v).unwrap().to_vec();
        let expect = vec![l.layer_id(LayerVertex { x: 0, i: 1 }), l.layer_id(LayerVertex { x: 1, i: 1 })];
        assert_eq!(nbrs, expect);
    }

    #[test]
    fn ordering_parse() {
        assert_eq!("layer".parse::<Ordering>().unwrap(), Ordering::Layer);
        assert_eq!("recursive".parse::<Ordering>().unwrap(), Ordering::Recursive);
        assert!("rows".parse::<Ordering>().is_err());
    }
}
