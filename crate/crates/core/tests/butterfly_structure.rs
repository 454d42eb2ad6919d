use butterfly_core::butterfly::{generate, vertex_count, LayerVertex, Ordering};
use butterfly_core::linalg::{ExactMatrix, FieldTag};
use butterfly_core::{f_of, GraphBuilder};

/// The printed 12×12 matrix for BF(2) in recursive order.
pub const A2_PRINTED: [[u8; 12]; 12] = [
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
];

#[test]
fn degrees_and_edge_counts_up_to_12() {
    for r in 1..=12u32 {
        let bf = generate(r).unwrap();
        let g = &bf.graph;
        assert_eq!(g.n(), (r as usize + 1) << r);
        assert_eq!(g.edge_count(), (r as usize) << (r + 1));
        let width = 1usize << r;
        for v in 0..g.n() {
            let level = v / width;
            let expect = if r == 1 || level == 0 || level == r as usize { 2 } else { 4 };
            assert_eq!(g.degree(v), expect, "r={r} v={v}");
            for &w in g.neighbors(v) {
                assert!(g.has_edge(w, v));
                assert_ne!(w, v);
            }
        }
        let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }
}

#[test]
fn edges_follow_the_bit_flip_rule() {
    // Brute enumeration of all pairs for r = 3 against the level/bit definition.
    let r = 3u32;
    let bf = generate(r).unwrap();
    let l = &bf.labeling;
    let n = bf.n();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (l.layer_vertex(a), l.layer_vertex(b));
            let adjacent = v.i == u.i + 1 && (v.x == u.x || v.x == u.x ^ (1 << u.i));
            assert_eq!(bf.graph.has_edge(a, b), adjacent, "{u} {v}");
            count += adjacent as usize;
        }
    }
    assert_eq!(count, 48);
}

#[test]
fn neighborhood_examples() {
    let bf = generate(2).unwrap();
    let mid = bf.labeling.layer_id(LayerVertex { x: 0, i: 1 });
    let nbrs: Vec<LayerVertex> =
        bf.graph.open_neighborhood(mid).unwrap().iter().map(|v| bf.labeling.layer_vertex(v)).collect();
    let expect = [(0, 0), (1, 0), (0, 2), (2, 2)].map(|(x, i)| LayerVertex { x, i });
    assert_eq!(nbrs, expect);

    let bf1 = generate(1).unwrap();
    let origin = bf1.labeling.layer_id(LayerVertex { x: 0, i: 0 });
    let s = butterfly_core::VertexSet::from_ids(4, [origin]).unwrap();
    let closed: Vec<_> =
        bf1.graph.closed_neighborhood(&s).unwrap().iter().map(|v| bf1.labeling.layer_vertex(v)).collect();
    assert_eq!(closed, [(0, 0), (0, 1), (1, 1)].map(|(x, i)| LayerVertex { x, i }));

    assert_eq!(generate(1).unwrap().graph.max_degree().unwrap(), 2);
    assert_eq!(generate(4).unwrap().graph.max_degree().unwrap(), 4);
    let mut k2 = GraphBuilder::new(2);
    k2.add_edge(0, 1).unwrap();
    assert_eq!(k2.build().max_degree().unwrap(), 1);
}

#[test]
fn recursive_numbering_is_a_bijection_up_to_12() {
    for r in 1..=12u32 {
        let n = vertex_count(r).unwrap();
        let mut hit = vec![false; n + 1];
        for i in 0..=r {
            for x in 0..1u64 << r {
                let f = f_of(x, i) as usize;
                assert!((1..=n).contains(&f), "f({x},{i}) = {f} out of range for r={r}");
                assert!(!hit[f], "f({x},{i}) = {f} repeated for r={r}");
                hit[f] = true;
            }
        }
    }
}

#[test]
fn f_agrees_with_its_recursive_definition() {
    fn g(x: u64) -> i64 {
        if x == 0 {
            -1
        } else {
            (x as f64).log2().floor() as i64 + 1
        }
    }
    fn f_rec(x: u64, i: u32) -> u64 {
        let gx = g(x);
        if i as i64 >= gx {
            i as u64 * (1 << i) + x + 1
        } else {
            let gx = gx as u32;
            gx as u64 * (1 << (gx - 1)) + f_rec(x - (1 << (gx - 1)), i)
        }
    }
    for x in 0..4096 {
        for i in 0..=13 {
            assert_eq!(f_of(x, i), f_rec(x, i), "({x},{i})");
        }
    }
}

#[test]
fn golden_matrices() {
    let a1 = generate(1).unwrap().adjacency_matrix(Ordering::Recursive, FieldTag::GF2).to_dense();
    assert_eq!(a1, vec![vec![0, 0, 1, 1], vec![0, 0, 1, 1], vec![1, 1, 0, 0], vec![1, 1, 0, 0]]);
    let a2 = generate(2).unwrap().adjacency_matrix(Ordering::Recursive, FieldTag::GF2).to_dense();
    let printed: Vec<Vec<u8>> = A2_PRINTED.iter().map(|r| r.to_vec()).collect();
    assert_eq!(a2, printed);
}

#[test]
fn recursive_matrix_has_the_block_recursion() {
    for r in 2..=8u32 {
        let a = generate(r).unwrap().adjacency_matrix(Ordering::Recursive, FieldTag::GF2);
        let prev = generate(r - 1).unwrap().adjacency_matrix(Ordering::Recursive, FieldTag::GF2).to_dense();
        let h = 1usize << (r - 1);
        let m = r as usize * h;
        let n = a.n();
        assert_eq!(n, 2 * m + 2 * h);
        assert_eq!(a.block(0..m, 0..m), prev, "r={r} first diagonal block");
        assert_eq!(a.block(m..2 * m, m..2 * m), prev, "r={r} second diagonal block");
        assert!(a.block(0..m, m..2 * m).iter().flatten().all(|&e| e == 0));
        assert!(a.block(2 * m..n, 2 * m..n).iter().flatten().all(|&e| e == 0));
        // Last band: [0 I 0 I] over both halves, identity blocks of size 2^(r-1).
        for row in 0..2 * h {
            for col in 0..2 * m {
                let in_first = col >= m - h && col < m && col - (m - h) == row % h;
                let in_second = col >= 2 * m - h && col - (2 * m - h) == row % h;
                assert_eq!(a.entry(2 * m + row, col), in_first || in_second, "r={r} ({row},{col})");
            }
        }
    }
}

#[test]
fn layer_and_recursive_orderings_are_permutation_similar() {
    for r in 1..=6u32 {
        let bf = generate(r).unwrap();
        let layer = bf.adjacency_matrix(Ordering::Layer, FieldTag::GF2);
        let rec = bf.adjacency_matrix(Ordering::Recursive, FieldTag::GF2);
        let perm = bf.labeling.layer_to_recursive_index();
        assert_eq!(layer.permuted(&perm).unwrap(), rec);
        assert_eq!(layer.rank(), rec.rank());
        let m = ExactMatrix::from_graph(&bf.recursive_graph(), FieldTag::GF2);
        assert_eq!(m, rec);
    }
}

#[test]
fn labels_round_trip() {
    let bf = generate(5).unwrap();
    let l = &bf.labeling;
    for id in 0..bf.n() {
        let v = l.layer_vertex(id);
        assert_eq!(l.layer_id(v), id);
        assert_eq!(l.layer_of_label(l.recursive_label(id)), id);
        assert_eq!(l.recursive_label(id) as u64, f_of(v.x as u64, v.i));
    }
}
