//! Fixtures shared by the benchmarks.

use polycay::{Graph, Poset};

/// The poset `1 < 3, 2 < 3, 2 < 4` with the path on 4 vertices.
pub fn small_pair() -> (Poset, Graph) {
    let p = Poset::from_relations(4, &[(0, 2), (1, 2), (1, 3)]).expect("valid poset");
    (p, Graph::path(4))
}

/// A zigzag on `d` elements.
pub fn zigzag(d: usize) -> Poset {
    let rels: Vec<(usize, usize)> = (0..d.saturating_sub(1))
        .map(|i| if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) })
        .collect();
    Poset::from_relations(d, &rels).expect("zigzag is acyclic")
}
