//! Exact computations on order, chain and stable set polytopes, their Cayley
//! and Minkowski sums, Ehrhart δ-polynomials, and degree-truncated toric
//! initial ideals.
//!
//! All arithmetic is on integers; there is no floating point anywhere in the
//! crate.

mod canon;
pub mod ehrhart;
pub mod error;
pub mod family;
pub mod geometry;
pub mod graph;
pub mod linalg;
pub mod poset;
pub mod toric;

pub use error::{Error, Result};
pub use family::SubsetFamily;
pub use geometry::{
    build_polytope, cayley_flip_transform, cayley_sum, chain_polytope, gamma, minkowski_sum,
    oda_failure, oda_holds, order_polytope, stable_set_polytope, AffineUnimodularMap,
    Combinatorial, Facet, HalfspaceRep, IdpReport, LatticePolytope, Point, PolytopeKind,
};
pub use graph::{enumerate_graphs, Graph, OddStructure, OddStructureKind};
pub use poset::{enumerate_posets, EnumMode, Poset};

/// Resource caps shared by the enumerating routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Lattice points visited by a single scan.
    pub max_points: u64,
    /// Monomials enumerated by a single toric computation.
    pub max_monomials: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_points: 50_000_000,
            max_monomials: 20_000_000,
        }
    }
}
