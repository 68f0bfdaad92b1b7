//! Exact lattice polytopes in `Z^D`.
//!
//! A [`LatticePolytope`] is the convex hull of a finite set of integer
//! generators. Facets and vertices are derived on first use and cached; the
//! cache is a [`OnceLock`], so shared references can be read from several
//! threads.

mod dd;
mod lattice;
mod map;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::family::indicator;
use crate::graph::Graph;
use crate::linalg;
use crate::poset::Poset;
use crate::Limits;

pub use map::{cayley_flip_transform, AffineUnimodularMap, CayleyFlipResult};

use lattice::Scan;

/// An integer point.
pub type Point = Vec<i64>;

/// The inequality `⟨normal, x⟩ ≤ rhs` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rhs: i64,
}

impl Facet {
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Irredundant facet description, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceRep {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

impl HalfspaceRep {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) <= f.rhs)
    }

    pub fn contains_in_interior(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.eval(x) < f.rhs)
    }
}

/// Which 0/1-polytope to build from a poset or graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolytopeKind {
    Order,
    Chain,
    StableSet,
}

/// Input object for [`build_polytope`].
#[derive(Debug, Clone, Copy)]
pub enum Combinatorial<'a> {
    Poset(&'a Poset),
    Graph(&'a Graph),
}

pub struct LatticePolytope {
    dim: usize,
    generators: Vec<Point>,
    facets: OnceLock<Result<HalfspaceRep>>,
    vertices: OnceLock<Result<Vec<Point>>>,
}

impl Clone for LatticePolytope {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            generators: self.generators.clone(),
            facets: self.facets.clone(),
            vertices: self.vertices.clone(),
        }
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LatticePolytope(dim {}, {:?})",
            self.dim, self.generators
        )
    }
}

impl PartialEq for LatticePolytope {
    /// Equality of generator sets (not of the convex hulls).
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }
}

impl LatticePolytope {
    /// Convex hull of `generators` in `Z^dim`. Duplicates are removed and the
    /// generators sorted.
    pub fn new(dim: usize, generators: Vec<Point>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput(
                "polytope needs at least one generator".into(),
            ));
        }
        if dim == 0 {
            return Err(Error::InvalidInput(
                "ambient dimension must be positive".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        let set: BTreeSet<Point> = generators.into_iter().collect();
        Ok(Self {
            dim,
            generators: set.into_iter().collect(),
            facets: OnceLock::new(),
            vertices: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn affine_dimension(&self) -> Result<usize> {
        dd::affine_dimension(&self.generators)
    }

    pub fn is_full_dimensional(&self) -> Result<bool> {
        Ok(self.affine_dimension()? == self.dim)
    }

    /// Facet inequalities; requires full dimension.
    pub fn facet_representation(&self) -> Result<&HalfspaceRep> {
        self.facets
            .get_or_init(|| {
                dd::facets(self.dim, &self.generators).map(|facets| HalfspaceRep {
                    dim: self.dim,
                    facets,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Generators that are vertices: those whose tight facet normals span
    /// `R^D`.
    pub fn vertices(&self) -> Result<&[Point]> {
        self.vertices
            .get_or_init(|| {
                let rep = self.facet_representation()?;
                let mut out = Vec::new();
                for g in &self.generators {
                    let tight: Vec<Vec<i128>> = rep
                        .facets
                        .iter()
                        .filter(|f| f.eval(g) == f.rhs)
                        .map(|f| f.normal.iter().map(|&x| x as i128).collect())
                        .collect();
                    if tight.len() >= self.dim && linalg::rank(&tight)? == self.dim {
                        out.push(g.clone());
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Vertices when the polytope is full-dimensional, otherwise all
    /// generators.
    fn hull_points(&self) -> Result<&[Point]> {
        match self.vertices() {
            Ok(v) => Ok(v),
            Err(Error::NotFullDimensional { .. }) => Ok(&self.generators),
            Err(e) => Err(e),
        }
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        Ok(self.facet_representation()?.contains(x))
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.generators[0].clone();
        let mut hi = self.generators[0].clone();
        for g in &self.generators[1..] {
            for i in 0..self.dim {
                lo[i] = lo[i].min(g[i]);
                hi[i] = hi[i].max(g[i]);
            }
        }
        (lo, hi)
    }

    fn scan(&self, n: u64, interior: bool) -> Result<Scan<'_>> {
        if n == 0 {
            return Err(Error::ZeroDilation);
        }
        let rep = self.facet_representation()?;
        let (lo, hi) = self.bounding_box();
        Ok(Scan::new(rep, &lo, &hi, n as i64, interior))
    }

    /// Lattice points of `n·P` (of its interior when `interior_only`), sorted
    /// lexicographically.
    pub fn lattice_points(
        &self,
        n: u64,
        interior_only: bool,
        limits: &Limits,
    ) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        self.scan(n, interior_only)?
            .visit::<()>(limits.max_points, |x| {
                out.push(x.to_vec());
                ControlFlow::Continue(())
            })?;
        Ok(out)
    }

    /// `|n·P ∩ Z^D|` (or of the interior) without materialising the points.
    pub fn count_lattice_points(
        &self,
        n: u64,
        interior_only: bool,
        limits: &Limits,
    ) -> Result<u64> {
        self.scan(n, interior_only)?.count(limits.max_points)
    }

    /// Some interior lattice point of `n·P`, if any.
    pub fn find_interior_point(&self, n: u64, limits: &Limits) -> Result<Option<Point>> {
        self.scan(n, true)?
            .visit(limits.max_points, |x| ControlFlow::Break(x.to_vec()))
    }

    /// `k·P`.
    pub fn dilate(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroDilation);
        }
        let k = k as i64;
        Self::new(
            self.dim,
            self.generators
                .iter()
                .map(|g| g.iter().map(|&x| x * k).collect())
                .collect(),
        )
    }

    /// `P + v`.
    pub fn translate(&self, v: &[i64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Self::new(
            self.dim,
            self.generators
                .iter()
                .map(|g| g.iter().zip(v).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    /// `-P`.
    pub fn negate(&self) -> Self {
        Self::new(
            self.dim,
            self.generators
                .iter()
                .map(|g| g.iter().map(|&x| -x).collect())
                .collect(),
        )
        .expect("negation keeps dimension")
    }

    /// Index of the lattice generated by `{(a, 1) : a ∈ P ∩ Z^D}` in
    /// `Z^{D+1}`; 1 means those vectors span the whole lattice.
    pub fn affine_lattice_index(&self, limits: &Limits) -> Result<u128> {
        let rows: Vec<Vec<i128>> = self
            .lattice_points(1, false, limits)?
            .iter()
            .map(|p| p.iter().map(|&x| x as i128).chain([1]).collect())
            .collect();
        linalg::lattice_index(&rows)?.ok_or_else(|| {
            Error::Internal(
                "lattice points of a full-dimensional polytope span a full-rank lattice".into(),
            )
        })
    }

    /// Checks `P ∩ Z^D + k·P ∩ Z^D = (k+1)·P ∩ Z^D` for `1 ≤ k ≤ k_max`.
    pub fn is_idp(&self, k_max: u64, limits: &Limits) -> Result<IdpReport> {
        let rep = self.facet_representation()?;
        let base = self.lattice_points(1, false, limits)?;
        let base_vals: Vec<Vec<i64>> = base
            .iter()
            .map(|p| rep.facets.iter().map(|f| f.eval(p)).collect())
            .collect();
        for k in 1..=k_max {
            let bound: Vec<i64> = rep.facets.iter().map(|f| f.rhs * k as i64).collect();
            let failure = self.scan(k + 1, false)?.visit(limits.max_points, |x| {
                let xv: Vec<i64> = rep.facets.iter().map(|f| f.eval(x)).collect();
                let decomposes = base_vals
                    .iter()
                    .any(|pv| xv.iter().zip(pv).zip(&bound).all(|((a, b), c)| a - b <= *c));
                if decomposes {
                    ControlFlow::Continue(())
                } else {
                    ControlFlow::Break(x.to_vec())
                }
            })?;
            if let Some(point) = failure {
                return Ok(IdpReport {
                    holds: false,
                    k_max,
                    failure: Some(IdpFailure { k, point }),
                });
            }
        }
        Ok(IdpReport {
            holds: true,
            k_max,
            failure: None,
        })
    }
}

/// Outcome of a bounded IDP check. `holds` means "IDP up to `k_max`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdpReport {
    pub holds: bool,
    pub k_max: u64,
    pub failure: Option<IdpFailure>,
}

/// A lattice point of `(k+1)·P` that is not a sum of a lattice point of `P`
/// and one of `k·P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdpFailure {
    pub k: u64,
    pub point: Point,
}

fn same_dim(a: &LatticePolytope, b: &LatticePolytope) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: b.dim,
        });
    }
    Ok(())
}

/// Order, chain or stable set polytope: the hull of the indicator vectors of
/// the ideals, antichains or stable sets.
pub fn build_polytope(kind: PolytopeKind, object: Combinatorial<'_>) -> Result<LatticePolytope> {
    let (d, family) = match (kind, object) {
        (PolytopeKind::Order, Combinatorial::Poset(p)) => (p.len(), p.ideals()),
        (PolytopeKind::Chain, Combinatorial::Poset(p)) => (p.len(), p.antichains()),
        (PolytopeKind::StableSet, Combinatorial::Graph(g)) => (g.len(), g.stable_sets()),
        (kind, _) => {
            return Err(Error::InvalidInput(format!(
                "{kind:?} polytope cannot be built from this kind of object"
            )))
        }
    };
    LatticePolytope::new(d, family.iter().map(|s| indicator(s, d)).collect())
}

pub fn order_polytope(p: &Poset) -> LatticePolytope {
    build_polytope(PolytopeKind::Order, Combinatorial::Poset(p))
        .expect("order polytope of a nonempty poset")
}

pub fn chain_polytope(p: &Poset) -> LatticePolytope {
    build_polytope(PolytopeKind::Chain, Combinatorial::Poset(p))
        .expect("chain polytope of a nonempty poset")
}

pub fn stable_set_polytope(g: &Graph) -> LatticePolytope {
    build_polytope(PolytopeKind::StableSet, Combinatorial::Graph(g))
        .expect("stable set polytope of a nonempty graph")
}

/// `P_1 * ... * P_m ⊂ R^{D+m-1}`: `P_i` lifted by `e_i` for `i < m`, `P_m`
/// by the zero vector.
pub fn cayley_sum(polys: &[&LatticePolytope]) -> Result<LatticePolytope> {
    if polys.len() < 2 {
        return Err(Error::InvalidInput(
            "Cayley sum needs at least two polytopes".into(),
        ));
    }
    let m = polys.len();
    for p in &polys[1..] {
        same_dim(polys[0], p)?;
    }
    let dim = polys[0].dim;
    let mut gens = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        for g in &p.generators {
            let mut v = g.clone();
            v.extend((0..m - 1).map(|j| i64::from(j == i)));
            gens.push(v);
        }
    }
    LatticePolytope::new(dim + m - 1, gens)
}

/// `P + Q`, generated by pairwise sums of vertices.
pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    same_dim(p, q)?;
    let (vp, vq) = (p.hull_points()?, q.hull_points()?);
    let gens = vp
        .iter()
        .flat_map(|a| {
            vq.iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
        })
        .collect();
    LatticePolytope::new(p.dim, gens)
}

/// `Γ(P, Q) = conv(P ∪ -Q)`.
pub fn gamma(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    same_dim(p, q)?;
    let gens = p
        .generators
        .iter()
        .cloned()
        .chain(q.generators.iter().map(|g| g.iter().map(|&x| -x).collect()))
        .collect();
    LatticePolytope::new(p.dim, gens)
}

/// Whether `P ∩ Z^D + Q ∩ Z^D = (P + Q) ∩ Z^D`. The inclusion `⊆` always
/// holds, so only the lattice points of `P + Q` are tested for a splitting.
pub fn oda_holds(p: &LatticePolytope, q: &LatticePolytope, limits: &Limits) -> Result<bool> {
    Ok(oda_failure(p, q, limits)?.is_none())
}

/// A lattice point of `P + Q` that does not split, if there is one.
pub fn oda_failure(
    p: &LatticePolytope,
    q: &LatticePolytope,
    limits: &Limits,
) -> Result<Option<Point>> {
    same_dim(p, q)?;
    let sum = minkowski_sum(p, q)?;
    let q_rep = q.facet_representation()?;
    let p_points = p.lattice_points(1, false, limits)?;
    sum.scan(1, false)?.visit(limits.max_points, |x| {
        let splits = p_points.iter().any(|a| {
            let diff: Vec<i64> = x.iter().zip(a).map(|(u, v)| u - v).collect();
            q_rep.contains(&diff)
        });
        if splits {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(x.to_vec())
        }
    })
}
