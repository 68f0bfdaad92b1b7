use crate::error::{Error, Result};
use crate::linalg;
use crate::poset::Poset;
use crate::Limits;

use super::{cayley_sum, order_polytope, LatticePolytope, Point};

/// `x ↦ Wx + t` with `|det W| = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineUnimodularMap {
    matrix: Vec<Vec<i64>>,
    translation: Vec<i64>,
}

impl AffineUnimodularMap {
    pub fn new(matrix: Vec<Vec<i64>>, translation: Vec<i64>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        if translation.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: translation.len(),
            });
        }
        let wide: Vec<Vec<i128>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let det = linalg::determinant(&wide)?;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(matrix, vec![0; n]).expect("identity is unimodular")
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply_point(&self, x: &[i64]) -> Point {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + t)
            .collect()
    }

    pub fn apply(&self, p: &LatticePolytope) -> Result<LatticePolytope> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        LatticePolytope::new(
            p.dim(),
            p.generators().iter().map(|g| self.apply_point(g)).collect(),
        )
    }

    /// The map `(x, h) ↦ (h·1 - x, h)` on `R^{d+1}`: `-E_d` with a last
    /// column of ones, bottom row `(0, .., 0, 1)`.
    pub fn cayley_flip(d: usize) -> Self {
        let matrix = (0..=d)
            .map(|i| {
                (0..=d)
                    .map(|j| match (i == d, j == d) {
                        (true, true) => 1,
                        (true, false) => 0,
                        (false, true) => 1,
                        (false, false) => -i64::from(i == j),
                    })
                    .collect()
            })
            .collect();
        Self::new(matrix, vec![0; d + 1]).expect("flip is unimodular")
    }
}

/// Both sides of the unimodular equivalence between `O_P * Q` and
/// `conv(O_{P'} ∪ (-Q × {0}))`, with `P'` the dual of `P` plus a new bottom
/// element `d + 1`.
#[derive(Debug, Clone)]
pub struct CayleyFlipResult {
    pub image: LatticePolytope,
    pub expected: LatticePolytope,
    pub lattice_points_agree: bool,
}

pub fn cayley_flip_transform(
    p: &Poset,
    q: &LatticePolytope,
    limits: &Limits,
) -> Result<CayleyFlipResult> {
    let d = p.len();
    if q.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: q.dim(),
        });
    }
    let origin = vec![0i64; d];
    let has_origin = if q.is_full_dimensional()? {
        q.contains(&origin)?
    } else {
        q.generators().contains(&origin)
    };
    if !has_origin {
        return Err(Error::OriginNotContained);
    }
    let cayley = cayley_sum(&[&order_polytope(p), q])?;
    let image = AffineUnimodularMap::cayley_flip(d).apply(&cayley)?;

    let mut rels: Vec<(usize, usize)> = p.dual().relations();
    rels.extend((0..d).map(|i| (d, i)));
    let lifted = Poset::from_relations(d + 1, &rels)?;
    let mut gens: Vec<Point> = order_polytope(&lifted).generators().to_vec();
    gens.extend(q.generators().iter().map(|g| {
        let mut v: Point = g.iter().map(|&x| -x).collect();
        v.push(0);
        v
    }));
    let expected = LatticePolytope::new(d + 1, gens)?;
    let lattice_points_agree =
        image.lattice_points(1, false, limits)? == expected.lattice_points(1, false, limits)?;
    Ok(CayleyFlipResult {
        image,
        expected,
        lattice_points_agree,
    })
}
