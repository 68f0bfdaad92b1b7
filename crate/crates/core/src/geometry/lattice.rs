//! Lattice-point enumeration in dilates of a polytope given by facets.
//!
//! Coordinates are fixed one at a time. The range for coordinate `i` comes
//! from every facet inequality, with the unfixed coordinates `j > i` replaced
//! by their most favourable value inside the bounding box. At the last
//! coordinate the range is exact.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

use super::HalfspaceRep;

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

pub(crate) struct Scan<'a> {
    dim: usize,
    normals: Vec<&'a [i64]>,
    rhs: Vec<i64>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    /// `rest[f][i]`: smallest value of `Σ_{j>i} a_fj x_j` over the box.
    rest: Vec<Vec<i64>>,
}

impl<'a> Scan<'a> {
    /// Scan of `n·P` (`interior` makes every inequality strict).
    pub(crate) fn new(
        rep: &'a HalfspaceRep,
        box_lo: &[i64],
        box_hi: &[i64],
        n: i64,
        interior: bool,
    ) -> Self {
        let dim = rep.dim;
        let lo: Vec<i64> = box_lo.iter().map(|&x| x * n).collect();
        let hi: Vec<i64> = box_hi.iter().map(|&x| x * n).collect();
        let normals: Vec<&[i64]> = rep.facets.iter().map(|f| f.normal.as_slice()).collect();
        let rhs = rep
            .facets
            .iter()
            .map(|f| f.rhs * n - i64::from(interior))
            .collect();
        let rest = normals
            .iter()
            .map(|a| {
                let mut r = vec![0i64; dim];
                for i in (0..dim.saturating_sub(1)).rev() {
                    let j = i + 1;
                    r[i] = r[j] + (a[j] * lo[j]).min(a[j] * hi[j]);
                }
                r
            })
            .collect();
        Self {
            dim,
            normals,
            rhs,
            lo,
            hi,
            rest,
        }
    }

    fn range(&self, i: usize, partial: &[i64]) -> Option<(i64, i64)> {
        let (mut lower, mut upper) = (self.lo[i], self.hi[i]);
        for (f, a) in self.normals.iter().enumerate() {
            let room = self.rhs[f] - partial[f] - self.rest[f][i];
            let c = a[i];
            if c > 0 {
                upper = upper.min(floor_div(room, c));
            } else if c < 0 {
                lower = lower.max(ceil_div(room, c));
            } else if room < 0 {
                return None;
            }
        }
        (lower <= upper).then_some((lower, upper))
    }

    /// Number of lattice points, failing once `budget` is exceeded.
    pub(crate) fn count(&self, budget: u64) -> Result<u64> {
        let mut partial = vec![0i64; self.normals.len()];
        let mut total = 0u64;
        self.count_rec(0, &mut partial, &mut total, budget)?;
        Ok(total)
    }

    fn count_rec(&self, i: usize, partial: &mut [i64], total: &mut u64, budget: u64) -> Result<()> {
        let Some((lower, upper)) = self.range(i, partial) else {
            return Ok(());
        };
        if i + 1 == self.dim {
            *total += (upper - lower + 1) as u64;
            if *total > budget {
                return Err(Error::BudgetExceeded {
                    what: "lattice point",
                    limit: budget,
                });
            }
            return Ok(());
        }
        for x in lower..=upper {
            for (f, a) in self.normals.iter().enumerate() {
                partial[f] += a[i] * x;
            }
            let r = self.count_rec(i + 1, partial, total, budget);
            for (f, a) in self.normals.iter().enumerate() {
                partial[f] -= a[i] * x;
            }
            r?;
        }
        Ok(())
    }

    /// Visits lattice points in lexicographic order until the visitor breaks.
    /// Returns the break value, if any.
    pub(crate) fn visit<B>(
        &self,
        budget: u64,
        mut f: impl FnMut(&[i64]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let mut partial = vec![0i64; self.normals.len()];
        let mut x = vec![0i64; self.dim];
        let mut seen = 0u64;
        self.visit_rec(0, &mut partial, &mut x, &mut seen, budget, &mut f)
    }

    fn visit_rec<B>(
        &self,
        i: usize,
        partial: &mut [i64],
        x: &mut [i64],
        seen: &mut u64,
        budget: u64,
        f: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let Some((lower, upper)) = self.range(i, partial) else {
            return Ok(None);
        };
        for v in lower..=upper {
            x[i] = v;
            if i + 1 == self.dim {
                *seen += 1;
                if *seen > budget {
                    return Err(Error::BudgetExceeded {
                        what: "lattice point",
                        limit: budget,
                    });
                }
                if let ControlFlow::Break(b) = f(x) {
                    return Ok(Some(b));
                }
                continue;
            }
            for (fi, a) in self.normals.iter().enumerate() {
                partial[fi] += a[i] * v;
            }
            let r = self.visit_rec(i + 1, partial, x, seen, budget, f);
            for (fi, a) in self.normals.iter().enumerate() {
                partial[fi] -= a[i] * v;
            }
            if let Some(b) = r? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(floor_div(-7, -2), 3);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(7, -2), -3);
        assert_eq!(ceil_div(6, 3), 2);
    }
}
