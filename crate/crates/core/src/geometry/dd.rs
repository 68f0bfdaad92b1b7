//! Vertex-to-facet conversion by the double description method.
//!
//! The facets of `P = conv(V) ⊂ R^D` are the extreme rays of the cone
//! `{ (a, b) ∈ R^{D+1} : b - ⟨a, v⟩ ≥ 0 for all v ∈ V }`, which is pointed
//! exactly when `P` is full-dimensional. Rays are kept as primitive integer
//! vectors; adjacency uses the combinatorial test on zero sets.

use crate::error::{Error, Result};
use crate::linalg::{self, make_primitive};

use super::Facet;

struct Ray {
    coords: Vec<i128>,
    zeros: Vec<u64>,
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn and_count(a: &[u64], b: &[u64]) -> (Vec<u64>, u32) {
    let v: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
    let c = v.iter().map(|w| w.count_ones()).sum();
    (v, c)
}

/// Returns the affinely independent subset chosen greedily, or the affine
/// dimension reached if it is smaller than `dim`.
fn initial_basis(dim: usize, rows: &[Vec<i128>]) -> Result<std::result::Result<Vec<usize>, usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<i128>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        chosen_rows.push(r.clone());
        if linalg::rank(&chosen_rows)? == chosen_rows.len() {
            chosen.push(i);
            if chosen.len() == dim + 1 {
                return Ok(Ok(chosen));
            }
        } else {
            chosen_rows.pop();
        }
    }
    Ok(Err(chosen.len().saturating_sub(1)))
}

/// Affine dimension of a point set.
pub(crate) fn affine_dimension(points: &[Vec<i64>]) -> Result<usize> {
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| x as i128).chain([1]).collect())
        .collect();
    Ok(linalg::rank(&rows)?.saturating_sub(1))
}

pub(crate) fn facets(dim: usize, points: &[Vec<i64>]) -> Result<Vec<Facet>> {
    // constraint row for point v acting on (a, b): b - <a, v>
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| -(x as i128)).chain([1]).collect())
        .collect();
    let basis = match initial_basis(dim, &rows)? {
        Ok(b) => b,
        Err(actual) => {
            return Err(Error::NotFullDimensional {
                ambient: dim,
                actual,
            })
        }
    };
    let words = points.len().div_ceil(64);
    let value = |coords: &[i128], idx: usize| linalg::dot(&rows[idx], coords);

    let mut rays: Vec<Ray> = Vec::with_capacity(basis.len());
    for (j, &bj) in basis.iter().enumerate() {
        let others: Vec<Vec<i128>> = basis
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &bk)| rows[bk].clone())
            .collect();
        let mut coords = linalg::kernel_vector(&others)?
            .ok_or_else(|| Error::Internal("degenerate initial simplex".into()))?;
        if value(&coords, bj)? < 0 {
            coords.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = vec![0u64; words];
        for (k, &bk) in basis.iter().enumerate() {
            if k != j {
                zeros[bk / 64] |= 1 << (bk % 64);
            }
        }
        rays.push(Ray { coords, zeros });
    }

    let mut in_basis = vec![false; points.len()];
    for &b in &basis {
        in_basis[b] = true;
    }
    let min_common = (dim as u32).saturating_sub(1);

    for idx in (0..points.len()).filter(|&i| !in_basis[i]) {
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| value(&r.coords, idx))
            .collect::<Result<_>>()?;
        if vals.iter().all(|&v| v >= 0) {
            for (r, &v) in rays.iter_mut().zip(&vals) {
                if v == 0 {
                    r.zeros[idx / 64] |= 1 << (idx % 64);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let (common, count) = and_count(&rays[p].zeros, &rays[n].zeros);
                if count < min_common {
                    continue;
                }
                let adjacent =
                    (0..rays.len()).all(|r| r == p || r == n || !subset(&common, &rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let (vp, vn) = (vals[p], vals[n]);
                let mut coords: Vec<i128> = rays[n]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(&xn, &xp)| {
                        vp.checked_mul(xn)
                            .zip(vn.checked_mul(xp))
                            .and_then(|(a, b)| a.checked_sub(b))
                            .ok_or(Error::Overflow("double description"))
                    })
                    .collect::<Result<_>>()?;
                make_primitive(&mut coords);
                let mut zeros = common;
                zeros[idx / 64] |= 1 << (idx % 64);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, &v) in rays.into_iter().zip(&vals) {
            if v == 0 {
                r.zeros[idx / 64] |= 1 << (idx % 64);
            }
            if v >= 0 {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let (normal, rhs) = r.coords.split_at(dim);
        let g = linalg::gcd_all(normal);
        if g == 0 {
            return Err(Error::Internal("zero facet normal".into()));
        }
        let conv = |x: i128| i64::try_from(x / g).map_err(|_| Error::Overflow("facet normal"));
        out.push(Facet {
            normal: normal.iter().map(|&x| conv(x)).collect::<Result<_>>()?,
            rhs: conv(rhs[0])?,
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}
