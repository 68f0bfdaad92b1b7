//! Exact integer linear algebra on small dense matrices.
//!
//! Everything runs on `i128` with checked arithmetic; an overflow surfaces as
//! [`Error::Overflow`] rather than a wrong answer.

use crate::error::{Error, Result};

pub fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0, |g, &x| gcd(g, x))
}

/// Divides by the gcd of the entries; the zero vector is left as is.
pub fn make_primitive(v: &mut [i128]) {
    let g = gcd_all(v);
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("matrix arithmetic"))
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow("matrix arithmetic"))
}

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (&x, &y)| {
        acc.checked_add(mul(x, y)?)
            .ok_or(Error::Overflow("dot product"))
    })
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i128>]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = sub(mul(a[i][j], a[k][k])?, mul(a[i][k], a[k][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Rank of an integer matrix (rows of equal length).
pub fn rank(rows: &[Vec<i128>]) -> Result<usize> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (f, g) = (a[i][c], a[r][c]);
            for j in c..ncols {
                a[i][j] = sub(mul(a[i][j], g)?, mul(a[r][j], f)?)?;
            }
            make_primitive(&mut a[i]);
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    Ok(r)
}

/// For an `(n-1) × n` matrix of full rank, the primitive generator of its
/// one-dimensional integer kernel (by signed maximal minors). Returns `None`
/// when the rank is deficient.
pub fn kernel_vector(rows: &[Vec<i128>]) -> Result<Option<Vec<i128>>> {
    let n = rows.len() + 1;
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let det = determinant(&minor)?;
        out.push(if j % 2 == 0 { det } else { -det });
    }
    if out.iter().all(|&x| x == 0) {
        return Ok(None);
    }
    make_primitive(&mut out);
    Ok(Some(out))
}

/// Index of the lattice spanned by the rows inside `Z^m` (m = row length),
/// computed by integer row reduction to echelon form. Returns `None` when the
/// rows do not span a full-rank lattice.
pub fn lattice_index(rows: &[Vec<i128>]) -> Result<Option<u128>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let m = rows.first().map_or(0, |r| r.len());
    let mut index: u128 = 1;
    let mut top = 0;
    for c in 0..m {
        // Euclid on column c among rows top..
        loop {
            let mut pivot: Option<usize> = None;
            for i in top..a.len() {
                if a[i][c] != 0 && pivot.is_none_or(|p| a[i][c].abs() < a[p][c].abs()) {
                    pivot = Some(i);
                }
            }
            let Some(p) = pivot else {
                return Ok(None);
            };
            a.swap(top, p);
            let mut done = true;
            for i in top + 1..a.len() {
                if a[i][c] != 0 {
                    let q = a[i][c] / a[top][c];
                    for j in c..m {
                        a[i][j] = sub(a[i][j], mul(q, a[top][j])?)?;
                    }
                    if a[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        index = index
            .checked_mul(a[top][c].unsigned_abs())
            .ok_or(Error::Overflow("lattice index"))?;
        top += 1;
        a.retain(|r| r.iter().any(|&x| x != 0));
        if top > a.len() {
            return Ok(None);
        }
    }
    Ok(Some(index))
}
