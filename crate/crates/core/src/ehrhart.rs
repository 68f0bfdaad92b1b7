//! Ehrhart δ-polynomials and the invariants read off from them.

use crate::error::{Error, Result};
use crate::family::full_mask;
use crate::geometry::LatticePolytope;
use crate::poset::Poset;
use crate::Limits;

fn binomial(n: i128, k: i128) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficients `δ_0, .., δ_s` of the δ-polynomial (trailing zeros trimmed)
/// of a full-dimensional polytope in `R^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaPolynomial {
    coeffs: Vec<u64>,
    dim: usize,
}

impl DeltaPolynomial {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `s`, the index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `dim + 1 - s`.
    pub fn codegree(&self) -> u64 {
        (self.dim + 1 - self.degree()) as u64
    }

    /// `δ(1)`.
    pub fn normalized_volume(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// `L(n) = Σ_i δ_i C(n - i + dim, dim)`.
    pub fn predict_count(&self, n: u64) -> i128 {
        let d = self.dim as i128;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c as i128 * binomial(n as i128 - i as i128 + d, d))
            .sum()
    }

    /// Builds the polynomial from `counts[n] = L(n)` for `n = 0..=dim+1`
    /// (`counts[0] = 1`) via `δ_i = Σ_j (-1)^j C(dim+1, j) L(i-j)`, checking
    /// that `δ_{dim+1}` vanishes and every coefficient invariant holds.
    pub fn from_counts(dim: usize, counts: &[u64]) -> Result<Self> {
        if counts.len() < dim + 2 || counts[0] != 1 {
            return Err(Error::Internal(format!(
                "need L(0..={}) with L(0) = 1, got {counts:?}",
                dim + 1
            )));
        }
        let top = dim as i128 + 1;
        let delta = |i: usize| -> i128 {
            (0..=i)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * binomial(top, j as i128) * counts[i - j] as i128
                })
                .sum()
        };
        let raw: Vec<i128> = (0..=dim).map(delta).collect();
        if delta(dim + 1) != 0 {
            return Err(Error::Internal(format!(
                "lattice point counts {counts:?} are not a polynomial of degree {dim}"
            )));
        }
        if raw[0] != 1 || raw.iter().any(|&c| c < 0) {
            return Err(Error::Internal(format!("invalid δ-vector {raw:?}")));
        }
        if dim >= 1 && raw[1] != counts[1] as i128 - top {
            return Err(Error::Internal("δ_1 ≠ |P ∩ Z^D| - D - 1".into()));
        }
        let mut coeffs: Vec<u64> = raw.iter().map(|&c| c as u64).collect();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        Ok(Self { coeffs, dim })
    }
}

/// `[L(1), .., L(up_to)]` with `L(n) = |nP ∩ Z^D|`. When `up_to ≥ D + 1`
/// the counts beyond `L(D)` are checked against the interpolating
/// polynomial.
pub fn ehrhart_counts(p: &LatticePolytope, up_to: u64, limits: &Limits) -> Result<Vec<u64>> {
    let counts: Vec<u64> = (1..=up_to)
        .map(|n| p.count_lattice_points(n, false, limits))
        .collect::<Result<_>>()?;
    let d = p.dim();
    if up_to as usize > d {
        let mut all = vec![1];
        all.extend_from_slice(&counts);
        let delta = DeltaPolynomial::from_counts(d, &all)?;
        for (n, &c) in all.iter().enumerate().skip(d + 2) {
            if delta.predict_count(n as u64) != c as i128 {
                return Err(Error::Internal(format!(
                    "L({n}) = {c} breaks polynomiality"
                )));
            }
        }
    }
    Ok(counts)
}

pub fn delta_polynomial(p: &LatticePolytope, limits: &Limits) -> Result<DeltaPolynomial> {
    let mut counts = vec![1];
    counts.extend(ehrhart_counts(p, p.dim() as u64 + 1, limits)?);
    DeltaPolynomial::from_counts(p.dim(), &counts)
}

/// Smallest `ℓ ≥ 1` with an interior lattice point in `ℓP`.
pub fn codegree_by_interior_search(p: &LatticePolytope, limits: &Limits) -> Result<u64> {
    let top = p.dim() as u64 + 1;
    for l in 1..=top {
        if p.find_interior_point(l, limits)?.is_some() {
            return Ok(l);
        }
    }
    Err(Error::Internal(format!(
        "no interior lattice point up to dilate {top}"
    )))
}

/// Codegree from a precomputed δ-polynomial, cross-checked by direct search.
pub fn codegree_checked(
    p: &LatticePolytope,
    delta: &DeltaPolynomial,
    limits: &Limits,
) -> Result<u64> {
    let via_delta = delta.codegree();
    let via_search = codegree_by_interior_search(p, limits)?;
    if via_delta != via_search {
        return Err(Error::Internal(format!(
            "codegree from δ-degree is {via_delta} but first interior point is in dilate {via_search}"
        )));
    }
    Ok(via_delta)
}

pub fn codegree(p: &LatticePolytope, limits: &Limits) -> Result<u64> {
    let delta = delta_polynomial(p, limits)?;
    codegree_checked(p, &delta, limits)
}

pub fn normalized_volume(p: &LatticePolytope, limits: &Limits) -> Result<u64> {
    Ok(delta_polynomial(p, limits)?.normalized_volume())
}

/// The Gorenstein index from a δ-polynomial: its codegree when palindromic.
pub fn gorenstein_index_of(delta: &DeltaPolynomial) -> Option<u64> {
    delta.is_palindromic().then(|| delta.codegree())
}

pub fn gorenstein_index(p: &LatticePolytope, limits: &Limits) -> Result<Option<u64>> {
    let delta = delta_polynomial(p, limits)?;
    codegree_checked(p, &delta, limits)?;
    Ok(gorenstein_index_of(&delta))
}

/// Reflexive: origin in the interior and every facet at lattice distance one
/// from it, i.e. every primitive facet inequality reads `⟨a, x⟩ ≤ 1`.
pub fn is_reflexive(p: &LatticePolytope) -> Result<bool> {
    Ok(p.facet_representation()?.facets.iter().all(|f| f.rhs == 1))
}

/// `Σ_{W ⊆ [d]} e(P_W ⊕ Q_{[d] \ W})`.
pub fn volume_by_linear_extensions(p: &Poset, q: &Poset) -> Result<u64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let all = full_mask(p.len());
    let mut total = 0u64;
    for w in 0..=all {
        let delta = p.induced(w).ordinal_sum(&q.induced(all & !w))?;
        total += delta.linear_extension_count();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cayley_sum, chain_polytope, order_polytope};

    fn lim() -> Limits {
        Limits::default()
    }

    fn cube(d: usize) -> LatticePolytope {
        let pts = (0..1u64 << d)
            .map(|m| (0..d).map(|i| (m >> i & 1) as i64).collect())
            .collect();
        LatticePolytope::new(d, pts).unwrap()
    }

    fn centred_cube(d: usize) -> LatticePolytope {
        let pts = (0..1u64 << d)
            .map(|m| {
                (0..d)
                    .map(|i| if m >> i & 1 == 1 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        LatticePolytope::new(d, pts).unwrap()
    }

    #[test]
    fn counts_examples() {
        assert_eq!(ehrhart_counts(&cube(2), 3, &lim()).unwrap(), vec![4, 9, 16]);
        assert_eq!(ehrhart_counts(&cube(1), 2, &lim()).unwrap(), vec![2, 3]);
    }

    /// Oracle: lattice points of n·O_P are the order-reversing maps
    /// P → {0..n}; count them by brute force, then check a cubic fits via
    /// vanishing fourth differences.
    #[test]
    fn order_polytope_counts_match_order_reversing_maps() {
        let v3 = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        let brute = |n: i64| {
            let mut c = 0u64;
            for a in 0..=n {
                for b in 0..=n {
                    for z in 0..=n {
                        if a >= z && b >= z {
                            c += 1;
                        }
                    }
                }
            }
            c
        };
        let counts = ehrhart_counts(&order_polytope(&v3), 4, &lim()).unwrap();
        let expect: Vec<u64> = (1..=4).map(brute).collect();
        assert_eq!(counts, expect);
        let mut seq: Vec<i64> = std::iter::once(1)
            .chain(counts.iter().map(|&c| c as i64))
            .collect();
        for _ in 0..4 {
            seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
        }
        assert_eq!(seq, vec![0]);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_polynomial(&cube(1), &lim()).unwrap().coeffs(), &[1]);
        assert_eq!(
            delta_polynomial(&cube(2), &lim()).unwrap().coeffs(),
            &[1, 1]
        );
        assert_eq!(
            delta_polynomial(&cube(3), &lim()).unwrap().coeffs(),
            &[1, 4, 1]
        );
    }

    #[test]
    fn volume_examples() {
        assert_eq!(normalized_volume(&cube(2), &lim()).unwrap(), 2);
        assert_eq!(normalized_volume(&cube(3), &lim()).unwrap(), 6);
    }

    #[test]
    fn codegree_and_gorenstein() {
        assert_eq!(codegree(&cube(2), &lim()).unwrap(), 2);
        assert_eq!(codegree_by_interior_search(&cube(2), &lim()).unwrap(), 2);
        assert_eq!(gorenstein_index(&cube(2), &lim()).unwrap(), Some(2));
        let v3 = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        // δ(O_V3) = 1 + λ, codegree 3: not palindromic of full length but
        // still palindromic as a list
        let d = delta_polynomial(&order_polytope(&v3), &lim()).unwrap();
        assert_eq!(d.normalized_volume(), 2);
    }

    #[test]
    fn reflexive_examples() {
        assert!(is_reflexive(&centred_cube(2)).unwrap());
        assert!(!is_reflexive(&cube(2)).unwrap());
        assert_eq!(gorenstein_index(&centred_cube(2), &lim()).unwrap(), Some(1));
    }

    #[test]
    fn from_counts_rejects_garbage() {
        assert!(DeltaPolynomial::from_counts(1, &[1, 2, 4]).is_err());
        assert!(DeltaPolynomial::from_counts(1, &[2, 2, 3]).is_err());
    }

    #[test]
    fn predict_count_inverts_transform() {
        let d = delta_polynomial(&cube(3), &lim()).unwrap();
        for n in 0..6u64 {
            assert_eq!(d.predict_count(n), ((n + 1).pow(3)) as i128);
        }
    }

    #[test]
    fn volume_identity_small() {
        let one = Poset::antichain(1);
        assert_eq!(volume_by_linear_extensions(&one, &one).unwrap(), 2);
        for p in [Poset::antichain(2), Poset::chain(2)] {
            let lhs = volume_by_linear_extensions(&p, &p).unwrap();
            let c = cayley_sum(&[&order_polytope(&p), &chain_polytope(&p)]).unwrap();
            assert_eq!(lhs, normalized_volume(&c, &lim()).unwrap());
        }
        assert!(volume_by_linear_extensions(&one, &Poset::antichain(2)).is_err());
    }
}
