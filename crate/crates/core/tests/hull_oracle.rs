//! Facets and lattice-point counts against brute force on random small
//! point sets.

use std::collections::BTreeSet;

use polycay::{LatticePolytope, Limits};
use proptest::prelude::*;

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

/// Facets as primitive `(a, b)` with `a·x ≤ b`: for each D-subset the
/// hyperplane normal is the vector of signed cofactors of the differences.
fn brute_facets(pts: &[Vec<i64>]) -> BTreeSet<(Vec<i64>, i64)> {
    let d = pts[0].len();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; d];
    fn rec(
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
        pts: &[Vec<i64>],
        out: &mut BTreeSet<(Vec<i64>, i64)>,
    ) {
        let d = pts[0].len();
        if depth == d {
            let base = &pts[pick[0]];
            let diffs: Vec<Vec<i128>> = pick[1..]
                .iter()
                .map(|&i| (0..d).map(|k| (pts[i][k] - base[k]) as i128).collect())
                .collect();
            let normal: Vec<i128> = (0..d)
                .map(|c| {
                    let mut m = vec![vec![0i128; d]; d];
                    m[0][c] = 1;
                    m[1..].clone_from_slice(&diffs);
                    det(&m)
                })
                .collect();
            if normal.iter().all(|&x| x == 0) {
                return;
            }
            let dot = |p: &Vec<i64>| {
                p.iter()
                    .zip(&normal)
                    .map(|(&x, &a)| x as i128 * a)
                    .sum::<i128>()
            };
            let b = dot(base);
            let vals: Vec<i128> = pts.iter().map(|p| dot(p) - b).collect();
            let sign = if vals.iter().all(|&v| v <= 0) {
                1
            } else if vals.iter().all(|&v| v >= 0) {
                -1
            } else {
                return;
            };
            let g = normal.iter().fold(b.abs(), |acc, &x| gcd(acc, x));
            out.insert((
                normal.iter().map(|&x| (sign * x / g) as i64).collect(),
                (sign * b / g) as i64,
            ));
            return;
        }
        for i in start..pts.len() {
            pick[depth] = i;
            rec(i + 1, depth + 1, pick, pts, out);
        }
    }
    rec(0, 0, &mut pick, pts, &mut out);
    out
}

fn box_count(facets: &BTreeSet<(Vec<i64>, i64)>, d: usize, n: i64, bound: i64) -> u64 {
    let mut count = 0;
    let mut x = vec![-bound * n; d];
    loop {
        if facets
            .iter()
            .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() <= b * n)
        {
            count += 1;
        }
        let Some(i) = (0..d).find(|&i| x[i] < bound * n) else {
            break;
        };
        x[i] += 1;
        x[..i].iter_mut().for_each(|v| *v = -bound * n);
    }
    count
}

fn point_sets() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (2usize..=3).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(prop::collection::vec(-2i64..=2, d), d + 1..=8),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn facets_match_brute_force((d, pts) in point_sets()) {
        let poly = LatticePolytope::new(d, pts.clone()).unwrap();
        prop_assume!(poly.is_full_dimensional().unwrap());
        let got: BTreeSet<(Vec<i64>, i64)> = poly
            .facet_representation()
            .unwrap()
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.rhs))
            .collect();
        prop_assert_eq!(&got, &brute_facets(&pts));
    }

    #[test]
    fn pruned_enumeration_matches_box_scan((d, pts) in point_sets(), n in 1u64..=3) {
        let poly = LatticePolytope::new(d, pts.clone()).unwrap();
        prop_assume!(poly.is_full_dimensional().unwrap());
        let facets = brute_facets(&pts);
        let got = poly.count_lattice_points(n, false, &Limits::default()).unwrap();
        prop_assert_eq!(got, box_count(&facets, d, n as i64, 2));
        let listed = poly.lattice_points(n, false, &Limits::default()).unwrap();
        prop_assert_eq!(listed.len() as u64, got);
        prop_assert!(listed.windows(2).all(|w| w[0] < w[1]));
    }
}
