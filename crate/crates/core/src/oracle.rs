//! Brute-force references used to cross-check the fast paths.

use num_integer::Integer;
use rand::Rng;

use crate::dset::DeltaSet;
use crate::error::Result;
use crate::homology::ChainComplex;
use crate::matrix::IntMatrix;

/// Fraction-free Gaussian elimination on a small square matrix.
pub fn bareiss_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinant divisors: `D_k` is the gcd of all
/// `k x k` minors and `d_k = D_k / D_{k-1}`.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&bareiss_det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

/// The cellular complex of `RP^n` with one cell per degree: `∂_k` is `0` for
/// odd `k` and `2` for even `k`.
pub fn real_projective_chain(n: usize) -> Result<ChainComplex> {
    let boundaries = (1..=n).map(|k| IntMatrix::from_dense(&[vec![if k % 2 == 0 { 2 } else { 0 }]])).collect();
    ChainComplex::new(vec![1; n + 1], boundaries)
}

/// A random simplicial complex on at most `max_vertices` vertices, or one of
/// the degenerate cases (empty, discrete) with small probability.
pub fn random_delta_set<R: Rng>(rng: &mut R, max_vertices: usize, max_facet: usize) -> DeltaSet {
    match rng.gen_range(0..10) {
        0 => DeltaSet::empty(),
        1 => DeltaSet::discrete(rng.gen_range(1..=max_vertices)).expect("positive"),
        _ => {
            let nv = rng.gen_range(1..=max_vertices);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let size = rng.gen_range(1..=max_facet.min(nv));
                    let mut f: Vec<usize> = rand::seq::index::sample(rng, nv, size).into_vec();
                    f.sort_unstable();
                    f
                })
                .collect();
            DeltaSet::from_simplicial_complex(&facets)
        }
    }
}
