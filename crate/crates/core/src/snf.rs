//! Smith normal form over the integers.
//!
//! Only the invariant factors are computed; no transformation matrices are
//! tracked. Elimination works on a sparse row store with a column index.
//! Pivots are chosen by smallest absolute value, ties broken by `(row, col)`
//! order. Once only a small residual block remains (at most
//! [`SnfOptions::dense_threshold`] rows and columns) it is densified.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug)]
pub struct SnfOptions {
    pub dense_threshold: usize,
}

impl Default for SnfOptions {
    fn default() -> Self {
        SnfOptions { dense_threshold: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive invariant factors `d_1 | d_2 | ...`; their count is the rank.
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The factors that contribute torsion.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_normal_form_with(m, &SnfOptions::default())
}

pub fn smith_normal_form_with(m: &IntMatrix, opts: &SnfOptions) -> SmithForm {
    let mut units = 0usize;
    let mut others = Vec::new();
    if m.rows() <= opts.dense_threshold && m.cols() <= opts.dense_threshold {
        let dense = m.to_dense();
        dense_diagonal(dense, &mut units, &mut others);
    } else {
        let mut s = Sparse::new(m);
        s.run(opts, &mut units, &mut others);
    }
    finish(units, others)
}

fn is_unit(v: &BigInt) -> bool {
    v.magnitude().is_one()
}

/// Turns a diagonal form into invariant factors via pairwise `(gcd, lcm)`.
fn finish(units: usize, mut others: Vec<BigInt>) -> SmithForm {
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            let g = others[i].gcd(&others[j]);
            if g != others[i] {
                let l = &others[i] / &g * &others[j];
                others[i] = g;
                others[j] = l;
            }
        }
    }
    let mut diagonal = vec![BigInt::one(); units];
    diagonal.extend(others);
    debug_assert!(diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    SmithForm { diagonal }
}

/// `a = q·p + r` with `|r| <= |p| / 2`.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(p);
    let twice: BigInt = r.abs() * 2;
    if twice > p.abs() {
        // remainder r - p is the nearer one for either sign of p
        q += 1;
    }
    q
}

struct Sparse {
    rows: Vec<Vec<(usize, BigInt)>>,
    cols: Vec<BTreeSet<usize>>,
    unit_rows: BTreeSet<usize>,
    nnz: usize,
}

impl Sparse {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); m.rows()];
        let mut cols = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.iter() {
            rows[r].push((c, v.clone()));
            cols[c].insert(r);
        }
        let unit_rows = rows
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().any(|(_, v)| is_unit(v)))
            .map(|(r, _)| r)
            .collect();
        Sparse { rows, cols, unit_rows, nnz: m.nnz() }
    }

    fn refresh_unit(&mut self, r: usize) {
        if self.rows[r].iter().any(|(_, v)| is_unit(v)) {
            self.unit_rows.insert(r);
        } else {
            self.unit_rows.remove(&r);
        }
    }

    fn run(&mut self, opts: &SnfOptions, units: &mut usize, others: &mut Vec<BigInt>) {
        loop {
            if let Some(&r) = self.unit_rows.first() {
                let c = self.rows[r].iter().find(|(_, v)| is_unit(v)).map(|&(c, _)| c).unwrap();
                self.clear_column(r, c);
                self.drop_row(r);
                *units += 1;
                continue;
            }
            if self.nnz == 0 {
                return;
            }
            let live_rows: Vec<usize> = (0..self.rows.len()).filter(|&r| !self.rows[r].is_empty()).collect();
            let live_cols: Vec<usize> = (0..self.cols.len()).filter(|&c| !self.cols[c].is_empty()).collect();
            if live_rows.len() <= opts.dense_threshold && live_cols.len() <= opts.dense_threshold {
                let mut pos = vec![usize::MAX; self.cols.len()];
                for (i, &c) in live_cols.iter().enumerate() {
                    pos[c] = i;
                }
                let dense = live_rows
                    .iter()
                    .map(|&r| {
                        let mut row = vec![BigInt::zero(); live_cols.len()];
                        for (c, v) in &self.rows[r] {
                            row[pos[*c]] = v.clone();
                        }
                        row
                    })
                    .collect();
                dense_diagonal(dense, units, others);
                return;
            }
            self.general_step(others);
        }
    }

    /// Smallest `|v|`, first in `(row, col)` order.
    fn min_entry(&self) -> (usize, usize) {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                if best.is_none_or(|(_, _, b)| v.magnitude() < b.magnitude()) {
                    best = Some((r, *c, v));
                }
            }
        }
        let (r, c, _) = best.expect("matrix has no entries");
        (r, c)
    }

    fn entry(&self, r: usize, c: usize) -> Option<&BigInt> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |&(k, _)| k).ok().map(|i| &row[i].1)
    }

    /// `row_target -= f * row_src`.
    fn row_axpy(&mut self, target: usize, f: &BigInt, src: usize) {
        debug_assert_ne!(target, src);
        let src_row = std::mem::take(&mut self.rows[src]);
        let old = std::mem::take(&mut self.rows[target]);
        let mut out = Vec::with_capacity(old.len() + src_row.len());
        let (mut a, mut b) = (old.into_iter().peekable(), src_row.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ca, _)), Some(&&(cb, _))) if ca == cb => {
                    let (c, mut v) = a.next().unwrap();
                    let (_, s) = b.next().unwrap();
                    v -= f * s;
                    if v.is_zero() {
                        self.cols[c].remove(&target);
                        self.nnz -= 1;
                    } else {
                        out.push((c, v));
                    }
                }
                (Some(&(ca, _)), Some(&&(cb, _))) if ca < cb => out.push(a.next().unwrap()),
                (Some(_), None) => out.push(a.next().unwrap()),
                (_, Some(_)) => {
                    let (cb, s) = b.next().unwrap();
                    self.cols[*cb].insert(target);
                    self.nnz += 1;
                    out.push((*cb, -(f * s)));
                }
                (None, None) => break,
            }
        }
        self.rows[target] = out;
        self.rows[src] = src_row;
        self.refresh_unit(target);
    }

    /// Adds `delta` to the entry `(r, c)`.
    fn add_entry(&mut self, r: usize, c: usize, delta: BigInt) {
        if delta.is_zero() {
            return;
        }
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |&(k, _)| k) {
            Ok(i) => {
                row[i].1 += delta;
                if row[i].1.is_zero() {
                    row.remove(i);
                    self.cols[c].remove(&r);
                    self.nnz -= 1;
                }
            }
            Err(i) => {
                row.insert(i, (c, delta));
                self.cols[c].insert(r);
                self.nnz += 1;
            }
        }
        self.refresh_unit(r);
    }

    /// Uses the pivot `(r, c)` to reduce every other entry of column `c`.
    /// Exact when the pivot is a unit; otherwise leaves remainders.
    fn clear_column(&mut self, r: usize, c: usize) {
        let p = self.entry(r, c).unwrap().clone();
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let a = self.entry(i, c).unwrap().clone();
            let q = if is_unit(&p) { a * &p } else { nearest_quotient(&a, &p) };
            if !q.is_zero() {
                self.row_axpy(i, &q, r);
            }
        }
    }

    fn drop_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
            self.nnz -= 1;
        }
        self.unit_rows.remove(&r);
    }

    fn general_step(&mut self, others: &mut Vec<BigInt>) {
        let (r, c) = self.min_entry();
        self.clear_column(r, c);
        let p = self.entry(r, c).unwrap().clone();
        // Column operations col_j -= q·col_c.
        let row_cols: Vec<(usize, BigInt)> =
            self.rows[r].iter().filter(|(j, _)| *j != c).map(|(j, v)| (*j, v.clone())).collect();
        let col_rows: Vec<usize> = self.cols[c].iter().copied().collect();
        for (j, a) in row_cols {
            let q = nearest_quotient(&a, &p);
            if q.is_zero() {
                continue;
            }
            for &i in &col_rows {
                let aic = self.entry(i, c).unwrap().clone();
                self.add_entry(i, j, -(&q * aic));
            }
        }
        if self.rows[r].len() == 1 && self.cols[c].len() == 1 {
            others.push(p.abs());
            self.drop_row(r);
        }
    }
}

/// Dense elimination with the same pivot rule. Appends diagonal entries.
fn dense_diagonal(mut a: Vec<Vec<BigInt>>, units: &mut usize, others: &mut Vec<BigInt>) {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut row_live = vec![true; nrows];
    let mut col_live = vec![true; ncols];
    loop {
        let mut best: Option<(usize, usize)> = None;
        for r in (0..nrows).filter(|&r| row_live[r]) {
            for c in (0..ncols).filter(|&c| col_live[c]) {
                if !a[r][c].is_zero()
                    && best.is_none_or(|(br, bc)| a[r][c].magnitude() < a[br][bc].magnitude())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { return };
        let p = a[r][c].clone();
        for i in (0..nrows).filter(|&i| row_live[i] && i != r) {
            if a[i][c].is_zero() {
                continue;
            }
            let q = nearest_quotient(&a[i][c], &p);
            if !q.is_zero() {
                for j in (0..ncols).filter(|&j| col_live[j]) {
                    if !a[r][j].is_zero() {
                        let d = &q * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
        }
        for j in (0..ncols).filter(|&j| col_live[j] && j != c) {
            if a[r][j].is_zero() {
                continue;
            }
            let q = nearest_quotient(&a[r][j], &p);
            if !q.is_zero() {
                for i in (0..nrows).filter(|&i| row_live[i]) {
                    if !a[i][c].is_zero() {
                        let d = &q * &a[i][c];
                        a[i][j] -= d;
                    }
                }
            }
        }
        let row_clear = (0..ncols).all(|j| j == c || !col_live[j] || a[r][j].is_zero());
        let col_clear = (0..nrows).all(|i| i == r || !row_live[i] || a[i][c].is_zero());
        if row_clear && col_clear {
            if is_unit(&p) {
                *units += 1;
            } else {
                others.push(p.abs());
            }
            row_live[r] = false;
            col_live[c] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &IntMatrix, threshold: usize) -> Vec<i64> {
        let f = smith_normal_form_with(m, &SnfOptions { dense_threshold: threshold });
        f.diagonal.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::diagonal(2, 2, &[2, 3]);
        assert_eq!(factors(&m, 64), vec![1, 6]);
        assert_eq!(factors(&m, 0), vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let f = smith_normal_form(&IntMatrix::zeros(4, 3));
        assert_eq!(f.rank(), 0);
        assert!(f.diagonal.is_empty());
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 0)).rank(), 0);
    }

    #[test]
    fn classic_example() {
        // Invariant factors 2, 6, 12.
        let m = IntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(factors(&m, 64), vec![2, 6, 12]);
        assert_eq!(factors(&m, 0), vec![2, 6, 12]);
    }

    #[test]
    fn sparse_and_dense_paths_agree_on_non_unit_blocks() {
        let m = IntMatrix::from_dense(&[
            vec![4, 6, 0, 0],
            vec![6, 9, 0, 2],
            vec![0, 0, 10, 15],
            vec![8, 0, 0, 6],
        ]);
        assert_eq!(factors(&m, 64), factors(&m, 0));
        assert_eq!(factors(&m, 64), factors(&m.transpose(), 1));
    }

    #[test]
    fn negative_pivots() {
        let m = IntMatrix::from_dense(&[vec![-4, 0], vec![0, -6]]);
        assert_eq!(factors(&m, 0), vec![2, 12]);
    }
}
