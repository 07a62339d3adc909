use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Result, TopoError};

/// Sparse integer matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, &BigInt::from(v));
            }
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m.add(i, i, &BigInt::from(d));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `v` to the entry at `(r, c)`, dropping it if it becomes zero.
    pub fn add(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Non-zero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(TopoError::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter() {
            by_row[r].push((c, v));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for (r, k, a) in self.iter() {
            for &(c, b) in &by_row[k] {
                out.add(r, c, &(a * b));
            }
        }
        Ok(out)
    }

    /// Coordinate dump: one `row col value` line per non-zero entry.
    pub fn to_triplets(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in self.iter() {
            writeln!(s, "{r} {c} {v}").unwrap();
        }
        s
    }

    pub fn from_triplets(rows: usize, cols: usize, text: &str) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, cols);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || TopoError::InvalidArgument(format!("triplet line {}: '{line}'", n + 1));
            let mut parts = line.split_whitespace();
            let r: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let c: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            let v: BigInt = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            if parts.next().is_some() || r >= rows || c >= cols {
                return Err(bad());
            }
            m.add(r, c, &v);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = IntMatrix::zeros(2, 2);
        m.add(0, 0, &BigInt::from(3));
        m.add(0, 0, &BigInt::from(-3));
        assert_eq!(m.nnz(), 0);
        m.set(1, 1, BigInt::from(0));
        assert!(m.is_zero());
    }

    #[test]
    fn multiplication() {
        let a = IntMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = IntMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::diagonal(2, 2, &[1, 1]));
        assert!(a.mul(&IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn triplets_round_trip() {
        let a = IntMatrix::from_dense(&[vec![0, -7], vec![5, 0], vec![0, 0]]);
        let text = a.to_triplets();
        assert_eq!(text, "0 1 -7\n1 0 5\n");
        assert_eq!(IntMatrix::from_triplets(3, 2, &text).unwrap(), a);
        assert!(IntMatrix::from_triplets(1, 1, "0 3 1").is_err());
        assert!(IntMatrix::from_triplets(1, 1, "0 x 1").is_err());
    }
}
