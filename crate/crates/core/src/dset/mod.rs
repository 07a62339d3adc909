//! Finite semi-simplicial sets.
//!
//! A [`DeltaSet`] stores, per dimension, how many simplices there are and the
//! face tables `d_i`. Simplices are identified by `(dimension, dense index)`.
//! There are no degeneracies: joins and quotients by free actions stay inside
//! this category without subdivision.

mod join;
mod map;

pub use join::{join, JoinCell, JoinLayout};
pub use map::DeltaMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TopoError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSet {
    counts: Vec<usize>,
    /// `faces[k - 1][i][s]` is `d_i` of the `k`-simplex `s`.
    faces: Vec<Vec<Vec<usize>>>,
    labels: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub dim: usize,
    pub simplex: usize,
    pub identity: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "dimension {}, simplex {}: {}", self.dim, self.simplex, self.identity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Serialize, Deserialize)]
struct DeltaSetFile {
    counts: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
}

impl DeltaSet {
    /// Assembles a Δ-set from raw tables, checking only their shape.
    ///
    /// Range and simplicial-identity checks are left to [`DeltaSet::validate`]
    /// so that broken tables can still be inspected. Trailing empty dimensions
    /// are dropped.
    pub fn from_parts(mut counts: Vec<usize>, mut faces: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if faces.len() + 1 != counts.len() && !(counts.is_empty() && faces.is_empty()) {
            return Err(TopoError::MalformedDeltaSet(format!(
                "{} dimensions of counts but {} face tables",
                counts.len(),
                faces.len()
            )));
        }
        for (idx, tables) in faces.iter().enumerate() {
            let k = idx + 1;
            if tables.len() != k + 1 {
                return Err(TopoError::MalformedDeltaSet(format!(
                    "dimension {k} needs {} face tables, found {}",
                    k + 1,
                    tables.len()
                )));
            }
            if let Some(i) = tables.iter().position(|t| t.len() != counts[k]) {
                return Err(TopoError::MalformedDeltaSet(format!(
                    "face table d_{i} in dimension {k} has {} entries, expected {}",
                    tables[i].len(),
                    counts[k]
                )));
            }
        }
        while counts.last() == Some(&0) {
            counts.pop();
            faces.pop();
        }
        Ok(DeltaSet { counts, faces, labels: None })
    }

    pub(crate) fn from_parts_unchecked(counts: Vec<usize>, faces: Vec<Vec<Vec<usize>>>) -> Self {
        let d = DeltaSet::from_parts(counts, faces).expect("constructor produced malformed tables");
        debug_assert!(d.validate().ok, "constructor produced an invalid delta-set: {:?}", d.validate());
        d
    }

    pub fn empty() -> Self {
        DeltaSet { counts: Vec::new(), faces: Vec::new(), labels: None }
    }

    pub fn point() -> Self {
        DeltaSet { counts: vec![1], faces: Vec::new(), labels: None }
    }

    /// `k` isolated vertices.
    pub fn discrete(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(TopoError::InvalidArgument(
                "discrete(k) needs k >= 1; use DeltaSet::empty() for the empty set".into(),
            ));
        }
        Ok(DeltaSet { counts: vec![k], faces: Vec::new(), labels: None })
    }

    /// The directed `m`-gon: edge `e_j` runs from `v_j` to `v_{j+1 mod m}`.
    pub fn polygon_circle(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(TopoError::InvalidArgument("polygon_circle(m) needs m >= 1".into()));
        }
        let d0 = (0..m).map(|j| (j + 1) % m).collect();
        let d1 = (0..m).collect();
        Ok(DeltaSet::from_parts_unchecked(vec![m, m], vec![vec![d0, d1]]))
    }

    /// `S^n` as the join of `n + 1` copies of `S^0`; `sphere(-1)` is empty.
    pub fn sphere(n: i64) -> Result<Self> {
        if n < -1 {
            return Err(TopoError::InvalidArgument(format!("sphere({n}) needs n >= -1")));
        }
        let s0 = DeltaSet::discrete(2)?;
        Ok((0..=n).fold(DeltaSet::empty(), |acc, _| join(&acc, &s0)))
    }

    /// The Δ-set of an abstract simplicial complex given by its facets.
    ///
    /// Vertices are relabelled densely in increasing order and every simplex
    /// is a sorted vertex list, so `d_i` drops the `i`-th vertex.
    pub fn from_simplicial_complex(facets: &[Vec<usize>]) -> Self {
        use std::collections::{BTreeMap, BTreeSet};
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            // All non-empty subsets, via bitmask. Facets stay small in practice.
            assert!(f.len() <= 20, "facet too large for subset enumeration");
            for mask in 1u32..(1u32 << f.len()) {
                let s: Vec<usize> =
                    f.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect();
                let k = s.len() - 1;
                if by_dim.len() <= k {
                    by_dim.resize_with(k + 1, BTreeSet::new);
                }
                by_dim[k].insert(s);
            }
        }
        let index: Vec<BTreeMap<&Vec<usize>, usize>> =
            by_dim.iter().map(|set| set.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let counts = by_dim.iter().map(BTreeSet::len).collect();
        let faces = (1..by_dim.len())
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        by_dim[k]
                            .iter()
                            .map(|s| {
                                let mut f = s.clone();
                                f.remove(i);
                                index[k - 1][&f]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DeltaSet::from_parts_unchecked(counts, faces)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Top dimension, or `-1` for the empty Δ-set.
    pub fn dimension(&self) -> i64 {
        self.counts.len() as i64 - 1
    }

    /// Number of dimensions that carry simplices (`dimension() + 1`).
    pub fn num_dims(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_simplices(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `d_i` of the `k`-simplex `s`. Panics unless `k >= 1` and `i <= k`.
    #[inline]
    pub fn face(&self, k: usize, i: usize, s: usize) -> usize {
        self.faces[k - 1][i][s]
    }

    pub fn face_table(&self, k: usize, i: usize) -> &[usize] {
        &self.faces[k - 1][i]
    }

    #[cfg(test)]
    pub(crate) fn face_tables(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.counts.len()
            || labels.iter().zip(&self.counts).any(|(l, &c)| l.len() != c)
        {
            return Err(TopoError::MalformedDeltaSet("label table does not match counts".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.counts.clone()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn connected_components(&self) -> usize {
        let n = self.count(0);
        if n == 0 {
            return 0;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in 0..self.count(1) {
            let a = find(&mut parent, self.face(1, 0, e));
            let b = find(&mut parent, self.face(1, 1, e));
            if a != b {
                parent[a.max(b)] = a.min(b);
                components -= 1;
            }
        }
        components
    }

    /// Checks face ranges and the identities `d_i d_j = d_{j-1} d_i` for `i < j`.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for k in 1..self.counts.len() {
            for s in 0..self.counts[k] {
                for i in 0..=k {
                    let f = self.faces[k - 1][i][s];
                    if f >= self.counts[k - 1] {
                        violations.push(Violation {
                            dim: k,
                            simplex: s,
                            identity: format!("d_{i} in range (got {f}, count {})", self.counts[k - 1]),
                        });
                    }
                }
            }
        }
        if !violations.is_empty() {
            // Identity checks would index out of range.
            return ValidationReport { ok: false, violations };
        }
        for k in 2..self.counts.len() {
            for s in 0..self.counts[k] {
                for j in 1..=k {
                    let dj = self.face(k, j, s);
                    for i in 0..j {
                        let di = self.face(k, i, s);
                        if self.face(k - 1, i, dj) != self.face(k - 1, j - 1, di) {
                            violations.push(Violation {
                                dim: k,
                                simplex: s,
                                identity: format!("d_{i}∘d_{j} = d_{}∘d_{i}", j - 1),
                            });
                        }
                    }
                }
            }
        }
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn to_json(&self) -> String {
        let file = DeltaSetFile {
            counts: self.counts.clone(),
            faces: self.faces.clone(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&file).expect("delta-set serialization cannot fail")
    }

    /// Parses the JSON file format and rejects tables that fail validation.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DeltaSetFile = serde_json::from_str(text)?;
        let mut d = DeltaSet::from_parts(file.counts, file.faces)?;
        if let Some(labels) = file.labels {
            d = d.with_labels(labels)?;
        }
        let report = d.validate();
        if let Some(first) = report.violations.first() {
            return Err(TopoError::InvalidDeltaSet {
                count: report.violations.len(),
                first: first.to_string(),
            });
        }
        Ok(d)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        DeltaSet::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Relabels simplices: the `k`-simplex `s` becomes `perm[k][s]`.
    pub fn permuted(&self, perm: &[Vec<usize>]) -> Result<Self> {
        if perm.len() != self.counts.len() || perm.iter().zip(&self.counts).any(|(p, &c)| !is_permutation(p, c))
        {
            return Err(TopoError::InvalidArgument("not a per-dimension permutation".into()));
        }
        let faces = (1..self.counts.len())
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let mut t = vec![0; self.counts[k]];
                        for s in 0..self.counts[k] {
                            t[perm[k][s]] = perm[k - 1][self.face(k, i, s)];
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        DeltaSet::from_parts(self.counts.clone(), faces)
    }
}

pub(crate) fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Disjoint union with the simplices of `b` placed after those of `a`.
pub fn disjoint_union(a: &DeltaSet, b: &DeltaSet) -> DeltaSet {
    let dims = a.num_dims().max(b.num_dims());
    let counts: Vec<usize> = (0..dims).map(|k| a.count(k) + b.count(k)).collect();
    let faces = (1..dims)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let mut t = Vec::with_capacity(counts[k]);
                    if k < a.num_dims() {
                        t.extend_from_slice(a.face_table(k, i));
                    }
                    if k < b.num_dims() {
                        let off = a.count(k - 1);
                        t.extend(b.face_table(k, i).iter().map(|&f| f + off));
                    }
                    t
                })
                .collect()
        })
        .collect();
    DeltaSet::from_parts_unchecked(counts, faces)
}
