use super::DeltaSet;

/// Where a simplex of `A ⋈ B` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinCell {
    Left(usize),
    Right(usize),
    /// A `p`-simplex of `A` followed by a `(n - 1 - p)`-simplex of `B`.
    Mixed { p: usize, left: usize, right: usize },
}

/// Index bookkeeping for `A ⋈ B`.
///
/// In dimension `n` the simplices are laid out as `A_n`, then `B_n`, then the
/// blocks `A_p × B_q` (`p + q = n - 1`) for increasing `p`, each block in
/// row-major order. All `A`-vertices come before all `B`-vertices inside a
/// mixed simplex.
#[derive(Clone, Debug)]
pub struct JoinLayout {
    a: Vec<usize>,
    b: Vec<usize>,
    /// Per output dimension: `(p, start)` for every non-empty mixed block.
    blocks: Vec<Vec<(usize, usize)>>,
    counts: Vec<usize>,
}

impl JoinLayout {
    pub fn new(a: &DeltaSet, b: &DeltaSet) -> Self {
        let (a, b) = (a.counts().to_vec(), b.counts().to_vec());
        let dims = if a.is_empty() || b.is_empty() { a.len().max(b.len()) } else { a.len() + b.len() };
        let mut blocks = Vec::with_capacity(dims);
        let mut counts = Vec::with_capacity(dims);
        for n in 0..dims {
            let mut start = a.get(n).copied().unwrap_or(0) + b.get(n).copied().unwrap_or(0);
            let mut row = Vec::new();
            for p in 0..n {
                let q = n - 1 - p;
                if p < a.len() && q < b.len() {
                    row.push((p, start));
                    start += a[p] * b[q];
                }
            }
            blocks.push(row);
            counts.push(start);
        }
        JoinLayout { a, b, blocks, counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn encode(&self, n: usize, cell: JoinCell) -> usize {
        match cell {
            JoinCell::Left(s) => s,
            JoinCell::Right(t) => self.a.get(n).copied().unwrap_or(0) + t,
            JoinCell::Mixed { p, left, right } => {
                let start = self.blocks[n]
                    .iter()
                    .find(|&&(bp, _)| bp == p)
                    .map(|&(_, s)| s)
                    .expect("no such join block");
                start + left * self.b[n - 1 - p] + right
            }
        }
    }

    pub fn decode(&self, n: usize, idx: usize) -> JoinCell {
        let an = self.a.get(n).copied().unwrap_or(0);
        let bn = self.b.get(n).copied().unwrap_or(0);
        if idx < an {
            return JoinCell::Left(idx);
        }
        if idx < an + bn {
            return JoinCell::Right(idx - an);
        }
        let &(p, start) = self.blocks[n]
            .iter()
            .rev()
            .find(|&&(_, s)| s <= idx)
            .expect("join index out of range");
        let width = self.b[n - 1 - p];
        let off = idx - start;
        JoinCell::Mixed { p, left: off / width, right: off % width }
    }
}

/// The join `A ⋈ B`.
///
/// For a mixed simplex `(σ, τ)` with `dim σ = p`: `d_i(σ, τ) = (d_i σ, τ)` for
/// `i <= p` (just `τ` when `p = 0`), and `d_i(σ, τ) = (σ, d_{i-p-1} τ)` otherwise
/// (just `σ` when `τ` is a vertex).
pub fn join(a: &DeltaSet, b: &DeltaSet) -> DeltaSet {
    let layout = JoinLayout::new(a, b);
    let counts = layout.counts().to_vec();
    let mut faces: Vec<Vec<Vec<usize>>> =
        (1..counts.len()).map(|n| vec![Vec::with_capacity(counts[n]); n + 1]).collect();
    for n in 1..counts.len() {
        let tables = &mut faces[n - 1];
        for idx in 0..counts[n] {
            match layout.decode(n, idx) {
                JoinCell::Left(s) => {
                    for (i, t) in tables.iter_mut().enumerate() {
                        t.push(layout.encode(n - 1, JoinCell::Left(a.face(n, i, s))));
                    }
                }
                JoinCell::Right(s) => {
                    for (i, t) in tables.iter_mut().enumerate() {
                        t.push(layout.encode(n - 1, JoinCell::Right(b.face(n, i, s))));
                    }
                }
                JoinCell::Mixed { p, left, right } => {
                    let q = n - 1 - p;
                    for (i, t) in tables.iter_mut().enumerate() {
                        let cell = if i <= p {
                            if p == 0 {
                                JoinCell::Right(right)
                            } else {
                                JoinCell::Mixed { p: p - 1, left: a.face(p, i, left), right }
                            }
                        } else if q == 0 {
                            JoinCell::Left(left)
                        } else {
                            JoinCell::Mixed { p, left, right: b.face(q, i - p - 1, right) }
                        };
                        t.push(layout.encode(n - 1, cell));
                    }
                }
            }
        }
    }
    DeltaSet::from_parts_unchecked(counts, faces)
}
