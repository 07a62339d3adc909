//! Named constructions: lens spaces, the minimal lens chain complex, Milnor
//! approximations of classifying spaces, real projective spaces and mapping
//! tori.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::action::{join_actions, quotient, rotation_action, translation_action, GroupAction};
use crate::dset::{DeltaMap, DeltaSet};
use crate::error::{Result, TopoError};
use crate::group::FiniteGroup;
use crate::homology::{all_homology, boundary_matrix, ChainComplex, HomologyGroup};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// Modulus and rotation parameters of a lens space, parameters kept mod `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LensParams {
    m: u64,
    ls: Vec<u64>,
}

impl LensParams {
    pub fn new(m: u64, ls: &[i64]) -> Result<Self> {
        if m < 2 {
            return Err(TopoError::InvalidArgument(format!("lens modulus must be >= 2, got {m}")));
        }
        if ls.is_empty() {
            return Err(TopoError::InvalidArgument("lens space needs at least one parameter".into()));
        }
        Ok(LensParams { m, ls: ls.iter().map(|&l| l.rem_euclid(m as i64) as u64).collect() })
    }

    /// `L(m; 1, ..., 1)` with `n` parameters.
    pub fn standard(m: u64, n: usize) -> Result<Self> {
        LensParams::new(m, &vec![1; n])
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn params(&self) -> &[u64] {
        &self.ls
    }

    /// Rejects the first parameter sharing a factor with `m` (1-based index).
    pub fn check_coprime(&self) -> Result<()> {
        for (i, &l) in self.ls.iter().enumerate() {
            let g = l.gcd(&self.m);
            if g != 1 {
                return Err(TopoError::NonPrimeParameter { index: i + 1, gcd: g });
            }
        }
        Ok(())
    }
}

/// The diagonal rotation action on `(S^1)^{⋈n} = S^{2n-1}`.
pub fn lens_action(p: &LensParams) -> Result<GroupAction> {
    let m = p.m as usize;
    let mut acc = rotation_action(m, p.ls[0] as i64)?;
    for &l in &p.ls[1..] {
        acc = join_actions(&acc, &rotation_action(m, l as i64)?)?;
    }
    Ok(acc)
}

/// `L(m; l_1..l_n)` as the orbit space of the sphere `S^{2n-1}`, together with
/// the covering projection from that sphere.
pub fn lens_space(p: &LensParams) -> Result<(DeltaSet, DeltaMap)> {
    p.check_coprime()?;
    quotient(&lens_action(p)?)
}

/// One cell per degree `0..=2n-1`; `∂_k` is `0` for odd `k` and `m` for even `k`.
pub fn lens_minimal_chain(m: u64, n: usize) -> Result<ChainComplex> {
    if m < 2 || n == 0 {
        return Err(TopoError::InvalidArgument(format!("lens_minimal_chain needs m >= 2, n >= 1 (got {m}, {n})")));
    }
    let top = 2 * n - 1;
    let boundaries = (1..=top)
        .map(|k| if k % 2 == 1 { IntMatrix::zeros(1, 1) } else { IntMatrix::diagonal(1, 1, &[m as i64]) })
        .collect();
    ChainComplex::new(vec![1; top + 1], boundaries)
}

/// `E_n G = G^{⋈(n+1)}` with the diagonal translation action.
pub fn milnor_total(g: &FiniteGroup, n: usize) -> GroupAction {
    let t = translation_action(g);
    let mut acc = t.clone();
    for _ in 0..n {
        acc = join_actions(&acc, &t).expect("same group");
    }
    acc
}

/// `B_n G = E_n G / G` and its covering projection.
pub fn milnor_base(g: &FiniteGroup, n: usize) -> (DeltaSet, DeltaMap) {
    quotient(&milnor_total(g, n)).expect("diagonal translation action is free")
}

/// `RP^n = B_n(Z/2)`.
pub fn real_projective(n: usize) -> (DeltaSet, DeltaMap) {
    milnor_base(&FiniteGroup::cyclic(2).expect("order 2"), n)
}

/// The rotation of `polygon_circle(m)` by `l` steps, as an automorphism.
pub fn polygon_rotation(m: usize, l: i64) -> Result<DeltaMap> {
    let c = Arc::new(DeltaSet::polygon_circle(m)?);
    let step = l.rem_euclid(m as i64) as usize;
    let perm: Vec<usize> = (0..m).map(|j| (j + step) % m).collect();
    DeltaMap::new(c.clone(), c, vec![perm.clone(), perm])
}

/// The mapping torus of an automorphism `f` of `D`.
///
/// Each `p`-simplex `σ` spans a prism `σ × I` cut into the `p + 1` shuffle
/// simplices `T_j(σ) = [(0,0) .. (j,0), (j,1) .. (p,1)]`. Their codimension-one
/// pieces are the slanted simplices `S_j(σ)` (vertices `0..j` at the bottom,
/// `j..=p` at the top); `S_{p+1}(σ)` is the bottom copy of `σ` and `S_0(σ)`,
/// the top copy, is glued to the bottom copy of `f(σ)`.
///
/// Layout in dimension `k`: bottom copies, then `S_j` for `j = 1..=k`, then
/// `T_j` over `(k-1)`-simplices for `j = 0..k`.
pub fn mapping_torus(d: &DeltaSet, f: &DeltaMap) -> Result<DeltaSet> {
    if **f.source() != *d || **f.target() != *d {
        return Err(TopoError::NotAutomorphism("source and target must both be the given space".into()));
    }
    if !f.is_automorphism() {
        return Err(TopoError::NotAutomorphism("map is not bijective in every dimension".into()));
    }
    let dims = if d.is_empty() { 0 } else { d.num_dims() + 1 };
    let c = |k: usize| d.count(k);
    // Index of S_j(σ) for a k-simplex σ, with the two ends identified.
    let slant = |k: usize, j: usize, s: usize| -> usize {
        if j == 0 {
            f.apply(k, s)
        } else if j == k + 1 {
            s
        } else {
            c(k) + (j - 1) * c(k) + s
        }
    };
    let shuffle = |k: usize, j: usize, t: usize| -> usize { c(k) + k * c(k) + j * c(k - 1) + t };

    let counts: Vec<usize> =
        (0..dims).map(|k| c(k) * (k + 1) + if k > 0 { k * c(k - 1) } else { 0 }).collect();
    let mut faces = Vec::with_capacity(dims.saturating_sub(1));
    for k in 1..dims {
        let mut tables: Vec<Vec<usize>> = vec![Vec::with_capacity(counts[k]); k + 1];
        // Bottom copies.
        for s in 0..c(k) {
            for (i, t) in tables.iter_mut().enumerate() {
                t.push(d.face(k, i, s));
            }
        }
        // Slanted S_j(σ), 1 <= j <= k.
        for j in 1..=k {
            for s in 0..c(k) {
                for (i, t) in tables.iter_mut().enumerate() {
                    let face = d.face(k, i, s);
                    t.push(if i < j { slant(k - 1, j - 1, face) } else { slant(k - 1, j, face) });
                }
            }
        }
        // Shuffles T_j(τ) over (k-1)-simplices τ, 0 <= j <= k-1.
        let p = k - 1;
        for j in 0..=p {
            for tau in 0..c(p) {
                for (i, t) in tables.iter_mut().enumerate() {
                    let idx = if i < j {
                        shuffle(k - 1, j - 1, d.face(p, i, tau))
                    } else if i == j {
                        slant(p, j, tau)
                    } else if i == j + 1 {
                        slant(p, j + 1, tau)
                    } else {
                        shuffle(k - 1, j, d.face(p, i - 1, tau))
                    };
                    t.push(idx);
                }
            }
        }
        faces.push(tables);
    }
    Ok(DeltaSet::from_parts_unchecked(counts, faces))
}

/// The classical torus: one vertex, three edges `a`, `b`, `c`, two triangles.
pub fn two_triangle_torus() -> DeltaSet {
    // Triangles [(0,0),(1,0),(1,1)] and [(0,0),(0,1),(1,1)] of the unit square;
    // a = horizontal, b = vertical, c = diagonal.
    let (a, b, c) = (0, 1, 2);
    DeltaSet::from_parts_unchecked(
        vec![1, 3, 2],
        vec![vec![vec![0; 3], vec![0; 3]], vec![vec![b, a], vec![c, c], vec![a, b]]],
    )
}

/// Homology in every degree `0..=dimension`, unreduced.
pub fn full_homology(d: &DeltaSet) -> Vec<HomologyGroup> {
    if d.is_empty() {
        return Vec::new();
    }
    all_homology(d, d.num_dims() - 1, false)
}

/// Per-dimension sizes of the three models of `B Z/m` truncated at `2n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCountReport {
    pub m: usize,
    pub n: usize,
    pub minimal: Vec<usize>,
    pub lens: Vec<usize>,
    pub milnor: Vec<usize>,
    /// `minimal <= lens <= milnor` in every shared dimension.
    pub ordered: bool,
    /// Reduced top-degree Betti number of `E_{2n-1}(Z/m)`.
    pub milnor_total_top_betti: usize,
    pub expected_top_betti: usize,
}

impl CellCountReport {
    pub fn holds(&self) -> bool {
        self.ordered && self.milnor_total_top_betti == self.expected_top_betti
    }
}

pub fn cell_count_report(m: usize, n: usize) -> Result<CellCountReport> {
    if m < 2 || n == 0 {
        return Err(TopoError::InvalidArgument(format!("cell_count_report needs m >= 2, n >= 1 (got {m}, {n})")));
    }
    let minimal = lens_minimal_chain(m as u64, n)?.ranks().to_vec();
    let lens = lens_space(&LensParams::standard(m as u64, n)?)?.0.f_vector();
    let g = FiniteGroup::cyclic(m)?;
    let total = milnor_total(&g, 2 * n - 1);
    let milnor = quotient(&total)?.0.f_vector();
    let ordered = (0..minimal.len().min(lens.len()).min(milnor.len()))
        .all(|k| minimal[k] <= lens[k] && lens[k] <= milnor[k]);
    // Top degree: H_top = ker ∂_top, and nothing above it.
    let space = total.space();
    let top = space.num_dims() - 1;
    let top_betti = space.count(top) - smith_normal_form(&boundary_matrix(space, top)).rank();
    Ok(CellCountReport {
        m,
        n,
        minimal,
        lens,
        milnor,
        ordered,
        milnor_total_top_betti: top_betti,
        expected_top_betti: (m - 1).pow(2 * n as u32),
    })
}

/// `H_k(B_{n1} G) = H_k(B_{n2} G)` for `k <= min(n1, n2) - 1`.
pub fn stability_check(g: &FiniteGroup, k: usize, n1: usize, n2: usize) -> Result<bool> {
    if k + 1 > n1.min(n2) {
        return Err(TopoError::Precondition(format!("degree {k} is not below min({n1}, {n2})")));
    }
    let h = |n: usize| crate::homology::homology(&milnor_base(g, n).0, k);
    Ok(h(n1) == h(n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_of_complex;

    fn lens_homology(m: u64, ls: &[i64]) -> Vec<HomologyGroup> {
        full_homology(&lens_space(&LensParams::new(m, ls).unwrap()).unwrap().0)
    }

    fn pattern(m: u64, n: usize) -> Vec<HomologyGroup> {
        (0..2 * n)
            .map(|k| match k {
                0 => HomologyGroup::free(1),
                k if k == 2 * n - 1 => HomologyGroup::free(1),
                k if k % 2 == 1 => HomologyGroup::new(0, &[m]),
                _ => HomologyGroup::zero(),
            })
            .collect()
    }

    #[test]
    fn rp3_as_lens_space() {
        assert_eq!(lens_homology(2, &[1, 1]), pattern(2, 2));
        let c = lens_minimal_chain(2, 2).unwrap();
        assert_eq!(c.all_homology(3), pattern(2, 2));
    }

    #[test]
    fn lens_five() {
        assert_eq!(lens_homology(5, &[1, 1]), pattern(5, 2));
        let (l, p) = lens_space(&LensParams::new(5, &[1, 1]).unwrap()).unwrap();
        assert_eq!(l.dimension(), 3);
        assert!(p.fiber_sizes().iter().flatten().all(|&c| c == 5));
    }

    #[test]
    fn non_coprime_parameter_rejected() {
        let err = lens_space(&LensParams::new(6, &[2, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, TopoError::NonPrimeParameter { index: 1, gcd: 2 }));
        let err = lens_space(&LensParams::new(4, &[1, 6]).unwrap()).unwrap_err();
        assert!(matches!(err, TopoError::NonPrimeParameter { index: 2, gcd: 2 }));
        assert!(LensParams::new(1, &[1]).is_err());
        assert!(LensParams::new(3, &[]).is_err());
    }

    #[test]
    fn minimal_chains() {
        let c = lens_minimal_chain(2, 1).unwrap();
        assert_eq!(c.all_homology(1), vec![HomologyGroup::free(1); 2]);
        let c = lens_minimal_chain(5, 2).unwrap();
        assert_eq!(
            (0..4).map(|k| homology_of_complex(&c, k)).collect::<Vec<_>>(),
            vec![HomologyGroup::free(1), HomologyGroup::new(0, &[5]), HomologyGroup::zero(), HomologyGroup::free(1)]
        );
        let c = lens_minimal_chain(3, 3).unwrap();
        assert_eq!(c.all_homology(5), pattern(3, 3));
        assert!(lens_minimal_chain(1, 2).is_err());
        assert!(lens_minimal_chain(3, 0).is_err());
    }

    #[test]
    fn small_milnor_bases() {
        let (rp1, _) = milnor_base(&FiniteGroup::cyclic(2).unwrap(), 1);
        assert_eq!(rp1.counts(), &[2, 2]);
        assert_eq!(full_homology(&rp1), vec![HomologyGroup::free(1); 2]);
        let (rp0, _) = real_projective(0);
        assert_eq!(rp0, DeltaSet::point());
        let (rp3, _) = real_projective(3);
        assert_eq!(full_homology(&rp3), pattern(2, 2));
    }

    #[test]
    fn mapping_torus_of_point_is_circle() {
        let p = Arc::new(DeltaSet::point());
        let t = mapping_torus(&p, &DeltaMap::identity(p.clone())).unwrap();
        assert!(t.validate().ok);
        assert_eq!(t.counts(), &[1, 1]);
        assert_eq!(full_homology(&t), vec![HomologyGroup::free(1); 2]);
    }

    #[test]
    fn mapping_tori_of_circles_are_tori() {
        let torus = vec![HomologyGroup::free(1), HomologyGroup::free(2), HomologyGroup::free(1)];
        assert_eq!(full_homology(&two_triangle_torus()), torus);
        for m in 1..6 {
            for l in 0..m as i64 {
                let f = polygon_rotation(m, l).unwrap();
                let t = mapping_torus(f.source(), &f).unwrap();
                assert!(t.validate().ok);
                assert_eq!(t.euler_characteristic(), 0);
                assert_eq!(full_homology(&t), torus, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn mapping_torus_rejects_non_automorphisms() {
        let c = Arc::new(DeltaSet::polygon_circle(3).unwrap());
        let loop1 = Arc::new(DeltaSet::polygon_circle(1).unwrap());
        let collapse = DeltaMap::new(c.clone(), loop1, vec![vec![0; 3], vec![0; 3]]).unwrap();
        assert!(matches!(mapping_torus(&c, &collapse), Err(TopoError::NotAutomorphism(_))));
        let other = DeltaSet::polygon_circle(4).unwrap();
        let id = DeltaMap::identity(c);
        assert!(matches!(mapping_torus(&other, &id), Err(TopoError::NotAutomorphism(_))));
    }

    #[test]
    fn cell_counts() {
        let r = cell_count_report(2, 1).unwrap();
        assert_eq!(r.minimal, vec![1, 1]);
        assert_eq!(r.milnor, vec![2, 2]);
        assert_eq!(r.lens, vec![1, 1]);
        assert!(r.holds());
        let r = cell_count_report(3, 2).unwrap();
        assert_eq!(r.milnor_total_top_betti, 16);
        assert!(r.holds());
    }

    #[test]
    fn stability() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert!(stability_check(&z3, 1, 2, 4).unwrap());
        assert!(stability_check(&FiniteGroup::dihedral(3).unwrap(), 1, 2, 3).unwrap());
        assert!(stability_check(&z3, 0, 1, 3).unwrap());
        assert!(matches!(stability_check(&z3, 2, 2, 4), Err(TopoError::Precondition(_))));
    }
}
