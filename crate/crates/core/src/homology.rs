//! Chain complexes, integral homology and cohomology, connectivity.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dset::DeltaSet;
use crate::error::{Result, TopoError};
use crate::matrix::IntMatrix;
use crate::snf::{smith_normal_form, SmithForm};

/// `Z^betti ⊕ Z/t_1 ⊕ ... ⊕ Z/t_r` with `t_1 | t_2 | ...` and every `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup::default()
    }

    pub fn free(betti: usize) -> Self {
        HomologyGroup { betti, torsion: Vec::new() }
    }

    pub fn new(betti: usize, torsion: &[u64]) -> Self {
        let g = HomologyGroup { betti, torsion: torsion.iter().map(|&t| BigInt::from(t)).collect() };
        debug_assert!(g.is_well_formed(), "torsion {torsion:?} is not a divisibility chain of factors > 1");
        g
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_well_formed(&self) -> bool {
        self.torsion.iter().all(|t| *t > BigInt::one())
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0))
    }

    /// Torsion coefficients as machine integers, if they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// JSON form `{ "dim": k, "betti": b, "torsion": [...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub dim: usize,
    pub betti: usize,
    #[serde(serialize_with = "ser_bigints", deserialize_with = "de_bigints")]
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn new(dim: usize, group: &HomologyGroup) -> Self {
        DegreeHomology { dim, betti: group.betti, torsion: group.torsion.clone() }
    }

    pub fn group(&self) -> HomologyGroup {
        HomologyGroup { betti: self.betti, torsion: self.torsion.clone() }
    }
}

// Torsion coefficients are JSON numbers when they fit in u64, decimal strings otherwise.
fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for t in v {
        match t.to_u64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&t.to_string())?,
        }
    }
    seq.end()
}

fn de_bigints<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        Small(u64),
        Big(String),
    }
    let raw: Vec<Num> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|n| match n {
            Num::Small(x) => Ok(BigInt::from(x)),
            Num::Big(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

/// Graded free abelian groups with boundary maps `∂_k : C_k → C_{k-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k`, of shape `ranks[k-1] × ranks[k]`.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Checks shapes and `∂_{k-1} ∘ ∂_k = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let c = ChainComplex::from_parts(ranks, boundaries)?;
        if let Some(k) = c.first_nonzero_composite() {
            return Err(TopoError::Precondition(format!("∂_{} ∘ ∂_{k} != 0", k - 1)));
        }
        Ok(c)
    }

    fn from_parts(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(TopoError::InvalidArgument(format!(
                "{} ranks need {} boundary maps, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (idx, b) in boundaries.iter().enumerate() {
            let k = idx + 1;
            if b.rows() != ranks[k - 1] || b.cols() != ranks[k] {
                return Err(TopoError::InvalidArgument(format!(
                    "∂_{k} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    ranks[k - 1],
                    ranks[k]
                )));
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    /// The simplicial chain complex `∂ = Σ (-1)^i d_i`.
    pub fn from_delta_set(d: &DeltaSet) -> Self {
        let boundaries = (1..d.num_dims()).map(|k| boundary_matrix(d, k)).collect();
        ChainComplex { ranks: d.counts().to_vec(), boundaries }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, or `None` outside `1..=top`.
    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// Smallest `k` with `∂_{k-1} ∘ ∂_k != 0`.
    pub fn first_nonzero_composite(&self) -> Option<usize> {
        (2..=self.boundaries.len()).find(|&k| {
            let prod = self.boundaries[k - 2].mul(&self.boundaries[k - 1]).expect("shapes were checked");
            !prod.is_zero()
        })
    }

    fn snf(&self, k: usize) -> Option<SmithForm> {
        self.boundary(k).map(smith_normal_form)
    }

    pub fn homology(&self, k: usize) -> HomologyGroup {
        let rank_k = self.snf(k).map_or(0, |f| f.rank());
        homology_from(self.rank(k), rank_k, self.snf(k + 1).as_ref())
    }

    /// `H_0 .. H_up_to`, computing each Smith form once.
    pub fn all_homology(&self, up_to: usize) -> Vec<HomologyGroup> {
        let forms: Vec<Option<SmithForm>> = (0..=up_to + 1).into_par_iter().map(|k| self.snf(k)).collect();
        (0..=up_to)
            .map(|k| homology_from(self.rank(k), forms[k].as_ref().map_or(0, SmithForm::rank), forms[k + 1].as_ref()))
            .collect()
    }
}

fn homology_from(rank_chains: usize, rank_out: usize, incoming: Option<&SmithForm>) -> HomologyGroup {
    let rank_in = incoming.map_or(0, SmithForm::rank);
    HomologyGroup {
        betti: rank_chains - rank_out - rank_in,
        torsion: incoming.map(SmithForm::torsion).unwrap_or_default(),
    }
}

/// Column `σ` holds `Σ_i (-1)^i` at row `d_i σ`; coinciding faces are summed.
/// Empty (`0 × 0`-shaped by the counts) outside `1..=dimension`.
pub fn boundary_matrix(d: &DeltaSet, k: usize) -> IntMatrix {
    if k == 0 {
        return IntMatrix::zeros(0, d.count(0));
    }
    let mut m = IntMatrix::zeros(d.count(k - 1), d.count(k));
    if k < d.num_dims() {
        let (plus, minus) = (BigInt::from(1), BigInt::from(-1));
        for s in 0..d.count(k) {
            for i in 0..=k {
                m.add(d.face(k, i, s), s, if i % 2 == 0 { &plus } else { &minus });
            }
        }
    }
    m
}

pub fn homology(d: &DeltaSet, k: usize) -> HomologyGroup {
    let rank_k = if k == 0 { 0 } else { smith_normal_form(&boundary_matrix(d, k)).rank() };
    let incoming = smith_normal_form(&boundary_matrix(d, k + 1));
    homology_from(d.count(k), rank_k, Some(&incoming))
}

/// Reduced homology: `H_0` loses one free summand for non-empty spaces.
pub fn reduced_homology(d: &DeltaSet, k: usize) -> HomologyGroup {
    reduce(d, k, homology(d, k))
}

fn reduce(d: &DeltaSet, k: usize, mut h: HomologyGroup) -> HomologyGroup {
    if k == 0 && !d.is_empty() {
        h.betti -= 1;
    }
    h
}

/// `H_0 .. H_up_to` (reduced if asked).
pub fn all_homology(d: &DeltaSet, up_to: usize, reduced: bool) -> Vec<HomologyGroup> {
    let hs = ChainComplex::from_delta_set(d).all_homology(up_to);
    if reduced {
        hs.into_iter().enumerate().map(|(k, h)| reduce(d, k, h)).collect()
    } else {
        hs
    }
}

pub fn homology_of_complex(c: &ChainComplex, k: usize) -> HomologyGroup {
    c.homology(k)
}

/// Universal coefficients: `H^k = Z^{b_k} ⊕ torsion(H_{k-1})`.
pub fn cohomology(d: &DeltaSet, k: usize) -> HomologyGroup {
    let betti = homology(d, k).betti;
    let torsion = if k == 0 { Vec::new() } else { homology(d, k - 1).torsion };
    HomologyGroup { betti, torsion }
}

/// Homological connectivity of a Δ-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connectivity {
    /// Largest `c` with vanishing reduced homology through degree `c`
    /// (`-2` empty, `-1` inhabited but disconnected).
    Finite(i64),
    /// Every reduced homology group vanishes.
    Acyclic,
}

impl Connectivity {
    /// Connectivity bound for a join: `c_A + c_B + 2`. Joining an acyclic space
    /// with anything (including the empty space, the unit) stays acyclic.
    pub fn join_bound(self, other: Connectivity) -> Connectivity {
        match (self, other) {
            (Connectivity::Finite(a), Connectivity::Finite(b)) => Connectivity::Finite(a + b + 2),
            _ => Connectivity::Acyclic,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectivity::Finite(c) => write!(f, "{c}"),
            Connectivity::Acyclic => write!(f, "infinite"),
        }
    }
}

impl Serialize for Connectivity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Connectivity::Finite(c) => s.serialize_i64(*c),
            Connectivity::Acyclic => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Connectivity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(c) => Ok(Connectivity::Finite(c)),
            Raw::S(s) if s == "infinite" => Ok(Connectivity::Acyclic),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad connectivity '{s}'"))),
        }
    }
}

/// Connectivity read off reduced homology that has already been computed
/// in degrees `0..=dimension`.
pub fn connectivity_from_reduced(d: &DeltaSet, reduced: &[HomologyGroup]) -> Connectivity {
    if d.is_empty() {
        return Connectivity::Finite(-2);
    }
    // Non-empty: reduced H_0 = 0 iff connected.
    match reduced.iter().position(|h| !h.is_zero()) {
        Some(k) => Connectivity::Finite(k as i64 - 1),
        None => Connectivity::Acyclic,
    }
}

pub fn homological_connectivity(d: &DeltaSet) -> Connectivity {
    if d.is_empty() {
        return Connectivity::Finite(-2);
    }
    let reduced = all_homology(d, d.num_dims() - 1, true);
    connectivity_from_reduced(d, &reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dset::{disjoint_union, join};

    fn hs(d: &DeltaSet) -> Vec<HomologyGroup> {
        all_homology(d, d.num_dims().saturating_sub(1), false)
    }

    #[test]
    fn boundary_of_loop_cancels() {
        let b = boundary_matrix(&DeltaSet::polygon_circle(1).unwrap(), 1);
        assert_eq!((b.rows(), b.cols()), (1, 1));
        assert!(b.is_zero());
    }

    #[test]
    fn boundary_of_triangle_circle() {
        let b = boundary_matrix(&DeltaSet::polygon_circle(3).unwrap(), 1);
        for j in 0..3 {
            assert_eq!(b.get((j + 1) % 3, j), BigInt::from(1));
            assert_eq!(b.get(j, j), BigInt::from(-1));
        }
        let f = smith_normal_form(&b);
        assert_eq!(f.diagonal, vec![BigInt::from(1), BigInt::from(1)]);
        assert!(boundary_matrix(&DeltaSet::polygon_circle(3).unwrap(), 5).is_zero());
    }

    #[test]
    fn circles() {
        for m in [1, 3, 4] {
            assert_eq!(hs(&DeltaSet::polygon_circle(m).unwrap()), vec![HomologyGroup::free(1); 2]);
        }
        let c = DeltaSet::polygon_circle(3).unwrap();
        assert_eq!(hs(&disjoint_union(&c, &c)), vec![HomologyGroup::free(2); 2]);
    }

    #[test]
    fn spheres() {
        for n in 1..5i64 {
            let s = DeltaSet::sphere(n).unwrap();
            for k in 0..=(n as usize + 1) {
                let expect = if k == 0 || k == n as usize { HomologyGroup::free(1) } else { HomologyGroup::zero() };
                assert_eq!(homology(&s, k), expect, "H_{k}(S^{n})");
            }
            assert_eq!(homological_connectivity(&s), Connectivity::Finite(n - 1));
            assert_eq!(cohomology(&s, n as usize), HomologyGroup::free(1));
        }
    }

    #[test]
    fn point() {
        let p = DeltaSet::point();
        assert_eq!(homology(&p, 0), HomologyGroup::free(1));
        assert_eq!(homology(&p, 1), HomologyGroup::zero());
        assert_eq!(cohomology(&p, 1), HomologyGroup::zero());
        assert_eq!(homological_connectivity(&p), Connectivity::Acyclic);
        let i = join(&p, &p);
        assert_eq!(hs(&i), vec![HomologyGroup::free(1), HomologyGroup::zero()]);
    }

    #[test]
    fn connectivity_conventions() {
        assert_eq!(homological_connectivity(&DeltaSet::empty()), Connectivity::Finite(-2));
        assert_eq!(homological_connectivity(&DeltaSet::discrete(2).unwrap()), Connectivity::Finite(-1));
        let s0 = DeltaSet::discrete(2).unwrap();
        assert_eq!(homological_connectivity(&join(&s0, &s0)), Connectivity::Finite(0));
    }

    #[test]
    fn multiplication_by_m_complex() {
        for m in 2..7 {
            let c = ChainComplex::new(vec![1, 1], vec![IntMatrix::diagonal(1, 1, &[m])]).unwrap();
            assert_eq!(homology_of_complex(&c, 0), HomologyGroup::new(0, &[m as u64]));
            assert_eq!(homology_of_complex(&c, 1), HomologyGroup::zero());
        }
    }

    #[test]
    fn zero_boundaries_give_free_homology() {
        let c = ChainComplex::new(vec![2, 3, 1], vec![IntMatrix::zeros(2, 3), IntMatrix::zeros(3, 1)]).unwrap();
        assert_eq!(c.all_homology(2), vec![HomologyGroup::free(2), HomologyGroup::free(3), HomologyGroup::free(1)]);
    }

    #[test]
    fn complex_validation() {
        let d = IntMatrix::diagonal(1, 1, &[1]);
        assert!(ChainComplex::new(vec![1, 1, 1], vec![d.clone(), d.clone()]).is_err());
        assert!(ChainComplex::new(vec![1, 2], vec![d]).is_err());
        assert!(ChainComplex::new(vec![], vec![]).is_ok());
    }

    #[test]
    fn json_shape() {
        let h = DegreeHomology::new(1, &HomologyGroup::new(0, &[5]));
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"dim":1,"betti":0,"torsion":[5]}"#);
        let big = DegreeHomology { dim: 2, betti: 1, torsion: vec!["123456789012345678901234567890".parse().unwrap()] };
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<DegreeHomology>(&text).unwrap(), big);
    }

    #[test]
    fn display() {
        assert_eq!(HomologyGroup::new(2, &[2, 4]).to_string(), "Z^2 + Z_2 + Z_4");
        assert_eq!(HomologyGroup::zero().to_string(), "0");
    }
}
