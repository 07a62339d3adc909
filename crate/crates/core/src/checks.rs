//! Named reproducibility checks, runnable from the CLI.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action::{join_actions, quotient, rotation_action, GroupAction};
use crate::dset::{join, DeltaSet};
use crate::error::{Result, TopoError};
use crate::group::FiniteGroup;
use crate::homology::{all_homology, homological_connectivity, HomologyGroup};
use crate::matrix::IntMatrix;
use crate::oracle::{invariant_factors_by_minors, random_delta_set, random_matrix, real_projective_chain};
use crate::snf::smith_normal_form;
use crate::spaces::{
    cell_count_report, full_homology, lens_action, lens_minimal_chain, lens_space, mapping_torus, milnor_base,
    milnor_total, polygon_rotation, stability_check, two_triangle_torus, LensParams,
};

/// Grid restrictions shared by all checks. `None` means the default grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckParams {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {} ({:.2} s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// A failed expectation or a library error raised while checking.
#[derive(Debug)]
pub struct CheckError(String);

impl From<TopoError> for CheckError {
    fn from(e: TopoError) -> Self {
        CheckError(e.to_string())
    }
}

type Outcome<T = String> = std::result::Result<T, CheckError>;
type CheckFn = fn(&CheckParams) -> Outcome;

pub const CHECKS: &[(&str, CheckFn)] = &[
    ("sphere-join", sphere_join),
    ("lens-vs-minimal", lens_vs_minimal),
    ("parameter-independence", parameter_independence),
    ("zm-group-homology", zm_group_homology),
    ("wedge-lemma", wedge_lemma),
    ("rp-tower", rp_tower),
    ("r-is-torus", r_is_torus),
    ("dihedral-h1", dihedral_h1),
    ("covering", covering),
    ("connectivity-growth", connectivity_growth),
    ("snf-oracle", snf_oracle),
    ("stability", stability),
    ("cell-counts", cell_counts),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs the selected checks concurrently; results come back in table order.
/// An empty filter selects everything.
pub fn run_checks(filter: &[String], params: &CheckParams) -> Result<Vec<CheckResult>> {
    if let Some(bad) = filter.iter().find(|f| !CHECKS.iter().any(|(n, _)| n == f)) {
        return Err(TopoError::InvalidArgument(format!(
            "unknown check '{bad}'; available: {}",
            check_names().join(", ")
        )));
    }
    let selected: Vec<&(&str, CheckFn)> =
        CHECKS.iter().filter(|(n, _)| filter.is_empty() || filter.iter().any(|f| f == n)).collect();
    Ok(selected
        .par_iter()
        .map(|&&(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(params) {
                Ok(d) => (true, d),
                Err(CheckError(e)) => (false, e),
            };
            CheckResult { name, passed, detail, elapsed: start.elapsed() }
        })
        .collect())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome<()> {
    if cond {
        Ok(())
    } else {
        Err(CheckError(msg()))
    }
}

fn grid(param: Option<usize>, default: &[usize]) -> Vec<usize> {
    param.map_or_else(|| default.to_vec(), |v| vec![v])
}

fn show(h: &[HomologyGroup]) -> String {
    h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn sphere_join(p: &CheckParams) -> Outcome {
    let pairs: Vec<(i64, i64)> = match (p.m, p.n) {
        (Some(a), Some(b)) => vec![(a as i64, b as i64)],
        _ => (0..=5).flat_map(|a| (0..=5 - a).map(move |b| (a, b))).collect(),
    };
    for &(a, b) in &pairs {
        let j = join(&DeltaSet::sphere(a)?, &DeltaSet::sphere(b)?);
        let top = (a + b + 1) as usize;
        let red = all_homology(&j, top, true);
        for (k, h) in red.iter().enumerate() {
            let want = if k == top { HomologyGroup::free(1) } else { HomologyGroup::zero() };
            ensure(*h == want, || format!("S^{a} join S^{b}: reduced H_{k} = {h}"))?;
        }
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn lens_pattern(m: u64, n: usize) -> Vec<HomologyGroup> {
    (0..2 * n)
        .map(|k| match k {
            0 => HomologyGroup::free(1),
            k if k == 2 * n - 1 => HomologyGroup::free(1),
            k if k % 2 == 1 => HomologyGroup::new(0, &[m]),
            _ => HomologyGroup::zero(),
        })
        .collect()
}

fn lens_vs_minimal(p: &CheckParams) -> Outcome {
    let cases: Vec<(usize, usize)> =
        grid(p.m, &[2, 3, 4, 5, 6]).into_iter().flat_map(|m| grid(p.n, &[1, 2, 3]).into_iter().map(move |n| (m, n))).collect();
    cases.par_iter().try_for_each(|&(m, n)| {
        let lens = full_homology(&lens_space(&LensParams::standard(m as u64, n)?)?.0);
        let minimal = lens_minimal_chain(m as u64, n)?.all_homology(2 * n - 1);
        ensure(lens == minimal && lens == lens_pattern(m as u64, n), || {
            format!("m={m} n={n}: lens [{}] vs minimal [{}]", show(&lens), show(&minimal))
        })
    })?;
    Ok(format!("{} (m, n) cases", cases.len()))
}

fn parameter_independence(p: &CheckParams) -> Outcome {
    let m = p.m.unwrap_or(5) as u64;
    let n = p.n.unwrap_or(2);
    let mut tuples: Vec<Vec<i64>> = vec![vec![1; n]];
    if p.m.is_none() && p.n.is_none() {
        tuples.extend([vec![1, 2], vec![2, 3]]);
    } else {
        let units: Vec<i64> = (1..m as i64).filter(|&u| num_integer::gcd(u, m as i64) == 1).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        for _ in 0..4 {
            tuples.push((0..n).map(|_| units[rng.gen_range(0..units.len())]).collect());
        }
    }
    let homs: Vec<Vec<HomologyGroup>> = tuples
        .par_iter()
        .map(|ls| Ok(full_homology(&lens_space(&LensParams::new(m, ls)?)?.0)))
        .collect::<Outcome<_>>()?;
    for (ls, h) in tuples.iter().zip(&homs) {
        ensure(*h == homs[0], || format!("lens {m} {ls:?}: [{}] vs [{}]", show(h), show(&homs[0])))?;
    }
    Ok(format!("{} tuples mod {m} agree: [{}]", tuples.len(), show(&homs[0])))
}

fn zm_group_homology(p: &CheckParams) -> Outcome {
    let n = p.n.unwrap_or(5);
    let ms = grid(p.m, &[2, 3, 4, 5]);
    ms.par_iter().try_for_each(|&m| {
        let base = milnor_base(&FiniteGroup::cyclic(m)?, n).0;
        let h = all_homology(&base, n.saturating_sub(1), false);
        for (k, g) in h.iter().enumerate() {
            let want = match k {
                0 => HomologyGroup::free(1),
                k if k % 2 == 1 => HomologyGroup::new(0, &[m as u64]),
                _ => HomologyGroup::zero(),
            };
            ensure(*g == want, || format!("B_{n}(Z/{m}): H_{k} = {g}"))?;
        }
        Ok::<(), CheckError>(())
    })?;
    Ok(format!("m in {ms:?}, degrees below {n}"))
}

fn wedge_lemma(p: &CheckParams) -> Outcome {
    let cases: Vec<(usize, usize)> = grid(p.m, &[2, 3, 4])
        .into_iter()
        .flat_map(|m| grid(p.n, &[0, 1, 2, 3, 4]).into_iter().map(move |n| (m, n)))
        .collect();
    cases.par_iter().try_for_each(|&(m, n)| {
        let total = milnor_total(&FiniteGroup::cyclic(m)?, n);
        let red = all_homology(total.space(), n, true);
        let rank = (m - 1).pow(n as u32 + 1);
        for (k, h) in red.iter().enumerate() {
            let want = if k == n { HomologyGroup::free(rank) } else { HomologyGroup::zero() };
            ensure(*h == want, || format!("E_{n}(Z/{m}): reduced H_{k} = {h}, expected {want}"))?;
        }
        Ok::<(), CheckError>(())
    })?;
    Ok(format!("{} (m, n) cases", cases.len()))
}

fn rp_tower(p: &CheckParams) -> Outcome {
    let ns = grid(p.n, &[0, 1, 2, 3, 4, 5]);
    for &n in &ns {
        let h = full_homology(&milnor_base(&FiniteGroup::cyclic(2)?, n).0);
        let oracle = real_projective_chain(n)?.all_homology(n);
        ensure(h == oracle, || format!("RP^{n}: [{}] vs [{}]", show(&h), show(&oracle)))?;
    }
    Ok(format!("n in {ns:?}"))
}

fn r_is_torus(p: &CheckParams) -> Outcome {
    let torus = full_homology(&two_triangle_torus());
    let want = vec![HomologyGroup::free(1), HomologyGroup::free(2), HomologyGroup::free(1)];
    ensure(torus == want, || format!("two-triangle torus: [{}]", show(&torus)))?;
    let ms = grid(p.m, &[3, 4, 5, 6, 7]);
    for &m in &ms {
        let f = polygon_rotation(m, 1)?;
        let t = mapping_torus(f.source(), &f)?;
        let h = full_homology(&t);
        ensure(h == torus, || format!("m={m}: [{}]", show(&h)))?;
    }
    Ok(format!("m in {ms:?}"))
}

fn dihedral_h1(p: &CheckParams) -> Outcome {
    let ms = grid(p.m, &[3, 4, 5, 6]);
    let n = p.n.unwrap_or(3);
    ms.par_iter().try_for_each(|&m| {
        let g = FiniteGroup::dihedral(m)?;
        let ab = g.abelianization();
        let expected: Vec<u64> = if m % 2 == 1 { vec![2] } else { vec![2, 2] };
        ensure(ab == expected, || format!("D_{m}: abelianization {ab:?}"))?;
        let h1 = crate::homology::homology(&milnor_base(&g, n).0, 1);
        ensure(h1 == HomologyGroup::new(0, &ab), || format!("D_{m}: H_1(B_{n}) = {h1}"))
    })?;
    Ok(format!("m in {ms:?}"))
}

fn covering_ok(action: &GroupAction) -> Outcome<()> {
    let (base, proj) = quotient(action)?;
    let g = action.group().order();
    let total = action.space();
    ensure(total.counts().iter().zip(base.counts()).all(|(&e, &b)| e == g * b), || {
        format!("counts {:?} vs {g} x {:?}", total.counts(), base.counts())
    })?;
    ensure(total.euler_characteristic() == g as i64 * base.euler_characteristic(), || "euler".into())?;
    ensure(proj.is_surjective() && proj.fiber_sizes().iter().flatten().all(|&c| c == g), || "fibers".into())
}

fn covering(p: &CheckParams) -> Outcome {
    let mut actions: Vec<GroupAction> = Vec::new();
    for m in grid(p.m, &[2, 3, 4, 5, 6, 7]) {
        for l in 1..m as i64 {
            if num_integer::gcd(l, m as i64) == 1 {
                actions.push(rotation_action(m, l)?);
            }
        }
        for n in grid(p.n, &[1, 2]) {
            actions.push(lens_action(&LensParams::standard(m as u64, n)?)?);
            actions.push(milnor_total(&FiniteGroup::cyclic(m)?, n));
        }
        let r = rotation_action(m, 1)?;
        actions.push(join_actions(&r, &r)?);
    }
    for m in [3, 4] {
        actions.push(milnor_total(&FiniteGroup::dihedral(m)?, 2));
    }
    actions.par_iter().try_for_each(covering_ok)?;
    Ok(format!("{} free actions", actions.len()))
}

fn connectivity_growth(p: &CheckParams) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let pairs: Vec<(DeltaSet, DeltaSet)> =
        (0..200).map(|_| (random_delta_set(&mut rng, 5, 3), random_delta_set(&mut rng, 5, 3))).collect();
    pairs.par_iter().try_for_each(|(a, b)| {
        let (ca, cb) = (homological_connectivity(a), homological_connectivity(b));
        let cj = homological_connectivity(&join(a, b));
        ensure(cj >= ca.join_bound(cb), || format!("conn {cj} < {ca} + {cb} + 2 for f-vectors {:?}, {:?}", a.f_vector(), b.f_vector()))
    })?;
    Ok(format!("{} random pairs, seed {}", pairs.len(), p.seed))
}

fn snf_agrees(m: &[Vec<i64>]) -> bool {
    let fast: Vec<BigInt> = smith_normal_form(&IntMatrix::from_dense(m)).diagonal;
    let slow: Vec<BigInt> = invariant_factors_by_minors(m).into_iter().map(BigInt::from).collect();
    fast == slow
}

/// Every matrix of the given shape with entries in `[-bound, bound]`.
fn all_matrices(rows: usize, cols: usize, bound: i64) -> impl Iterator<Item = Vec<Vec<i64>>> {
    let base = (2 * bound + 1) as u64;
    let cells = rows * cols;
    (0..base.pow(cells as u32)).map(move |mut code| {
        let mut flat = Vec::with_capacity(cells);
        for _ in 0..cells {
            flat.push((code % base) as i64 - bound);
            code /= base;
        }
        flat.chunks(cols).map(<[i64]>::to_vec).collect()
    })
}

fn snf_oracle(p: &CheckParams) -> Outcome {
    // Exhaustive where it is tractable: every shape with at most six entries.
    let shapes = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (2, 2), (2, 3), (3, 2)];
    let mut exhaustive = 0u64;
    for (r, c) in shapes {
        let bad = all_matrices(r, c, 3).par_bridge().find_any(|m| !snf_agrees(m));
        ensure(bad.is_none(), || format!("disagreement on {bad:?}"))?;
        exhaustive += 7u64.pow((r * c) as u32);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut sampled: Vec<Vec<Vec<i64>>> = (0..20_000).map(|_| random_matrix(&mut rng, 4, 3)).collect();
    sampled.extend((0..500).map(|_| random_matrix(&mut rng, 6, 9)));
    let bad = sampled.par_iter().find_any(|m| !snf_agrees(m));
    ensure(bad.is_none(), || format!("disagreement on {bad:?}"))?;
    Ok(format!("{exhaustive} exhaustive + {} sampled matrices", sampled.len()))
}

fn stability(_: &CheckParams) -> Outcome {
    let z2 = FiniteGroup::cyclic(2)?;
    let z3 = FiniteGroup::cyclic(3)?;
    let d3 = FiniteGroup::dihedral(3)?;
    let cases = [(&z3, 1, 2, 4), (&d3, 1, 2, 3), (&z2, 0, 1, 3), (&z2, 2, 3, 5), (&z3, 0, 1, 2)];
    for (g, k, n1, n2) in cases {
        ensure(stability_check(g, k, n1, n2)?, || format!("|G|={} k={k} n1={n1} n2={n2}", g.order()))?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn cell_counts(p: &CheckParams) -> Outcome {
    let cases: Vec<(usize, usize)> = match (p.m, p.n) {
        (None, None) => vec![(2, 1), (2, 2), (3, 2), (4, 1), (5, 1)],
        (m, n) => vec![(m.unwrap_or(2), n.unwrap_or(2))],
    };
    for &(m, n) in &cases {
        let r = cell_count_report(m, n)?;
        ensure(r.holds(), || format!("{r:?}"))?;
        ensure(r.minimal.iter().all(|&c| c == 1), || format!("minimal ranks {:?}", r.minimal))?;
    }
    Ok(format!("{} (m, n) cases", cases.len()))
}
