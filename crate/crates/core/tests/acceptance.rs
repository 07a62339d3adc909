//! End-to-end acceptance battery. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Every expected value is produced here, without
//! going through the library's own reference implementations.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topo_core::action::{join_actions, quotient, rotation_action, GroupAction};
use topo_core::homology::{all_homology, homological_connectivity, homology_of_complex, ChainComplex, HomologyGroup};
use topo_core::spaces::{
    full_homology, lens_action, lens_minimal_chain, lens_space, mapping_torus, milnor_base, milnor_total,
    polygon_rotation, LensParams,
};
use topo_core::{join, smith_normal_form, DeltaSet, FiniteGroup, IntMatrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(h: &[HomologyGroup]) -> String {
    h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn zero() -> HomologyGroup {
    HomologyGroup::zero()
}

fn zm(m: u64) -> HomologyGroup {
    HomologyGroup::new(0, &[m])
}

// ---------------------------------------------------------------------------
// Oracles

/// Exact determinant by cofactor expansion; only used on tiny matrices.
fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect()).collect()
}

/// `d_k = D_k / D_{k-1}` with `D_k` the gcd of all `k x k` minors.
fn minor_gcd_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let (rows, cols) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in k_subsets(rows, k) {
            for cs in k_subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(BigInt::from(g / prev));
        prev = g;
    }
    out
}

/// Homology of a complex with one generator per degree and `∂_k = (c_k)`.
fn one_cell_homology(boundary: impl Fn(usize) -> i64, top: usize) -> Vec<HomologyGroup> {
    (0..=top)
        .map(|k| {
            let out = if k == 0 { 0 } else { boundary(k) };
            let incoming = if k == top { 0 } else { boundary(k + 1) };
            match (out, incoming.unsigned_abs()) {
                (0, 0) => z(),
                (0, 1) => zero(),
                (0, c) => zm(c),
                _ => zero(),
            }
        })
        .collect()
}

/// The alternating `0 / m` complex with one cell in each degree `0..=top`.
fn alternating_chain(m: i64, top: usize) -> ChainComplex {
    let boundaries = (1..=top).map(|k| IntMatrix::from_dense(&[vec![if k % 2 == 0 { m } else { 0 }]])).collect();
    ChainComplex::new(vec![1; top + 1], boundaries).unwrap()
}

/// `D_m` as permutations of the `m`-gon's vertices, with the order of
/// `G/[G,G]` found by brute-force closure.
fn dihedral_abelianization_by_permutations(m: usize) -> Vec<u64> {
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { (0..m).map(|i| a[b[i]]).collect() };
    let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
    let mut elems = vec![(0..m).collect::<Vec<_>>()];
    let mut i = 0;
    while i < elems.len() {
        for g in [&rot, &refl] {
            let e = compose(g, &elems[i]);
            if !elems.contains(&e) {
                elems.push(e);
            }
        }
        i += 1;
    }
    assert_eq!(elems.len(), 2 * m);
    let inverse = |a: &Vec<usize>| -> Vec<usize> {
        let mut inv = vec![0; m];
        for (i, &j) in a.iter().enumerate() {
            inv[j] = i;
        }
        inv
    };
    let mut comm: Vec<Vec<usize>> = vec![elems[0].clone()];
    for a in &elems {
        for b in &elems {
            let c = compose(&compose(a, b), &compose(&inverse(a), &inverse(b)));
            if !comm.contains(&c) {
                comm.push(c);
            }
        }
    }
    let mut i = 0;
    while i < comm.len() {
        for j in 0..comm.len() {
            let c = compose(&comm[i], &comm[j]);
            if !comm.contains(&c) {
                comm.push(c);
            }
        }
        i += 1;
    }
    let quotient_order = (elems.len() / comm.len()) as u64;
    // Every square is a commutator in D_m, so the quotient is elementary 2-abelian.
    assert!(elems.iter().all(|a| comm.contains(&compose(a, a))));
    vec![2; quotient_order.trailing_zeros() as usize]
}

/// The classical torus: one vertex, edges a, b, c, and triangles with
/// boundaries (b, c, a) and (a, c, b).
fn two_triangle_torus() -> DeltaSet {
    DeltaSet::from_parts(vec![1, 3, 2], vec![vec![vec![0; 3], vec![0; 3]], vec![vec![1, 0], vec![2, 2], vec![0, 1]]])
        .unwrap()
}

// ---------------------------------------------------------------------------
// Criteria

fn sphere_join() -> Outcome {
    let mut count = 0;
    for a in 0..=5i64 {
        for b in 0..=5 - a {
            let j = join(&DeltaSet::sphere(a).unwrap(), &DeltaSet::sphere(b).unwrap());
            let top = (a + b + 1) as usize;
            ensure(j.dimension() == top as i64, || format!("dim of S^{a} * S^{b}"))?;
            let red = all_homology(&j, top, true);
            let want: Vec<HomologyGroup> = (0..=top).map(|k| if k == top { z() } else { zero() }).collect();
            ensure(red == want, || format!("S^{a} * S^{b}: reduced [{}]", show(&red)))?;
            ensure(j.euler_characteristic() == 1 + if top % 2 == 0 { 1 } else { -1 }, || "euler".into())?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs"))
}

fn lens_vs_minimal() -> Outcome {
    for m in 2..=6u64 {
        for n in 1..=3usize {
            let top = 2 * n - 1;
            let lens = full_homology(&lens_space(&LensParams::standard(m, n).unwrap()).unwrap().0);
            let minimal = lens_minimal_chain(m, n).unwrap().all_homology(top);
            let oracle = one_cell_homology(|k| if k % 2 == 0 { m as i64 } else { 0 }, top);
            ensure(lens == oracle && minimal == oracle, || {
                format!("m={m} n={n}: lens [{}], minimal [{}], oracle [{}]", show(&lens), show(&minimal), show(&oracle))
            })?;
        }
    }
    Ok("15 (m, n) cases".into())
}

fn parameter_independence() -> Outcome {
    let homs: Vec<Vec<HomologyGroup>> = [[1, 2], [2, 3], [1, 1]]
        .iter()
        .map(|ls| full_homology(&lens_space(&LensParams::new(5, ls).unwrap()).unwrap().0))
        .collect();
    ensure(homs.iter().all(|h| *h == homs[0]), || format!("{homs:?}"))?;
    ensure(homs[0] == vec![z(), zm(5), zero(), z()], || show(&homs[0]))?;
    Ok(format!("[{}]", show(&homs[0])))
}

fn zm_group_homology() -> Outcome {
    for m in 2..=5u64 {
        let base = milnor_base(&FiniteGroup::cyclic(m as usize).unwrap(), 5).0;
        let h = all_homology(&base, 4, false);
        let want = vec![z(), zm(m), zero(), zm(m), zero()];
        ensure(h == want, || format!("m={m}: [{}]", show(&h)))?;
    }
    Ok("m in 2..=5".into())
}

fn wedge_lemma() -> Outcome {
    for m in 2..=4usize {
        for n in 0..=4usize {
            let total = milnor_total(&FiniteGroup::cyclic(m).unwrap(), n);
            let red = all_homology(total.space(), n, true);
            let rank = (m - 1).pow(n as u32 + 1);
            let want: Vec<HomologyGroup> =
                (0..=n).map(|k| if k == n { HomologyGroup::free(rank) } else { zero() }).collect();
            ensure(red == want, || format!("m={m} n={n}: [{}]", show(&red)))?;
            let chi = 1 + if n % 2 == 0 { rank as i64 } else { -(rank as i64) };
            ensure(total.space().euler_characteristic() == chi, || format!("m={m} n={n}: euler"))?;
        }
    }
    Ok("m in 2..=4, n in 0..=4".into())
}

fn rp_tower() -> Outcome {
    for n in 0..=5usize {
        let h = full_homology(&milnor_base(&FiniteGroup::cyclic(2).unwrap(), n).0);
        let chain = alternating_chain(2, n);
        let by_snf: Vec<HomologyGroup> = (0..=n).map(|k| homology_of_complex(&chain, k)).collect();
        let closed = one_cell_homology(|k| if k % 2 == 0 { 2 } else { 0 }, n);
        ensure(h == by_snf && by_snf == closed, || format!("n={n}: [{}] vs [{}]", show(&h), show(&closed)))?;
    }
    Ok("n in 0..=5".into())
}

fn r_is_torus() -> Outcome {
    let torus = full_homology(&two_triangle_torus());
    ensure(torus == vec![z(), HomologyGroup::free(2), z()], || show(&torus))?;
    for m in 3..=7 {
        let f = polygon_rotation(m, 1).unwrap();
        let t = mapping_torus(f.source(), &f).unwrap();
        ensure(t.validate().ok, || format!("m={m}: invalid"))?;
        let h = full_homology(&t);
        ensure(h == torus, || format!("m={m}: [{}]", show(&h)))?;
    }
    Ok("m in 3..=7".into())
}

fn dihedral_h1() -> Outcome {
    for m in 3..=6usize {
        let g = FiniteGroup::dihedral(m).unwrap();
        let oracle = dihedral_abelianization_by_permutations(m);
        let expected: Vec<u64> = if m % 2 == 1 { vec![2] } else { vec![2, 2] };
        ensure(oracle == expected && g.abelianization() == expected, || {
            format!("m={m}: oracle {oracle:?}, library {:?}", g.abelianization())
        })?;
        let h1 = topo_core::homology(&milnor_base(&g, 3).0, 1);
        ensure(h1 == HomologyGroup::new(0, &expected), || format!("m={m}: H_1 = {h1}"))?;
    }
    Ok("m in 3..=6".into())
}

/// Every free action constructed by the other criteria.
fn suite_actions() -> Vec<(String, GroupAction)> {
    let mut out = Vec::new();
    for m in 2..=6u64 {
        for n in 1..=3 {
            out.push((format!("lens {m} 1^{n}"), lens_action(&LensParams::standard(m, n).unwrap()).unwrap()));
        }
    }
    for ls in [[1, 2], [2, 3]] {
        out.push((format!("lens 5 {ls:?}"), lens_action(&LensParams::new(5, &ls).unwrap()).unwrap()));
    }
    for m in 2..=5 {
        out.push((format!("E_5 Z/{m}"), milnor_total(&FiniteGroup::cyclic(m).unwrap(), 5)));
    }
    for m in 2..=4 {
        for n in 0..=4 {
            out.push((format!("E_{n} Z/{m}"), milnor_total(&FiniteGroup::cyclic(m).unwrap(), n)));
        }
    }
    for m in 3..=6 {
        out.push((format!("E_3 D_{m}"), milnor_total(&FiniteGroup::dihedral(m).unwrap(), 3)));
    }
    for m in 3..=7 {
        let r = rotation_action(m, 1).unwrap();
        out.push((format!("rot {m}"), r.clone()));
        out.push((format!("rot {m} * rot {m}"), join_actions(&r, &r).unwrap()));
    }
    out
}

fn covering() -> Outcome {
    let actions = suite_actions();
    for (name, a) in &actions {
        ensure(a.is_free(), || format!("{name}: not free"))?;
        let (base, proj) = quotient(a).map_err(|e| format!("{name}: {e}"))?;
        let g = a.group().order();
        let e = a.space();
        ensure(e.counts().len() == base.counts().len(), || format!("{name}: dimension"))?;
        ensure(e.counts().iter().zip(base.counts()).all(|(&x, &y)| x == g * y), || {
            format!("{name}: counts {:?} vs {:?}", e.counts(), base.counts())
        })?;
        ensure(e.euler_characteristic() == g as i64 * base.euler_characteristic(), || format!("{name}: euler"))?;
        let mut fibers: Vec<Vec<usize>> = base.counts().iter().map(|&c| vec![0; c]).collect();
        for (k, f) in fibers.iter_mut().enumerate() {
            for s in 0..e.count(k) {
                f[proj.apply(k, s)] += 1;
            }
        }
        ensure(fibers.iter().flatten().all(|&c| c == g), || format!("{name}: fiber sizes"))?;
    }
    Ok(format!("{} free actions", actions.len()))
}

fn random_space(rng: &mut ChaCha8Rng) -> DeltaSet {
    match rng.gen_range(0..12) {
        0 => DeltaSet::empty(),
        1 => DeltaSet::discrete(rng.gen_range(1..4)).unwrap(),
        2 => DeltaSet::polygon_circle(rng.gen_range(1..5)).unwrap(),
        3 => DeltaSet::sphere(rng.gen_range(-1..2)).unwrap(),
        _ => {
            let nv = rng.gen_range(1..=5);
            let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=4))
                .map(|_| (0..nv).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
                .filter(|f| !f.is_empty())
                .collect();
            DeltaSet::from_simplicial_complex(&facets)
        }
    }
}

fn connectivity_growth() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let trials = 400;
    for _ in 0..trials {
        let (a, b) = (random_space(&mut rng), random_space(&mut rng));
        let (ca, cb) = (homological_connectivity(&a), homological_connectivity(&b));
        let cj = homological_connectivity(&join(&a, &b));
        ensure(cj >= ca.join_bound(cb), || format!("{cj} < {ca} + {cb} + 2 ({:?} * {:?})", a.f_vector(), b.f_vector()))?;
    }
    Ok(format!("{trials} seeded pairs"))
}

fn snf_matches(m: &[Vec<i64>]) -> bool {
    smith_normal_form(&IntMatrix::from_dense(m)).diagonal == minor_gcd_factors(m)
}

fn snf_oracle() -> Outcome {
    let mut exhaustive = 0u64;
    for (rows, cols) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
        let cells = rows * cols;
        for mut code in 0..7u64.pow(cells as u32) {
            let flat: Vec<i64> = (0..cells)
                .map(|_| {
                    let v = (code % 7) as i64 - 3;
                    code /= 7;
                    v
                })
                .collect();
            let m: Vec<Vec<i64>> = flat.chunks(cols).map(<[i64]>::to_vec).collect();
            ensure(snf_matches(&m), || format!("{m:?}"))?;
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut random = |max: usize, bound: i64, count: usize| -> Result<(), String> {
        for _ in 0..count {
            let (r, c) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
            let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
            ensure(snf_matches(&m), || format!("{m:?}"))?;
        }
        Ok(())
    };
    random(4, 3, 50_000)?;
    random(6, 9, 500)?;
    Ok(format!("{exhaustive} exhaustive + 50000 random <=4x4 + 500 random <=6x6"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 11] = [
        ("sphere join law", sphere_join, 10),
        ("lens space vs minimal chain", lens_vs_minimal, 60),
        ("lens parameter independence", parameter_independence, 10),
        ("group homology of Z/m", zm_group_homology, 60),
        ("wedge lemma", wedge_lemma, 30),
        ("RP tower", rp_tower, 10),
        ("R is a torus", r_is_torus, 5),
        ("dihedral H_1", dihedral_h1, 90),
        ("covering invariants", covering, 60),
        ("connectivity growth", connectivity_growth, 30),
        ("SNF vs minor gcd", snf_oracle, 60),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(_) if elapsed > Duration::from_secs(*budget) => Err(format!("over the {budget} s budget")),
            other => other.clone(),
        };
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.clone())
            }
        };
        println!("{tag} {:>2} {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
