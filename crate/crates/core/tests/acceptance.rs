//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;

use toric_cohomology::cai::{act, average, cohomology_ring, group_elements, monomial_action, rz_cohomology, CaiRing, Monomial, Polynomial};
use toric_cohomology::complex::named::{cycle, rp2_6, simplex_boundary};
use toric_cohomology::complex::{Face, SimplicialComplex};
use toric_cohomology::homology::{integral_cohomology, reduced_integral_homology, CoeffSpec, CohomologyProfile, DegreeGroup};
use toric_cohomology::linalg::{BitVec, Field, Gf2Matrix, Rationals};
use toric_cohomology::moore::{moore_space, torsion_hunt, PipelineConfig};
use toric_cohomology::nesto::{canonical_lambda, nested_complex, singleton_restriction, BuildingSet};
use toric_cohomology::toric::{betti_profile, oracle_quotient_cohomology, CharacteristicPair, Mode};

use common::{naive_reduced_betti, random_non_simplex, random_pair, rng, BIG_PRIME};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn f(ix: &[usize]) -> Face {
    Face::from_indices(ix.iter().map(|i| i - 1))
}

fn mono(u: &[usize], t: &[usize]) -> Monomial {
    Monomial::new(f(u), f(t)).unwrap()
}

fn pair(k: SimplicialComplex, rows: &[Vec<u8>]) -> CharacteristicPair {
    CharacteristicPair::new(k, Gf2Matrix::from_rows(rows).unwrap()).unwrap()
}

fn bits(v: &[u8]) -> Face {
    Face::from_indices(v.iter().enumerate().filter(|(_, b)| **b == 1).map(|(i, _)| i))
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if t <= limit {
        Ok(format!("{:.2}s", t.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, limit {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn example_fidelity() -> Outcome {
    let start = Instant::now();
    let lambda = Gf2Matrix::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 1, 1]]).unwrap();
    let mut kernel: Vec<Face> = lambda.kernel_basis().iter().map(BitVec::to_face).collect();
    kernel.sort_unstable();
    let mut want = vec![bits(&[1, 1, 1, 0]), bits(&[0, 1, 0, 1])];
    want.sort_unstable();
    ensure!(kernel == want, "kernel basis {kernel:?}");
    let mut rows: Vec<Face> = lambda.row_space_faces().collect();
    rows.sort_unstable();
    let mut want: Vec<Face> = [[0, 0, 0, 0], [1, 0, 1, 0], [0, 1, 1, 1], [1, 1, 0, 1]].iter().map(|v| bits(v)).collect();
    want.sort_unstable();
    ensure!(rows == want, "row space {rows:?}");

    let n1 = average(&Polynomial::monomial(mono(&[2], &[3, 4]), 1), &kernel);
    let e1 = Polynomial::from_terms([
        (mono(&[2], &[3, 4]), 4),
        (mono(&[2], &[3]), -2),
        (mono(&[2], &[4]), -2),
        (mono(&[2], &[]), 1),
    ]);
    ensure!(n1 == e1, "N(u2t3t4) = {n1:?}");
    let n2 = average(&Polynomial::monomial(mono(&[], &[1, 2, 3]), 1), &kernel);
    let e2 = Polynomial::from_terms([
        (mono(&[], &[1, 3]), 2),
        (mono(&[], &[1]), -1),
        (mono(&[], &[3]), -1),
        (Monomial::ONE, 1),
    ]);
    ensure!(n2 == e2, "N(t1t2t3) = {n2:?}");
    within(start, Duration::from_secs(1))
}

fn closed_forms() -> Outcome {
    let torus = pair(cycle(4), &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
    let klein = pair(cycle(4), &[vec![1, 0, 1, 0], vec![0, 1, 1, 1]]);
    let rp3 = pair(simplex_boundary(3), &[vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
    let mut times = Vec::new();
    for (name, p, want) in [("torus", &torus, vec![1, 2, 1]), ("Klein", &klein, vec![1, 1, 0]), ("RP3", &rp3, vec![1, 0, 0, 1])] {
        let start = Instant::now();
        let r = betti_profile(p, CoeffSpec::Rational, &Mode::Full).map_err(|e| e.to_string())?;
        let got: Vec<usize> = (0..want.len() as i32).map(|d| r.total.betti(d)).collect();
        ensure!(got == want, "{name}: Betti {got:?}, expected {want:?}");
        ensure!(r.total.degrees.keys().all(|d| (*d as usize) < want.len()), "{name}: stray degrees in {}", r.total);
        if name == "torus" {
            let ring = cohomology_ring(p, Rationals, "Q").map_err(|e| e.to_string())?;
            ensure!(ring.dims() == vec![1, 2, 1], "ring dims {:?}", ring.dims());
            let a = ring.class_index("1.0").unwrap();
            let b = ring.class_index("1.1").unwrap();
            let g = ring.class_index("2.0").unwrap();
            ensure!(ring.product(a, a).is_empty() && ring.product(b, b).is_empty(), "squares are not zero");
            let ab = ring.product(a, b);
            let ba = ring.product(b, a);
            ensure!(ab == vec![(g, Rationals.one())], "αβ = {ab:?}");
            ensure!(ba == vec![(g, -Rationals.one())], "βα = {ba:?}");
        }
        times.push(format!("{name} {}", within(start, Duration::from_secs(1))?));
    }
    Ok(times.join(", "))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2024);
    let coeffs = [CoeffSpec::Rational, CoeffSpec::ModQ(3), CoeffSpec::ModQ(9), CoeffSpec::ModQ(15)];
    let trials = 200;
    let mut nontrivial = 0;
    for t in 0..trials {
        let m = r.gen_range(2..=7);
        let p = random_pair(&mut r, m);
        let oracle_z = oracle_quotient_cohomology(&p, CoeffSpec::Integral).map_err(|e| e.to_string())?;
        if oracle_z.degrees.keys().any(|d| *d > 0) {
            nontrivial += 1;
        }
        for c in coeffs {
            let formula = betti_profile(&p, c, &Mode::Full).map_err(|e| e.to_string())?.total;
            let oracle = oracle_quotient_cohomology(&p, c).map_err(|e| e.to_string())?;
            ensure!(formula == oracle, "trial {t}, {c}: formula {formula} vs oracle {oracle}");
        }
    }
    let timing = within(start, Duration::from_secs(300))?;
    Ok(format!("{trials} pairs x 4 coefficient rings ({nontrivial} with higher cohomology), {timing}"))
}

fn hochster() -> Outcome {
    let start = Instant::now();
    let mut torus = CohomologyProfile::zero(CoeffSpec::Integral);
    for (d, b) in [(0, 1), (1, 2), (2, 1)] {
        torus.insert(d, DegreeGroup { betti: b, torsion: vec![] });
    }
    let c4 = rz_cohomology(&cycle(4), CoeffSpec::Integral).map_err(|e| e.to_string())?;
    ensure!(c4 == torus, "RZ(C4) = {c4}");
    let c5 = rz_cohomology(&cycle(5), CoeffSpec::Integral).map_err(|e| e.to_string())?;
    ensure!(c5.betti(1) == 10, "RZ(C5) = {c5}");

    let rp2 = rp2_6();
    let dga = CaiRing::new(&rp2).unwrap().integral_cohomology().map_err(|e| e.to_string())?;
    let sum = rz_cohomology(&rp2, CoeffSpec::Integral).map_err(|e| e.to_string())?;
    ensure!(dga == sum, "RP2: DGA {dga} vs sum {sum}");
    ensure!(dga.torsion(3) == [2], "RP2 contributes no Z/2 in degree 3: {dga}");

    let mut r = rng(7);
    let trials = 60;
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let k = common::random_complex(&mut r, m, 3);
        let dga = CaiRing::new(&k).unwrap().integral_cohomology().map_err(|e| e.to_string())?;
        let sum = rz_cohomology(&k, CoeffSpec::Integral).map_err(|e| e.to_string())?;
        ensure!(dga == sum, "trial {t}: DGA {dga} vs sum {sum}");
    }
    let timing = within(start, Duration::from_secs(60))?;
    Ok(format!("C4, C5, RP2 and {trials} random complexes, {timing}"))
}

fn random_polynomial<R: Rng>(r: &mut R, ring: &CaiRing) -> Polynomial {
    let m = ring.num_vertices();
    let mut p = Polynomial::zero();
    for _ in 0..r.gen_range(1..6) {
        let w = Face(r.gen_range(0..1u128 << m));
        let block = ring.block(w);
        let x = block[r.gen_range(0..block.len())];
        p.add_term(x, r.gen_range(-3..=3));
    }
    p
}

/// Fixed-subspace dimension of the Γ-action on degree-`k` cochains, as the
/// average trace of the group elements.
fn fixed_dimension(ring: &CaiRing, gamma: &[Face], k: usize) -> usize {
    let m = ring.num_vertices();
    let monos: Vec<Monomial> = (0u128..1 << m).flat_map(|w| ring.block(Face(w))).filter(|x| x.degree() == k).collect();
    let trace: i64 = gamma
        .iter()
        .map(|g| monos.iter().map(|x| monomial_action(*g, *x).iter().filter(|(y, _)| y == x).map(|(_, c)| c).sum::<i64>()).sum::<i64>())
        .sum();
    assert_eq!(trace % gamma.len() as i64, 0);
    (trace / gamma.len() as i64) as usize
}

fn dga_invariants() -> Outcome {
    let start = Instant::now();
    let trials = 1000;
    let mut r = rng(99);
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let k = common::random_complex(&mut r, m, 3);
        let ring = CaiRing::new(&k).unwrap();
        let p = random_polynomial(&mut r, &ring);
        ensure!(ring.differential(&ring.differential(&p)).is_zero(), "d∘d ≠ 0 on trial {t}: {p:?}");
    }
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let k = common::random_complex(&mut r, m, 3);
        let ring = CaiRing::new(&k).unwrap();
        let p = random_polynomial(&mut r, &ring);
        let g = Face(r.gen_range(0..1u128 << m));
        ensure!(act(g, &ring.differential(&p)) == ring.differential(&act(g, &p)), "action and d disagree on trial {t}");
    }
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let p = random_pair(&mut r, m);
        let ring = CaiRing::new(p.complex()).unwrap();
        let kernel = p.kernel_basis();
        let gamma = group_elements(&kernel);
        let k = r.gen_range(0..=p.complex().dimension() as usize + 1);
        let restricted = ring.restricted_basis(p.lambda(), k..=k);
        let averaged: Vec<Polynomial> = restricted.iter().map(|x| average(&Polynomial::monomial(*x, 1), &kernel)).collect();
        for n in &averaged {
            ensure!(kernel.iter().all(|g| act(*g, n) == *n), "N(x) not invariant on trial {t}");
        }
        let cols: Vec<Monomial> = (0u128..1 << m).flat_map(|w| ring.block(Face(w))).filter(|x| x.degree() == k).collect();
        let matrix: Vec<Vec<_>> = averaged
            .iter()
            .map(|n| cols.iter().map(|x| Rationals.from_i64(n.coefficient(*x))).collect())
            .collect();
        let rank = Rationals.rank(&matrix);
        let fixed = fixed_dimension(&ring, &gamma, k);
        ensure!(
            rank == restricted.len() && fixed == rank,
            "trial {t}, degree {k}: rank {rank}, restricted {}, fixed {fixed}",
            restricted.len()
        );
    }
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let p = random_pair(&mut r, m);
        let ring = CaiRing::new(p.complex()).unwrap();
        let kernel = p.kernel_basis();
        let w = Face(r.gen_range(0..1u128 << m));
        let block = ring.block(w);
        let x = block[r.gen_range(0..block.len())];
        let n = average(&Polynomial::monomial(x, 1), &kernel);
        let in_row = p.lambda().in_row_space(&BitVec::from_face(w, m));
        let expected = if in_row { 1i64 << kernel.len() } else { 0 };
        ensure!(n.coefficient(x) == expected, "trial {t}: coefficient {} expected {expected}", n.coefficient(x));
        ensure!(
            n.terms().all(|(y, _)| y == x || (y.support().is_subset_of(w) && y.support() != w)),
            "trial {t}: a term of N(x) is not below x"
        );
    }
    let timing = within(start, Duration::from_secs(300))?;
    Ok(format!("4 x {trials} trials, {timing}"))
}

fn nestohedra() -> Outcome {
    let start = Instant::now();
    let b = BuildingSet::of_complex(&cycle(4)).map_err(|e| e.to_string())?;
    let want: Vec<Face> = [&[1][..], &[2], &[3], &[4], &[1, 3], &[2, 4], &[1, 2, 3, 4]].iter().map(|x| f(x)).collect();
    let mut got = b.members().to_vec();
    got.sort_by_key(|x| (x.len(), x.indices()));
    ensure!(got == want, "B(C4) = {got:?}");
    let delta = nested_complex(&b).map_err(|e| e.to_string())?;
    let (fv, chi) = delta.f_vector_and_euler().map_err(|e| e.to_string())?;
    ensure!(fv == vec![6, 12, 8] && chi == 2, "octahedron f-vector {fv:?}, χ {chi}");

    let cut = BuildingSet::closure(&[f(&[1, 2]), f(&[2, 3]), f(&[3, 4])], 4).map_err(|e| e.to_string())?;
    let want: Vec<Face> = [&[1][..], &[2], &[3], &[4], &[1, 2], &[2, 3], &[3, 4], &[1, 2, 3], &[2, 3, 4], &[1, 2, 3, 4]]
        .iter()
        .map(|x| f(x))
        .collect();
    let mut got = cut.members().to_vec();
    got.sort_by_key(|x| (x.len(), x.indices()));
    ensure!(got == want, "closure of 12, 23, 34 = {got:?}");

    let mut r = rng(11);
    let trials = 100;
    let mut checked = 0;
    for family in [b, cut] {
        let lam = canonical_lambda(&family);
        let delta = nested_complex(&family).map_err(|e| e.to_string())?;
        ensure!(pair(delta, &lam.to_rows()).check_nonsingular().is_none(), "canonical Λ singular");
        checked += 1;
    }
    for t in 0..trials {
        let m = r.gen_range(2..=7);
        let k = random_non_simplex(&mut r, m, 3);
        let bk = BuildingSet::of_complex(&k).map_err(|e| e.to_string())?;
        let restricted = singleton_restriction(&bk).map_err(|e| e.to_string())?;
        ensure!(restricted == k, "trial {t}: singleton restriction differs from K");
        let delta = nested_complex(&bk).map_err(|e| e.to_string())?;
        let dp = CharacteristicPair::new(delta, canonical_lambda(&bk)).map_err(|e| e.to_string())?;
        ensure!(dp.check_nonsingular().is_none(), "trial {t}: canonical Λ singular on Δ_B");
        checked += 1;
    }
    let timing = within(start, Duration::from_secs(60))?;
    Ok(format!("{trials} random complexes, {checked} nested complexes nonsingular, {timing}"))
}

fn moore_and_suspension() -> Outcome {
    let start = Instant::now();
    for q in [3u64, 5] {
        let k = moore_space(q).map_err(|e| e.to_string())?;
        let (fv, _) = k.f_vector_and_euler().map_err(|e| e.to_string())?;
        let n = q as usize;
        ensure!(fv == vec![3 * n + 4, 12 * n + 3, 9 * n], "Moore({q}) f-vector {fv:?}");
        let h = reduced_integral_homology(&k).map_err(|e| e.to_string())?;
        let mut want = CohomologyProfile::zero(CoeffSpec::Integral);
        want.insert(1, DegreeGroup { betti: 0, torsion: vec![q] });
        ensure!(h == want, "Moore({q}) homology {h}");
        // independent: Betti numbers over 𝔽_q and a large prime, degrees -1..2
        ensure!(naive_reduced_betti(&k, q) == vec![0, 0, 1, 1], "Moore({q}) over F_{q}");
        ensure!(naive_reduced_betti(&k, BIG_PRIME) == vec![0, 0, 0, 0], "Moore({q}) rationally");
    }
    let mut r = rng(5);
    let trials = 100;
    for t in 0..trials {
        let m = r.gen_range(2..=6);
        let k = common::random_complex(&mut r, m, 3);
        let i = r.gen_range(0..m);
        let w = k.wedge(i).map_err(|e| e.to_string())?;
        let hk = integral_cohomology(&k).map_err(|e| e.to_string())?;
        let hw = integral_cohomology(&w).map_err(|e| e.to_string())?;
        ensure!(hw == hk.shifted(1), "trial {t}: wedge {hw} vs shifted {hk}");
        for p in [2, 3] {
            let a = naive_reduced_betti(&k, p);
            let b = naive_reduced_betti(&w, p);
            let shifted: Vec<usize> = std::iter::once(0).chain(a.iter().copied()).collect();
            let trim = |v: &[usize]| v.iter().rposition(|x| *x != 0).map_or(vec![], |e| v[..=e].to_vec());
            ensure!(trim(&b) == trim(&shifted), "trial {t}: naive F_{p} {b:?} vs {a:?}");
        }
    }
    let timing = within(start, Duration::from_secs(60))?;
    Ok(format!("Moore(3), Moore(5), {trials} wedges, {timing}"))
}

fn torsion_hunts() -> Outcome {
    let mut out = Vec::new();
    for q in [3u64, 9, 15] {
        let start = Instant::now();
        let report = torsion_hunt(&PipelineConfig::new(q).unwrap()).map_err(|e| e.to_string())?;
        ensure!(!report.failed(), "q={q}: {}", report.verdict);
        for sub in &report.reports {
            let v = sub.verdict.as_ref().ok_or("no verdict")?;
            let pk = sub.modulus;
            ensure!(v.torsion_present && v.verdict == format!("{pk}-torsion present"), "q={q}: {}", v.verdict);
            let s_prime = moore_space(pk).unwrap().multi_wedge(&vec![2; 3 * pk as usize + 4]).unwrap().labels().to_vec();
            ensure!(v.witnesses == vec![s_prime.clone()], "q={q}: witnesses {:?}", v.witnesses);
            let row = v.rows.iter().find(|r| r.omega == s_prime).ok_or("no S' row")?;
            ensure!(row.rational < row.zq_rank, "q={q}: no strict inequality at S'");
            out.push(format!("q={q}/{pk}: dim_Q {} < rank {}", row.rational, row.zq_rank));
        }
        let limit = if q == 3 { 1800 } else { 600 };
        out.push(within(start, Duration::from_secs(limit))?);
    }
    Ok(out.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 example fidelity", example_fidelity),
        ("2 closed-form small covers", closed_forms),
        ("3 formula vs quotient oracle", oracle_equivalence),
        ("4 moment-angle cohomology", hochster),
        ("5 DGA invariants", dga_invariants),
        ("6 nestohedra", nestohedra),
        ("7 Moore spaces and suspension", moore_and_suspension),
        ("8 torsion hunt", torsion_hunts),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
