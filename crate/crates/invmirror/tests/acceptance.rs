//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invmirror::algebra::{sign_rectify, GridSigns};
use invmirror::aside::{assemble_directed_algebra, numeric_morsification_check, object_order, surface_invariants};
use invmirror::bside::{assemble_b, basic_labels, expected_hom_table, hom_table};
use invmirror::compare::compare_algebras;
use invmirror::grading::{GradingGroup, GroupElement};
use invmirror::polyring::{brute_force_piece_dim, check_chain_grading, check_grading_ideal, check_grading_zero, potential, PieceDegree, Polynomial, QuotientRing};
use invmirror::transport::{convergence_study, transport_grid, verify_local_model, AGREEMENT};
use invmirror::{Family, FamilySpec};

const WINDOW: (i32, i32) = (-6, 6);
const WIDE_WINDOW: (i32, i32) = (-12, 12);
const HOM_TABLE_BUDGET: Duration = Duration::from_secs(60);
const MIRROR_BUDGET: Duration = Duration::from_secs(300);
const TRANSPORT_BUDGET: Duration = Duration::from_secs(120);
const NEWTON_BUDGET: Duration = Duration::from_secs(60);
const TRANSPORT_DELTA: f64 = 1e-3;
const TRANSPORT_EPS: f64 = 0.1;
const TRANSPORT_TOL: f64 = 1e-12;
const CONVERGENCE_STEPS: usize = 16;
const CONVERGENCE_RATIO: f64 = 8.0;
const NEWTON_EPS: f64 = 0.1;
const HESSIAN_FLOOR: f64 = 1e-8;
const ARG_TOLERANCE: f64 = 1e-8;
const PIECE_CASES: usize = 200;
const SIGN_CASES: usize = 100;

type CompositionTable = BTreeMap<[(usize, usize); 3], i8>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn spec(f: Family, p: u32, q: u32) -> FamilySpec {
    FamilySpec::new(f, p, q).unwrap()
}

fn hom_table_fixture() -> Outcome {
    let s = spec(Family::Loop, 4, 6);
    let t = Instant::now();
    let got = hom_table(s, WINDOW).unwrap();
    let elapsed = t.elapsed();
    let want = expected_hom_table(s, WINDOW);
    let n = got.labels.len();
    let bad = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| got.dims[a][b] != want.dims[a][b]).count();
    Outcome {
        pass: bad == 0 && n == 24 && got.labels == want.labels && elapsed < HOM_TABLE_BUDGET,
        detail: format!("loop(4,6): {n}x{n} pairs, {bad} differing, {:.1}s", elapsed.as_secs_f64()),
    }
}

struct MirrorRun {
    failures: Vec<String>,
    tilting_failures: Vec<String>,
    elapsed: Duration,
    count: usize,
}

fn mirror_run() -> MirrorRun {
    let t = Instant::now();
    let specs = FamilySpec::range(&Family::ALL, 2, 6);
    let mut failures = Vec::new();
    let mut tilting_failures = Vec::new();
    for &s in &specs {
        let a = assemble_directed_algebra(s, WINDOW, 0).unwrap();
        let b = assemble_b(s, WINDOW).unwrap();
        let r = compare_algebras(s, &a, &b).unwrap();
        if !r.pass {
            failures.push(s.to_string());
        }
        if a.check_tilting().is_err() || b.check_tilting().is_err() {
            tilting_failures.push(s.to_string());
        }
    }
    MirrorRun { failures, tilting_failures, elapsed: t.elapsed(), count: specs.len() }
}

fn mirror_check(run: &MirrorRun) -> Outcome {
    Outcome {
        pass: run.failures.is_empty() && run.count == 75 && run.elapsed < MIRROR_BUDGET,
        detail: format!("{} specs, failures {:?}, {:.1}s", run.count, run.failures, run.elapsed.as_secs_f64()),
    }
}

fn milnor_counts() -> Outcome {
    let mut bad = Vec::new();
    let specs = FamilySpec::range(&Family::ALL, 2, 8);
    for &s in &specs {
        let (p, q) = (s.p as usize, s.q as usize);
        let mu = match s.family {
            Family::Bp => (p - 1) * (q - 1),
            Family::Chain => p * q - p + 1,
            Family::Loop => p * q,
        };
        if s.milnor() != mu || object_order(s).unwrap().len() != mu || basic_labels(s).len() != mu {
            bad.push(s.to_string());
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{} specs, failures {bad:?}", specs.len()) }
}

fn surface() -> Outcome {
    let fixtures = [(spec(Family::Loop, 4, 6), (11, 3)), (spec(Family::Chain, 3, 4), (4, 3)), (spec(Family::Bp, 3, 3), (1, 3))];
    let mut bad = Vec::new();
    for (s, (g, k)) in fixtures {
        let inv = surface_invariants(s).unwrap();
        if (inv.genus, inv.punctures) != (g, k) {
            bad.push(format!("{s}: ({}, {})", inv.genus, inv.punctures));
        }
    }
    let specs = FamilySpec::range(&Family::ALL, 2, 8);
    for &s in &specs {
        let inv = surface_invariants(s).unwrap();
        if s.milnor() as i64 != 2 * inv.genus as i64 + inv.punctures as i64 - 1 {
            bad.push(format!("{s}: identity"));
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("3 fixtures, identity on {} specs, failures {bad:?}", specs.len()) }
}

fn transport() -> Outcome {
    let t = Instant::now();
    let grid = transport_grid();
    let (mut worst_angle, mut worst_modulus, mut failed) = (0.0f64, 0.0f64, 0);
    for &(s, l, m, sv) in &grid {
        let r = verify_local_model(s, l, m, sv, TRANSPORT_DELTA, TRANSPORT_EPS, TRANSPORT_TOL).unwrap();
        worst_angle = worst_angle.max(r.angle_error);
        worst_modulus = worst_modulus.max(r.modulus_error);
        failed += usize::from(!r.pass);
    }
    let mut paths: Vec<(FamilySpec, u32, u32)> = grid.iter().map(|&(s, l, m, _)| (s, l, m)).filter(|&(_, l, m)| (l, m) != (0, 0)).collect();
    paths.dedup();
    let mut min_ratio = f64::INFINITY;
    for &(s, l, m) in &paths {
        let c = convergence_study(s, l, m, 0.5, TRANSPORT_DELTA, TRANSPORT_EPS, CONVERGENCE_STEPS).unwrap();
        min_ratio = c.ratios.iter().copied().fold(min_ratio, f64::min);
    }
    let elapsed = t.elapsed();
    Outcome {
        pass: failed == 0 && worst_angle <= AGREEMENT && worst_modulus <= AGREEMENT && min_ratio >= CONVERGENCE_RATIO && elapsed < TRANSPORT_BUDGET,
        detail: format!(
            "{} grid points, angle {worst_angle:.2e}, modulus {worst_modulus:.2e}, min halving ratio {min_ratio:.1} over {} paths, {:.1}s",
            grid.len(),
            paths.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let families = Family::ALL;
    let mut piece_bad = 0;
    let mut unenclosed = 0;
    for _ in 0..PIECE_CASES {
        let f = families[rng.random_range(0..families.len())];
        let (p, q) = (rng.random_range(2..=6), rng.random_range(2..=6));
        let g = GradingGroup::new(f, p, q).unwrap();
        let (a, b) = (rng.random_range(1..=p + 1), rng.random_range(1..=q + 1));
        let mut gens = vec![Polynomial::mono(a, 0), Polynomial::mono(0, b)];
        if rng.random::<bool>() {
            gens.push(potential(f, p, q).0);
        }
        let shift = GroupElement::new(rng.random_range(-3..=3), rng.random_range(-3..=3), 0);
        let delta = GroupElement::monomial(rng.random_range(0..a), rng.random_range(0..b));
        let qr = QuotientRing::new(&g, gens.clone(), shift);
        let dim = qr.graded_piece_basis(PieceDegree::Class(delta), None).unwrap().len();
        let bf = brute_force_piece_dim(&g, &gens, shift, delta, 4 * (a + b) + 12);
        unenclosed += usize::from(!bf.enclosed);
        piece_bad += usize::from(bf.dim != dim);
    }
    let mut lemma_bad = 0;
    for p in 2..=6 {
        for q in 2..=6 {
            let max = 3 * p * q;
            let g = GradingGroup::new(Family::Loop, p, q).unwrap();
            lemma_bad += check_grading_ideal(&g, max).len() + check_grading_zero(&g, max).len();
            let g = GradingGroup::new(Family::Chain, p, q).unwrap();
            lemma_bad += check_chain_grading(&g, max).len();
        }
    }
    Outcome {
        pass: piece_bad == 0 && unenclosed == 0 && lemma_bad == 0,
        detail: format!("{PIECE_CASES} pieces, {piece_bad} mismatches, {unenclosed} unenclosed; lemma counterexamples {lemma_bad}"),
    }
}

fn signs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tables: BTreeMap<(usize, usize), CompositionTable> = BTreeMap::new();
    let (mut non_commuting, mut differing) = (0, 0);
    for seed in 0..SIGN_CASES as u64 {
        let (w, h) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let r = sign_rectify(&GridSigns::seeded(w, h, seed));
        non_commuting += usize::from(!r.commutes());
        let table = r.composition_table();
        differing += usize::from(*tables.entry((w, h)).or_insert_with(|| table.clone()) != table);
    }
    let mut algebra_bad = Vec::new();
    for s in [spec(Family::Loop, 3, 4), spec(Family::Chain, 4, 3), spec(Family::Bp, 4, 4)] {
        let base = assemble_directed_algebra(s, (-2, 2), 0).unwrap().rectify().unwrap().rectified;
        for seed in 1..5 {
            let r = assemble_directed_algebra(s, (-2, 2), seed).unwrap().rectify().unwrap().rectified;
            if !base.same_table(&r) {
                algebra_bad.push(format!("{s} seed {seed}"));
            }
        }
    }
    Outcome {
        pass: non_commuting == 0 && differing == 0 && algebra_bad.is_empty(),
        detail: format!("{SIGN_CASES} grids: {non_commuting} non-commuting, {differing} differing tables; A-side seeds differing {algebra_bad:?}"),
    }
}

fn morsification() -> Outcome {
    let t = Instant::now();
    let specs = FamilySpec::range(&Family::ALL, 2, 4);
    let mut bad = Vec::new();
    let (mut min_hess, mut max_arg) = (f64::INFINITY, 0.0f64);
    for &s in &specs {
        let r = numeric_morsification_check(s, NEWTON_EPS, 0).unwrap();
        min_hess = min_hess.min(r.min_abs_hessian);
        max_arg = max_arg.max(r.max_arg_error);
        if !(r.pass && r.found == s.milnor() && r.min_abs_hessian > HESSIAN_FLOOR && r.max_arg_error <= ARG_TOLERANCE) {
            bad.push(format!("{s}: found {} of {}", r.found, r.expected));
        }
    }
    let elapsed = t.elapsed();
    Outcome {
        pass: bad.is_empty() && elapsed < NEWTON_BUDGET,
        detail: format!("{} specs, min |det Hess| {min_hess:.2e}, max arg error {max_arg:.2e}, failures {bad:?}, {:.1}s", specs.len(), elapsed.as_secs_f64()),
    }
}

fn tilting(run: &MirrorRun) -> Outcome {
    let mut wide_bad = Vec::new();
    for s in [spec(Family::Loop, 3, 4), spec(Family::Chain, 4, 3), spec(Family::Bp, 4, 5)] {
        if assemble_b(s, WIDE_WINDOW).unwrap().check_tilting().is_err() {
            wide_bad.push(s.to_string());
        }
    }
    Outcome {
        pass: run.tilting_failures.is_empty() && wide_bad.is_empty(),
        detail: format!("{} specs over {WINDOW:?}, failures {:?}; wide window {WIDE_WINDOW:?} failures {wide_bad:?}", run.count, run.tilting_failures),
    }
}

fn main() {
    let mut results = vec![(1, "hom table fixture", hom_table_fixture())];
    let run = mirror_run();
    results.push((2, "mirror check", mirror_check(&run)));
    results.push((3, "milnor and object counts", milnor_counts()));
    results.push((4, "surface invariants", surface()));
    results.push((5, "transport", transport()));
    results.push((6, "property suites", property_suites()));
    results.push((7, "sign rectification", signs()));
    results.push((8, "numeric morsification", morsification()));
    results.push((9, "tilting", tilting(&run)));
    let mut all = true;
    for (k, name, o) in &results {
        println!("criterion {k} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if !all {
        std::process::exit(1);
    }
}
