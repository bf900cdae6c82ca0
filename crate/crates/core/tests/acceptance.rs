use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use n6alg::corpus::{finite_instances, infinite_instances};
use n6alg::families::*;
use n6alg::functions::*;
use n6alg::linalg::{make_h, make_j, make_s, MatC};
use n6alg::superalg::*;
use n6alg::tower::{check_tower_with, lie_of, negate_on_degree, roundtrip_of};
use n6alg::triple::{check_axioms, full_report, is_simple, physicalize, same_bracket, CheckMode};
use n6alg::witness::*;
use n6alg::Scalar;

struct Outcome {
    ok: bool,
    note: String,
}

fn outcome(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome { ok, note: note.into() }
}

fn axiom_certification() -> Outcome {
    let start = Instant::now();
    let insts = finite_instances();
    let bad: Vec<String> = insts
        .par_iter()
        .filter_map(|inst| {
            let Ok(t) = inst.build(None) else { return Some(format!("{:?}", inst.spec)) };
            let ok = check_axioms(&t, CheckMode::Exhaustive { budget: 1_000_000 })
                .is_ok_and(|r| r.passed() && r.fi_discrepancies == 0 && r.fi_mode == "exhaustive");
            (!ok).then(|| t.label.clone())
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    outcome(bad.is_empty() && insts.len() == 105 && secs <= 300.0, format!("{} instances, exhaustive, {secs:.1}s, failing {bad:?}", insts.len()))
}

fn simplicity_and_center() -> Outcome {
    let insts = finite_instances();
    let bad: Vec<String> = insts
        .par_iter()
        .filter_map(|inst| {
            let Ok(t) = inst.build(None) else { return Some(format!("{:?}", inst.spec)) };
            let ok = full_report(&t, CheckMode::Exhaustive { budget: 1_000_000 })
                .is_ok_and(|r| r.center_dim_real == Some(0) && r.simple == Some(true));
            (!ok).then(|| t.label.clone())
        })
        .collect();
    let a311 = build_a3t(1, 1).unwrap();
    let control = !is_simple(&a311).simple;
    outcome(bad.is_empty() && control, format!("{} instances center 0 and simple; A3(1,1;t) non-simple: {control}", insts.len()))
}

fn infinite_families() -> Outcome {
    let insts = infinite_instances().unwrap();
    let bad: Vec<String> = insts
        .par_iter()
        .filter_map(|inst| {
            let r = check_function_axioms(&inst.algebra, 200, 4, 2024);
            (!(r.passed() && r.discrepancies == 0)).then(|| inst.algebra.label.clone())
        })
        .collect();
    outcome(bad.is_empty(), format!("{} families, 200 samples each, degree <= 4, failing {bad:?}", insts.len()))
}

fn identifications() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: String, ok: bool| {
        if !ok {
            failures.push(name);
        }
    };
    let reals2 = [LinearChange::identity(2), LinearChange::diag(&[Scalar::from_i64(-1), Scalar::from_i64(-1)])];
    for phi in &reals2 {
        for sign in [1, -1] {
            let ph = build_w3(phi, sign).unwrap();
            let via = build_w3_algebraic(phi).unwrap().physicalized_by_conjugation(sign).unwrap();
            check(format!("W3 {sign}"), brackets_agree(&ph, &via, 60, 3, 1));
        }
    }
    for m in 1..=3 {
        let phi = p3_standard_change(m);
        for sign in [1, -1] {
            let ph = build_p3(m, &phi, sign).unwrap();
            let via = build_p3_algebraic(m, &phi).unwrap().physicalized_by_conjugation(sign).unwrap();
            check(format!("P3({m}) {sign}"), brackets_agree(&ph, &via, 60, 3, 2));
        }
    }
    let flip = LinearChange::diag(&[Scalar::one(), Scalar::from_i64(-1), Scalar::from_i64(-1)]);
    for phi in [LinearChange::identity(3), flip] {
        for sign in [1i8, -1] {
            let ph = build_s3(&phi, &Scalar::from_i64(sign as i64)).unwrap();
            let via = build_s3_algebraic(&phi).unwrap().physicalized_by_conjugation(sign).unwrap();
            check(format!("S3 {sign}"), brackets_agree(&ph, &via, 60, 3, 3));
        }
    }
    for two_n in [2, 4, 6] {
        for p in 0..=two_n / 2 {
            let direct = build_c3_h_alpha(two_n, &make_h(two_n, p).unwrap(), &Scalar::one()).unwrap();
            let via = physicalize(&build_c3(two_n).unwrap(), &c_n_minus_p(two_n, p).unwrap(), "via").unwrap();
            check(format!("C3({two_n}) p={p}"), same_bracket(&direct, &via));
        }
    }
    outcome(failures.is_empty(), format!("W3, P3, S3 vs conjugated algebraic forms; C3(2n,H_p,1) vs physicalized C3(2n); failing {failures:?}"))
}

fn psl_dims(m: usize, n: usize) -> (usize, usize, usize) {
    build_psl(m, n).unwrap().graded_dims()
}

fn tower_round_trip() -> Outcome {
    let insts = finite_instances();
    let bad: Vec<String> = insts
        .par_iter()
        .filter_map(|inst| {
            let Ok(t) = inst.build(None) else { return Some(format!("{:?}", inst.spec)) };
            let Ok(tw) = lie_of(&t) else { return Some(t.label.clone()) };
            let dims = tw.lie.graded_dims();
            let s = &inst.spec;
            let expected = match inst.item {
                "i" => psl_dims(s.n, s.m),
                "ii" => psl_dims(s.n, s.n),
                _ => {
                    let n = s.two_n / 2;
                    (2 * n, 1 + n * (2 * n + 1), 2 * n)
                }
            };
            let rt = roundtrip_of(&tw);
            (!(rt.pass && rt.residual == 0.0 && dims == expected)).then(|| t.label.clone())
        })
        .collect();
    let a22 = lie_of(&build_a3t_ph(2, 2, 1, 1).unwrap()).unwrap().lie.dim;
    outcome(bad.is_empty() && a22 == 14, format!("{} round trips exact; A3(2,2) tower dim {a22}; failing {bad:?}", insts.len()))
}

fn superalgebra_suites() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            if m * n < 2 {
                continue;
            }
            let g = build_psl(m, n).unwrap();
            if g.dim > 40 {
                continue;
            }
            checked += 1;
            if !(g.check_super_antisymmetry().passed() && g.check_super_jacobi().passed() && g.check_grading().passed()) {
                failures.push(g.label.clone());
            }
            let mut conjs = vec![build_sigma1(&g).unwrap()];
            for p in 0..=m {
                for q in 0..=n {
                    conjs.push(build_conj_psl(&g, p, q).unwrap());
                }
            }
            if m == n {
                conjs.push(build_tau(&g, 1).unwrap());
                conjs.push(build_tau(&g, -1).unwrap());
            }
            for c in conjs {
                if !check_graded_conjugation(&g, &c).passed() {
                    failures.push(format!("{} {}", g.label, c.kind));
                }
            }
        }
    }
    for n in 1..=3 {
        let g = build_osp(n).unwrap();
        checked += 1;
        if !(g.check_super_antisymmetry().passed() && g.check_super_jacobi().passed() && g.check_grading().passed()) {
            failures.push(g.label.clone());
        }
        let mut conjs = Vec::new();
        for sign in [1, -1] {
            for p in 0..=n {
                conjs.push(build_conj_osp(&g, OspVariant::Hermitian(p), sign).unwrap());
            }
            conjs.push(build_conj_osp(&g, OspVariant::AntiHermitian, sign).unwrap());
        }
        for c in conjs {
            if !check_graded_conjugation(&g, &c).passed() {
                failures.push(format!("{} {}", g.label, c.kind));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} superalgebras, all listed conjugations; failing {failures:?}"))
}

fn factorizations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut cong, mut herm, mut anti) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..60 {
        let n = 1 + i % 8;
        let p = i % (n + 1);
        let h0 = random_invertible(n, &mut rng);
        let a = &(&h0 * &make_s(n, p).unwrap()) * &h0.adjoint();
        match hermitian_congruence(&a) {
            Ok(c) if c.p == p && c.residual <= 1e-9 => {
                cong += 1;
                worst = worst.max(c.residual);
            }
            other => failures.push(format!("congruence #{i}: {:?}", other.map(|c| (c.p, c.residual)))),
        }
    }
    for i in 0..60 {
        let two_n = 2 * (1 + i % 4);
        let p = i % (two_n / 2 + 1);
        let v0 = random_symplectic(two_n, &mut rng);
        let h = &(&v0 * &make_h(two_n, p).unwrap()) * &v0.adjoint();
        match symplectic_hermitian_factor(&h) {
            Ok(f) if f.p == Some(p) && f.residual <= 1e-9 && f.symplectic_residual <= 1e-9 => {
                herm += 1;
                worst = worst.max(f.residual).max(f.symplectic_residual);
            }
            other => failures.push(format!("hermitian #{i}: {:?}", other.map(|f| (f.p, f.residual, f.symplectic_residual)))),
        }
        let is = make_s(two_n, two_n / 2).unwrap().scale(&Scalar::i());
        let h = &(&v0 * &is) * &v0.adjoint();
        match symplectic_antihermitian_factor(&h) {
            Ok(f) if f.residual <= 1e-9 && f.symplectic_residual <= 1e-9 => {
                anti += 1;
                worst = worst.max(f.residual).max(f.symplectic_residual);
            }
            other => failures.push(format!("anti-hermitian #{i}: {:?}", other.map(|f| (f.residual, f.symplectic_residual)))),
        }
    }
    outcome(
        failures.is_empty(),
        format!("planted congruence {cong}/60, hermitian symplectic {herm}/60, anti-hermitian symplectic {anti}/60, worst residual {worst:.1e}; {failures:?}"),
    )
}

fn witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut list: Vec<(String, IsoWitness)> = Vec::new();
    let j = make_j(2).unwrap();
    list.push(("sl(m,n) identity".into(), iso_a3_star(&make_s(2, 1).unwrap(), &make_s(3, 2).unwrap(), &Scalar::one()).unwrap()));
    let h0 = random_invertible(3, &mut rng);
    let k0 = random_invertible(2, &mut rng);
    let a = &(&h0 * &make_s(3, 2).unwrap()) * &h0.adjoint();
    let b = &(&k0 * &make_s(2, 1).unwrap()) * &k0.adjoint();
    list.push(("sl(m,n) random hermitian".into(), iso_a3_star(&a, &b, &Scalar::one()).unwrap()));
    let (ai, bi) = (a.scale(&Scalar::i()), b.scale(&Scalar::i()));
    list.push(("sl(m,n) lambda = -1".into(), iso_a3_star(&ai, &bi, &Scalar::from_i64(-1)).unwrap()));
    let c = Scalar::gauss_int(2, 1);
    let (ac, bc) = (a.scale(&c), b.scale(&c));
    list.push(("sl(m,n) lambda = (3+4i)/5".into(), iso_a3_star(&ac, &bc, &Scalar::gauss(3, 5, 4, 5)).unwrap()));
    list.push(("phenomenon st vs t".into(), iso_a3_star(&j, &j, &Scalar::from_i64(-1)).unwrap()));
    list.push(("sl(n,n) identity".into(), iso_a3n(&MatC::identity(2)).unwrap()));
    list.push(("sl(n,n) diag(2,1/2)".into(), iso_a3n(&MatC::diag(&[Scalar::from_i64(2), Scalar::ratio(1, 2)])).unwrap()));
    list.push(("sl(n,n) random".into(), iso_a3n(&random_invertible(2, &mut rng)).unwrap()));
    list.push(("osp H_p alpha 1".into(), iso_c3(&make_h(4, 1).unwrap(), &Scalar::one()).unwrap()));
    let is4 = make_s(4, 2).unwrap().scale(&Scalar::i());
    list.push(("osp iS alpha i".into(), iso_c3(&is4, &Scalar::i()).unwrap()));
    let v0 = random_symplectic(4, &mut rng);
    let planted = &(&v0 * &make_h(4, 1).unwrap()) * &v0.adjoint();
    list.push(("osp planted alpha 3".into(), iso_c3(&planted, &Scalar::from_i64(3)).unwrap()));
    let planted_anti = &(&v0 * &is4) * &v0.adjoint();
    list.push(("osp planted anti-hermitian alpha -2i".into(), iso_c3(&planted_anti, &Scalar::gauss_int(0, -2)).unwrap()));
    let phen_target = same_bracket(&build_a3_star(&j, &j).unwrap(), &build_a3st_ph(2, 2).unwrap());
    let bad: Vec<String> = list.iter().filter(|(_, w)| !w.pass).map(|(n, w)| format!("{n}: {:.1e}", w.residual)).collect();
    let worst = list.iter().map(|(_, w)| w.residual).fold(0.0, f64::max);
    outcome(
        bad.is_empty() && phen_target,
        format!("{} witnesses, worst residual {worst:.1e}, st bracket = star bracket with J: {phen_target}; failing {bad:?}", list.len()),
    )
}

fn rejections() -> Outcome {
    let mut failures = Vec::new();
    for beta in [2, 1, -1] {
        if build_w3beta(&Scalar::from_i64(beta), &LinearChange::identity(2), 1).is_ok() {
            failures.push(format!("beta = {beta} accepted"));
        }
    }
    let not_symplectic = MatC::diag(&[Scalar::from_i64(2), Scalar::one()]);
    if build_c3_h_alpha(2, &not_symplectic, &Scalar::one()).is_ok() {
        failures.push("non-symplectic H accepted".into());
    }
    let is = make_s(2, 1).unwrap().scale(&Scalar::i());
    if build_c3_h_alpha(2, &is, &Scalar::one()).is_ok() || build_c3_h_alpha(2, &MatC::identity(2), &Scalar::i()).is_ok() {
        failures.push("mismatched hermiticity and alpha accepted".into());
    }
    let c3 = build_c3_ph_cp_using(4, 1, 1, Psi::SignDropped).unwrap();
    let r = check_axioms(&c3, CheckMode::default()).unwrap();
    if r.passed() || r.counterexample.is_none() {
        failures.push("dropped psi sign not caught".into());
    }
    let tw = lie_of(&build_a3n(2, 1).unwrap()).unwrap();
    let tr = check_tower_with(&tw, &negate_on_degree(&tw.lie, &tw.sigma, 0));
    if tr.conjugation.automorphism.passed() || tr.conjugation.counterexample.is_none() {
        failures.push("sigma negated on degree 0 not caught".into());
    }
    let phi = p3_standard_change(2);
    let unconjugated = build_p3_algebraic(2, &phi).unwrap();
    let mut mislabelled = unconjugated.clone();
    mislabelled.slot2 = n6alg::Linearity::AntiLinear;
    let fr = check_function_axioms(&mislabelled, 20, 3, 9);
    if fr.passed() || fr.counterexample.is_none() {
        failures.push("unconjugated P3 declared physical not caught".into());
    }
    outcome(failures.is_empty(), format!("beta in {{2,1,-1}}, bad (H, alpha), three injected sign bugs; failing {failures:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom certification", axiom_certification),
        ("simplicity and center", simplicity_and_center),
        ("infinite-dimensional families", infinite_families),
        ("identification identities", identifications),
        ("tower round trip", tower_round_trip),
        ("super-Jacobi and graded conjugations", superalgebra_suites),
        ("factorizations", factorizations),
        ("isomorphism witnesses", witnesses),
        ("rejections and mutations", rejections),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.ok;
        println!("{} {}. {name} ({:.1}s): {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, start.elapsed().as_secs_f64(), o.note);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
