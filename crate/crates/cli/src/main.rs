mod args;

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::*;
use n6alg::corpus::{run_corpus, CorpusConfig, Fault};
use n6alg::families::{build_a3n, build_a3t_ph, build_c3_h_alpha, build_c3_is, build_c3_ph_cp, FamilyName, FamilySpec};
use n6alg::functions::{
    build_p3, build_s3, build_sw3, build_w3, build_w3beta, check_function_axioms, no_central_poly, p3_standard_change,
    FunctionAlgebra, ImaginaryParam, LinearChange,
};
use n6alg::superalg::{build_conj_osp, build_conj_psl, build_osp, build_psl, build_sigma1, build_tau, OspVariant};
use n6alg::tower::{check_tower_axioms, lie_of, roundtrip_of, tel};
use n6alg::triple::{center, check_axioms, is_simple, same_bracket, CheckMode};
use n6alg::witness::{hermitian_congruence, iso_a3_star, iso_a3n, iso_c3, symplectic_antihermitian_factor, symplectic_hermitian_factor};
use n6alg::{Error, MatC, Scalar, TriSystem};

/// A report and whether the verification it describes succeeded.
struct Outcome {
    report: Value,
    ok: bool,
}

enum Failure {
    Usage(String),
    Verification(String, Option<Value>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::BudgetExceeded { .. } => Failure::Usage(e.to_string()),
            Error::NonzeroCenter { ref basis } => {
                let report = json!({ "error": e.to_string(), "center_basis": basis });
                Failure::Verification(e.to_string(), Some(report))
            }
            Error::Numerical(_) | Error::Verification(_) => Failure::Verification(e.to_string(), None),
        }
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

enum Built {
    Matrix(TriSystem),
    Function(FunctionAlgebra),
}

fn parse_sign(s: &str) -> std::result::Result<i8, Failure> {
    match s.trim() {
        "+" | "1" | "+1" | "plus" => Ok(1),
        "-" | "-1" | "minus" => Ok(-1),
        _ => Err(Failure::Usage(format!("sign must be + or -, got `{s}`"))),
    }
}

fn parse_scalar(s: &str) -> std::result::Result<Scalar, Failure> {
    Ok(s.parse::<Scalar>()?)
}

fn parse_matrix(s: &str) -> std::result::Result<MatC, Failure> {
    Ok(MatC::parse_literal(s)?)
}

fn required<'a>(v: &'a Option<String>, flag: &str, family: &str) -> std::result::Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| Failure::Usage(format!("{family} needs --{flag}")))
}

fn parse_phi(v: &Option<String>, nvars: usize) -> std::result::Result<LinearChange, Failure> {
    match v.as_deref() {
        None | Some("id") => Ok(LinearChange::identity(nvars)),
        Some(lit) => Ok(LinearChange::new(parse_matrix(lit)?)?),
    }
}

fn build_family(f: &FamilyArgs) -> std::result::Result<Built, Failure> {
    let sign = parse_sign(&f.sign)?;
    let name = f.family.as_str();
    let alg = match name {
        "p3" => {
            let phi = match f.phi.as_deref() {
                None | Some("standard") => p3_standard_change(f.m),
                _ => parse_phi(&f.phi, f.m)?,
            };
            build_p3(f.m, &phi, sign)?
        }
        "sw3" => {
            let a = match &f.a {
                Some(lit) => parse_matrix(lit)?,
                None => MatC::identity(2),
            };
            let lambda = match &f.lambda {
                Some(l) => parse_scalar(l)?,
                None => Scalar::one(),
            };
            build_sw3(&a, ImaginaryParam::parse(&f.t)?, &lambda)?
        }
        "w3" => build_w3(&parse_phi(&f.phi, 2)?, sign)?,
        "w3beta" => {
            let beta = parse_scalar(required(&f.beta, "beta", name)?)?;
            build_w3beta(&beta, &parse_phi(&f.phi, 2)?, sign)?
        }
        "s3" => {
            let alpha = match &f.alpha {
                Some(a) => parse_scalar(a)?,
                None => Scalar::one(),
            };
            build_s3(&parse_phi(&f.phi, 3)?, &alpha)?
        }
        _ => {
            let family = FamilyName::parse(name)?;
            let h = f.h.as_deref().map(parse_matrix).transpose()?;
            let alpha = f.alpha.as_deref().map(parse_scalar).transpose()?;
            let spec = FamilySpec { name: family, m: f.m, n: f.n, p: f.p, q: f.q, two_n: f.two_n, sign, h, alpha };
            return Ok(Built::Matrix(spec.build()?));
        }
    };
    Ok(Built::Function(alg))
}

fn check_mode(cli: &Cli, samples: usize) -> CheckMode {
    match cli.mode {
        Mode::Exhaustive => CheckMode::default(),
        Mode::Sampled => CheckMode::Sampled { n: samples, seed: cli.seed },
    }
}

fn with_tol(t: TriSystem, cli: &Cli) -> TriSystem {
    match cli.tol {
        Some(tol) => t.with_tol(tol),
        None => t,
    }
}

fn cmd_check(cli: &Cli, f: &FamilyArgs) -> CmdResult {
    match build_family(f)? {
        Built::Matrix(t) => {
            let t = with_tol(t, cli);
            let r = check_axioms(&t, check_mode(cli, f.samples))?;
            Ok(Outcome { ok: r.passed(), report: json!({ "command": "check", "seed": cli.seed, "report": r }) })
        }
        Built::Function(mut alg) => {
            if let Some(tol) = cli.tol {
                alg.tol = tol;
            }
            let r = check_function_axioms(&alg, f.samples, f.degree, cli.seed);
            Ok(Outcome { ok: r.passed(), report: json!({ "command": "check", "seed": cli.seed, "report": r }) })
        }
    }
}

fn cmd_center(cli: &Cli, f: &FamilyArgs) -> CmdResult {
    match build_family(f)? {
        Built::Matrix(t) => {
            let t = with_tol(t, cli);
            let basis = center(&t);
            let report = json!({
                "command": "center",
                "seed": cli.seed,
                "family": t.label,
                "dim": t.dim,
                "center_dim_real": basis.len(),
                "center_basis": basis,
            });
            Ok(Outcome { report, ok: true })
        }
        Built::Function(alg) => {
            let probe = no_central_poly(&alg, f.degree.min(2), f.degree);
            Ok(Outcome { ok: true, report: json!({ "command": "center", "seed": cli.seed, "probe": probe }) })
        }
    }
}

fn cmd_simple(cli: &Cli, f: &FamilyArgs) -> CmdResult {
    match build_family(f)? {
        Built::Matrix(t) => {
            let t = with_tol(t, cli);
            let v = is_simple(&t);
            Ok(Outcome { ok: true, report: json!({ "command": "simple", "seed": cli.seed, "family": t.label, "verdict": v }) })
        }
        Built::Function(_) => Err(Failure::Usage("simplicity is decided for finite-dimensional families only; use `center`".into())),
    }
}

fn cmd_tower(cli: &Cli, f: &FamilyArgs) -> CmdResult {
    let Built::Matrix(t) = build_family(f)? else {
        return Err(Failure::Usage("towers are built for finite-dimensional families only".into()));
    };
    let t = with_tol(t, cli);
    let tw = lie_of(&t)?;
    let checks = check_tower_axioms(&tw);
    let rt = roundtrip_of(&tw);
    let ok = checks.passed() && rt.pass;
    let report = json!({
        "command": "tower",
        "seed": cli.seed,
        "graded_dims": tw.lie.graded_dims(),
        "checks": checks,
        "roundtrip": rt,
        "tower": tw.to_json(),
    });
    Ok(Outcome { report, ok })
}

fn cmd_tel(cli: &Cli, a: &TelArgs) -> CmdResult {
    let sign = parse_sign(&a.sign)?;
    let (g, sigma, expected) = match a.algebra {
        SuperAlgebra::Psl => {
            let g = build_psl(a.m, a.n)?;
            let (sigma, expected) = match a.conj {
                ConjKind::Sigma1 => (build_sigma1(&g)?, Some(build_a3t_ph(a.n, a.m, 0, 0)?)),
                ConjKind::Psl => (build_conj_psl(&g, a.p, a.q)?, Some(build_a3t_ph(a.n, a.m, a.p, a.q)?)),
                ConjKind::Tau => {
                    if a.m != a.n {
                        return Err(Failure::Usage("tau needs psl(n,n)".into()));
                    }
                    (build_tau(&g, sign)?, Some(build_a3n(a.n, sign)?))
                }
                _ => return Err(Failure::Usage("psl takes --conj sigma1, psl or tau".into())),
            };
            (g, sigma, expected)
        }
        SuperAlgebra::Osp => {
            let g = build_osp(a.n)?;
            let (sigma, expected) = match a.conj {
                ConjKind::OspHermitian => (build_conj_osp(&g, OspVariant::Hermitian(a.p), sign)?, Some(build_c3_ph_cp(2 * a.n, a.p, sign)?)),
                ConjKind::OspAntihermitian => (build_conj_osp(&g, OspVariant::AntiHermitian, sign)?, Some(build_c3_is(2 * a.n, sign)?)),
                ConjKind::Sigma1 => {
                    let h = MatC::identity(2 * a.n);
                    (build_sigma1(&g)?, Some(build_c3_h_alpha(2 * a.n, &h, &Scalar::one())?))
                }
                _ => return Err(Failure::Usage("osp takes --conj osp-hermitian, osp-antihermitian or sigma1".into())),
            };
            (g, sigma, expected)
        }
    };
    let t = with_tol(tel(&g, &sigma)?, cli);
    let r = check_axioms(&t, CheckMode::default())?;
    let matches = expected.as_ref().map(|e| json!({ "family": e.label, "same_bracket": same_bracket(&t, e) }));
    let report = json!({
        "command": "tel",
        "seed": cli.seed,
        "superalgebra": g.label,
        "conjugation": sigma.kind,
        "report": r,
        "matches": matches,
    });
    Ok(Outcome { ok: r.passed(), report })
}

fn cmd_factor(cli: &Cli, a: &FactorArgs) -> CmdResult {
    let m = parse_matrix(&a.matrix)?;
    let tol = cli.tol.unwrap_or(1e-9);
    let (report, residuals) = match a.kind {
        FactorKind::Congruence => {
            let c = hermitian_congruence(&m)?;
            (serde_json::to_value(&c).expect("serializable"), vec![c.residual])
        }
        FactorKind::SymplecticHermitian => {
            let s = symplectic_hermitian_factor(&m)?;
            (serde_json::to_value(&s).expect("serializable"), vec![s.residual, s.symplectic_residual])
        }
        FactorKind::SymplecticAntihermitian => {
            let s = symplectic_antihermitian_factor(&m)?;
            (serde_json::to_value(&s).expect("serializable"), vec![s.residual, s.symplectic_residual])
        }
    };
    let ok = residuals.iter().all(|r| *r <= tol);
    Ok(Outcome { ok, report: json!({ "command": "factor", "seed": cli.seed, "tol": tol, "factor": report }) })
}

fn cmd_witness(cli: &Cli, a: &WitnessArgs) -> CmdResult {
    let w = match a.kind {
        WitnessKind::A3Star => {
            let am = parse_matrix(required(&a.a, "a", "a3-star")?)?;
            let bm = parse_matrix(required(&a.b, "b", "a3-star")?)?;
            let lambda = match &a.lambda {
                Some(l) => parse_scalar(l)?,
                None => Scalar::one(),
            };
            iso_a3_star(&am, &bm, &lambda)?
        }
        WitnessKind::A3n => iso_a3n(&parse_matrix(required(&a.a, "a", "a3n")?)?)?,
        WitnessKind::C3 => {
            let h = parse_matrix(required(&a.h, "h", "c3")?)?;
            let alpha = parse_scalar(required(&a.alpha, "alpha", "c3")?)?;
            iso_c3(&h, &alpha)?
        }
    };
    Ok(Outcome { ok: w.pass, report: json!({ "command": "witness", "seed": cli.seed, "witness": w.to_json() }) })
}

fn cmd_corpus(cli: &Cli, a: &CorpusArgs) -> CmdResult {
    let fault = match a.fault.as_deref() {
        None => None,
        Some("psi-sign") => Some(Fault::PsiSignDropped),
        Some(other) => return Err(Failure::Usage(format!("unknown fault `{other}`; known: psi-sign"))),
    };
    let cfg = CorpusConfig {
        samples: a.samples,
        max_degree: a.degree,
        seed: cli.seed,
        fault,
        towers: !a.no_towers,
        infinite: !a.finite_only,
    };
    let summary = run_corpus(&cfg)?;
    if a.table {
        eprint!("{}", summary.table());
    }
    for name in &summary.failing {
        eprintln!("FAIL {name}");
    }
    let ok = summary.all_passed();
    Ok(Outcome { ok, report: json!({ "command": "corpus", "seed": cli.seed, "summary": summary }) })
}

fn emit(cli: &Cli, report: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("serializable") + "\n";
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Check(f) => cmd_check(&cli, f),
        Command::Center(f) => cmd_center(&cli, f),
        Command::Simple(f) => cmd_simple(&cli, f),
        Command::Tower(f) => cmd_tower(&cli, f),
        Command::Tel(a) => cmd_tel(&cli, a),
        Command::Factor(a) => cmd_factor(&cli, a),
        Command::Witness(a) => cmd_witness(&cli, a),
        Command::Corpus(a) => cmd_corpus(&cli, a),
    };
    let (report, code) = match result {
        Ok(o) => (Some(o.report), if o.ok { 0 } else { 2 }),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Verification(msg, report)) => {
            eprintln!("verification failed: {msg}");
            (report, 2)
        }
    };
    if let Some(r) = report {
        if let Err(e) = emit(&cli, &r) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
