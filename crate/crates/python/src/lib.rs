//! Python bindings. Every function returns its report as a JSON string.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

use n6alg_core::corpus::{run_corpus, CorpusConfig, Fault};
use n6alg_core::families::{FamilyName, FamilySpec};
use n6alg_core::tower::{check_tower_axioms, lie_of, roundtrip_of};
use n6alg_core::triple::{center as center_of, check_axioms, is_simple, CheckMode};
use n6alg_core::witness::{hermitian_congruence, iso_a3_star, iso_a3n, iso_c3, symplectic_antihermitian_factor, symplectic_hermitian_factor};
use n6alg_core::{Error, MatC, Scalar, TriSystem};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::BudgetExceeded { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_text(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn matrix(lit: &str) -> PyResult<MatC> {
    MatC::parse_literal(lit).map_err(py_err)
}

fn scalar(lit: &str) -> PyResult<Scalar> {
    lit.parse::<Scalar>().map_err(py_err)
}

#[allow(clippy::too_many_arguments)]
fn build(
    family: &str,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    two_n: usize,
    sign: i8,
    h: Option<&str>,
    alpha: Option<&str>,
) -> PyResult<TriSystem> {
    if sign != 1 && sign != -1 {
        return Err(PyValueError::new_err("sign must be 1 or -1"));
    }
    let name = FamilyName::parse(family).map_err(py_err)?;
    let h = h.map(matrix).transpose()?;
    let alpha = alpha.map(scalar).transpose()?;
    FamilySpec { name, m, n, p, q, two_n, sign, h, alpha }.build().map_err(py_err)
}

/// Axiom report of a finite family. `samples` switches to seeded sampling of quintuples.
#[pyfunction]
#[pyo3(signature = (family, m=1, n=1, p=0, q=0, two_n=2, sign=1, h=None, alpha=None, samples=None, seed=0))]
#[allow(clippy::too_many_arguments)]
fn check(
    family: &str,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    two_n: usize,
    sign: i8,
    h: Option<&str>,
    alpha: Option<&str>,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<String> {
    let t = build(family, m, n, p, q, two_n, sign, h, alpha)?;
    let mode = match samples {
        Some(n) => CheckMode::Sampled { n, seed },
        None => CheckMode::default(),
    };
    let r = check_axioms(&t, mode).map_err(py_err)?;
    Ok(to_text(&json!({ "passed": r.passed(), "report": r })))
}

/// Real basis of the center and the simplicity verdict.
#[pyfunction]
#[pyo3(signature = (family, m=1, n=1, p=0, q=0, two_n=2, sign=1, h=None, alpha=None))]
#[allow(clippy::too_many_arguments)]
fn center(
    family: &str,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    two_n: usize,
    sign: i8,
    h: Option<&str>,
    alpha: Option<&str>,
) -> PyResult<String> {
    let t = build(family, m, n, p, q, two_n, sign, h, alpha)?;
    let basis = center_of(&t);
    let simple = is_simple(&t);
    Ok(to_text(&json!({ "family": t.label, "dim": t.dim, "center_basis": basis, "simple": simple })))
}

/// `Lie T` with its conjugation, the tower checks and the round trip.
#[pyfunction]
#[pyo3(signature = (family, m=1, n=1, p=0, q=0, two_n=2, sign=1, h=None, alpha=None))]
#[allow(clippy::too_many_arguments)]
fn tower(
    family: &str,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    two_n: usize,
    sign: i8,
    h: Option<&str>,
    alpha: Option<&str>,
) -> PyResult<String> {
    let t = build(family, m, n, p, q, two_n, sign, h, alpha)?;
    let tw = lie_of(&t).map_err(py_err)?;
    let checks = check_tower_axioms(&tw);
    let rt = roundtrip_of(&tw);
    Ok(to_text(&json!({
        "passed": checks.passed() && rt.pass,
        "graded_dims": tw.lie.graded_dims(),
        "checks": checks,
        "roundtrip": rt,
        "tower": tw.to_json(),
    })))
}

/// `kind` is `congruence`, `symplectic-hermitian` or `symplectic-antihermitian`.
#[pyfunction]
fn factor(kind: &str, matrix_literal: &str) -> PyResult<String> {
    let m = matrix(matrix_literal)?;
    let v = match kind {
        "congruence" => serde_json::to_value(hermitian_congruence(&m).map_err(py_err)?),
        "symplectic-hermitian" => serde_json::to_value(symplectic_hermitian_factor(&m).map_err(py_err)?),
        "symplectic-antihermitian" => serde_json::to_value(symplectic_antihermitian_factor(&m).map_err(py_err)?),
        _ => return Err(PyValueError::new_err(format!("unknown factorization `{kind}`"))),
    };
    Ok(to_text(&v.expect("serializable")))
}

fn need<'a>(v: Option<&'a str>, arg: &str) -> PyResult<&'a str> {
    v.ok_or_else(|| PyValueError::new_err(format!("missing argument `{arg}`")))
}

/// `kind` is `a3-star` (needs a, b, optional lambda), `a3n` (needs a) or `c3` (needs h, alpha).
#[pyfunction]
#[pyo3(signature = (kind, a=None, b=None, lam=None, h=None, alpha=None))]
fn witness(kind: &str, a: Option<&str>, b: Option<&str>, lam: Option<&str>, h: Option<&str>, alpha: Option<&str>) -> PyResult<String> {
    let w = match kind {
        "a3-star" => {
            let lam = match lam {
                Some(l) => scalar(l)?,
                None => Scalar::one(),
            };
            iso_a3_star(&matrix(need(a, "a")?)?, &matrix(need(b, "b")?)?, &lam)
        }
        "a3n" => iso_a3n(&matrix(need(a, "a")?)?),
        "c3" => iso_c3(&matrix(need(h, "h")?)?, &scalar(need(alpha, "alpha")?)?),
        _ => return Err(PyValueError::new_err(format!("unknown witness kind `{kind}`"))),
    }
    .map_err(py_err)?;
    Ok(to_text(&w.to_json()))
}

/// Every corpus instance. `fault="psi-sign"` injects the dropped-sign bug into every C3 bracket.
#[pyfunction]
#[pyo3(signature = (samples=40, degree=3, seed=0, fault=None, towers=true, infinite=true))]
fn corpus(py: Python<'_>, samples: usize, degree: u32, seed: u64, fault: Option<&str>, towers: bool, infinite: bool) -> PyResult<String> {
    let fault = match fault {
        None => None,
        Some("psi-sign") => Some(Fault::PsiSignDropped),
        Some(other) => return Err(PyValueError::new_err(format!("unknown fault `{other}`"))),
    };
    let cfg = CorpusConfig { samples, max_degree: degree, seed, fault, towers, infinite };
    let summary = py.detach(|| run_corpus(&cfg)).map_err(py_err)?;
    Ok(to_text(&json!({ "passed": summary.all_passed(), "summary": summary })))
}

#[pymodule]
fn n6alg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(center, m)?)?;
    m.add_function(wrap_pyfunction!(tower, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    Ok(())
}
