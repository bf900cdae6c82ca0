//! Physical N=6 3-algebras at small sizes, with one summary row per instance.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::families::{build_c3_is_using, build_c3_ph_cp_using, FamilySpec, Psi};
use crate::functions::{
    build_p3, build_s3, build_sw3, build_w3, build_w3beta, check_function_axioms, p3_standard_change, FunctionAlgebra,
    ImaginaryParam, LinearChange,
};
use crate::linalg::{make_s, MatC};
use crate::scalar::Scalar;
use crate::tower::{check_tower_axioms, lie_of, roundtrip_of};
use crate::triple::{auto_mode, full_report, TriSystem};

/// A deliberate bug to inject into the builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `ψ(X, Y) = (Y, X)` instead of `(Y, -X)` in every `C³` bracket.
    PsiSignDropped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusConfig {
    pub samples: usize,
    pub max_degree: u32,
    pub seed: u64,
    pub fault: Option<Fault>,
    /// Also build `Lie T` and check its axioms and the round trip.
    pub towers: bool,
    pub infinite: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { samples: 40, max_degree: 3, seed: 0, fault: None, towers: true, infinite: true }
    }
}

/// One finite-dimensional corpus instance.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteInstance {
    pub item: &'static str,
    pub spec: FamilySpec,
}

impl FiniteInstance {
    pub fn build(&self, fault: Option<Fault>) -> Result<TriSystem> {
        let psi = match fault {
            Some(Fault::PsiSignDropped) => Psi::SignDropped,
            None => Psi::Standard,
        };
        let s = &self.spec;
        match self.item {
            "iii" => build_c3_ph_cp_using(s.two_n, s.p, s.sign, psi),
            "iv" => build_c3_is_using(s.two_n, s.sign, psi),
            _ => s.build(),
        }
    }
}

/// `A³(m,n;t)_{ph,C_{p,q}}` (m, n ≤ 3, mn ≥ 2), `A³(n)_±` (n = 2, 3), `C³(2n)_{ph,±C_{n-p}}` and
/// `C³(2n, iS^{2n}_n; ±i)` (2n ≤ 6).
pub fn finite_instances() -> Vec<FiniteInstance> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for n in 1..=3 {
            if m * n < 2 {
                continue;
            }
            for p in 0..=n {
                for q in 0..=m {
                    out.push(FiniteInstance { item: "i", spec: FamilySpec::a3t_ph(m, n, p, q) });
                }
            }
        }
    }
    for n in 2..=3 {
        for sign in [1, -1] {
            out.push(FiniteInstance { item: "ii", spec: FamilySpec::a3n(n, sign) });
        }
    }
    for n in 1..=3 {
        for p in 0..=n {
            for sign in [1, -1] {
                out.push(FiniteInstance { item: "iii", spec: FamilySpec::c3_ph(2 * n, p, sign) });
            }
        }
    }
    for n in 1..=3 {
        for sign in [1i8, -1] {
            let h = make_s(2 * n, n).expect("even size").scale(&Scalar::i());
            let alpha = if sign > 0 { Scalar::i() } else { -Scalar::i() };
            let spec = FamilySpec { sign, ..FamilySpec::c3_h_alpha(2 * n, h, alpha) };
            out.push(FiniteInstance { item: "iv", spec });
        }
    }
    out
}

/// One infinite-dimensional instance, checked on seeded polynomial samples.
pub struct InfiniteInstance {
    pub item: &'static str,
    pub algebra: FunctionAlgebra,
}

/// `P³(m)_±` (m ≤ 3), `SW³(a; t)` for `a ∈ {I₂, ((0,1),(-1,0))}` and `t ∈ {0, πi}`, `W³_±`,
/// `W³_β` with `β = (3+4i)/5`, and `S³` for `α ∈ {±1, ±i}`.
pub fn infinite_instances() -> Result<Vec<InfiniteInstance>> {
    let mut out = Vec::new();
    let mut push = |item, algebra| out.push(InfiniteInstance { item, algebra });
    for m in 1..=3 {
        for sign in [1, -1] {
            push("P3", build_p3(m, &p3_standard_change(m), sign)?);
        }
    }
    let rot = MatC::from_i64(2, 2, &[0, 1, -1, 0]);
    for k in 0..=1 {
        for lambda in [Scalar::one(), Scalar::from_i64(-1)] {
            push("SW3", build_sw3(&MatC::identity(2), ImaginaryParam::PiMultiple(k), &lambda)?);
        }
        for lambda in [Scalar::i(), -Scalar::i()] {
            push("SW3", build_sw3(&rot, ImaginaryParam::PiMultiple(k), &lambda)?);
        }
    }
    let id2 = LinearChange::identity(2);
    for sign in [1, -1] {
        push("W3", build_w3(&id2, sign)?);
        push("W3", build_w3(&LinearChange::diag(&[Scalar::i(), -Scalar::i()]), sign)?);
        push("W3beta", build_w3beta(&Scalar::gauss(3, 5, 4, 5), &id2, sign)?);
    }
    let flip = LinearChange::diag(&[Scalar::one(), Scalar::one(), Scalar::from_i64(-1)]);
    for alpha in [Scalar::one(), Scalar::from_i64(-1)] {
        push("S3", build_s3(&LinearChange::identity(3), &alpha)?);
    }
    for alpha in [Scalar::i(), -Scalar::i()] {
        push("S3", build_s3(&flip, &alpha)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusRow {
    pub item: String,
    pub family: String,
    pub dim: Option<usize>,
    pub axioms: bool,
    pub check: String,
    pub center_dim: Option<usize>,
    pub simple: Option<bool>,
    pub lie_dims: Option<(usize, usize, usize)>,
    pub tower: Option<bool>,
    pub roundtrip: Option<bool>,
    pub pass: bool,
    pub detail: Option<String>,
}

fn run_finite(inst: &FiniteInstance, cfg: &CorpusConfig) -> CorpusRow {
    let mut row = CorpusRow {
        item: inst.item.to_string(),
        family: String::new(),
        dim: None,
        axioms: false,
        check: String::new(),
        center_dim: None,
        simple: None,
        lie_dims: None,
        tower: None,
        roundtrip: None,
        pass: false,
        detail: None,
    };
    let t = match inst.build(cfg.fault) {
        Ok(t) => t,
        Err(e) => {
            row.family = format!("{:?}", inst.spec);
            row.detail = Some(e.to_string());
            return row;
        }
    };
    row.family = t.label.clone();
    row.dim = Some(t.dim);
    let report = match full_report(&t, auto_mode(t.dim, 1_000_000, 2000, cfg.seed)) {
        Ok(r) => r,
        Err(e) => {
            row.detail = Some(e.to_string());
            return row;
        }
    };
    row.axioms = report.passed();
    row.check = report.fi_mode.clone();
    row.center_dim = report.center_dim_real;
    row.simple = report.simple;
    if let Some(cx) = &report.counterexample {
        row.detail = Some(format!("{:?} fails", cx.axiom));
    }
    if cfg.towers && row.center_dim == Some(0) {
        match lie_of(&t) {
            Ok(tw) => {
                row.lie_dims = Some(tw.lie.graded_dims());
                row.tower = Some(check_tower_axioms(&tw).passed());
                row.roundtrip = Some(roundtrip_of(&tw).pass);
            }
            Err(e) => row.detail = Some(e.to_string()),
        }
    }
    row.pass = row.axioms
        && row.center_dim == Some(0)
        && row.simple == Some(true)
        && row.tower.unwrap_or(!cfg.towers)
        && row.roundtrip.unwrap_or(!cfg.towers);
    row
}

fn run_infinite(inst: &InfiniteInstance, cfg: &CorpusConfig) -> CorpusRow {
    let r = check_function_axioms(&inst.algebra, cfg.samples, cfg.max_degree, cfg.seed);
    CorpusRow {
        item: inst.item.to_string(),
        family: inst.algebra.label.clone(),
        dim: None,
        axioms: r.passed(),
        check: format!("{} samples, degree <= {}", r.samples, r.max_degree),
        center_dim: None,
        simple: None,
        lie_dims: None,
        tower: None,
        roundtrip: None,
        pass: r.passed(),
        detail: r.counterexample.as_ref().map(|c| format!("{} fails", c.axiom)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub config: CorpusConfig,
    pub rows: Vec<CorpusRow>,
    pub instances: usize,
    pub passed: usize,
    pub failing: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CorpusSummary {
    pub fn all_passed(&self) -> bool {
        self.failing.is_empty()
    }

    /// Plain-text table, one line per instance.
    pub fn table(&self) -> String {
        let mut s = format!("{:<6} {:<34} {:>4} {:>7} {:>6} {:>6} {:>12} {:>6}\n", "item", "family", "dim", "axioms", "center", "simple", "lie dims", "pass");
        for r in &self.rows {
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            s.push_str(&format!(
                "{:<6} {:<34} {:>4} {:>7} {:>6} {:>6} {:>12} {:>6}\n",
                r.item,
                r.family,
                opt(r.dim.map(|d| d.to_string())),
                r.axioms,
                opt(r.center_dim.map(|d| d.to_string())),
                opt(r.simple.map(|d| d.to_string())),
                opt(r.lie_dims.map(|(a, b, c)| format!("{a},{b},{c}"))),
                r.pass
            ));
        }
        s.push_str(&format!("{} / {} instances pass\n", self.passed, self.instances));
        s
    }
}

/// Runs every instance concurrently and assembles the rows in enumeration order.
pub fn run_corpus(cfg: &CorpusConfig) -> Result<CorpusSummary> {
    let start = Instant::now();
    let finite = finite_instances();
    let mut rows: Vec<CorpusRow> = finite.par_iter().map(|inst| run_finite(inst, cfg)).collect();
    if cfg.infinite {
        let infinite = infinite_instances()?;
        rows.extend(infinite.par_iter().map(|inst| run_infinite(inst, cfg)).collect::<Vec<_>>());
    }
    let failing: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.family.clone()).collect();
    Ok(CorpusSummary {
        config: cfg.clone(),
        instances: rows.len(),
        passed: rows.len() - failing.len(),
        rows,
        failing,
        seconds: start.elapsed().as_secs_f64(),
    })
}
