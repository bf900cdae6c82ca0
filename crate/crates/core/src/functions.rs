//! Polynomial models of the function 3-algebras `P³`, `SW³`, `W³`, `W³_β` and `S³`.
//!
//! An element is a list of polynomial components: one component for all families except
//! `SW³`, whose elements are pairs `(f⟨1⟩, f⟨2⟩)` in one variable `x`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, Linearity, MatC};
use crate::poly::{roster, Poly};
use crate::scalar::Scalar;
use crate::triple::Verdict;
use crate::DEFAULT_TOL;

pub type Elem = Vec<Poly>;
pub type ElemBracket = Arc<dyn Fn(&[Poly], &[Poly], &[Poly]) -> Elem + Send + Sync>;

/// A linear change of variables `f ↦ f(φ(x))` with `φ(x)_i = Σ_j m_ij x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearChange {
    pub mat: MatC,
}

impl LinearChange {
    pub fn new(mat: MatC) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::arg("a change of variables needs a square matrix"));
        }
        if mat.det().is_negligible(DEFAULT_TOL) {
            return Err(Error::arg("a change of variables must be invertible"));
        }
        Ok(LinearChange { mat })
    }

    pub fn identity(n: usize) -> Self {
        LinearChange { mat: MatC::identity(n) }
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        LinearChange { mat: MatC::diag(entries) }
    }

    pub fn nvars(&self) -> usize {
        self.mat.rows()
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        f.substitute_linear(&self.mat)
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &LinearChange) -> LinearChange {
        LinearChange { mat: &self.mat * &other.mat }
    }

    pub fn is_real(&self) -> bool {
        self.mat.data().iter().all(Scalar::is_real)
    }
}

/// Variable roster of `P³(m, ·)`: `t` first when `m` is odd, then `p_1..p_k`, `q_1..q_k`.
pub fn p3_roster(m: usize) -> Vec<String> {
    let k = m / 2;
    let mut v = Vec::new();
    if m % 2 == 1 {
        v.push("t".to_string());
    }
    v.extend((1..=k).map(|i| format!("p{i}")));
    v.extend((1..=k).map(|i| format!("q{i}")));
    v
}

fn p3_indices(m: usize) -> (Option<usize>, Vec<usize>, Vec<usize>) {
    let k = m / 2;
    let off = m % 2;
    let t = if off == 1 { Some(0) } else { None };
    (t, (off..off + k).collect(), (off + k..off + 2 * k).collect())
}

/// The standard involution for `P³(m, ·)`: `t ↦ -t` when `m` is odd, and `p_i ↔ q_i`.
pub fn p3_standard_change(m: usize) -> LinearChange {
    let (t, ps, qs) = p3_indices(m);
    let mut mat = MatC::zeros(m, m);
    if let Some(t) = t {
        mat.set(t, t, Scalar::from_i64(-1));
    }
    for (&p, &q) in ps.iter().zip(&qs) {
        mat.set(p, q, Scalar::one());
        mat.set(q, p, Scalar::one());
    }
    LinearChange { mat }
}

/// `{f,g} = (2-E)(f)∂g/∂t - ∂f/∂t(2-E)(g) + Σ (∂f/∂p_i ∂g/∂q_i - ∂f/∂q_i ∂g/∂p_i)` with
/// `E = Σ (p_i ∂/∂p_i + q_i ∂/∂q_i)`.
pub fn poisson(f: &Poly, g: &Poly, m: usize) -> Result<Poly> {
    let vars = p3_roster(m);
    if f.vars() != vars.as_slice() || g.vars() != vars.as_slice() {
        return Err(Error::arg(format!("poisson bracket for m={m} needs the roster {vars:?}")));
    }
    Ok(poisson_unchecked(f, g, m))
}

fn poisson_unchecked(f: &Poly, g: &Poly, m: usize) -> Poly {
    let (t, ps, qs) = p3_indices(m);
    let mut out = Poly::zero(f.vars());
    if let Some(t) = t {
        let e: Vec<usize> = ps.iter().chain(&qs).copied().collect();
        let two_minus_e = |u: &Poly| u.scale(&Scalar::from_i64(2)).sub(&u.euler(&e));
        out = out.add(&two_minus_e(f).mul(&g.deriv(t))).sub(&f.deriv(t).mul(&two_minus_e(g)));
    }
    for (&p, &q) in ps.iter().zip(&qs) {
        out = out.add(&f.deriv(p).mul(&g.deriv(q))).sub(&f.deriv(q).mul(&g.deriv(p)));
    }
    out
}

/// Which condition a change of variables must meet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChangeRule {
    /// `φ² = 1` and `φ` multiplies the contact 1-form of `P³(m, ·)` by `-1`.
    Poisson { m: usize },
    /// `φ̄φ = 1` (physical `W³`, `W³_β`).
    UnitaryLike,
    /// `φ̄φ = 1` with `det φ = ±1` matching `α = ±1` resp. `α = ±i` (physical `S³`).
    Volume { alpha_imaginary: bool },
    /// `φ² = 1` and `det φ = 1` (algebraic `W³`, `S³`).
    Involution,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangeVerdict {
    pub valid: bool,
    pub reason: String,
}

impl ChangeVerdict {
    fn ok() -> Self {
        ChangeVerdict { valid: true, reason: String::new() }
    }

    fn bad(reason: impl Into<String>) -> Self {
        ChangeVerdict { valid: false, reason: reason.into() }
    }

    fn into_result(self) -> Result<()> {
        if self.valid {
            Ok(())
        } else {
            Err(Error::arg(self.reason))
        }
    }
}

pub fn validate_change(phi: &LinearChange, rule: ChangeRule) -> ChangeVerdict {
    let m = &phi.mat;
    if !m.is_square() {
        return ChangeVerdict::bad("φ must be square");
    }
    let n = m.rows();
    let tol = if m.is_exact() { 0.0 } else { DEFAULT_TOL };
    let id = MatC::identity(n);
    match rule {
        ChangeRule::Poisson { m: mm } => {
            if n != mm {
                return ChangeVerdict::bad(format!("φ must act on {mm} variables"));
            }
            if !(m * m).approx_eq(&id, tol) {
                return ChangeVerdict::bad("φ must be an involution (φ² = 1)");
            }
            let (t, ps, qs) = p3_indices(mm);
            // ω = xᵗ Ω dx + bᵗ dx
            let mut omega = MatC::zeros(n, n);
            for (&p, &q) in ps.iter().zip(&qs) {
                omega.set(p, q, Scalar::one());
                omega.set(q, p, Scalar::from_i64(-1));
            }
            let mut b = vec![Scalar::zero(); n];
            if let Some(t) = t {
                b[t] = Scalar::one();
            }
            let pulled = &(&m.transpose() * &omega) * m;
            if !pulled.approx_eq(&-&omega, tol) {
                return ChangeVerdict::bad("φ must multiply Σ(p dq - q dp) by -1");
            }
            let mb = m.transpose().apply(&b);
            if !MatC::col_vector(&mb).approx_eq(&-&MatC::col_vector(&b), tol) {
                return ChangeVerdict::bad("φ must multiply dt by -1");
            }
            ChangeVerdict::ok()
        }
        ChangeRule::UnitaryLike => {
            if !(&m.conj() * m).approx_eq(&id, tol) {
                return ChangeVerdict::bad("φ must satisfy φ̄φ = 1");
            }
            ChangeVerdict::ok()
        }
        ChangeRule::Volume { alpha_imaginary } => {
            if !(&m.conj() * m).approx_eq(&id, tol) {
                return ChangeVerdict::bad("φ must satisfy φ̄φ = 1");
            }
            let want = Scalar::from_i64(if alpha_imaginary { -1 } else { 1 });
            if m.det().dist(&want) > tol {
                return ChangeVerdict::bad(if alpha_imaginary {
                    "α = ±i needs det φ = -1"
                } else {
                    "α = ±1 needs det φ = 1"
                });
            }
            ChangeVerdict::ok()
        }
        ChangeRule::Involution => {
            if !(m * m).approx_eq(&id, tol) {
                return ChangeVerdict::bad("φ must be an involution (φ² = 1)");
            }
            if m.det().dist(&Scalar::one()) > tol {
                return ChangeVerdict::bad("φ must have determinant 1");
            }
            ChangeVerdict::ok()
        }
    }
}

/// A polynomial 3-algebra: bracket oracle on elements with a fixed number of components.
#[derive(Clone)]
pub struct FunctionAlgebra {
    pub label: String,
    pub vars: Vec<String>,
    pub components: usize,
    pub slot2: Linearity,
    /// Brackets are taken in the quotient by constants.
    pub modulo_constants: bool,
    pub tol: f64,
    bracket: ElemBracket,
}

impl std::fmt::Debug for FunctionAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionAlgebra").field("label", &self.label).field("vars", &self.vars).finish()
    }
}

impl FunctionAlgebra {
    fn new(
        label: impl Into<String>,
        vars: Vec<String>,
        components: usize,
        slot2: Linearity,
        bracket: impl Fn(&[Poly], &[Poly], &[Poly]) -> Elem + Send + Sync + 'static,
    ) -> Self {
        FunctionAlgebra {
            label: label.into(),
            vars,
            components,
            slot2,
            modulo_constants: false,
            tol: DEFAULT_TOL,
            bracket: Arc::new(bracket),
        }
    }

    pub fn eval(&self, a: &[Poly], b: &[Poly], c: &[Poly]) -> Elem {
        let out = (self.bracket)(a, b, c);
        if self.modulo_constants {
            out.iter().map(Poly::without_constant).collect()
        } else {
            out
        }
    }

    pub fn zero_elem(&self) -> Elem {
        vec![Poly::zero(&self.vars); self.components]
    }

    /// Wraps a single polynomial as the given component of an element.
    pub fn elem(&self, component: usize, p: Poly) -> Elem {
        let mut e = self.zero_elem();
        e[component] = p;
        e
    }

    /// Random element with degree at most `max_deg` and 1 to 3 terms per component; in the
    /// two-component case each component is independently zero with probability 1/3.
    pub fn random_elem<R: Rng>(&self, max_deg: u32, rng: &mut R) -> Elem {
        (0..self.components)
            .map(|_| {
                if self.components > 1 && rng.gen_range(0..3) == 0 {
                    Poly::zero(&self.vars)
                } else {
                    let terms = rng.gen_range(1..=3);
                    Poly::random(&self.vars, max_deg, terms, rng)
                }
            })
            .collect()
    }

    /// Same bracket, negated.
    pub fn negated(&self) -> FunctionAlgebra {
        let inner = self.bracket.clone();
        FunctionAlgebra {
            label: format!("-({})", self.label),
            bracket: Arc::new(move |a, b, c| inner(a, b, c).iter().map(Poly::neg).collect()),
            ..self.clone()
        }
    }

    /// `[a, b, c]_{ph, ±C_0} = [a, ±b̄, c]` for an algebraic bracket.
    pub fn physicalized_by_conjugation(&self, sign: i8) -> Result<FunctionAlgebra> {
        if self.slot2 != Linearity::Linear {
            return Err(Error::arg("only an algebraic bracket can be physicalized"));
        }
        let inner = self.bracket.clone();
        let s = Scalar::from_i64(if sign >= 0 { 1 } else { -1 });
        Ok(FunctionAlgebra {
            label: format!("{}_ph,{}C0", self.label, if sign >= 0 { "+" } else { "-" }),
            slot2: Linearity::AntiLinear,
            bracket: Arc::new(move |a, b, c| {
                let bc: Elem = b.iter().map(|p| p.conj().scale(&s)).collect();
                inner(a, &bc, c)
            }),
            ..self.clone()
        })
    }

    fn vanishes(&self, e: &[Poly]) -> bool {
        e.iter().all(|p| p.terms().all(|(_, c)| !c.is_exact() && c.abs() <= self.tol))
    }
}

fn elem_add(a: &[Poly], b: &[Poly]) -> Elem {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn elem_sub(a: &[Poly], b: &[Poly]) -> Elem {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn elem_scale(a: &[Poly], s: &Scalar) -> Elem {
    a.iter().map(|x| x.scale(s)).collect()
}

fn elem_json(e: &[Poly]) -> serde_json::Value {
    serde_json::Value::Array(e.iter().map(Poly::to_json).collect())
}

// ---------------------------------------------------------------------------------------------
// P³

fn sign_scalar(sign: i8) -> Scalar {
    Scalar::from_i64(if sign >= 0 { 1 } else { -1 })
}

fn sign_str(sign: i8) -> &'static str {
    if sign >= 0 {
        "+"
    } else {
        "-"
    }
}

fn p3_from_sigma(m: usize, sigma: impl Fn(&Poly) -> Poly + Send + Sync + 'static) -> impl Fn(&[Poly], &[Poly], &[Poly]) -> Elem {
    let (t, _, _) = p3_indices(m);
    move |f, g, h| {
        let (f, h) = (&f[0], &h[0]);
        let s = sigma(&g[0]);
        let mut out = poisson_unchecked(f, &s, m)
            .mul(h)
            .add(&poisson_unchecked(f, h, m).mul(&s))
            .add(&f.mul(&poisson_unchecked(&s, h, m)));
        if let Some(t) = t {
            let two = Scalar::from_i64(2);
            out = out.add(&f.deriv(t).scale(&two).mul(&s).mul(h)).sub(&f.mul(&s).mul(&h.deriv(t).scale(&two)));
        }
        vec![out]
    }
}

/// Algebraic `P³(m, φ)` with `σ_φ(g) = -g(φ(x))`.
pub fn build_p3_algebraic(m: usize, phi: &LinearChange) -> Result<FunctionAlgebra> {
    if m == 0 {
        return Err(Error::arg("P3 needs m >= 1"));
    }
    validate_change(phi, ChangeRule::Poisson { m }).into_result()?;
    let phi = phi.clone();
    Ok(FunctionAlgebra::new(
        format!("P3({m},phi)"),
        p3_roster(m),
        1,
        Linearity::Linear,
        p3_from_sigma(m, move |g| phi.apply(g).neg()),
    ))
}

/// Physical `P³(m, φ; ‾)_±` with `σ̄_φ(g) = -ḡ(φ(x))` replaced by `±σ̄_φ`.
pub fn build_p3(m: usize, phi: &LinearChange, sign: i8) -> Result<FunctionAlgebra> {
    if m == 0 {
        return Err(Error::arg("P3 needs m >= 1"));
    }
    validate_change(phi, ChangeRule::Poisson { m }).into_result()?;
    let phi = phi.clone();
    let s = sign_scalar(sign);
    Ok(FunctionAlgebra::new(
        format!("P3({m},phi;bar)_{}", sign_str(sign)),
        p3_roster(m),
        1,
        Linearity::AntiLinear,
        p3_from_sigma(m, move |g| phi.apply(g).conj().scale(&-&s)),
    ))
}

/// `[f, g, h]` for `P³(m, φ; ‾)_±` on single polynomials.
pub fn p3_bracket(f: &Poly, g: &Poly, h: &Poly, m: usize, phi: &LinearChange, sign: i8) -> Result<Poly> {
    let alg = build_p3(m, phi, sign)?;
    Ok(alg.eval(&[f.clone()], &[g.clone()], &[h.clone()]).remove(0))
}

// ---------------------------------------------------------------------------------------------
// SW³

/// A purely imaginary parameter `t`: either `kπi` (exact exponentials) or `s·i` for a float `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ImaginaryParam {
    PiMultiple(i64),
    Imag(f64),
}

impl ImaginaryParam {
    /// Accepts `0`, `pi`, `-pi`, `<k>pi` (meaning `kπi`) or a decimal `s` (meaning `s·i`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_suffix("pi") {
            let k = match k {
                "" | "+" => 1,
                "-" => -1,
                _ => k.parse::<i64>().map_err(|_| Error::Parse(format!("bad multiple of pi `{s}`")))?,
            };
            return Ok(ImaginaryParam::PiMultiple(k));
        }
        if let Ok(k) = s.parse::<i64>() {
            if k == 0 {
                return Ok(ImaginaryParam::PiMultiple(0));
            }
        }
        s.parse::<f64>().map(ImaginaryParam::Imag).map_err(|_| Error::Parse(format!("bad imaginary parameter `{s}`")))
    }

    /// `exp(2t)`.
    pub fn exp_2t(&self) -> Scalar {
        match *self {
            ImaginaryParam::PiMultiple(_) => Scalar::one(),
            ImaginaryParam::Imag(s) => Scalar::float((2.0 * s).cos(), (2.0 * s).sin()),
        }
    }

    /// `exp(-t)`.
    pub fn exp_neg_t(&self) -> Scalar {
        match *self {
            ImaginaryParam::PiMultiple(k) => Scalar::from_i64(if k % 2 == 0 { 1 } else { -1 }),
            ImaginaryParam::Imag(s) => Scalar::float(s.cos(), -s.sin()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ImaginaryParam::PiMultiple(k) => format!("{k}pi*i"),
            ImaginaryParam::Imag(s) => format!("{s}i"),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ImaginaryParam::PiMultiple(_))
    }
}

struct SwData {
    /// `ā` (physical) or `a` (algebraic).
    a: MatC,
    pre: Scalar,
    /// Scaling of `x` inside `g`; in the physical case `g` is conjugated first, so the
    /// slot-2 map is `g ↦ ḡ(exp(2t)x)`.
    scale: Scalar,
    physical: bool,
}

impl SwData {
    fn gs(&self, g: &Poly) -> (Poly, Poly) {
        let base = if self.physical { g.conj() } else { g.clone() };
        let sub = base.substitute_linear(&MatC::diag(&[self.scale.clone()]));
        let d = sub.deriv(0);
        (sub, d)
    }

    /// `[f⟨i⟩, g⟨j⟩, h⟨k⟩]` as a pair, for components `i, j, k ∈ {0, 1}`.
    fn comp(&self, i: usize, f: &Poly, j: usize, g: &Poly, k: usize, h: &Poly) -> [Poly; 2] {
        let z = Poly::zero(f.vars());
        let mut out = [z.clone(), z];
        if f.is_zero() || g.is_zero() || h.is_zero() {
            return out;
        }
        let (gs, dgs) = self.gs(g);
        let sgn = Scalar::from_i64(if i == 0 { -1 } else { 1 });
        if i == k {
            let coef = if j == i { self.a.get(i, 1 - i) } else { self.a.get(j, j) };
            let w = f.mul(&h.deriv(0)).sub(&f.deriv(0).mul(h)).mul(&gs);
            out[i] = w.scale(&(&(&self.pre * &sgn) * coef));
        } else if i == 0 {
            let first = f.mul(&dgs).sub(&f.deriv(0).mul(&gs)).mul(h);
            let second = f.mul(&h.mul(&dgs).sub(&h.deriv(0).mul(&gs)));
            out[0] = first.scale(&(&self.pre * self.a.get(j, 0)));
            out[1] = second.scale(&(&self.pre * self.a.get(j, 1)));
        } else {
            let [x, y] = self.comp(k, h, j, g, i, f);
            out = [x.neg(), y.neg()];
        }
        out
    }

    fn bracket(&self, f: &[Poly], g: &[Poly], h: &[Poly]) -> Elem {
        let mut out = vec![Poly::zero(f[0].vars()), Poly::zero(f[0].vars())];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let [x, y] = self.comp(i, &f[i], j, &g[j], k, &h[k]);
                    out[0] = out[0].add(&x);
                    out[1] = out[1].add(&y);
                }
            }
        }
        out
    }
}

fn check_sl2(a: &MatC) -> Result<f64> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::arg("SW3 needs a 2x2 matrix a"));
    }
    let tol = if a.is_exact() { 0.0 } else { DEFAULT_TOL };
    if a.det().dist(&Scalar::one()) > tol {
        return Err(Error::arg("SW3 needs det a = 1"));
    }
    Ok(tol)
}

/// Physical `SW³(a; φ_t)_±` with `φ_t(x) = exp(2t)x`.
pub fn build_sw3(a: &MatC, t: ImaginaryParam, lambda: &Scalar) -> Result<FunctionAlgebra> {
    let tol = check_sl2(a)?;
    let aa = &a.conj() * a;
    let id = MatC::identity(2);
    if aa.approx_eq(&id, tol) {
        if !(lambda.dist(&Scalar::one()) <= tol || lambda.dist(&Scalar::from_i64(-1)) <= tol) {
            return Err(Error::arg("āa = I needs λ = ±1"));
        }
    } else if aa.approx_eq(&-&id, tol) {
        if !(lambda.dist(&Scalar::i()) <= tol || lambda.dist(&-Scalar::i()) <= tol) {
            return Err(Error::arg("āa = -I needs λ = ±i"));
        }
    } else {
        return Err(Error::arg("SW3 needs āa = ±I"));
    }
    let data = SwData {
        a: a.conj(),
        pre: lambda * &t.exp_neg_t(),
        scale: t.exp_2t(),
        physical: true,
    };
    let mut alg = FunctionAlgebra::new(
        format!("SW3(a={};t={})_lambda={lambda}", a.compact(), t.describe()),
        roster(&["x"]),
        2,
        Linearity::AntiLinear,
        move |f, g, h| data.bracket(f, g, h),
    );
    if !(a.is_exact() && lambda.is_exact() && t.is_exact()) {
        alg.tol = 1e-8;
    }
    Ok(alg)
}

/// Algebraic `SW³(a)`: `a ∈ SL_2` with `a² = ±1` and `φ = ±1` accordingly.
pub fn build_sw3_algebraic(a: &MatC) -> Result<FunctionAlgebra> {
    let tol = check_sl2(a)?;
    let sq = a * a;
    let id = MatC::identity(2);
    let scale = if sq.approx_eq(&id, tol) {
        Scalar::one()
    } else if sq.approx_eq(&-&id, tol) {
        Scalar::from_i64(-1)
    } else {
        return Err(Error::arg("SW3 needs a² = ±1"));
    };
    let data = SwData { a: a.clone(), pre: Scalar::one(), scale, physical: false };
    Ok(FunctionAlgebra::new("SW3(a)", roster(&["x"]), 2, Linearity::Linear, move |f, g, h| data.bracket(f, g, h)))
}

// ---------------------------------------------------------------------------------------------
// W³, W³_β, S³

fn det3(m: [[&Poly; 3]; 3]) -> Poly {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| m[r1][c1].mul(m[r2][c2]).sub(&m[r1][c2].mul(m[r2][c1]));
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

/// `det [[t(f), t'(G), t(h)], [D_1 f, D_1 G, D_1 h], [D_2 f, D_2 G, D_2 h]]`.
fn nambu2(f: &Poly, g: &Poly, h: &Poly, top: &dyn Fn(&Poly) -> Poly, mid: &dyn Fn(&Poly) -> Poly) -> Poly {
    let (tf, tg, th) = (top(f), mid(g), top(h));
    let (f1, g1, h1) = (f.deriv(0), g.deriv(0), h.deriv(0));
    let (f2, g2, h2) = (f.deriv(1), g.deriv(1), h.deriv(1));
    det3([[&tf, &tg, &th], [&f1, &g1, &h1], [&f2, &g2, &h2]])
}

fn xs(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn need_nvars(phi: &LinearChange, n: usize) -> Result<()> {
    if phi.nvars() != n {
        return Err(Error::arg(format!("φ must act on {n} variables")));
    }
    Ok(())
}

/// Physical `W³(φ, ‾)_±`: `±det[[f, Φg, h], [D_1 …], [D_2 …]]` with `Φg = conj(g(φ(x)))`.
pub fn build_w3(phi: &LinearChange, sign: i8) -> Result<FunctionAlgebra> {
    need_nvars(phi, 2)?;
    validate_change(phi, ChangeRule::UnitaryLike).into_result()?;
    let phi = phi.clone();
    let s = sign_scalar(sign);
    Ok(FunctionAlgebra::new(format!("W3(phi={},bar)_{}", phi.mat.compact(), sign_str(sign)), xs(2), 1, Linearity::AntiLinear, move |f, g, h| {
        let gs = phi.apply(&g[0]).conj();
        vec![nambu2(&f[0], &gs, &h[0], &|u| u.clone(), &|u| u.clone()).scale(&s)]
    }))
}

/// Algebraic `W³(φ)` with `det φ = 1` and `φ² = 1`.
pub fn build_w3_algebraic(phi: &LinearChange) -> Result<FunctionAlgebra> {
    need_nvars(phi, 2)?;
    validate_change(phi, ChangeRule::Involution).into_result()?;
    let phi = phi.clone();
    Ok(FunctionAlgebra::new("W3(phi)", xs(2), 1, Linearity::Linear, move |f, g, h| {
        let gs = phi.apply(&g[0]);
        vec![nambu2(&f[0], &gs, &h[0], &|u| u.clone(), &|u| u.clone())]
    }))
}

/// Checks `|β| = 1` and `β ∉ ℝ`.
pub fn validate_beta(beta: &Scalar) -> Result<()> {
    let tol = if beta.is_exact() { 0.0 } else { DEFAULT_TOL };
    if beta.norm_sqr().dist(&Scalar::one()) > tol {
        return Err(Error::arg(format!("W3_beta needs |β| = 1, got β = {beta}")));
    }
    if beta.im().is_negligible(tol) {
        return Err(Error::arg(format!("W3_beta needs β ∉ ℝ (|β| = 1, β ≠ ±1), got β = {beta}")));
    }
    Ok(())
}

fn two_k_minus_e(k: Scalar) -> impl Fn(&Poly) -> Poly {
    move |u: &Poly| u.scale(&k).sub(&u.euler(&[0, 1]))
}

/// Physical `W³_β(φ)_±`: determinant with top row `(2β̄-E)f, (2β-E)Φg, (2β̄-E)h`.
pub fn build_w3beta(beta: &Scalar, phi: &LinearChange, sign: i8) -> Result<FunctionAlgebra> {
    validate_beta(beta)?;
    need_nvars(phi, 2)?;
    validate_change(phi, ChangeRule::UnitaryLike).into_result()?;
    let phi = phi.clone();
    let s = sign_scalar(sign);
    let two = Scalar::from_i64(2);
    let outer = &two * &beta.conj();
    let middle = &two * beta;
    let mut alg = FunctionAlgebra::new(
        format!("W3_beta({beta};phi={})_{}", phi.mat.compact(), sign_str(sign)),
        xs(2),
        1,
        Linearity::AntiLinear,
        move |f, g, h| {
            let gs = phi.apply(&g[0]).conj();
            vec![nambu2(&f[0], &gs, &h[0], &two_k_minus_e(outer.clone()), &two_k_minus_e(middle.clone())).scale(&s)]
        },
    );
    if !beta.is_exact() {
        alg.tol = 1e-8;
    }
    Ok(alg)
}

fn jacobian3(f: &Poly, g: &Poly, h: &Poly) -> Poly {
    let d: Vec<[Poly; 3]> = (0..3).map(|i| [f.deriv(i), g.deriv(i), h.deriv(i)]).collect();
    det3([
        [&d[0][0], &d[0][1], &d[0][2]],
        [&d[1][0], &d[1][1], &d[1][2]],
        [&d[2][0], &d[2][1], &d[2][2]],
    ])
}

/// Physical `S³(φ, ‾)`: `α det[D_i f, D_i Φg, D_i h]` on polynomials modulo constants.
pub fn build_s3(phi: &LinearChange, alpha: &Scalar) -> Result<FunctionAlgebra> {
    need_nvars(phi, 3)?;
    let unit = [Scalar::one(), Scalar::from_i64(-1)];
    let imag = [Scalar::i(), -Scalar::i()];
    let alpha_imaginary = if unit.contains(alpha) {
        false
    } else if imag.contains(alpha) {
        true
    } else {
        return Err(Error::arg(format!("S3 needs α ∈ {{±1, ±i}}, got {alpha}")));
    };
    validate_change(phi, ChangeRule::Volume { alpha_imaginary }).into_result()?;
    let phi = phi.clone();
    let al = alpha.clone();
    let mut alg = FunctionAlgebra::new(format!("S3(phi={},bar;{alpha})", phi.mat.compact()), xs(3), 1, Linearity::AntiLinear, move |f, g, h| {
        let gs = phi.apply(&g[0]).conj();
        vec![jacobian3(&f[0], &gs, &h[0]).scale(&al)]
    });
    alg.modulo_constants = true;
    Ok(alg)
}

/// Algebraic `S³(φ)` with `det φ = 1` and `φ² = 1`, modulo constants.
pub fn build_s3_algebraic(phi: &LinearChange) -> Result<FunctionAlgebra> {
    need_nvars(phi, 3)?;
    validate_change(phi, ChangeRule::Involution).into_result()?;
    let phi = phi.clone();
    let mut alg = FunctionAlgebra::new("S3(phi)", xs(3), 1, Linearity::Linear, move |f, g, h| {
        vec![jacobian3(&f[0], &phi.apply(&g[0]), &h[0])]
    });
    alg.modulo_constants = true;
    Ok(alg)
}

// ---------------------------------------------------------------------------------------------
// Sampled axiom checks

#[derive(Clone, Debug, Serialize)]
pub struct FunctionCounterexample {
    pub axiom: String,
    pub inputs: Vec<serde_json::Value>,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionReport {
    pub family: String,
    pub samples: usize,
    pub max_degree: u32,
    pub seed: u64,
    pub antisym: Verdict,
    pub fi: Verdict,
    pub slot2: String,
    pub discrepancies: usize,
    pub counterexample: Option<FunctionCounterexample>,
}

impl FunctionReport {
    pub fn passed(&self) -> bool {
        self.antisym.passed() && self.fi.passed() && self.slot2 != "fail"
    }
}

enum SampleFailure {
    Antisym(FunctionCounterexample),
    Fi(FunctionCounterexample),
    Slot2(FunctionCounterexample),
}

fn check_sample(alg: &FunctionAlgebra, s: &[Elem; 5]) -> Vec<SampleFailure> {
    let [a, b, x, y, z] = s;
    let mut out = Vec::new();
    let abx = alg.eval(a, b, x);
    let xba = alg.eval(x, b, a);
    if !alg.vanishes(&elem_add(&abx, &xba)) {
        out.push(SampleFailure::Antisym(FunctionCounterexample {
            axiom: "anticommutativity".into(),
            inputs: vec![elem_json(a), elem_json(b), elem_json(x)],
            lhs: elem_json(&abx),
            rhs: elem_json(&xba.iter().map(Poly::neg).collect::<Vec<_>>()),
        }));
    }
    let lhs = alg.eval(a, b, &alg.eval(x, y, z));
    let r1 = alg.eval(&abx, y, z);
    let r2 = alg.eval(x, &alg.eval(b, a, y), z);
    let r3 = alg.eval(x, y, &alg.eval(a, b, z));
    let rhs = elem_add(&elem_sub(&r1, &r2), &r3);
    if !alg.vanishes(&elem_sub(&lhs, &rhs)) {
        out.push(SampleFailure::Fi(FunctionCounterexample {
            axiom: "fundamental_identity".into(),
            inputs: [a, b, x, y, z].iter().map(|e| elem_json(e)).collect(),
            lhs: elem_json(&lhs),
            rhs: elem_json(&rhs),
        }));
    }
    let lam = Scalar::gauss_int(1, 2);
    let scaled = alg.eval(a, &elem_scale(b, &lam), x);
    let expect = match alg.slot2 {
        Linearity::Linear => elem_scale(&abx, &lam),
        Linearity::AntiLinear => elem_scale(&abx, &lam.conj()),
    };
    if !alg.vanishes(&elem_sub(&scaled, &expect)) {
        out.push(SampleFailure::Slot2(FunctionCounterexample {
            axiom: "slot2_homogeneity".into(),
            inputs: vec![elem_json(a), elem_json(&elem_scale(b, &lam)), elem_json(x)],
            lhs: elem_json(&scaled),
            rhs: elem_json(&expect),
        }));
    }
    out
}

/// Draws `samples` seeded 5-tuples of elements of degree at most `max_deg`.
pub fn sample_tuples(alg: &FunctionAlgebra, samples: usize, max_deg: u32, seed: u64) -> Vec<[Elem; 5]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            [
                alg.random_elem(max_deg, &mut rng),
                alg.random_elem(max_deg, &mut rng),
                alg.random_elem(max_deg, &mut rng),
                alg.random_elem(max_deg, &mut rng),
                alg.random_elem(max_deg, &mut rng),
            ]
        })
        .collect()
}

/// Anti-commutativity, the fundamental identity and slot-2 homogeneity on seeded samples.
pub fn check_function_axioms(alg: &FunctionAlgebra, samples: usize, max_deg: u32, seed: u64) -> FunctionReport {
    let tuples = sample_tuples(alg, samples, max_deg, seed);
    let failures: Vec<Vec<SampleFailure>> = tuples.par_iter().map(|s| check_sample(alg, s)).collect();
    let (mut anti, mut fi, mut s2) = (None, None, None);
    let mut discrepancies = 0;
    for f in failures.into_iter().flatten() {
        discrepancies += 1;
        match f {
            SampleFailure::Antisym(c) => {
                anti.get_or_insert(c);
            }
            SampleFailure::Fi(c) => {
                fi.get_or_insert(c);
            }
            SampleFailure::Slot2(c) => {
                s2.get_or_insert(c);
            }
        }
    }
    let slot2 = if s2.is_some() {
        "fail".to_string()
    } else {
        match alg.slot2 {
            Linearity::Linear => "linear".into(),
            Linearity::AntiLinear => "antilinear".into(),
        }
    };
    FunctionReport {
        family: alg.label.clone(),
        samples,
        max_degree: max_deg,
        seed,
        antisym: Verdict::from_bool(anti.is_none()),
        fi: Verdict::from_bool(fi.is_none()),
        slot2,
        discrepancies,
        counterexample: anti.or(fi).or(s2),
    }
}

/// Whether two brackets agree on seeded sample triples.
pub fn brackets_agree(t1: &FunctionAlgebra, t2: &FunctionAlgebra, samples: usize, max_deg: u32, seed: u64) -> bool {
    let tuples = sample_tuples(t1, samples, max_deg, seed);
    tuples.par_iter().all(|[a, b, c, _, _]| t1.vanishes(&elem_sub(&t1.eval(a, b, c), &t2.eval(a, b, c))))
}

/// All monomials in `vars` of total degree at most `deg`, in a fixed order.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
    out
}

fn basis_elems(alg: &FunctionAlgebra, deg: u32) -> Vec<Elem> {
    let mut out = Vec::new();
    for comp in 0..alg.components {
        for e in monomials(alg.vars.len(), deg) {
            if alg.modulo_constants && e.iter().all(|&k| k == 0) {
                continue;
            }
            out.push(alg.elem(comp, Poly::monomial(&alg.vars, e, Scalar::one())));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralProbe {
    pub family: String,
    pub degree: u32,
    pub probe_degree: u32,
    pub unknowns_real: usize,
    pub kernel_dim_real: usize,
    pub only_zero: bool,
}

/// Solves for `g` of degree at most `deg` with `[a, g, c] = 0` for all monomials `a, c` of degree
/// at most `probe_deg`, as a real-linear system in the real and imaginary parts of `g`.
pub fn no_central_poly(alg: &FunctionAlgebra, deg: u32, probe_deg: u32) -> CentralProbe {
    let gs = basis_elems(alg, deg);
    let probes = basis_elems(alg, probe_deg);
    let ng = gs.len();
    let pairs: Vec<(usize, usize)> = (0..probes.len()).flat_map(|i| (0..probes.len()).map(move |k| (i, k))).collect();
    let blocks: Vec<Vec<Vec<Scalar>>> = pairs
        .par_iter()
        .map(|&(i, k)| {
            // column 2j: g_j, column 2j+1: i·g_j
            let cols: Vec<Elem> = gs
                .iter()
                .flat_map(|g| [alg.eval(&probes[i], g, &probes[k]), alg.eval(&probes[i], &elem_scale(g, &Scalar::i()), &probes[k])])
                .collect();
            let mut keys: Vec<(usize, Vec<u32>)> = Vec::new();
            for c in &cols {
                for (ci, p) in c.iter().enumerate() {
                    for (e, _) in p.terms() {
                        let key = (ci, e.clone());
                        if !keys.contains(&key) {
                            keys.push(key);
                        }
                    }
                }
            }
            let mut rows = Vec::new();
            for (ci, e) in &keys {
                let vals: Vec<Scalar> = cols.iter().map(|c| c[*ci].coeff(e)).collect();
                rows.push(vals.iter().map(Scalar::re).collect());
                rows.push(vals.iter().map(Scalar::im).collect());
            }
            rows
        })
        .collect();
    let rows: Vec<Vec<Scalar>> = blocks.into_iter().flatten().collect();
    let exact = rows.iter().flatten().all(Scalar::is_exact);
    let kernel = nullspace(&rows, 2 * ng, if exact { 0.0 } else { alg.tol });
    CentralProbe {
        family: alg.label.clone(),
        degree: deg,
        probe_degree: probe_deg,
        unknowns_real: 2 * ng,
        kernel_dim_real: kernel.len(),
        only_zero: kernel.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> Scalar {
        Scalar::gauss_int(re, im)
    }

    #[test]
    fn poisson_values() {
        let v = p3_roster(2);
        let (p, q) = (Poly::var(&v, 0), Poly::var(&v, 1));
        assert_eq!(poisson(&p, &q, 2).unwrap(), Poly::one(&v));
        let v3 = p3_roster(3);
        let t = Poly::var(&v3, 0);
        assert_eq!(poisson(&t, &Poly::one(&v3), 3).unwrap(), Poly::constant(&v3, Scalar::from_i64(-2)));
        assert!(poisson(&p, &q, 3).is_err());
        let f = p.mul(&q).add(&p.scale(&c(0, 3)));
        assert!(poisson(&f, &f, 2).unwrap().is_zero());
    }

    #[test]
    fn p3_constants_bracket_to_zero() {
        let v = p3_roster(2);
        let one = Poly::one(&v);
        let r = p3_bracket(&one, &one, &one, 2, &p3_standard_change(2), 1).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn change_validation() {
        assert!(validate_change(&p3_standard_change(2), ChangeRule::Poisson { m: 2 }).valid);
        assert!(validate_change(&p3_standard_change(3), ChangeRule::Poisson { m: 3 }).valid);
        assert!(!validate_change(&LinearChange::identity(2), ChangeRule::Poisson { m: 2 }).valid);
        assert!(validate_change(&LinearChange::identity(2), ChangeRule::UnitaryLike).valid);
        let two = LinearChange::diag(&[Scalar::from_i64(2), Scalar::from_i64(2), Scalar::from_i64(2)]);
        assert!(!validate_change(&two, ChangeRule::Volume { alpha_imaginary: false }).valid);
        let flip = LinearChange::diag(&[Scalar::one(), Scalar::one(), Scalar::from_i64(-1)]);
        assert!(validate_change(&flip, ChangeRule::Volume { alpha_imaginary: true }).valid);
        assert!(!validate_change(&flip, ChangeRule::Volume { alpha_imaginary: false }).valid);
    }

    #[test]
    fn w3_values() {
        let alg = build_w3(&LinearChange::identity(2), 1).unwrap();
        let v = &alg.vars;
        let (x1, x2, one) = (Poly::var(v, 0), Poly::var(v, 1), Poly::one(v));
        let r = alg.eval(&[x1.clone()], &[x2.clone()], &[one.clone()]);
        assert_eq!(r[0], Poly::one(v));
        let neg = build_w3(&LinearChange::identity(2), -1).unwrap();
        assert_eq!(neg.eval(&[x1], &[x2], &[one])[0], Poly::constant(v, Scalar::from_i64(-1)));
    }

    #[test]
    fn s3_identity_triple_is_constant() {
        let alg = build_s3(&LinearChange::identity(3), &Scalar::one()).unwrap();
        let v = alg.vars.clone();
        let r = alg.eval(&[Poly::var(&v, 0)], &[Poly::var(&v, 1)], &[Poly::var(&v, 2)]);
        assert!(r[0].is_zero());
        assert!(build_s3(&LinearChange::identity(3), &Scalar::i()).is_err());
    }

    #[test]
    fn beta_rejections() {
        let id = LinearChange::identity(2);
        for b in [Scalar::from_i64(2), Scalar::one(), Scalar::from_i64(-1), Scalar::gauss_int(1, 1)] {
            assert!(build_w3beta(&b, &id, 1).is_err(), "{b}");
        }
        assert!(build_w3beta(&Scalar::gauss(3, 5, 4, 5), &id, 1).is_ok());
    }

    #[test]
    fn printed_beta_form_fails_the_identity() {
        let beta = Scalar::gauss(3, 5, 4, 5);
        let two = Scalar::from_i64(2);
        let middle = &two * &beta;
        let printed = FunctionAlgebra::new("printed", xs(2), 1, Linearity::AntiLinear, move |f, g, h| {
            vec![nambu2(&f[0], &g[0].conj(), &h[0], &two_k_minus_e(two.clone()), &two_k_minus_e(middle.clone()))]
        });
        let r = check_function_axioms(&printed, 20, 3, 3);
        assert!(r.antisym.passed());
        assert!(!r.fi.passed());
    }

    #[test]
    fn sw3_first_rule_example() {
        let alg = build_sw3(&MatC::identity(2), ImaginaryParam::PiMultiple(0), &Scalar::one()).unwrap();
        let v = alg.vars.clone();
        let x = Poly::var(&v, 0);
        let one = Poly::one(&v);
        // all in component 1 with a_12 = 0
        let r = alg.eval(&alg.elem(0, x.clone()), &alg.elem(0, one.clone()), &alg.elem(0, one.clone()));
        assert!(r.iter().all(Poly::is_zero));
        // [x⟨1⟩, 1⟨2⟩, 1⟨1⟩] = -ā_22 (x·0 - 1·1)·1 = 1 in component 1
        let r = alg.eval(&alg.elem(0, x), &alg.elem(1, one.clone()), &alg.elem(0, one.clone()));
        assert_eq!(r, vec![one, Poly::zero(&v)]);
    }

    #[test]
    fn sw3_parameter_checks() {
        let j = MatC::from_i64(2, 2, &[0, 1, -1, 0]);
        assert!(build_sw3(&j, ImaginaryParam::PiMultiple(0), &Scalar::one()).is_err());
        assert!(build_sw3(&j, ImaginaryParam::PiMultiple(0), &Scalar::i()).is_ok());
        assert!(build_sw3(&MatC::from_i64(2, 2, &[2, 0, 0, 1]), ImaginaryParam::PiMultiple(0), &Scalar::one()).is_err());
        assert_eq!(ImaginaryParam::parse("pi").unwrap(), ImaginaryParam::PiMultiple(1));
        assert_eq!(ImaginaryParam::parse("-2pi").unwrap(), ImaginaryParam::PiMultiple(-2));
        assert_eq!(ImaginaryParam::parse("0").unwrap(), ImaginaryParam::PiMultiple(0));
        assert_eq!(ImaginaryParam::parse("0.25").unwrap(), ImaginaryParam::Imag(0.25));
    }

    #[test]
    fn families_pass_on_samples() {
        let id2 = LinearChange::identity(2);
        let algs = vec![
            build_p3(2, &p3_standard_change(2), 1).unwrap(),
            build_p3(3, &p3_standard_change(3), -1).unwrap(),
            build_w3(&LinearChange::diag(&[Scalar::i(), -Scalar::i()]), 1).unwrap(),
            build_w3beta(&Scalar::gauss(3, 5, 4, 5), &id2, 1).unwrap(),
            build_s3(&LinearChange::diag(&[Scalar::one(), Scalar::one(), Scalar::from_i64(-1)]), &Scalar::i()).unwrap(),
            build_sw3(&MatC::from_i64(2, 2, &[0, 1, -1, 0]), ImaginaryParam::PiMultiple(0), &Scalar::i()).unwrap(),
            build_sw3(&MatC::identity(2), ImaginaryParam::PiMultiple(1), &Scalar::from_i64(-1)).unwrap(),
        ];
        for alg in algs {
            let r = check_function_axioms(&alg, 12, 3, 7);
            assert!(r.passed(), "{}: {:?}", alg.label, r.counterexample);
        }
    }

    #[test]
    fn float_phase_sw3_passes_with_tolerance() {
        let alg = build_sw3(&MatC::identity(2), ImaginaryParam::Imag(0.3), &Scalar::one()).unwrap();
        let r = check_function_axioms(&alg, 6, 3, 1);
        assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
    }

    #[test]
    fn mutated_p3_is_caught() {
        // σ without the conjugation but declared physical
        let m = 2;
        let phi = p3_standard_change(m);
        let bad = FunctionAlgebra::new("bad", p3_roster(m), 1, Linearity::AntiLinear, p3_from_sigma(m, move |g| phi.apply(g).neg()));
        let r = check_function_axioms(&bad, 10, 3, 2);
        assert_eq!(r.slot2, "fail");
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn central_probes() {
        let w3 = build_w3(&LinearChange::identity(2), 1).unwrap();
        assert!(no_central_poly(&w3, 2, 3).only_zero);
        let p3 = build_p3(2, &p3_standard_change(2), 1).unwrap();
        assert!(no_central_poly(&p3, 2, 3).only_zero);
        let s3 = build_s3(&LinearChange::identity(3), &Scalar::one()).unwrap();
        assert!(no_central_poly(&s3, 1, 2).only_zero);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 3).len(), 10);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(2, 1)[0], vec![0, 0]);
    }
}
