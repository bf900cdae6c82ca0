//! The finite-dimensional matrix 3-algebras and their algebraic ancestors.
//!
//! Elements of `M_{m,n}(ℂ)` are coordinate vectors in the row-major basis `E_{ij}`;
//! elements of `M_{1,2n}(ℂ)` are row vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_symplectic, make_h, make_j, make_s, ConjMap, Linearity, MatC};
use crate::scalar::Scalar;
use crate::triple::{physicalize, TriSystem};
use crate::DEFAULT_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    A3t,
    A3tPh,
    A3st,
    A3stPh,
    A3nPlus,
    A3nMinus,
    C3,
    C3Ph,
    C3HAlpha,
}

impl FamilyName {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "a3t" => FamilyName::A3t,
            "a3t-ph" => FamilyName::A3tPh,
            "a3st" => FamilyName::A3st,
            "a3st-ph" => FamilyName::A3stPh,
            "a3n-plus" => FamilyName::A3nPlus,
            "a3n-minus" => FamilyName::A3nMinus,
            "c3" => FamilyName::C3,
            "c3-ph" => FamilyName::C3Ph,
            "c3-h-alpha" => FamilyName::C3HAlpha,
            _ => return Err(Error::arg(format!("unknown matrix family `{s}`"))),
        })
    }
}

/// Parameters of a matrix family. `two_n` is used by the `c3` variants; `sign` by `c3-ph`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub two_n: usize,
    pub sign: i8,
    pub h: Option<MatC>,
    pub alpha: Option<Scalar>,
}

impl FamilySpec {
    pub fn new(name: FamilyName) -> Self {
        FamilySpec { name, m: 1, n: 1, p: 0, q: 0, two_n: 2, sign: 1, h: None, alpha: None }
    }

    pub fn a3t_ph(m: usize, n: usize, p: usize, q: usize) -> Self {
        FamilySpec { m, n, p, q, ..Self::new(FamilyName::A3tPh) }
    }

    pub fn a3n(n: usize, sign: i8) -> Self {
        let name = if sign >= 0 { FamilyName::A3nPlus } else { FamilyName::A3nMinus };
        FamilySpec { n, ..Self::new(name) }
    }

    pub fn c3_ph(two_n: usize, p: usize, sign: i8) -> Self {
        FamilySpec { two_n, p, sign, ..Self::new(FamilyName::C3Ph) }
    }

    pub fn c3_h_alpha(two_n: usize, h: MatC, alpha: Scalar) -> Self {
        FamilySpec { two_n, h: Some(h), alpha: Some(alpha), ..Self::new(FamilyName::C3HAlpha) }
    }

    pub fn build(&self) -> Result<TriSystem> {
        match self.name {
            FamilyName::A3t => build_a3t(self.m, self.n),
            FamilyName::A3tPh => build_a3t_ph(self.m, self.n, self.p, self.q),
            FamilyName::A3st => build_a3st(self.m, self.n),
            FamilyName::A3stPh => build_a3st_ph(self.m, self.n),
            FamilyName::A3nPlus => build_a3n(self.n, 1),
            FamilyName::A3nMinus => build_a3n(self.n, -1),
            FamilyName::C3 => build_c3(self.two_n),
            FamilyName::C3Ph => build_c3_ph_cp(self.two_n, self.p, self.sign),
            FamilyName::C3HAlpha => {
                let h = self.h.clone().ok_or_else(|| Error::arg("c3-h-alpha needs H"))?;
                let alpha = self.alpha.clone().ok_or_else(|| Error::arg("c3-h-alpha needs alpha"))?;
                build_c3_h_alpha(self.two_n, &h, &alpha)
            }
        }
    }
}

fn mats(m: usize, n: usize, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> (MatC, MatC, MatC) {
    (MatC::from_coords(m, n, a), MatC::from_coords(m, n, b), MatC::from_coords(m, n, c))
}

/// `x y z - z y x` for matrices.
fn skew_triple(x: &MatC, y: &MatC, z: &MatC) -> MatC {
    &(&(x * y) * z) - &(&(z * y) * x)
}

fn need_positive(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::arg("matrix sizes must be at least 1"));
    }
    Ok(())
}

/// `A³(m,n;t)`: `[a,b,c] = a bᵗ c - c bᵗ a` on `M_{m,n}(ℂ)` (algebraic).
pub fn build_a3t(m: usize, n: usize) -> Result<TriSystem> {
    need_positive(m, n)?;
    Ok(TriSystem::new(m * n, Linearity::Linear, format!("A3({m},{n};t)"), move |a, b, c| {
        let (a, b, c) = mats(m, n, a, b, c);
        skew_triple(&a, &b.transpose(), &c).into_data()
    }))
}

/// `C_{p,q}(u) = S^m_q ū S^n_p` on `M_{m,n}(ℂ)`, as an anti-linear coordinate map.
pub fn c_pq(m: usize, n: usize, p: usize, q: usize) -> Result<ConjMap> {
    if q > m || p > n {
        return Err(Error::arg(format!("C_(p,q) on M_({m},{n}) needs q <= m and p <= n, got p={p}, q={q}")));
    }
    let signs: Vec<Scalar> = (0..m * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let s = if i < q { 1 } else { -1 } * if j < p { 1 } else { -1 };
            Scalar::from_i64(s)
        })
        .collect();
    Ok(ConjMap::antilinear(MatC::diag(&signs)))
}

/// `A³(m,n;t)_{ph,C_{p,q}}`: `[a,b,c] = a C(b)ᵗ c - c C(b)ᵗ a` with `C(b) = S^m_q b̄ S^n_p`.
pub fn build_a3t_ph(m: usize, n: usize, p: usize, q: usize) -> Result<TriSystem> {
    need_positive(m, n)?;
    let c = c_pq(m, n, p, q)?;
    Ok(TriSystem::new(m * n, Linearity::AntiLinear, format!("A3({m},{n};t)_ph,C({p},{q})"), move |a, b, x| {
        let cb = c.apply(b);
        let (a, cb, x) = mats(m, n, a, &cb, x);
        skew_triple(&a, &cb.transpose(), &x).into_data()
    }))
}

/// `A³(n)_±`: `[a,b,c] = ±i(a b̄ c - c b̄ a)` on `M_{n,n}(ℂ)`.
pub fn build_a3n(n: usize, sign: i8) -> Result<TriSystem> {
    need_positive(n, n)?;
    let factor = if sign >= 0 { Scalar::i() } else { -Scalar::i() };
    let label = format!("A3({n})_{}", if sign >= 0 { "+" } else { "-" });
    Ok(TriSystem::new(n * n, Linearity::AntiLinear, label, move |a, b, c| {
        let (a, b, c) = mats(n, n, a, b, c);
        skew_triple(&a, &b.conj(), &c).scale(&factor).into_data()
    }))
}

/// `a^{st} = J_n aᵗ J_m^{-1}` for `a ∈ M_{m,n}` with `m, n` even.
pub fn super_transpose(a: &MatC) -> MatC {
    let (m, n) = (a.rows(), a.cols());
    let jn = make_j(n).expect("even");
    let jm_inv = -&make_j(m).expect("even");
    &(&jn * &a.transpose()) * &jm_inv
}

fn need_even(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || m % 2 != 0 || n % 2 != 0 {
        return Err(Error::arg(format!("the st families need even sizes, got ({m},{n})")));
    }
    Ok(())
}

/// `A³(m,n;st)`: `[a,b,c] = a b^{st} c - c b^{st} a` (algebraic).
pub fn build_a3st(m: usize, n: usize) -> Result<TriSystem> {
    need_even(m, n)?;
    Ok(TriSystem::new(m * n, Linearity::Linear, format!("A3({m},{n};st)"), move |a, b, c| {
        let (a, b, c) = mats(m, n, a, b, c);
        skew_triple(&a, &super_transpose(&b), &c).into_data()
    }))
}

/// `A³(m,n;st)_{ph,C_0}`: `[a,b,c] = a b̄^{st} c - c b̄^{st} a`.
pub fn build_a3st_ph(m: usize, n: usize) -> Result<TriSystem> {
    need_even(m, n)?;
    Ok(TriSystem::new(m * n, Linearity::AntiLinear, format!("A3({m},{n};st)_ph,C0"), move |a, b, c| {
        let (a, b, c) = mats(m, n, a, b, c);
        skew_triple(&a, &super_transpose(&b.conj()), &c).into_data()
    }))
}

/// Which block swap `M_{1,2n} → M_{2n,1}` the `C³` brackets use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Psi {
    /// `ψ(X Y) = (Y, -X)ᵗ`.
    Standard,
    /// `(X Y) ↦ (Y, X)ᵗ`: the minus sign dropped. Only used to exercise the checkers.
    SignDropped,
}

/// `ψ(X Y) = (Y, -X)ᵗ` for a row vector `(X Y)` with halves of length `n`.
pub fn psi(z: &[Scalar]) -> Vec<Scalar> {
    psi_variant(z, Psi::Standard)
}

fn psi_variant(z: &[Scalar], variant: Psi) -> Vec<Scalar> {
    let n = z.len() / 2;
    let mut out: Vec<Scalar> = z[n..].to_vec();
    out.extend(z[..n].iter().map(|x| match variant {
        Psi::Standard => -x,
        Psi::SignDropped => x.clone(),
    }));
    out
}

fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

fn need_two_n(two_n: usize) -> Result<()> {
    if two_n == 0 || two_n % 2 != 0 {
        return Err(Error::arg(format!("C3 needs a positive even size 2n, got {two_n}")));
    }
    Ok(())
}

/// `C³(2n)`: `[a,b,c] = -a bᵗ c + c bᵗ a - c ψ(a) ψ(b)ᵗ` on row vectors (algebraic).
pub fn build_c3(two_n: usize) -> Result<TriSystem> {
    need_two_n(two_n)?;
    Ok(TriSystem::new(two_n, Linearity::Linear, format!("C3({two_n})"), move |a, b, c| {
        let ab = dot(a, b);
        let cb = dot(c, b);
        let cpa = dot(c, &psi(a));
        let pb = psi(b);
        (0..two_n).map(|k| &(&cb * &a[k]) - &(&ab * &c[k]) - &cpa * &pb[k]).collect()
    }))
}

/// Complex conjugation `C_0` of coordinates, as an anti-linear map on `ℂ^dim`.
pub fn c0(dim: usize) -> ConjMap {
    ConjMap::antilinear(MatC::identity(dim))
}

/// `C_{n-p}(u) = ū H^{2n}_p` on `M_{1,2n}`.
pub fn c_n_minus_p(two_n: usize, p: usize) -> Result<ConjMap> {
    let h = make_h(two_n, p)?;
    // u ↦ ū H is the anti-linear map with matrix Hᵗ acting on column coordinates.
    Ok(ConjMap::antilinear(h.transpose()))
}

/// `C³(2n)_{ph,C_0}` obtained by inserting complex conjugation into slot 2 of `C³(2n)`.
pub fn build_c3_ph_c0(two_n: usize) -> Result<TriSystem> {
    physicalize(&build_c3(two_n)?, &c0(two_n), format!("C3({two_n})_ph,C0"))
}

/// Checks the hypotheses on `(H, α)`: `H` symplectic, and either `H` hermitian with `α` real
/// or `H` anti-hermitian with `α` imaginary; `α ≠ 0`.
pub fn validate_h_alpha(two_n: usize, h: &MatC, alpha: &Scalar) -> Result<()> {
    need_two_n(two_n)?;
    if h.rows() != two_n || h.cols() != two_n {
        return Err(Error::arg(format!("H must be {two_n}x{two_n}")));
    }
    let tol = if h.is_exact() { 0.0 } else { DEFAULT_TOL };
    if !is_symplectic(h, tol)? {
        return Err(Error::arg("H is not symplectic (Hᵗ J H ≠ J)"));
    }
    if alpha.is_zero() || alpha.is_negligible(tol) {
        return Err(Error::arg("α must be nonzero"));
    }
    let alpha_real = alpha.im().is_negligible(tol);
    let alpha_imag = alpha.re().is_negligible(tol);
    if h.is_hermitian(tol) {
        if !alpha_real {
            return Err(Error::arg(format!("H is hermitian, so α must be real (got {alpha})")));
        }
    } else if h.is_antihermitian(tol) {
        if !alpha_imag {
            return Err(Error::arg(format!("H is anti-hermitian, so α must be imaginary (got {alpha})")));
        }
    } else {
        return Err(Error::arg("H must be hermitian or anti-hermitian"));
    }
    Ok(())
}

/// `C³(2n, H; α)`: `[a,b,c] = α(-a H b̄ᵗ c + c H b̄ᵗ a - c ψ(a) ψ(b̄ Hᵗ)ᵗ)`.
///
/// The factor `α` multiplies all three terms; this is the bracket produced by the graded
/// conjugation `Ad diag(diag(α, α⁻¹), H) ∘ σ̃₁` of `osp(2,2n)` and the form that satisfies the
/// fundamental identity for every admissible `α`.
pub fn build_c3_h_alpha(two_n: usize, h: &MatC, alpha: &Scalar) -> Result<TriSystem> {
    build_c3_h_alpha_using(two_n, h, alpha, Psi::Standard)
}

pub fn build_c3_h_alpha_using(two_n: usize, h: &MatC, alpha: &Scalar, variant: Psi) -> Result<TriSystem> {
    validate_h_alpha(two_n, h, alpha)?;
    let hmat = h.clone();
    let al = alpha.clone();
    let label = format!("C3({two_n},H={};{alpha})", describe_h(h));
    let tol = if h.is_exact() && alpha.is_exact() { DEFAULT_TOL } else { 1e-8 };
    Ok(TriSystem::new(two_n, Linearity::AntiLinear, label, move |a, b, c| {
        let bc: Vec<Scalar> = b.iter().map(Scalar::conj).collect();
        // H b̄ᵗ, which is also the row b̄ Hᵗ
        let hb = hmat.apply(&bc);
        let ahb = dot(a, &hb);
        let chb = dot(c, &hb);
        let cpa = dot(c, &psi_variant(a, variant));
        let pr = psi_variant(&hb, variant);
        (0..two_n)
            .map(|k| {
                let v = &(&chb * &a[k]) - &(&ahb * &c[k]) - &cpa * &pr[k];
                &al * &v
            })
            .collect()
    })
    .with_tol(tol))
}

fn describe_h(h: &MatC) -> String {
    let n2 = h.rows();
    for p in 0..=n2 / 2 {
        if make_h(n2, p).map(|hp| &hp == h).unwrap_or(false) {
            return format!("H{n2}_{p}");
        }
    }
    if let Ok(s) = make_s(n2, n2 / 2) {
        if s.scale(&Scalar::i()) == *h {
            return format!("iS{n2}_{}", n2 / 2);
        }
    }
    "custom".to_string()
}

/// `C³(2n)_{ph,±C_{n-p}} = C³(2n, H^{2n}_p; ±1)`.
pub fn build_c3_ph_cp(two_n: usize, p: usize, sign: i8) -> Result<TriSystem> {
    build_c3_ph_cp_using(two_n, p, sign, Psi::Standard)
}

pub fn build_c3_ph_cp_using(two_n: usize, p: usize, sign: i8, variant: Psi) -> Result<TriSystem> {
    need_two_n(two_n)?;
    if p > two_n / 2 {
        return Err(Error::arg(format!("C3 physical form needs p <= n, got p={p}, n={}", two_n / 2)));
    }
    let h = make_h(two_n, p)?;
    let alpha = Scalar::from_i64(if sign >= 0 { 1 } else { -1 });
    let t = build_c3_h_alpha_using(two_n, &h, &alpha, variant)?;
    let s = if sign >= 0 { "+" } else { "-" };
    Ok(t.with_label(format!("C3({two_n})_ph,{s}C(n-{p})")))
}

/// `C³(2n, iS^{2n}_n; ±i)`.
pub fn build_c3_is(two_n: usize, sign: i8) -> Result<TriSystem> {
    build_c3_is_using(two_n, sign, Psi::Standard)
}

pub fn build_c3_is_using(two_n: usize, sign: i8, variant: Psi) -> Result<TriSystem> {
    need_two_n(two_n)?;
    let h = make_s(two_n, two_n / 2)?.scale(&Scalar::i());
    let alpha = if sign >= 0 { Scalar::i() } else { -Scalar::i() };
    build_c3_h_alpha_using(two_n, &h, &alpha, variant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vec;
    use crate::triple::{check_axioms, same_bracket, CheckMode};

    fn e(d: usize, i: usize) -> Vec<Scalar> {
        basis_vec(d, i)
    }

    #[test]
    fn a3t_small_values() {
        let t = build_a3t(1, 1).unwrap();
        assert!(t.is_zero_bracket());
        let t = build_a3t(2, 2).unwrap();
        // [E11, E11, E22] = E11 E11 E22 - E22 E11 E11 = 0
        assert!(t.eval(&e(4, 0), &e(4, 0), &e(4, 3)).iter().all(Scalar::is_zero));
        // [E11, E11, E11] = 0 and [E11, E12, E21]: E11 E21 E21 - E21 E21 E11 = 0; [E12, E12, E11]: E12 E21 E11 - E11 E21 E12 = E11 - 0
        assert_eq!(t.eval(&e(4, 1), &e(4, 1), &e(4, 0)), e(4, 0));
    }

    #[test]
    fn c_pq_index_edges_agree() {
        for (m, n) in [(2, 2), (2, 3), (1, 2)] {
            let a = build_a3t_ph(m, n, 0, 0).unwrap();
            let b = build_a3t_ph(m, n, n, m).unwrap();
            assert!(same_bracket(&a, &b));
        }
        assert!(build_a3t_ph(2, 3, 4, 0).is_err());
        assert!(build_a3t_ph(2, 3, 0, 3).is_err());
    }

    #[test]
    fn a3t_ph_matches_physicalization() {
        let (m, n, p, q) = (2, 3, 1, 2);
        let direct = build_a3t_ph(m, n, p, q).unwrap();
        let via = physicalize(&build_a3t(m, n).unwrap(), &c_pq(m, n, p, q).unwrap(), "via").unwrap();
        assert!(same_bracket(&direct, &via));
    }

    #[test]
    fn physicalize_rejects_linear_map() {
        let t = build_a3t(2, 2).unwrap();
        assert!(physicalize(&t, &ConjMap::linear(MatC::identity(4)), "x").is_err());
    }

    #[test]
    fn st_is_an_involution() {
        for idx in 0..8 {
            let a = MatC::from_coords(2, 4, &basis_vec(8, idx));
            assert_eq!(super_transpose(&super_transpose(&a)), a);
        }
        assert!(build_a3st(2, 3).is_err());
    }

    #[test]
    fn c3_forms_coincide() {
        for two_n in [2, 4] {
            let ph = build_c3_ph_c0(two_n).unwrap();
            let gen = build_c3_h_alpha(two_n, &MatC::identity(two_n), &Scalar::one()).unwrap();
            assert!(same_bracket(&ph, &gen));
            for p in 0..=two_n / 2 {
                let via = physicalize(&build_c3(two_n).unwrap(), &c_n_minus_p(two_n, p).unwrap(), "via").unwrap();
                assert!(same_bracket(&via, &build_c3_ph_cp(two_n, p, 1).unwrap()));
            }
        }
    }

    #[test]
    fn psi_equals_j_transpose() {
        let j = make_j(4).unwrap();
        for idx in 0..4 {
            let z = basis_vec(4, idx);
            assert_eq!(psi(&z), j.apply(&z));
        }
    }

    #[test]
    fn c3_rejections() {
        let bad = MatC::diag(&[2, 1].map(Scalar::from_i64));
        assert!(build_c3_h_alpha(2, &bad, &Scalar::one()).is_err());
        let is = make_s(2, 1).unwrap().scale(&Scalar::i());
        assert!(build_c3_h_alpha(2, &is, &Scalar::one()).is_err());
        assert!(build_c3_h_alpha(2, &MatC::identity(2), &Scalar::i()).is_err());
        assert!(build_c3_h_alpha(2, &MatC::identity(2), &Scalar::zero()).is_err());
        assert!(build_c3_h_alpha(2, &is, &Scalar::i()).is_ok());
    }

    #[test]
    fn small_families_pass() {
        for t in [
            build_a3t(1, 2).unwrap(),
            build_a3t_ph(2, 2, 1, 1).unwrap(),
            build_a3n(2, 1).unwrap(),
            build_a3n(2, -1).unwrap(),
            build_a3st(2, 2).unwrap(),
            build_a3st_ph(2, 2).unwrap(),
            build_c3(4).unwrap(),
            build_c3_ph_cp(4, 1, 1).unwrap(),
            build_c3_ph_cp(2, 0, -1).unwrap(),
            build_c3_is(2, 1).unwrap(),
        ] {
            let r = check_axioms(&t, CheckMode::default()).unwrap();
            assert!(r.passed(), "{}", t.label);
        }
    }

    fn literal_c3(two_n: usize, h: MatC, al: Scalar) -> TriSystem {
        // -α a H b̄ᵗ c + α c H b̄ᵗ a - α⁻¹ c ψ(a) ψ(b̄ Hᵗ)ᵗ
        let inv = al.inv().unwrap();
        TriSystem::new(two_n, Linearity::AntiLinear, "literal", move |a, b, c| {
            let bc: Vec<Scalar> = b.iter().map(Scalar::conj).collect();
            let hb = h.apply(&bc);
            let (ahb, chb, cpa) = (dot(a, &hb), dot(c, &hb), dot(c, &psi(a)));
            let pr = psi(&hb);
            (0..two_n).map(|k| &(&al * &(&(&chb * &a[k]) - &(&ahb * &c[k]))) - &(&inv * &(&cpa * &pr[k]))).collect()
        })
    }

    #[test]
    fn literal_inverse_alpha_form_fails_fi() {
        let is = make_s(4, 2).unwrap().scale(&Scalar::i());
        for (h, al) in [(is, Scalar::i()), (MatC::identity(4), Scalar::from_i64(2))] {
            let r = check_axioms(&literal_c3(4, h, al), CheckMode::default()).unwrap();
            assert!(!r.fi.passed());
        }
        let r = check_axioms(&literal_c3(4, MatC::identity(4), Scalar::one()), CheckMode::default()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn dropped_psi_sign_breaks_c3() {
        let t = build_c3_ph_cp_using(4, 1, 1, Psi::SignDropped).unwrap();
        let r = check_axioms(&t, CheckMode::default()).unwrap();
        assert!(!r.passed());
        assert!(r.counterexample.is_some());
    }
}
