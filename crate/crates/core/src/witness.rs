//! Matrix factorizations and explicit isomorphisms between 3-algebras, each checked on all
//! basis triples after construction.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{build_a3n, build_a3t_ph, build_c3_h_alpha};
use crate::linalg::{hermitian_eigen, is_symplectic, make_h, make_j, make_s, Linearity, MatC};
use crate::scalar::Scalar;
use crate::triple::{iso_residual, TriSystem};

const FACTOR_TOL: f64 = 1e-9;
const WITNESS_TOL: f64 = 1e-8;

fn max_abs(m: &MatC) -> f64 {
    m.data().iter().map(Scalar::abs).fold(0.0, f64::max)
}

/// `max |a - b| / max(1, max |b|)`; zero exactly when `a = b` for exact inputs.
pub fn relative_residual(a: &MatC, b: &MatC) -> f64 {
    let diff = a - b;
    if diff.is_exact() && diff.is_zero() {
        return 0.0;
    }
    max_abs(&diff).max(f64::MIN_POSITIVE) / max_abs(b).max(1.0)
}

fn tol_for(m: &MatC) -> f64 {
    if m.is_exact() {
        0.0
    } else {
        FACTOR_TOL
    }
}

fn to_c(m: &MatC) -> Vec<Vec<Complex64>> {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j).to_c64()).collect()).collect()
}

fn from_columns(cols: &[Vec<Complex64>]) -> MatC {
    let n = cols[0].len();
    MatC::from_fn(n, cols.len(), |i, j| Scalar::float(cols[j][i].re, cols[j][i].im))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Removes the components along `basis` (orthonormal) and normalizes; `None` if nothing is left.
fn orthonormalize_against(v: &[Complex64], basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let n = norm(&w);
    (n > 1e-7).then(|| w.iter().map(|x| x / n).collect())
}

/// `-J ū`.
fn partner(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len() / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for i in 0..n {
        out[i] = -v[n + i].conj();
        out[n + i] = v[i].conj();
    }
    out
}

/// Eigenvectors of a hermitian `K` whose spectrum is closed under `λ ↦ pair(λ)` with
/// `K(J v̄) = pair(λ) J v̄`. Returns `n` pairs `(v, λ)` such that
/// `{v_1..v_n, -Jv̄_1..-Jv̄_n}` is an orthonormal eigenbasis.
fn paired_eigenbasis(k: &MatC, pair: impl Fn(f64) -> f64, first_half: impl Fn(f64) -> bool) -> Result<Vec<(Vec<Complex64>, f64)>> {
    let (vals, vecs) = hermitian_eigen(k);
    let cols = to_c(&vecs);
    let dim = vals.len();
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-7 * scale;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut clusters: Vec<(f64, Vec<Vec<Complex64>>)> = Vec::new();
    for idx in order {
        match clusters.last_mut() {
            Some((v, members)) if close(*v, vals[idx]) => members.push(cols[idx].clone()),
            _ => clusters.push((vals[idx], vec![cols[idx].clone()])),
        }
    }

    let mut chosen: Vec<Vec<Complex64>> = Vec::new();
    let mut out = Vec::new();
    for (lambda, members) in &clusters {
        let self_paired = close(pair(*lambda), *lambda);
        if !self_paired && !first_half(*lambda) {
            continue;
        }
        if !self_paired && !clusters.iter().any(|(mu, m)| close(*mu, pair(*lambda)) && m.len() == members.len()) {
            return Err(Error::Numerical(format!("eigenvalue {lambda} has no partner of equal multiplicity")));
        }
        for v in members {
            let Some(u) = orthonormalize_against(v, &chosen) else { continue };
            let w = partner(&u);
            chosen.push(u.clone());
            chosen.push(w);
            out.push((u, *lambda));
        }
    }
    if 2 * out.len() != dim {
        return Err(Error::Numerical("could not pair the eigenvectors into a symplectic basis".into()));
    }
    Ok(out)
}

/// `W = (v_1..v_n, -Jv̄_1..-Jv̄_n) · diag(d, d^{-1})`.
fn assemble_symplectic(pairs: &[(Vec<Complex64>, f64)], scales: &[f64]) -> MatC {
    let mut cols: Vec<Vec<Complex64>> = pairs.iter().zip(scales).map(|((v, _), s)| v.iter().map(|x| x * s).collect()).collect();
    cols.extend(pairs.iter().zip(scales).map(|((v, _), s)| partner(v).iter().map(|x| x / s).collect()));
    from_columns(&cols)
}

#[derive(Clone, Debug, Serialize)]
pub struct Congruence {
    pub h: MatC,
    pub p: usize,
    pub residual: f64,
}

/// `A' = h S_p h̄ᵗ` for hermitian invertible `A'`, `p` the number of positive eigenvalues.
/// Diagonal exact inputs whose entries have rational square roots stay exact.
pub fn hermitian_congruence(a: &MatC) -> Result<Congruence> {
    let n = a.rows();
    if !a.is_square() || n == 0 {
        return Err(Error::arg("hermitian_congruence needs a nonempty square matrix"));
    }
    if !a.is_hermitian(tol_for(a)) {
        return Err(Error::arg("hermitian_congruence needs a hermitian matrix"));
    }
    let s_of = |p: usize| make_s(n, p);
    if let Some(c) = exact_diagonal_congruence(a)? {
        return Ok(c);
    }
    let (vals, vecs) = hermitian_eigen(a);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if vals.iter().any(|v| v.abs() <= 1e-12 * scale) {
        return Err(Error::arg("hermitian_congruence needs an invertible matrix"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| vals[y].total_cmp(&vals[x]));
    let cols = to_c(&vecs);
    let hc: Vec<Vec<Complex64>> = order.iter().map(|&i| cols[i].iter().map(|x| x * vals[i].abs().sqrt()).collect()).collect();
    let h = from_columns(&hc);
    let p = vals.iter().filter(|v| **v > 0.0).count();
    let residual = relative_residual(&(&(&h * &s_of(p)?) * &h.adjoint()), a);
    Ok(Congruence { h, p, residual })
}

fn exact_diagonal_congruence(a: &MatC) -> Result<Option<Congruence>> {
    let n = a.rows();
    if !a.is_exact() || (0..n).any(|i| (0..n).any(|j| i != j && !a.get(i, j).is_zero())) {
        return Ok(None);
    }
    let d: Vec<Scalar> = (0..n).map(|i| a.get(i, i).clone()).collect();
    if d.iter().any(Scalar::is_zero) {
        return Err(Error::arg("hermitian_congruence needs an invertible matrix"));
    }
    let mut roots = Vec::with_capacity(n);
    for x in &d {
        let mag = if x.real_sign() == Some(1) { x.clone() } else { -x };
        match mag.sqrt_nonneg_real() {
            Some(r) if r.is_exact() => roots.push(r),
            _ => return Ok(None),
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| d[i].real_sign() == Some(1)).collect();
    let p = order.len();
    order.extend((0..n).filter(|&i| d[i].real_sign() != Some(1)));
    let mut h = MatC::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        h.set(i, col, roots[i].clone());
    }
    let residual = relative_residual(&(&(&h * &make_s(n, p)?) * &h.adjoint()), a);
    Ok(Some(Congruence { h, p, residual }))
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticFactor {
    pub v: MatC,
    /// Half the number of positive eigenvalues; `None` for the anti-hermitian factorization.
    pub p: Option<usize>,
    pub residual: f64,
    pub symplectic_residual: f64,
}

fn symplectic_residual(v: &MatC) -> Result<f64> {
    let j = make_j(v.rows())?;
    Ok(relative_residual(&(&(&v.transpose() * &j) * v), &j))
}

fn check_symplectic_input(h: &MatC) -> Result<()> {
    if !h.is_square() || h.rows() == 0 || h.rows() % 2 != 0 {
        return Err(Error::arg("expected a square matrix of even size"));
    }
    if !is_symplectic(h, tol_for(h))? {
        return Err(Error::arg("H must be symplectic for J_2n"));
    }
    Ok(())
}

/// `H = V H^{2n}_p V̄ᵗ` with `V` symplectic and `2p` the number of positive eigenvalues of `H`.
pub fn symplectic_hermitian_factor(h: &MatC) -> Result<SymplecticFactor> {
    check_symplectic_input(h)?;
    if !h.is_hermitian(tol_for(h)) {
        return Err(Error::arg("H must be hermitian"));
    }
    let two_n = h.rows();
    let n = two_n / 2;
    for p in 0..=n {
        let hp = make_h(two_n, p)?;
        if h.is_exact() && *h == hp {
            return Ok(SymplecticFactor { v: MatC::identity(two_n), p: Some(p), residual: 0.0, symplectic_residual: 0.0 });
        }
    }
    let mut pairs = paired_eigenbasis(h, |l| 1.0 / l, |l| l.abs() > 1.0)?;
    pairs.sort_by(|a, b| (b.1 > 0.0).cmp(&(a.1 > 0.0)));
    let p = pairs.iter().filter(|(_, l)| *l > 0.0).count();
    let scales: Vec<f64> = pairs.iter().map(|(_, l)| l.abs().sqrt()).collect();
    let v = assemble_symplectic(&pairs, &scales);
    let residual = relative_residual(&(&(&v * &make_h(two_n, p)?) * &v.adjoint()), h);
    Ok(SymplecticFactor { symplectic_residual: symplectic_residual(&v)?, v, p: Some(p), residual })
}

/// `H = i V S^{2n}_n V̄ᵗ` with `V` symplectic, for symplectic anti-hermitian `H`.
pub fn symplectic_antihermitian_factor(h: &MatC) -> Result<SymplecticFactor> {
    check_symplectic_input(h)?;
    if !h.is_antihermitian(tol_for(h)) {
        return Err(Error::arg("H must be anti-hermitian"));
    }
    let two_n = h.rows();
    let n = two_n / 2;
    let target = make_s(two_n, n)?.scale(&Scalar::i());
    if h.is_exact() && *h == target {
        return Ok(SymplecticFactor { v: MatC::identity(two_n), p: None, residual: 0.0, symplectic_residual: 0.0 });
    }
    let k = h.scale(&Scalar::i());
    let pairs = paired_eigenbasis(&k, |l| -1.0 / l, |l| l < 0.0)?;
    let scales: Vec<f64> = pairs.iter().map(|(_, l)| l.abs().sqrt()).collect();
    let v = assemble_symplectic(&pairs, &scales);
    let residual = relative_residual(&(&(&v * &target) * &v.adjoint()), h);
    Ok(SymplecticFactor { symplectic_residual: symplectic_residual(&v)?, v, p: None, residual })
}

/// An explicit linear bijection `f` with `f([a,b,c]_source) = [fa, fb, fc]_target`.
#[derive(Clone, Debug, Serialize)]
pub struct IsoWitness {
    pub source: String,
    pub target: String,
    pub map: MatC,
    pub residual: f64,
    pub branch_choices: Vec<String>,
    pub pass: bool,
}

impl IsoWitness {
    fn verify(source: &TriSystem, target: &TriSystem, map: MatC, branch_choices: Vec<String>) -> Self {
        let residual = iso_residual(source, target, &map);
        let exact = map.is_exact() && is_exact_system(source) && is_exact_system(target);
        let pass = residual == 0.0 || (!exact && residual <= WITNESS_TOL);
        IsoWitness { source: source.label.clone(), target: target.label.clone(), map, residual, branch_choices, pass }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source,
            "target": self.target,
            "map": self.map.to_json(),
            "residual": self.residual,
            "branch_choices": self.branch_choices,
            "pass": self.pass,
        })
    }
}

fn is_exact_system(t: &TriSystem) -> bool {
    t.eval_basis(0, 0, 0).iter().all(Scalar::is_exact)
}

/// The coordinate matrix of a linear map on `M_{r,c}` (row-major coordinates).
fn matrix_of_map(r: usize, c: usize, f: impl Fn(&MatC) -> MatC) -> MatC {
    let d = r * c;
    let mut out = MatC::zeros(d, d);
    for j in 0..d {
        let mut e = MatC::zeros(r, c);
        e.set(j / c, j % c, Scalar::one());
        for (i, x) in f(&e).into_data().into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    out
}

/// `[a,b,c] = a b* c - c b* a` on `M_{m,n}` with `b* = A b̄ᵗ B^{-1}`.
pub fn build_a3_star(a: &MatC, b: &MatC) -> Result<TriSystem> {
    let (n, m) = (a.rows(), b.rows());
    if !a.is_square() || !b.is_square() || n == 0 || m == 0 {
        return Err(Error::arg("A and B must be nonempty square matrices"));
    }
    let b_inv = b.inverse()?;
    let a = a.clone();
    Ok(TriSystem::new(m * n, Linearity::AntiLinear, format!("A3({m},{n})_*"), move |x, y, z| {
        let (x, y, z) = (MatC::from_coords(m, n, x), MatC::from_coords(m, n, y), MatC::from_coords(m, n, z));
        let star = &(&a * &y.adjoint()) * &b_inv;
        (&(&(&x * &star) * &z) - &(&(&z * &star) * &x)).into_data()
    }))
}

fn check_ray(x: &MatC, lambda: &Scalar, name: &str) -> Result<()> {
    let rhs = x.adjoint().scale(lambda);
    if !x.approx_eq(&rhs, tol_for(x).max(if lambda.is_exact() { 0.0 } else { FACTOR_TOL })) {
        return Err(Error::arg(format!("{name} must satisfy {name} = λ·conj({name})ᵗ")));
    }
    Ok(())
}

/// Isomorphism `A³(m,n;t)_{ph,C_{p,q}} → (M_{m,n}, [·]_*)`, `f(u) = k u h^{-1}`.
pub fn iso_a3_star(a: &MatC, b: &MatC, lambda: &Scalar) -> Result<IsoWitness> {
    if (lambda.abs() - 1.0).abs() > FACTOR_TOL {
        return Err(Error::arg("λ must have modulus 1"));
    }
    check_ray(a, lambda, "A")?;
    check_ray(b, lambda, "B")?;
    let target = build_a3_star(a, b)?;
    let root = lambda.principal_sqrt();
    let inv_root = root.inv().ok_or_else(|| Error::arg("λ must be nonzero"))?;
    let ca = hermitian_congruence(&a.scale(&inv_root))?;
    let cb = hermitian_congruence(&b.scale(&inv_root))?;
    let (n, m) = (a.rows(), b.rows());
    let source = build_a3t_ph(m, n, ca.p, cb.p)?;
    let h_inv = ca.h.inverse()?;
    let k = cb.h.clone();
    let map = matrix_of_map(m, n, |u| &(&k * u) * &h_inv);
    let branches = vec![format!("lambda^(1/2) = {root} (principal branch)"), format!("p = {}, q = {}", ca.p, cb.p)];
    Ok(IsoWitness::verify(&source, &target, map, branches))
}

/// `[a,b,c]_A = i(a ψ_A(b) c - c ψ_A(b) a)` with `ψ_A(u) = A ū Ā`.
pub fn build_a3n_twisted(a: &MatC) -> Result<TriSystem> {
    let n = a.rows();
    if !a.is_square() || n == 0 {
        return Err(Error::arg("A must be a nonempty square matrix"));
    }
    let a = a.clone();
    let abar = a.conj();
    Ok(TriSystem::new(n * n, Linearity::AntiLinear, format!("A3({n})_A"), move |x, y, z| {
        let (x, y, z) = (MatC::from_coords(n, n, x), MatC::from_coords(n, n, y), MatC::from_coords(n, n, z));
        let psi = &(&a * &y.conj()) * &abar;
        (&(&(&x * &psi) * &z) - &(&(&z * &psi) * &x)).scale(&Scalar::i()).into_data()
    }))
}

/// Isomorphism `(M_{n,n}, [·]_A) → A³(n)_+`, `f(u) = k̄ u h` with `A = hk`, `h = A`, `k = I`.
pub fn iso_a3n(a: &MatC) -> Result<IsoWitness> {
    let n = a.rows();
    let source = build_a3n_twisted(a)?;
    a.inverse().map_err(|_| Error::arg("A must be invertible"))?;
    let target = build_a3n(n, 1)?;
    let h = a.clone();
    let map = matrix_of_map(n, n, |u| u * &h);
    Ok(IsoWitness::verify(&source, &target, map, vec!["A = h k with h = A, k = I".into()]))
}

/// Isomorphism `C³(2n, H₀; α₀) → C³(2n, H; α)`, `φ(u) = x u y^{-1}`, where
/// `(H₀, α₀) = (H^{2n}_p, ±1)` for hermitian `H` and `(i S^{2n}_n, ±i)` for anti-hermitian `H`.
pub fn iso_c3(h: &MatC, alpha: &Scalar) -> Result<IsoWitness> {
    let two_n = h.rows();
    let target = build_c3_h_alpha(two_n, h, alpha)?;
    let hermitian = alpha.is_real();
    let (y, h0, a0, magnitude, mut branches) = if hermitian {
        let f = symplectic_hermitian_factor(h)?;
        let p = f.p.unwrap_or(0);
        let sign = alpha.real_sign().unwrap_or(1);
        (f.v, make_h(two_n, p)?, Scalar::from_i64(sign as i64), if sign > 0 { alpha.clone() } else { -alpha }, vec![format!("2p = {}", 2 * p)])
    } else {
        let f = symplectic_antihermitian_factor(h)?;
        let beta = -&(alpha * &Scalar::i());
        let sign = beta.real_sign().unwrap_or(1);
        let a0 = if sign > 0 { Scalar::i() } else { -Scalar::i() };
        (f.v, make_s(two_n, two_n / 2)?.scale(&Scalar::i()), a0, if sign > 0 { beta } else { -&beta }, Vec::new())
    };
    let source = build_c3_h_alpha(two_n, &h0, &a0)?;
    let root = magnitude.principal_sqrt();
    let x = root.inv().ok_or_else(|| Error::arg("α must be nonzero"))?;
    branches.push(format!("x = |α|^(-1/2) = {x} (principal branch)"));
    let y_inv = y.inverse()?;
    let map = matrix_of_map(1, two_n, |u| (u * &y_inv).scale(&x));
    Ok(IsoWitness::verify(&source, &target, map, branches))
}

fn random_gauss(rng: &mut impl Rng, r: i64) -> Scalar {
    Scalar::gauss_int(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

/// A random exact invertible matrix with small Gaussian-integer entries.
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> MatC {
    loop {
        let m = MatC::from_fn(n, n, |_, _| random_gauss(rng, 2));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A random exact symplectic matrix: a product of shears `((I, S), (0, I))`, `((I, 0), (S, I))`
/// with `S` symmetric and a block `diag(G, G^{-t})`.
pub fn random_symplectic(two_n: usize, rng: &mut impl Rng) -> MatC {
    let n = two_n / 2;
    let sym = |rng: &mut _| {
        let mut s = MatC::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = random_gauss(rng, 1);
                s.set(i, j, x.clone());
                s.set(j, i, x);
            }
        }
        s
    };
    let shear = |s: MatC, upper: bool| {
        let mut m = MatC::identity(two_n);
        if upper {
            m.set_block(0, n, &s);
        } else {
            m.set_block(n, 0, &s);
        }
        m
    };
    let upper = shear(sym(rng), true);
    let lower = shear(sym(rng), false);
    let g = loop {
        let g = MatC::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { random_gauss(rng, 1) });
        if !g.det().is_zero() {
            break g;
        }
    };
    let g_it = g.inverse().expect("invertible").transpose();
    let d = MatC::block_diag(&[&g, &g_it]);
    &(&upper * &d) * &lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_a3st_ph, build_c3_h_alpha};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_diagonal_congruence() {
        let c = hermitian_congruence(&MatC::from_i64(2, 2, &[4, 0, 0, -9])).unwrap();
        assert_eq!(c.h, MatC::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(c.p, 1);
        assert_eq!(c.residual, 0.0);
        let c = hermitian_congruence(&MatC::identity(3)).unwrap();
        assert_eq!((c.h, c.p), (MatC::identity(3), 3));
        let c = hermitian_congruence(&MatC::from_i64(2, 2, &[-1, 0, 0, 4])).unwrap();
        assert_eq!(c.p, 1);
        assert_eq!(c.residual, 0.0);
    }

    #[test]
    fn congruence_recovers_planted_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for p in 0..=n {
                let h0 = random_invertible(n, &mut rng);
                let a = &(&h0 * &make_s(n, p).unwrap()) * &h0.adjoint();
                let c = hermitian_congruence(&a).unwrap();
                assert_eq!(c.p, p);
                assert!(c.residual <= 1e-9, "{}", c.residual);
            }
        }
        assert!(hermitian_congruence(&MatC::from_i64(2, 2, &[1, 2, 0, 1])).is_err());
        assert!(hermitian_congruence(&MatC::from_i64(2, 2, &[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn symplectic_factors_of_trivial_inputs() {
        let f = symplectic_hermitian_factor(&MatC::identity(4)).unwrap();
        assert_eq!((f.v, f.p), (MatC::identity(4), Some(2)));
        let f = symplectic_hermitian_factor(&make_h(4, 1).unwrap()).unwrap();
        assert_eq!(f.v, MatC::identity(4));
        let is = make_s(4, 2).unwrap().scale(&Scalar::i());
        assert_eq!(symplectic_antihermitian_factor(&is).unwrap().v, MatC::identity(4));
        let f = symplectic_antihermitian_factor(&make_j(2).unwrap()).unwrap();
        assert!(f.residual <= 1e-9 && f.symplectic_residual <= 1e-9);
        assert!(symplectic_hermitian_factor(&MatC::from_i64(2, 2, &[2, 0, 0, 1])).is_err());
    }

    #[test]
    fn symplectic_factors_of_planted_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_n in [2, 4, 6] {
            for p in 0..=two_n / 2 {
                let v0 = random_symplectic(two_n, &mut rng);
                assert!(is_symplectic(&v0, 0.0).unwrap());
                let h = &(&v0 * &make_h(two_n, p).unwrap()) * &v0.adjoint();
                let f = symplectic_hermitian_factor(&h).unwrap();
                assert_eq!(f.p, Some(p));
                assert!(f.residual <= 1e-9 && f.symplectic_residual <= 1e-9, "{f:?}");
            }
            let v0 = random_symplectic(two_n, &mut rng);
            let is = make_s(two_n, two_n / 2).unwrap().scale(&Scalar::i());
            let h = &(&v0 * &is) * &v0.adjoint();
            let f = symplectic_antihermitian_factor(&h).unwrap();
            assert!(f.residual <= 1e-9 && f.symplectic_residual <= 1e-9, "{f:?}");
        }
    }

    #[test]
    fn a3_star_witnesses() {
        let w = iso_a3_star(&make_s(3, 1).unwrap(), &make_s(2, 2).unwrap(), &Scalar::one()).unwrap();
        assert!(w.pass);
        assert_eq!(w.map, MatC::identity(6));
        assert_eq!(w.residual, 0.0);

        let j = make_j(2).unwrap();
        let w = iso_a3_star(&j, &j, &Scalar::from_i64(-1)).unwrap();
        assert!(w.pass, "{}", w.residual);
        assert_eq!(w.source, "A3(2,2;t)_ph,C(1,1)");
        let star = build_a3_star(&j, &j).unwrap();
        assert!(crate::triple::same_bracket(&star, &build_a3st_ph(2, 2).unwrap()));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h0 = random_invertible(3, &mut rng);
        let k0 = random_invertible(2, &mut rng);
        let a = &h0 * &h0.adjoint();
        let b = &(&k0 * &make_s(2, 1).unwrap()) * &k0.adjoint();
        let w = iso_a3_star(&a, &b, &Scalar::one()).unwrap();
        assert!(w.pass, "{}", w.residual);
        assert!(iso_a3_star(&j, &j, &Scalar::one()).is_err());
    }

    #[test]
    fn a3n_witnesses() {
        let w = iso_a3n(&MatC::identity(2)).unwrap();
        assert_eq!((w.map.clone(), w.residual), (MatC::identity(4), 0.0));
        let half = MatC::diag(&[Scalar::from_i64(2), Scalar::ratio(1, 2)]);
        assert!(iso_a3n(&half).unwrap().pass);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_invertible(2, &mut rng);
        let w = iso_a3n(&a).unwrap();
        assert!(w.pass && w.residual == 0.0);
        assert!(iso_a3n(&MatC::from_i64(2, 2, &[1, 1, 1, 1])).is_err());
    }

    #[test]
    fn c3_witnesses() {
        let w = iso_c3(&make_h(4, 1).unwrap(), &Scalar::one()).unwrap();
        assert_eq!((w.map.clone(), w.residual), (MatC::identity(4), 0.0));
        let is = make_s(4, 2).unwrap().scale(&Scalar::i());
        let w = iso_c3(&is, &Scalar::i()).unwrap();
        assert_eq!((w.map.clone(), w.residual), (MatC::identity(4), 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v0 = random_symplectic(4, &mut rng);
        let h = &(&v0 * &make_h(4, 1).unwrap()) * &v0.adjoint();
        let w = iso_c3(&h, &Scalar::from_i64(3)).unwrap();
        assert!(w.pass, "{}", w.residual);
        assert_eq!(w.source, build_c3_h_alpha(4, &make_h(4, 1).unwrap(), &Scalar::one()).unwrap().label);
        let w = iso_c3(&h, &Scalar::from_i64(-2)).unwrap();
        assert!(w.pass, "{}", w.residual);

        let ah = &(&v0 * &is) * &v0.adjoint();
        for alpha in [Scalar::gauss_int(0, 2), Scalar::gauss_int(0, -1)] {
            let w = iso_c3(&ah, &alpha).unwrap();
            assert!(w.pass, "{}", w.residual);
        }
    }
}
