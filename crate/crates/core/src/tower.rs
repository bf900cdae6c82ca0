//! Passing between 3-algebras and short-graded Lie superalgebras with a graded conjugation:
//! `tel` builds `[u, v, w] = [[u, σ(v)], w]` on `Π g₋₁`, and `lie_of` builds
//! `Lie T = Π T ⊕ ⟨L_{x,y}⟩ ⊕ ⟨φ_x⟩` with its conjugation.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{basis_vec, vec_approx_eq, vec_sub, ConjMap, Linearity, MatC, Span};
use crate::scalar::Scalar;
use crate::superalg::{check_graded_conjugation, GradedConj, GradedConjReport, GradedLieSuper, SuperCheck};
use crate::triple::{center, iso_residual, to_sparse, SparseVec, TriSystem, Verdict};

/// `[u, v, w] = [[u, σ(v)], w]` on the degree -1 part.
pub fn tel(g: &GradedLieSuper, sigma: &GradedConj) -> Result<TriSystem> {
    let grading = g.check_grading();
    if !grading.passed() {
        return Err(Error::arg(format!("{} does not carry a short consistent grading", g.label)));
    }
    if !sigma.map.is_antilinear() {
        return Err(Error::arg("tel needs an anti-linear graded conjugation"));
    }
    let report = check_graded_conjugation(g, sigma);
    if !report.passed() {
        return Err(Error::arg(format!("{} is not a graded conjugation of {}", sigma.kind, g.label)));
    }
    Ok(tel_unchecked(g, sigma, format!("tel({}, {})", g.label, sigma.kind)))
}

fn tel_unchecked(g: &GradedLieSuper, sigma: &GradedConj, label: String) -> TriSystem {
    let minus = g.indices_of_degree(-1);
    let d = minus.len();
    let full = g.dim;
    let g = Arc::new(g.clone());
    let map = sigma.map.clone();
    let embed = {
        let minus = minus.clone();
        move |v: &[Scalar]| {
            let mut out = vec![Scalar::zero(); full];
            for (k, &idx) in minus.iter().enumerate() {
                out[idx] = v[k].clone();
            }
            out
        }
    };
    TriSystem::new(d, map.linearity, label, move |u, v, w| {
        let inner = g.bracket(&embed(u), &map.apply(&embed(v)));
        let outer = g.bracket(&inner, &embed(w));
        minus.iter().map(|&i| outer[i].clone()).collect()
    })
}

/// A 3-algebra together with its Lie superalgebra, conjugation and basis bookkeeping.
#[derive(Clone, Debug)]
pub struct Tower {
    pub origin: String,
    pub lie: GradedLieSuper,
    pub sigma: GradedConj,
    /// `(i, j)` such that the degree-0 basis vector `r` is `L_{e_i, e_j}`.
    pub lie0_generators: Vec<(usize, usize)>,
    /// The operators `L_{e_i, e_j}` of the chosen degree-0 basis, as `dim × dim` matrices.
    pub lie0_operators: Vec<MatC>,
    t: TriSystem,
}

impl Tower {
    pub fn origin_system(&self) -> &TriSystem {
        &self.t
    }

    /// Index in `lie` of the degree-0 basis vector `r`.
    pub fn lie0_index(&self, r: usize) -> usize {
        self.t.dim + r
    }

    /// Index in `lie` of `φ_{e_b}`.
    pub fn phi_index(&self, b: usize) -> usize {
        self.t.dim + self.lie0_generators.len() + b
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d = self.t.dim;
        let (m1, z, p1) = self.lie.graded_dims();
        serde_json::json!({
            "origin": self.origin,
            "graded_dims": [m1, z, p1],
            "lie": self.lie.to_json(),
            "sigma": self.sigma.map.to_json(),
            "embedding": {
                "pi_t": (0..d).collect::<Vec<_>>(),
                "lie0_generators": self.lie0_generators,
                "phi": (0..d).map(|b| self.phi_index(b)).collect::<Vec<_>>(),
            },
        })
    }
}

/// The operator `z ↦ [x, y, z]` as a `dim × dim` matrix.
pub fn l_operator(t: &TriSystem, x: &[Scalar], y: &[Scalar]) -> MatC {
    let d = t.dim;
    let mut m = MatC::zeros(d, d);
    for k in 0..d {
        let col = t.eval(x, y, &basis_vec(d, k));
        for (i, v) in col.into_iter().enumerate() {
            m.set(i, k, v);
        }
    }
    m
}

/// Builds `Lie T` and `σ: z ↦ -φ_z, φ_z ↦ z, L_{x,y} ↦ -L_{y,x}`; the center of `T` must vanish.
///
/// Basis order: `e_a` (degree -1), the chosen `L_{e_i,e_j}` (degree 0), `φ_{e_b}` (degree 1).
pub fn lie_of(t: &TriSystem) -> Result<Tower> {
    let z = center(t);
    if !z.is_empty() {
        return Err(Error::NonzeroCenter { basis: z });
    }
    let d = t.dim;
    let e = |i: usize| basis_vec(d, i);
    let physical = t.is_physical();

    let mut ops: Vec<((usize, usize), MatC)> = Vec::new();
    let all: Vec<((usize, usize), MatC)> = (0..d * d)
        .into_par_iter()
        .map(|idx| ((idx / d, idx % d), l_operator(t, &e(idx / d), &e(idx % d))))
        .collect();
    let mut span = Span::new(d * d, t.tol);
    for (pair, m) in all {
        if span.insert(m.data()) {
            ops.push((pair, m));
        }
    }
    let n0 = ops.len();
    let dim = 2 * d + n0;
    let l0 = |r: usize| d + r;
    let phi = |b: usize| d + n0 + b;
    let coords0 = |m: &MatC| -> Result<Vec<Scalar>> {
        span.coords(m.data()).ok_or_else(|| Error::Verification("operator outside the span of L_{x,y}".into()))
    };
    let phi_coords = |w: &[Scalar]| -> Vec<Scalar> {
        if physical {
            w.iter().map(Scalar::conj).collect()
        } else {
            w.to_vec()
        }
    };

    let mut degree = vec![-1i8; d];
    degree.extend(std::iter::repeat(0).take(n0));
    degree.extend(std::iter::repeat(1).take(d));

    let mut structure: Vec<SparseVec> = vec![Vec::new(); dim * dim];
    let place = |offset: usize, v: &[Scalar]| -> SparseVec { to_sparse(v).into_iter().map(|(k, c)| (k + offset, c)).collect() };
    let neg = |s: SparseVec| -> SparseVec { s.into_iter().map(|(k, c)| (k, -&c)).collect() };

    for (r, ((i, j), _)) in ops.iter().enumerate() {
        for a in 0..d {
            // [L, e_a] = [x, y, e_a]
            let v = t.eval(&e(*i), &e(*j), &e(a));
            structure[l0(r) * dim + a] = place(0, &v);
            structure[a * dim + l0(r)] = neg(place(0, &v));
            // [L_{x,y}, φ_b] = -φ_{[y, x, e_b]}
            let w = t.eval(&e(*j), &e(*i), &e(a));
            let pw = place(d + n0, &phi_coords(&w));
            structure[l0(r) * dim + phi(a)] = neg(pw.clone());
            structure[phi(a) * dim + l0(r)] = pw;
        }
    }
    for a in 0..d {
        for b in 0..d {
            // [e_a, φ_b] = [φ_b, e_a] = -L_{e_a, e_b}
            let c = coords0(&l_operator(t, &e(a), &e(b)))?;
            let s = neg(place(d, &c));
            structure[a * dim + phi(b)] = s.clone();
            structure[phi(b) * dim + a] = s;
        }
    }
    for r in 0..n0 {
        for s in 0..n0 {
            let (mr, ms) = (&ops[r].1, &ops[s].1);
            let comm = &(mr * ms) - &(ms * mr);
            structure[l0(r) * dim + l0(s)] = place(d, &coords0(&comm)?);
        }
    }
    let lie = GradedLieSuper::from_structure(format!("Lie({})", t.label), degree, structure)?;

    // σ as coordinate map: columns are images of the basis vectors.
    let mut sm = MatC::zeros(dim, dim);
    for a in 0..d {
        sm.set(phi(a), a, Scalar::from_i64(-1));
        sm.set(a, phi(a), Scalar::one());
    }
    for (r, ((i, j), _)) in ops.iter().enumerate() {
        let c = coords0(&l_operator(t, &e(*j), &e(*i)))?;
        for (k, x) in c.into_iter().enumerate() {
            sm.set(l0(k), l0(r), -&x);
        }
    }
    let linearity = if physical { Linearity::AntiLinear } else { Linearity::Linear };
    let sigma = GradedConj { map: ConjMap { mat: sm, linearity }, kind: "sigma".into() };
    Ok(Tower {
        origin: t.label.clone(),
        lie,
        sigma,
        lie0_generators: ops.iter().map(|(p, _)| *p).collect(),
        lie0_operators: ops.into_iter().map(|(_, m)| m).collect(),
        t: t.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub graded_dims: (usize, usize, usize),
    pub super_antisymmetry: SuperCheck,
    pub super_jacobi: SuperCheck,
    pub grading: SuperCheck,
    pub minus_plus_spans_zero: bool,
    pub phi_phi_zero: bool,
    /// `[L_{x,y}, L_{x',y'}] = L_{[x,y,x'],y'} - L_{x',[y,x,y']}` on basis vectors.
    pub operator_commutators: Verdict,
    /// `L_{x, λy} = λ̄ L_{x,y}` (physical) or `λ L_{x,y}` (algebraic) for `λ = i`.
    pub operator_homogeneity: Verdict,
    pub conjugation: GradedConjReport,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.super_antisymmetry.passed()
            && self.super_jacobi.passed()
            && self.grading.passed()
            && self.minus_plus_spans_zero
            && self.phi_phi_zero
            && self.operator_commutators.passed()
            && self.operator_homogeneity.passed()
            && self.conjugation.passed()
    }
}

/// Super-Jacobi, grading, `[Lie₋₁, Lie₁] = Lie₀`, `[φ_x, φ_y] = 0`, the operator commutator
/// formula and the conjugation checks.
pub fn check_tower_axioms(tw: &Tower) -> TowerReport {
    check_tower_with(tw, &tw.sigma)
}

/// Same as [`check_tower_axioms`] with a replacement conjugation.
pub fn check_tower_with(tw: &Tower, sigma: &GradedConj) -> TowerReport {
    let t = &tw.t;
    let d = t.dim;
    let e = |i: usize| basis_vec(d, i);
    let phis: Vec<usize> = (0..d).map(|b| tw.phi_index(b)).collect();
    let phi_phi_zero = phis.iter().all(|&a| phis.iter().all(|&b| tw.lie.bracket_basis(a, b).is_empty()));

    let tol = t.tol;
    let n0 = tw.lie0_generators.len();
    let comm_ok = (0..n0 * d * d).into_par_iter().all(|idx| {
        let (r, a, b) = (idx / (d * d), (idx / d) % d, idx % d);
        let (i, j) = tw.lie0_generators[r];
        let lr = &tw.lie0_operators[r];
        let ls = l_operator(t, &e(a), &e(b));
        let lhs = &(lr * &ls) - &(&ls * lr);
        let xyx = t.eval(&e(i), &e(j), &e(a));
        let yxy = t.eval(&e(j), &e(i), &e(b));
        let rhs = &l_operator(t, &xyx, &e(b)) - &l_operator(t, &e(a), &yxy);
        lhs.approx_eq(&rhs, if lhs.is_exact() && rhs.is_exact() { 0.0 } else { tol })
    });

    let lam = Scalar::i();
    let lam_eff = if t.is_physical() { lam.conj() } else { lam.clone() };
    let homog_ok = (0..d * d).into_par_iter().all(|idx| {
        let (a, b) = (idx / d, idx % d);
        let l = l_operator(t, &e(a), &e(b));
        let ls = l_operator(t, &e(a), &crate::linalg::vec_scale(&e(b), &lam));
        ls.approx_eq(&l.scale(&lam_eff), if l.is_exact() { 0.0 } else { tol })
    });

    TowerReport {
        graded_dims: tw.lie.graded_dims(),
        super_antisymmetry: tw.lie.check_super_antisymmetry(),
        super_jacobi: tw.lie.check_super_jacobi(),
        grading: tw.lie.check_grading(),
        minus_plus_spans_zero: tw.lie.check_minus_plus_spans_zero(),
        phi_phi_zero,
        operator_commutators: Verdict::from_bool(comm_ok),
        operator_homogeneity: Verdict::from_bool(homog_ok),
        conjugation: check_graded_conjugation(&tw.lie, sigma),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub family: String,
    pub graded_dims: (usize, usize, usize),
    pub residual: f64,
    pub pass: bool,
}

/// `tel(lie_of(T)) = T` on all basis triples with realified slot 2.
pub fn roundtrip_check(t: &TriSystem) -> Result<RoundtripReport> {
    let tw = lie_of(t)?;
    Ok(roundtrip_of(&tw))
}

pub fn roundtrip_of(tw: &Tower) -> RoundtripReport {
    let back = tel_unchecked(&tw.lie, &tw.sigma, format!("tel(Lie({}))", tw.origin));
    let residual = iso_residual(&back, &tw.t, &MatC::identity(tw.t.dim));
    let exact = residual == 0.0;
    RoundtripReport {
        family: tw.origin.clone(),
        graded_dims: tw.lie.graded_dims(),
        residual,
        pass: exact || (residual <= tw.t.tol && residual > f64::MIN_POSITIVE),
    }
}

/// `[u, σv, w]` recomputed in `Lie T` for basis vectors, compared with `[u, v, w]`.
pub fn bracket_through_lie(tw: &Tower, a: usize, b: usize, c: usize) -> (Vec<Scalar>, Vec<Scalar>) {
    let d = tw.t.dim;
    let mut u = vec![Scalar::zero(); tw.lie.dim];
    u[a] = Scalar::one();
    let mut v = vec![Scalar::zero(); tw.lie.dim];
    v[b] = Scalar::one();
    let mut w = vec![Scalar::zero(); tw.lie.dim];
    w[c] = Scalar::one();
    let inner = tw.lie.bracket(&u, &tw.sigma.map.apply(&v));
    let out = tw.lie.bracket(&inner, &w);
    let lhs: Vec<Scalar> = out[..d].to_vec();
    let rhs = tw.t.eval(&basis_vec(d, a), &basis_vec(d, b), &basis_vec(d, c));
    (lhs, rhs)
}

/// `σ` with its degree-`k` block negated; used to exercise the conjugation checks.
pub fn negate_on_degree(lie: &GradedLieSuper, sigma: &GradedConj, k: i8) -> GradedConj {
    let mut mat = sigma.map.mat.clone();
    for j in 0..lie.dim {
        if lie.degree[j] == k {
            for i in 0..lie.dim {
                let x = mat.get(i, j).clone();
                mat.set(i, j, -&x);
            }
        }
    }
    GradedConj { map: ConjMap { mat, linearity: sigma.map.linearity }, kind: format!("{} (negated on degree {k})", sigma.kind) }
}

/// Whether the bracket difference vanishes; exact inputs compare exactly.
pub fn vectors_agree(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
    let exact = a.iter().chain(b).all(Scalar::is_exact);
    if exact {
        vec_sub(a, b).iter().all(Scalar::is_zero)
    } else {
        vec_approx_eq(a, b, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::linalg::{make_h, make_s};
    use crate::superalg::*;
    use crate::triple::{check_axioms, same_bracket, CheckMode};

    #[test]
    fn tel_of_psl_with_tau_is_a3n() {
        let g = build_psl(2, 2).unwrap();
        let t = tel(&g, &build_tau(&g, 1).unwrap()).unwrap();
        assert!(check_axioms(&t, CheckMode::default()).unwrap().passed());
        assert!(same_bracket(&t, &build_a3n(2, 1).unwrap()));
        let t = tel(&g, &build_tau(&g, -1).unwrap()).unwrap();
        assert!(same_bracket(&t, &build_a3n(2, -1).unwrap()));
    }

    #[test]
    fn tel_of_psl_matches_a3t_ph_with_swapped_shape() {
        for (m, n) in [(1, 2), (2, 3)] {
            let g = build_psl(m, n).unwrap();
            for p in 0..=m {
                for q in 0..=n {
                    let t = tel(&g, &build_conj_psl(&g, p, q).unwrap()).unwrap();
                    assert!(same_bracket(&t, &build_a3t_ph(n, m, p, q).unwrap()), "psl({m},{n}) p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn tel_of_osp_matches_c3() {
        for n in [1, 2] {
            let g = build_osp(n).unwrap();
            for p in 0..=n {
                for sign in [1, -1] {
                    let t = tel(&g, &build_conj_osp(&g, OspVariant::Hermitian(p), sign).unwrap()).unwrap();
                    assert!(same_bracket(&t, &build_c3_ph_cp(2 * n, p, sign).unwrap()), "n={n} p={p} sign={sign}");
                }
            }
            for sign in [1, -1] {
                let t = tel(&g, &build_conj_osp(&g, OspVariant::AntiHermitian, sign).unwrap()).unwrap();
                assert!(same_bracket(&t, &build_c3_is(2 * n, sign).unwrap()));
            }
        }
        let g = build_osp(1).unwrap();
        let alpha = Scalar::from_i64(2);
        let p = MatC::diag(&[alpha.clone(), alpha.inv().unwrap()]);
        let h = make_h(2, 1).unwrap();
        let t = tel(&g, &build_conj_osp_with(&g, &p, &h).unwrap()).unwrap();
        assert!(same_bracket(&t, &build_c3_h_alpha(2, &h, &alpha).unwrap()));
        let ai = Scalar::gauss_int(0, 3);
        let p = MatC::diag(&[ai.clone(), ai.inv().unwrap()]);
        let h = make_s(2, 1).unwrap().scale(&Scalar::i());
        let t = tel(&g, &build_conj_osp_with(&g, &p, &h).unwrap()).unwrap();
        assert!(same_bracket(&t, &build_c3_h_alpha(2, &h, &ai).unwrap()));
    }

    #[test]
    fn tel_anticommutes() {
        let g = build_psl(1, 2).unwrap();
        let t = tel(&g, &build_conj_psl(&g, 1, 1).unwrap()).unwrap();
        let u = vec![Scalar::gauss_int(1, 2), Scalar::gauss_int(-1, 0)];
        let v = vec![Scalar::gauss_int(0, 1), Scalar::gauss_int(3, 1)];
        assert!(t.eval(&u, &v, &u).iter().all(Scalar::is_zero));
    }

    #[test]
    fn lie_of_dimensions() {
        let tw = lie_of(&build_a3t_ph(1, 2, 0, 0).unwrap()).unwrap();
        assert_eq!(tw.lie.graded_dims(), (2, 4, 2));
        let tw = lie_of(&build_a3t_ph(2, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(tw.lie.dim, 14);
        let tw = lie_of(&build_c3_ph_c0(4).unwrap()).unwrap();
        assert_eq!(tw.lie.graded_dims(), (4, 11, 4));
        match lie_of(&build_a3t(1, 1).unwrap()) {
            Err(Error::NonzeroCenter { basis }) => assert_eq!(basis.len(), 2),
            other => panic!("expected nonzero center, got {other:?}"),
        }
    }

    #[test]
    fn towers_verify_and_round_trip() {
        for t in [
            build_a3n(2, 1).unwrap(),
            build_a3n(2, -1).unwrap(),
            build_c3_is(2, 1).unwrap(),
            build_a3t_ph(1, 2, 1, 1).unwrap(),
            build_c3_ph_c0(4).unwrap(),
        ] {
            let tw = lie_of(&t).unwrap();
            let r = check_tower_axioms(&tw);
            assert!(r.passed(), "{}: {:?}", t.label, r);
            assert!(roundtrip_of(&tw).pass, "{}", t.label);
            assert!(tw.lie.is_simple(), "{}", t.label);
        }
    }

    #[test]
    fn negated_sigma_on_degree_zero_fails() {
        let tw = lie_of(&build_a3n(2, 1).unwrap()).unwrap();
        let bad = negate_on_degree(&tw.lie, &tw.sigma, 0);
        let r = check_tower_with(&tw, &bad);
        assert_eq!(r.conjugation.automorphism, Verdict::Fail);
        assert!(r.conjugation.counterexample.is_some());
    }

    #[test]
    fn bracket_recovered_through_lie() {
        let tw = lie_of(&build_a3t_ph(2, 2, 1, 1).unwrap()).unwrap();
        for (a, b, c) in [(0, 1, 2), (3, 3, 0), (1, 2, 1)] {
            let (lhs, rhs) = bracket_through_lie(&tw, a, b, c);
            assert!(vectors_agree(&lhs, &rhs, 0.0));
        }
    }
}
