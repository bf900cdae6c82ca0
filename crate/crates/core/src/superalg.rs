//! Finite-dimensional Lie superalgebras with a short consistent grading, realized by structure
//! constants, and their (anti-)linear graded conjugations.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_symplectic, make_j, make_s, vec_add, vec_approx_eq, ConjMap, Linearity, MatC, Span};
use crate::scalar::Scalar;
use crate::triple::{to_dense, to_sparse, SparseVec, Verdict};
use crate::DEFAULT_TOL;

/// A Lie superalgebra on `ℂ^dim` with one homogeneous basis vector per coordinate.
#[derive(Clone, Debug)]
pub struct GradedLieSuper {
    pub label: String,
    pub dim: usize,
    /// `-1`, `0` or `1` per basis vector.
    pub degree: Vec<i8>,
    /// `0` or `1` per basis vector.
    pub parity: Vec<u8>,
    /// `[e_i, e_j]` at index `i * dim + j`.
    structure: Vec<SparseVec>,
    pub tol: f64,
    realization: Option<MatrixRealization>,
}

/// Basis supermatrices of a subalgebra of `gl(m|n)`, optionally taken modulo the identity.
#[derive(Clone, Debug)]
pub struct MatrixRealization {
    pub m: usize,
    pub n: usize,
    pub basis: Vec<MatC>,
    pub modulo_identity: bool,
    span: Span,
}

impl MatrixRealization {
    fn new(m: usize, n: usize, basis: Vec<MatC>, modulo_identity: bool) -> Result<Self> {
        let size = m + n;
        let mut span = Span::exact(size * size);
        for b in &basis {
            if !span.insert(b.data()) {
                return Err(Error::Verification("supermatrix basis is linearly dependent".into()));
            }
        }
        if modulo_identity && !span.insert(MatC::identity(size).data()) {
            return Err(Error::Verification("identity lies in the chosen complement".into()));
        }
        Ok(MatrixRealization { m, n, basis, modulo_identity, span })
    }

    /// Coordinates of a supermatrix in the basis (modulo `I` if so configured).
    pub fn coords(&self, x: &MatC) -> Result<Vec<Scalar>> {
        let mut c = self
            .span
            .coords(x.data())
            .ok_or_else(|| Error::Verification("supermatrix lies outside the realized algebra".into()))?;
        if self.modulo_identity {
            c.pop();
        }
        Ok(c)
    }

    /// `Σ v_j B_j`.
    pub fn matrix_of(&self, v: &[Scalar]) -> MatC {
        let size = self.m + self.n;
        let mut out = MatC::zeros(size, size);
        for (c, b) in v.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }
}

fn supermatrix_parity(x: &MatC, m: usize) -> u8 {
    let size = x.rows();
    let odd = (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).any(|(i, j)| (i < m) != (j < m) && !x.get(i, j).is_zero());
    u8::from(odd)
}

/// `XY - (-1)^{|X||Y|} YX`.
pub fn super_commutator(x: &MatC, y: &MatC, px: u8, py: u8) -> MatC {
    let xy = x * y;
    let yx = y * x;
    if px == 1 && py == 1 {
        &xy + &yx
    } else {
        &xy - &yx
    }
}

fn unit(size: usize, i: usize, j: usize) -> MatC {
    let mut x = MatC::zeros(size, size);
    x.set(i, j, Scalar::one());
    x
}

impl GradedLieSuper {
    pub fn from_structure(label: impl Into<String>, degree: Vec<i8>, structure: Vec<SparseVec>) -> Result<Self> {
        let dim = degree.len();
        if structure.len() != dim * dim {
            return Err(Error::arg("structure constants must have dim² entries"));
        }
        let parity = degree.iter().map(|d| (d.rem_euclid(2)) as u8).collect();
        Ok(GradedLieSuper { label: label.into(), dim, degree, parity, structure, tol: DEFAULT_TOL, realization: None })
    }

    fn from_matrices(label: impl Into<String>, real: MatrixRealization, degree: Vec<i8>) -> Result<Self> {
        let dim = real.basis.len();
        let parity: Vec<u8> = real.basis.iter().map(|b| supermatrix_parity(b, real.m)).collect();
        for (k, (&d, &p)) in degree.iter().zip(&parity).enumerate() {
            if d.rem_euclid(2) as u8 != p {
                return Err(Error::Verification(format!("basis element {k} has degree {d} but parity {p}")));
            }
        }
        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect();
        let structure = pairs
            .par_iter()
            .map(|&(i, j)| {
                let br = super_commutator(&real.basis[i], &real.basis[j], parity[i], parity[j]);
                real.coords(&br).map(|c| to_sparse(&c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedLieSuper {
            label: label.into(),
            dim,
            degree,
            parity,
            structure,
            tol: DEFAULT_TOL,
            realization: Some(real),
        })
    }

    pub fn realization(&self) -> Option<&MatrixRealization> {
        self.realization.as_ref()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.structure[i * self.dim + j]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] += &(&f * c);
                }
            }
        }
        out
    }

    /// `(dim g₋₁, dim g₀, dim g₁)`.
    pub fn graded_dims(&self) -> (usize, usize, usize) {
        let count = |d: i8| self.degree.iter().filter(|&&x| x == d).count();
        (count(-1), count(0), count(1))
    }

    pub fn indices_of_degree(&self, d: i8) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.degree[i] == d).collect()
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    fn close(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        let exact = a.iter().chain(b).all(Scalar::is_exact);
        vec_approx_eq(a, b, if exact { 0.0 } else { self.tol })
    }

    /// `[x, y] = -(-1)^{p(x)p(y)} [y, x]` on basis pairs.
    pub fn check_super_antisymmetry(&self) -> SuperCheck {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = to_dense(self.bracket_basis(i, j), self.dim);
                let mut rhs = to_dense(self.bracket_basis(j, i), self.dim);
                if !(self.parity[i] == 1 && self.parity[j] == 1) {
                    rhs = rhs.iter().map(|x| -x).collect();
                }
                if !self.close(&lhs, &rhs) {
                    return SuperCheck::fail(1, "super_antisymmetry", vec![i, j], lhs, rhs);
                }
            }
        }
        SuperCheck::pass((self.dim * self.dim) as u64)
    }

    /// `[x, [y, z]] = [[x, y], z] + (-1)^{p(x)p(y)} [y, [x, z]]` on all basis triples.
    pub fn check_super_jacobi(&self) -> SuperCheck {
        let d = self.dim;
        let triples: Vec<(usize, usize, usize)> =
            (0..d).flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k)))).collect();
        let bad: Vec<(usize, usize, usize, Vec<Scalar>, Vec<Scalar>)> = triples
            .par_iter()
            .filter_map(|&(i, j, k)| {
                let ei = self.basis(i);
                let ej = self.basis(j);
                let yz = to_dense(self.bracket_basis(j, k), d);
                let lhs = self.bracket(&ei, &yz);
                let xy = to_dense(self.bracket_basis(i, j), d);
                let t1 = self.bracket(&xy, &self.basis(k));
                let xz = to_dense(self.bracket_basis(i, k), d);
                let mut t2 = self.bracket(&ej, &xz);
                if self.parity[i] == 1 && self.parity[j] == 1 {
                    t2 = t2.iter().map(|x| -x).collect();
                }
                let rhs = vec_add(&t1, &t2);
                (!self.close(&lhs, &rhs)).then_some((i, j, k, lhs, rhs))
            })
            .collect();
        match bad.into_iter().next() {
            None => SuperCheck::pass(triples.len() as u64),
            Some((i, j, k, lhs, rhs)) => SuperCheck::fail(triples.len() as u64, "super_jacobi", vec![i, j, k], lhs, rhs),
        }
    }

    /// `[g_i, g_j] ⊆ g_{i+j}` (zero when `|i + j| > 1`) and parity equal to degree mod 2.
    pub fn check_grading(&self) -> SuperCheck {
        for i in 0..self.dim {
            if self.degree[i].rem_euclid(2) as u8 != self.parity[i] || self.degree[i].abs() > 1 {
                return SuperCheck::fail(1, "grading_consistency", vec![i], vec![], vec![]);
            }
            for j in 0..self.dim {
                let target = self.degree[i] + self.degree[j];
                for (k, _) in self.bracket_basis(i, j) {
                    if self.degree[*k] != target {
                        let v = to_dense(self.bracket_basis(i, j), self.dim);
                        return SuperCheck::fail(1, "grading", vec![i, j], v, vec![]);
                    }
                }
            }
        }
        SuperCheck::pass((self.dim * self.dim) as u64)
    }

    /// Dimension of `[g₋₁, g₁]`.
    pub fn rank_of_minus_plus(&self) -> usize {
        let mut span = Span::new(self.dim, self.tol);
        for i in self.indices_of_degree(-1) {
            for j in self.indices_of_degree(1) {
                span.insert(&to_dense(self.bracket_basis(i, j), self.dim));
            }
        }
        span.dim()
    }

    /// `[g₋₁, g₁] = g₀`.
    pub fn check_minus_plus_spans_zero(&self) -> bool {
        self.rank_of_minus_plus() == self.graded_dims().1
    }

    /// The smallest subspace containing `v` and stable under `ad e_i` for every basis vector.
    pub fn ideal_closure(&self, v: &[Scalar]) -> usize {
        let mut span = Span::new(self.dim, self.tol);
        let mut queue = Vec::new();
        if span.insert(v) {
            queue.push(v.to_vec());
        }
        while let Some(w) = queue.pop() {
            for i in 0..self.dim {
                let u = self.bracket(&self.basis(i), &w);
                if span.insert(&u) {
                    queue.push(u);
                }
            }
        }
        span.dim()
    }

    /// Simple when the bracket is nonzero and the ideal generated by each basis vector is the
    /// whole algebra.
    pub fn is_simple(&self) -> bool {
        if self.structure.iter().all(|s| s.is_empty()) {
            return false;
        }
        (0..self.dim).into_par_iter().all(|i| self.ideal_closure(&self.basis(i)) == self.dim)
    }

    /// Structure-constant tensor as JSON: nonzero `[e_i, e_j]` entries only.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let s = self.bracket_basis(i, j);
                if !s.is_empty() {
                    let terms: Vec<serde_json::Value> = s.iter().map(|(k, c)| serde_json::json!([k, c.to_json()])).collect();
                    entries.push(serde_json::json!({"i": i, "j": j, "terms": terms}));
                }
            }
        }
        serde_json::json!({
            "label": self.label,
            "dim": self.dim,
            "graded_dims": [self.graded_dims().0, self.graded_dims().1, self.graded_dims().2],
            "degree": self.degree,
            "parity": self.parity,
            "brackets": entries,
        })
    }

    /// Builds the coordinate map of a supermatrix map `f`: column `j` is the coordinate vector
    /// of `f(B_j)`. The basis supermatrices must be real for the anti-linear case.
    pub fn conj_from_matrix_map(&self, f: impl Fn(&MatC) -> MatC, linearity: Linearity) -> Result<ConjMap> {
        let real = self.realization.as_ref().ok_or_else(|| Error::arg("algebra has no matrix realization"))?;
        let mut mat = MatC::zeros(self.dim, self.dim);
        for (j, b) in real.basis.iter().enumerate() {
            let c = real.coords(&f(b))?;
            for (i, x) in c.into_iter().enumerate() {
                mat.set(i, j, x);
            }
        }
        Ok(ConjMap { mat, linearity })
    }
}

/// Verdict of a structural check with the first offending basis indices.
#[derive(Clone, Debug, Serialize)]
pub struct SuperCheck {
    pub verdict: Verdict,
    pub checked: u64,
    pub counterexample: Option<SuperCounterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperCounterexample {
    pub check: String,
    pub basis_indices: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl SuperCheck {
    fn pass(checked: u64) -> Self {
        SuperCheck { verdict: Verdict::Pass, checked, counterexample: None }
    }

    fn fail(checked: u64, check: &str, idx: Vec<usize>, lhs: Vec<Scalar>, rhs: Vec<Scalar>) -> Self {
        SuperCheck {
            verdict: Verdict::Fail,
            checked,
            counterexample: Some(SuperCounterexample { check: check.into(), basis_indices: idx, lhs, rhs }),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

// ---------------------------------------------------------------------------------------------
// psl(m, n) and osp(2, 2n)

/// `psl(m,n)` inside `gl(m|n)`: `sl(m|n)` for `m ≠ n`, `sl(n|n)/ℂI` for `m = n`.
///
/// Basis order: the lower-left block (degree -1, row-major), the off-diagonal units of the two
/// diagonal blocks and the Cartan part (degree 0), the upper-right block (degree 1).
pub fn build_psl(m: usize, n: usize) -> Result<GradedLieSuper> {
    if m == 0 || n == 0 {
        return Err(Error::arg("psl(m,n) needs m, n >= 1"));
    }
    let size = m + n;
    let mut basis = Vec::new();
    let mut degree = Vec::new();
    for i in 0..n {
        for j in 0..m {
            basis.push(unit(size, m + i, j));
            degree.push(-1);
        }
    }
    for (lo, hi) in [(0, m), (m, size)] {
        for i in lo..hi {
            for j in lo..hi {
                if i != j {
                    basis.push(unit(size, i, j));
                    degree.push(0);
                }
            }
        }
    }
    for (lo, hi) in [(0, m), (m, size)] {
        for k in lo..hi - 1 {
            basis.push(&unit(size, k, k) - &unit(size, k + 1, k + 1));
            degree.push(0);
        }
    }
    if m != n {
        basis.push(&unit(size, m - 1, m - 1) + &unit(size, m, m));
        degree.push(0);
    }
    for i in 0..m {
        for j in 0..n {
            basis.push(unit(size, i, m + j));
            degree.push(1);
        }
    }
    let real = MatrixRealization::new(m, n, basis, m == n)?;
    GradedLieSuper::from_matrices(format!("psl({m},{n})"), real, degree)
}

/// The degree -1 element of `osp(2,2n)` attached to `v ∈ ℂ^{2n}`: row 1 of the upper-right
/// block is `v` and column 0 of the lower-left block is `J vᵗ`.
pub fn osp_minus(two_n: usize, v: &[Scalar]) -> MatC {
    osp_odd(two_n, v, 1, 0)
}

/// The degree 1 element attached to `u`: row 0 of the upper-right block is `u` and column 1 of
/// the lower-left block is `J uᵗ`.
pub fn osp_plus(two_n: usize, u: &[Scalar]) -> MatC {
    osp_odd(two_n, u, 0, 1)
}

fn osp_odd(two_n: usize, v: &[Scalar], row: usize, col: usize) -> MatC {
    let j = make_j(two_n).expect("even");
    let jv = j.apply(v);
    let mut x = MatC::zeros(2 + two_n, 2 + two_n);
    for k in 0..two_n {
        x.set(row, 2 + k, v[k].clone());
        x.set(2 + k, col, jv[k].clone());
    }
    x
}

/// `osp(2,2n)` inside `gl(2|2n)` with the short grading by `h₀ = diag(1,-1|0)`.
///
/// Basis order: `osp_minus(e_k)`, then `h₀` and `J S` for the symmetric units `S`, then
/// `osp_plus(e_k)`.
pub fn build_osp(n: usize) -> Result<GradedLieSuper> {
    if n == 0 {
        return Err(Error::arg("osp(2,2n) needs n >= 1"));
    }
    let two_n = 2 * n;
    let size = 2 + two_n;
    let e = |k: usize| crate::linalg::basis_vec(two_n, k);
    let j = make_j(two_n)?;
    let mut basis = Vec::new();
    let mut degree = Vec::new();
    for k in 0..two_n {
        basis.push(osp_minus(two_n, &e(k)));
        degree.push(-1);
    }
    basis.push(&unit(size, 0, 0) - &unit(size, 1, 1));
    degree.push(0);
    for a in 0..two_n {
        for b in a..two_n {
            let mut s = MatC::zeros(two_n, two_n);
            s.set(a, b, Scalar::one());
            s.set(b, a, Scalar::one());
            let mut x = MatC::zeros(size, size);
            x.set_block(2, 2, &(&j * &s));
            basis.push(x);
            degree.push(0);
        }
    }
    for k in 0..two_n {
        basis.push(osp_plus(two_n, &e(k)));
        degree.push(1);
    }
    let real = MatrixRealization::new(2, two_n, basis, false)?;
    GradedLieSuper::from_matrices(format!("osp(2,{two_n})"), real, degree)
}

// ---------------------------------------------------------------------------------------------
// Conjugations

/// `σ̃₁([[a,b],[c,d]]) = [[-āᵗ, c̄ᵗ], [-b̄ᵗ, -d̄ᵗ]]` for a supermatrix with even block size `m`.
pub fn sigma1(x: &MatC, m: usize) -> MatC {
    let size = x.rows();
    let n = size - m;
    let a = x.block(0, 0, m, m);
    let b = x.block(0, m, m, n);
    let c = x.block(m, 0, n, m);
    let d = x.block(m, m, n, n);
    let mut out = MatC::zeros(size, size);
    out.set_block(0, 0, &-&a.adjoint());
    out.set_block(0, m, &c.adjoint());
    out.set_block(m, 0, &-&b.adjoint());
    out.set_block(m, m, &-&d.adjoint());
    out
}

/// `τ±([[a,b],[c,d]]) = [[d̄, ±i c̄], [∓i b̄, ā]]` on `gl(n|n)`.
pub fn tau(x: &MatC, sign: i8) -> MatC {
    let n = x.rows() / 2;
    let s = if sign >= 0 { Scalar::i() } else { -Scalar::i() };
    let a = x.block(0, 0, n, n);
    let b = x.block(0, n, n, n);
    let c = x.block(n, 0, n, n);
    let d = x.block(n, n, n, n);
    let mut out = MatC::zeros(2 * n, 2 * n);
    out.set_block(0, 0, &d.conj());
    out.set_block(0, n, &c.conj().scale(&s));
    out.set_block(n, 0, &b.conj().scale(&-&s));
    out.set_block(n, n, &a.conj());
    out
}

/// `X ↦ diag(P, Q) X diag(P, Q)⁻¹`.
pub fn ad_block_diag(p: &MatC, q: &MatC) -> Result<impl Fn(&MatC) -> MatC> {
    let g = MatC::block_diag(&[p, q]);
    let gi = g.inverse()?;
    Ok(move |x: &MatC| &(&g * x) * &gi)
}

#[derive(Clone, Debug)]
pub struct GradedConj {
    pub map: ConjMap,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedConjReport {
    pub kind: String,
    pub linearity: Linearity,
    pub automorphism: Verdict,
    pub degree_reversal: Verdict,
    pub signed_involution: Verdict,
    pub counterexample: Option<SuperCounterexample>,
}

impl GradedConjReport {
    pub fn passed(&self) -> bool {
        self.automorphism.passed() && self.degree_reversal.passed() && self.signed_involution.passed()
    }
}

/// Checks `σ([x,y]) = [σx, σy]` on basis pairs, `σ(g_j) ⊆ g_{-j}` and `σ² = (-1)^k` on `g_k`.
pub fn check_graded_conjugation(g: &GradedLieSuper, sigma: &GradedConj) -> GradedConjReport {
    let d = g.dim;
    let map = &sigma.map;
    let mut cx = None;
    let images: Vec<Vec<Scalar>> = (0..d).map(|j| map.apply(&g.basis(j))).collect();

    let mut degree_ok = true;
    for (j, img) in images.iter().enumerate() {
        for (i, x) in img.iter().enumerate() {
            if !x.is_negligible(g.tol) && g.degree[i] != -g.degree[j] {
                degree_ok = false;
                cx.get_or_insert(SuperCounterexample {
                    check: "degree_reversal".into(),
                    basis_indices: vec![j],
                    lhs: img.clone(),
                    rhs: vec![],
                });
            }
        }
    }

    let sq = map.square_matrix();
    let signs: Vec<Scalar> = g.degree.iter().map(|&k| Scalar::from_i64(if k.rem_euclid(2) == 1 { -1 } else { 1 })).collect();
    let target = MatC::diag(&signs);
    let tol = if sq.is_exact() { 0.0 } else { g.tol };
    let inv_ok = sq.approx_eq(&target, tol);
    if !inv_ok {
        let j = (0..d).find(|&j| !vec_approx_eq(&sq.column(j), &target.column(j), tol)).unwrap_or(0);
        cx.get_or_insert(SuperCounterexample {
            check: "signed_involution".into(),
            basis_indices: vec![j],
            lhs: sq.column(j),
            rhs: target.column(j),
        });
    }

    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
    let bad = pairs.par_iter().find_map_first(|&(i, j)| {
        let lhs = map.apply(&to_dense(g.bracket_basis(i, j), d));
        let rhs = g.bracket(&images[i], &images[j]);
        (!g.close(&lhs, &rhs)).then_some((i, j, lhs, rhs))
    });
    let auto_ok = bad.is_none();
    if let Some((i, j, lhs, rhs)) = bad {
        cx.get_or_insert(SuperCounterexample { check: "automorphism".into(), basis_indices: vec![i, j], lhs, rhs });
    }
    GradedConjReport {
        kind: sigma.kind.clone(),
        linearity: map.linearity,
        automorphism: Verdict::from_bool(auto_ok),
        degree_reversal: Verdict::from_bool(degree_ok),
        signed_involution: Verdict::from_bool(inv_ok),
        counterexample: cx,
    }
}

/// `σ̃₁` on `psl(m,n)`.
pub fn build_sigma1(g: &GradedLieSuper) -> Result<GradedConj> {
    let m = g.realization().ok_or_else(|| Error::arg("needs a matrix realization"))?.m;
    Ok(GradedConj { map: g.conj_from_matrix_map(|x| sigma1(x, m), Linearity::AntiLinear)?, kind: "sigma1".into() })
}

/// `Ad diag(S^m_p, S^n_q) ∘ σ̃₁` on `psl(m,n)`.
pub fn build_conj_psl(g: &GradedLieSuper, p: usize, q: usize) -> Result<GradedConj> {
    let real = g.realization().ok_or_else(|| Error::arg("needs a matrix realization"))?;
    let (m, n) = (real.m, real.n);
    if p > m || q > n {
        return Err(Error::arg(format!("conjugation of psl({m},{n}) needs p <= {m} and q <= {n}")));
    }
    let ad = ad_block_diag(&make_s(m, p)?, &make_s(n, q)?)?;
    Ok(GradedConj {
        map: g.conj_from_matrix_map(|x| ad(&sigma1(x, m)), Linearity::AntiLinear)?,
        kind: format!("Ad diag(S{m}_{p},S{n}_{q}) o sigma1"),
    })
}

/// `τ±` on `psl(n,n)`.
pub fn build_tau(g: &GradedLieSuper, sign: i8) -> Result<GradedConj> {
    let real = g.realization().ok_or_else(|| Error::arg("needs a matrix realization"))?;
    if real.m != real.n {
        return Err(Error::arg("τ± is defined on psl(n,n)"));
    }
    Ok(GradedConj {
        map: g.conj_from_matrix_map(|x| tau(x, sign), Linearity::AntiLinear)?,
        kind: format!("tau{}", if sign >= 0 { "+" } else { "-" }),
    })
}

/// The two normal forms of conjugations of `osp(2,2n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OspVariant {
    /// `A = I₂`, `H = H^{2n}_p`.
    Hermitian(usize),
    /// `A = diag(i, -i)`, `H = i S^{2n}_n`.
    AntiHermitian,
}

/// `Ad diag(±A, H) ∘ σ̃₁` on `osp(2,2n)`.
pub fn build_conj_osp(g: &GradedLieSuper, variant: OspVariant, sign: i8) -> Result<GradedConj> {
    let two_n = g.realization().ok_or_else(|| Error::arg("needs a matrix realization"))?.n;
    let s = Scalar::from_i64(if sign >= 0 { 1 } else { -1 });
    let (a, h) = match variant {
        OspVariant::Hermitian(p) => {
            if p > two_n / 2 {
                return Err(Error::arg(format!("hermitian variant needs p <= {}", two_n / 2)));
            }
            (MatC::identity(2), crate::linalg::make_h(two_n, p)?)
        }
        OspVariant::AntiHermitian => (
            MatC::diag(&[Scalar::i(), -Scalar::i()]),
            make_s(two_n, two_n / 2)?.scale(&Scalar::i()),
        ),
    };
    let mut c = build_conj_osp_with(g, &a.scale(&s), &h)?;
    c.kind = format!("Ad diag({}A,H) o sigma1 [{variant:?}]", if sign >= 0 { "+" } else { "-" });
    Ok(c)
}

/// `Ad diag(P, H) ∘ σ̃₁` on `osp(2,2n)` for a symplectic `H` and an invertible 2×2 `P`.
pub fn build_conj_osp_with(g: &GradedLieSuper, p: &MatC, h: &MatC) -> Result<GradedConj> {
    let two_n = g.realization().ok_or_else(|| Error::arg("needs a matrix realization"))?.n;
    if h.rows() != two_n || h.cols() != two_n {
        return Err(Error::arg(format!("H must be {two_n}x{two_n}")));
    }
    let tol = if h.is_exact() { 0.0 } else { DEFAULT_TOL };
    if !is_symplectic(h, tol)? {
        return Err(Error::arg("H is not symplectic"));
    }
    let ad = ad_block_diag(p, h)?;
    Ok(GradedConj {
        map: g.conj_from_matrix_map(|x| ad(&sigma1(x, 2)), Linearity::AntiLinear)?,
        kind: "Ad diag(P,H) o sigma1".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psl_dimensions() {
        assert_eq!(build_psl(1, 2).unwrap().graded_dims(), (2, 4, 2));
        let g = build_psl(2, 2).unwrap();
        assert_eq!(g.dim, 14);
        assert_eq!(g.graded_dims(), (4, 6, 4));
        assert_eq!(build_psl(2, 3).unwrap().dim, 24);
    }

    #[test]
    fn psl_axioms() {
        for (m, n) in [(1, 2), (2, 2), (2, 1)] {
            let g = build_psl(m, n).unwrap();
            assert!(g.check_super_antisymmetry().passed());
            assert!(g.check_super_jacobi().passed(), "psl({m},{n})");
            assert!(g.check_grading().passed());
            assert!(g.check_minus_plus_spans_zero());
        }
    }

    #[test]
    fn osp_dimensions_and_axioms() {
        let g = build_osp(1).unwrap();
        assert_eq!(g.dim, 8);
        assert_eq!(g.graded_dims(), (2, 4, 2));
        assert!(g.check_super_jacobi().passed());
        assert!(g.check_grading().passed());
        assert!(g.check_minus_plus_spans_zero());
        assert!(g.parity.iter().zip(&g.degree).all(|(&p, &d)| (p == 1) == (d != 0)));
        assert_eq!(build_osp(2).unwrap().graded_dims(), (4, 11, 4));
    }

    #[test]
    fn conjugations_pass() {
        let g = build_psl(2, 2).unwrap();
        for c in [build_tau(&g, 1).unwrap(), build_tau(&g, -1).unwrap(), build_sigma1(&g).unwrap(), build_conj_psl(&g, 2, 2).unwrap()] {
            let r = check_graded_conjugation(&g, &c);
            assert!(r.passed(), "{} {:?}", c.kind, r.counterexample);
        }
        let g = build_psl(2, 3).unwrap();
        assert!(check_graded_conjugation(&g, &build_conj_psl(&g, 1, 2).unwrap()).passed());
        let g = build_psl(1, 2).unwrap();
        assert!(check_graded_conjugation(&g, &build_conj_psl(&g, 0, 0).unwrap()).passed());
        assert!(build_conj_psl(&g, 2, 0).is_err());
    }

    #[test]
    fn osp_conjugations_pass() {
        let g = build_osp(1).unwrap();
        let c = build_conj_osp(&g, OspVariant::Hermitian(1), 1).unwrap();
        assert!(check_graded_conjugation(&g, &c).passed());
        let g2 = build_osp(2).unwrap();
        let c = build_conj_osp(&g2, OspVariant::AntiHermitian, -1).unwrap();
        assert!(check_graded_conjugation(&g2, &c).passed());
        let bad = MatC::diag(&[Scalar::from_i64(2), Scalar::one()]);
        assert!(build_conj_osp_with(&g, &MatC::identity(2), &bad).is_err());
    }

    #[test]
    fn identity_is_not_a_graded_conjugation() {
        let g = build_psl(1, 2).unwrap();
        let id = GradedConj { map: ConjMap::linear(MatC::identity(g.dim)), kind: "id".into() };
        let r = check_graded_conjugation(&g, &id);
        assert!(!r.passed());
        assert_eq!(r.degree_reversal, Verdict::Fail);
    }

    #[test]
    fn simplicity() {
        assert!(build_psl(2, 2).unwrap().is_simple());
        assert!(build_osp(1).unwrap().is_simple());
    }
}
