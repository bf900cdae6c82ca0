//! Dense complex matrices, (anti-)linear maps, row reduction and the standard constant matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MatC {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl MatC {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::arg(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        let mut m = MatC { rows, cols, data };
        m.unify_backend();
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatC { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        let mut m = MatC { rows, cols, data };
        m.unify_backend();
        m
    }

    /// Integer matrix from row-major entries.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        MatC { rows, cols, data: entries.iter().map(|&v| Scalar::from_i64(v)).collect() }
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m.unify_backend();
        m
    }

    pub fn row_vector(v: &[Scalar]) -> Self {
        Self::from_fn(1, v.len(), |_, j| v[j].clone())
    }

    pub fn col_vector(v: &[Scalar]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    /// Row-major reshape of a coordinate vector.
    pub fn from_coords(rows: usize, cols: usize, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), rows * cols);
        let mut m = MatC { rows, cols, data: v.to_vec() };
        m.unify_backend();
        m
    }

    fn unify_backend(&mut self) {
        if self.data.iter().any(|x| !x.is_exact()) {
            for x in self.data.iter_mut() {
                if x.is_exact() {
                    *x = x.to_float();
                }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let float = !v.is_exact() && self.is_exact();
        self.data[i * self.cols + j] = v;
        if float {
            self.unify_backend();
        } else if !self.is_exact() {
            let x = &mut self.data[i * self.cols + j];
            if x.is_exact() {
                *x = x.to_float();
            }
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn backend(&self) -> Backend {
        if self.is_exact() {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(Scalar::is_exact)
    }

    pub fn to_float(&self) -> MatC {
        MatC { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_float).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> MatC {
        MatC::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> MatC {
        MatC { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> MatC {
        MatC::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: &Scalar) -> MatC {
        MatC::from_fn(self.rows, self.cols, |i, j| s * self.get(i, j))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatC {
        MatC::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &MatC) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[&MatC]) -> MatC {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = MatC::zeros(r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// `max |a_ij - b_ij|`; shapes must agree.
    pub fn max_abs_diff(&self, other: &MatC) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }

    /// Exact equality when both sides are exact, otherwise `max_abs_diff <= tol`.
    pub fn approx_eq(&self, other: &MatC, tol: f64) -> bool {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return false;
        }
        if self.is_exact() && other.is_exact() {
            self == other
        } else {
            self.max_abs_diff(other) <= tol
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_antihermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&-&self.adjoint(), tol)
    }

    /// Gauss-Jordan inverse with partial pivoting (largest modulus for floats, first nonzero
    /// for exact entries).
    pub fn inverse(&self) -> Result<MatC> {
        if !self.is_square() {
            return Err(Error::arg("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let exact = self.is_exact();
        let mut a = self.clone();
        let mut inv = if exact { MatC::identity(n) } else { MatC::identity(n).to_float() };
        for col in 0..n {
            let pivot = if exact {
                (col..n).find(|&r| !a.get(r, col).is_zero())
            } else {
                (col..n)
                    .max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
                    .filter(|&r| a.get(r, col).abs() > 1e-300)
            };
            let Some(p) = pivot else {
                return Err(Error::Numerical("matrix is singular".into()));
            };
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = a.get(col, col).inv().expect("nonzero pivot");
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.axpy_row(r, col, &f);
                    inv.axpy_row(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by elimination.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let exact = self.is_exact();
        let mut a = self.clone();
        let mut det = if exact { Scalar::one() } else { Scalar::float(1.0, 0.0) };
        for col in 0..n {
            let pivot = if exact {
                (col..n).find(|&r| !a.get(r, col).is_zero())
            } else {
                (col..n).max_by(|&x, &y| a.get(x, col).abs().total_cmp(&a.get(y, col).abs()))
            };
            let Some(p) = pivot else { return Scalar::zero_in(self.backend()) };
            if a.get(p, col).is_zero() {
                return Scalar::zero_in(self.backend());
            }
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det = &det * &piv;
            let pinv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let f = a.get(r, col) * &pinv;
                    a.axpy_row(r, col, &f);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = s * &self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    /// row_r -= f * row_src
    fn axpy_row(&mut self, r: usize, src: usize, f: &Scalar) {
        for j in 0..self.cols {
            let t = f * &self.data[src * self.cols + j];
            self.data[r * self.cols + j] -= &t;
        }
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_c64())
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> MatC {
        MatC::from_fn(m.nrows(), m.ncols(), |i, j| Scalar::Float(m[(i, j)]))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// `{"mode", "rows", "cols", "data"}` with exact entries as `[re_num, re_den, im_num, im_den]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": if self.is_exact() { "exact" } else { "float" },
            "rows": self.rows,
            "cols": self.cols,
            "data": self.data.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MatC> {
        let get_usize = |k: &str| {
            v.get(k)
                .and_then(|x| x.as_u64())
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("matrix JSON needs `{k}`")))
        };
        let rows = get_usize("rows")?;
        let cols = get_usize("cols")?;
        let data = v
            .get("data")
            .and_then(|d| d.as_array())
            .ok_or_else(|| Error::Parse("matrix JSON needs `data`".into()))?;
        let entries = data.iter().map(Scalar::from_json).collect::<Result<Vec<_>>>()?;
        let m = MatC::new(rows, cols, entries)?;
        if let Some(mode) = v.get("mode").and_then(|x| x.as_str()) {
            let declared_exact = mode == "exact";
            if declared_exact != m.is_exact() {
                return Err(Error::Parse(format!("matrix mode `{mode}` does not match its entries")));
            }
        }
        Ok(m)
    }

    /// Parses `a,b;c,d` (rows separated by `;`, entries by `,`), each entry a scalar literal.
    pub fn parse_literal(s: &str) -> Result<MatC> {
        let rows: Vec<Vec<Scalar>> = s
            .split(';')
            .map(|r| r.split(',').map(|e| e.trim().parse::<Scalar>()).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let ncols = rows.first().map_or(0, Vec::len);
        if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse(format!("ragged or empty matrix literal `{s}`")));
        }
        let nrows = rows.len();
        MatC::new(nrows, ncols, rows.into_iter().flatten().collect())
    }
}

impl Serialize for MatC {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatC {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        MatC::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl MatC {
    /// One-line form `[[a, b], [c, d]]`.
    pub fn compact(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| format!("[{}]", (0..self.cols).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl fmt::Display for MatC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &MatC {
    type Output = MatC;
    fn mul(self, rhs: &MatC) -> MatC {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = MatC::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        if !(self.is_exact() && rhs.is_exact()) {
            out.unify_backend();
            if out.is_exact() {
                out = out.to_float();
            }
        }
        out
    }
}

impl Add for &MatC {
    type Output = MatC;
    fn add(self, rhs: &MatC) -> MatC {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatC::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &MatC {
    type Output = MatC;
    fn sub(self, rhs: &MatC) -> MatC {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatC::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Neg for &MatC {
    type Output = MatC;
    fn neg(self) -> MatC {
        MatC { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// `S^n_p = diag(I_p, -I_{n-p})`.
pub fn make_s(n: usize, p: usize) -> Result<MatC> {
    if p > n {
        return Err(Error::arg(format!("S^n_p needs p <= n, got n={n}, p={p}")));
    }
    Ok(MatC::diag(&(0..n).map(|i| Scalar::from_i64(if i < p { 1 } else { -1 })).collect::<Vec<_>>()))
}

/// `J_{2n} = ((0, I_n), (-I_n, 0))`.
pub fn make_j(two_n: usize) -> Result<MatC> {
    if two_n % 2 != 0 {
        return Err(Error::arg(format!("J needs an even size, got {two_n}")));
    }
    let n = two_n / 2;
    let mut m = MatC::zeros(two_n, two_n);
    for i in 0..n {
        m.set(i, n + i, Scalar::one());
        m.set(n + i, i, Scalar::from_i64(-1));
    }
    Ok(m)
}

/// `H^{2n}_p = diag(S^n_p, S^n_p)`.
pub fn make_h(two_n: usize, p: usize) -> Result<MatC> {
    if two_n % 2 != 0 {
        return Err(Error::arg(format!("H needs an even size, got {two_n}")));
    }
    let s = make_s(two_n / 2, p)?;
    Ok(MatC::block_diag(&[&s, &s]))
}

/// `M^t J M = J`, exactly for exact matrices and up to `tol` in the max norm otherwise.
pub fn is_symplectic(m: &MatC, tol: f64) -> Result<bool> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(Error::arg("symplectic test needs a square matrix of even size"));
    }
    let j = make_j(m.rows())?;
    let lhs = &(&m.transpose() * &j) * m;
    Ok(lhs.approx_eq(&j, tol))
}

/// Eigen-decomposition of a hermitian matrix: real eigenvalues and a unitary matrix of
/// eigenvectors (columns), in float arithmetic.
pub fn hermitian_eigen(m: &MatC) -> (Vec<f64>, MatC) {
    let eig = nalgebra::SymmetricEigen::new(m.to_nalgebra());
    (eig.eigenvalues.iter().copied().collect(), MatC::from_nalgebra(&eig.eigenvectors))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linearity {
    Linear,
    #[serde(rename = "antilinear")]
    AntiLinear,
}

/// A linear or anti-linear map on coordinate vectors. Anti-linear maps act as
/// `x ↦ mat · x̄`: conjugate the input first, then apply the matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjMap {
    pub mat: MatC,
    pub linearity: Linearity,
}

impl ConjMap {
    pub fn linear(mat: MatC) -> Self {
        ConjMap { mat, linearity: Linearity::Linear }
    }

    pub fn antilinear(mat: MatC) -> Self {
        ConjMap { mat, linearity: Linearity::AntiLinear }
    }

    pub fn is_antilinear(&self) -> bool {
        self.linearity == Linearity::AntiLinear
    }

    pub fn dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        match self.linearity {
            Linearity::Linear => self.mat.apply(v),
            Linearity::AntiLinear => {
                let c: Vec<Scalar> = v.iter().map(Scalar::conj).collect();
                self.mat.apply(&c)
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ConjMap) -> ConjMap {
        let inner = match self.linearity {
            Linearity::Linear => other.mat.clone(),
            Linearity::AntiLinear => other.mat.conj(),
        };
        let linearity = if self.linearity == other.linearity { Linearity::Linear } else { Linearity::AntiLinear };
        ConjMap { mat: &self.mat * &inner, linearity }
    }

    /// The linear matrix of `self ∘ self` (`mat · conj(mat)` in the anti-linear case).
    pub fn square_matrix(&self) -> MatC {
        self.compose(self).mat
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "linearity": self.linearity, "mat": self.mat.to_json() })
    }
}

/// Incremental row reduction that keeps track of how each reduced row is expressed in terms
/// of the inserted independent vectors, so that coordinates in that basis can be read off.
#[derive(Clone, Debug)]
pub struct Span {
    len: usize,
    tol: f64,
    rows: Vec<SpanRow>,
    basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
struct SpanRow {
    pivot: usize,
    row: Vec<Scalar>,
    combo: Vec<Scalar>,
}

impl Span {
    /// `tol` only matters for float vectors; exact vectors are reduced exactly.
    pub fn new(len: usize, tol: f64) -> Self {
        Span { len, tol, rows: Vec::new(), basis: Vec::new() }
    }

    pub fn exact(len: usize) -> Self {
        Self::new(len, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// The inserted independent vectors, in insertion order.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    fn negligible(&self, x: &Scalar) -> bool {
        x.is_negligible(self.tol)
    }

    /// Reduces `v` against the stored rows; returns the residual and the multipliers used.
    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(v.len(), self.len, "span vector length mismatch");
        let mut w = v.to_vec();
        let mut factors = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let f = w[r.pivot].clone();
            if !f.is_zero() {
                for (j, x) in r.row.iter().enumerate() {
                    if !x.is_zero() {
                        let t = &f * x;
                        w[j] -= &t;
                    }
                }
                w[r.pivot] = Scalar::zero_in(f.backend());
            }
            factors.push(f);
        }
        (w, factors)
    }

    fn combine(&self, factors: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.basis.len()];
        for (r, f) in self.rows.iter().zip(factors) {
            if f.is_zero() {
                continue;
            }
            for (k, c) in r.combo.iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &(f * c);
                }
            }
        }
        out
    }

    fn pick_pivot(&self, w: &[Scalar]) -> Option<usize> {
        if w.iter().all(Scalar::is_exact) {
            w.iter().position(|x| !x.is_zero())
        } else {
            let (idx, val) = w
                .iter()
                .enumerate()
                .map(|(i, x)| (i, x.abs()))
                .max_by(|a, b| a.1.total_cmp(&b.1))?;
            (val > self.tol).then_some(idx)
        }
    }

    /// Inserts `v`; returns `true` when it was independent of the current span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let (mut w, factors) = self.reduce(v);
        let Some(p) = self.pick_pivot(&w) else { return false };
        if self.negligible(&w[p]) {
            return false;
        }
        let k = self.basis.len();
        let mut combo = self.combine(&factors);
        for c in combo.iter_mut() {
            *c = -&*c;
        }
        combo.push(Scalar::one());
        let pinv = w[p].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &pinv;
            }
        }
        for c in combo.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &pinv;
            }
        }
        for r in self.rows.iter_mut() {
            r.combo.push(Scalar::zero());
        }
        self.rows.push(SpanRow { pivot: p, row: w, combo });
        debug_assert_eq!(self.rows.len(), k + 1);
        self.basis.push(v.to_vec());
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let (w, _) = self.reduce(v);
        w.iter().all(|x| self.negligible(x))
    }

    /// Coordinates of `v` in the inserted basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (w, factors) = self.reduce(v);
        if w.iter().all(|x| self.negligible(x)) {
            Some(self.combine(&factors))
        } else {
            None
        }
    }
}

/// Reduced row echelon form. Returns the reduced nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize, tol: f64) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut span = Span::new(ncols, tol);
    for r in rows {
        span.insert(r);
    }
    let mut reduced: Vec<(usize, Vec<Scalar>)> =
        span.rows.iter().map(|r| (r.pivot, r.row.clone())).collect();
    // Back-substitute so that every pivot column is a unit vector.
    for a in 0..reduced.len() {
        let (pa, ra) = (reduced[a].0, reduced[a].1.clone());
        for (b, (_, rb)) in reduced.iter_mut().enumerate() {
            if b != a && !rb[pa].is_zero() {
                let f = rb[pa].clone();
                for (j, x) in ra.iter().enumerate() {
                    if !x.is_zero() {
                        let t = &f * x;
                        rb[j] -= &t;
                    }
                }
                rb[pa] = Scalar::zero_in(f.backend());
            }
        }
    }
    reduced.sort_by_key(|(p, _)| *p);
    let pivots = reduced.iter().map(|(p, _)| *p).collect();
    (reduced.into_iter().map(|(_, r)| r).collect(), pivots)
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize, tol: f64) -> Vec<Vec<Scalar>> {
    let (reduced, pivots) = rref(rows, ncols, tol);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (r, &p) in reduced.iter().zip(&pivots) {
            if !r[free].is_zero() {
                v[p] = -&r[free];
            }
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize, tol: f64) -> usize {
    let mut span = Span::new(ncols, tol);
    rows.iter().filter(|r| span.insert(r)).count()
}

/// Entrywise `max |a_i - b_i|`.
pub fn vec_max_diff(a: &[Scalar], b: &[Scalar]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dist(y)).fold(0.0, f64::max)
}

/// Exact equality if both sides are exact, else within `tol`.
pub fn vec_approx_eq(a: &[Scalar], b: &[Scalar], tol: f64) -> bool {
    a.len() == b.len()
        && if a.iter().chain(b).all(Scalar::is_exact) { a == b } else { vec_max_diff(a, b) <= tol }
}

pub fn vec_scale(v: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| s * x).collect()
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn basis_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_mat(r: usize, c: usize) -> impl Strategy<Value = MatC> {
        proptest::collection::vec((-4i64..5, -4i64..5), r * c).prop_map(move |v| {
            MatC::new(r, c, v.into_iter().map(|(a, b)| Scalar::gauss_int(a, b)).collect()).unwrap()
        })
    }

    #[test]
    fn constants() {
        assert_eq!(make_s(2, 2).unwrap(), MatC::identity(2));
        assert_eq!(make_s(2, 1).unwrap(), MatC::from_i64(2, 2, &[1, 0, 0, -1]));
        assert_eq!(make_s(3, 0).unwrap(), -&MatC::identity(3));
        assert!(make_s(2, 3).is_err());
        assert_eq!(make_j(2).unwrap(), MatC::from_i64(2, 2, &[0, 1, -1, 0]));
        let j4 = make_j(4).unwrap();
        assert_eq!(&j4 * &j4, -&MatC::identity(4));
        assert_eq!(make_j(2).unwrap().transpose(), -&make_j(2).unwrap());
        assert!(make_j(3).is_err());
        assert_eq!(make_h(2, 1).unwrap(), MatC::identity(2));
        assert_eq!(make_h(4, 1).unwrap(), MatC::diag(&[1, -1, 1, -1].map(Scalar::from_i64)));
        assert_eq!(make_h(4, 0).unwrap(), -&MatC::identity(4));
        assert!(make_h(4, 3).is_err());
    }

    #[test]
    fn symplectic_predicate() {
        assert!(is_symplectic(&MatC::identity(4), 0.0).unwrap());
        assert!(is_symplectic(&make_j(4).unwrap(), 0.0).unwrap());
        assert!(!is_symplectic(&MatC::diag(&[2, 1, 1, 1].map(Scalar::from_i64)), 0.0).unwrap());
        assert!(is_symplectic(&MatC::identity(3), 0.0).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let m = MatC::from_i64(3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, MatC::identity(3));
        assert_eq!(m.det(), Scalar::from_i64(5));
        assert!(MatC::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_err());
        let f = m.to_float();
        assert!((&f * &f.inverse().unwrap()).approx_eq(&MatC::identity(3).to_float(), 1e-12));
    }

    #[test]
    fn antilinear_map_squares() {
        let m = MatC::new(2, 2, vec![Scalar::zero(), Scalar::i(), Scalar::one(), Scalar::zero()]).unwrap();
        let c = ConjMap::antilinear(m.clone());
        for k in 0..2 {
            let e = basis_vec(2, k);
            assert_eq!(c.apply(&c.apply(&e)), c.square_matrix().apply(&e));
        }
        assert_eq!(c.square_matrix(), &m * &m.conj());
    }

    #[test]
    fn span_coordinates() {
        let mut s = Span::exact(3);
        assert!(s.insert(&[1, 1, 0].map(Scalar::from_i64)));
        assert!(s.insert(&[0, 1, 1].map(Scalar::from_i64)));
        assert!(!s.insert(&[1, 2, 1].map(Scalar::from_i64)));
        let c = s.coords(&[2, 3, 1].map(Scalar::from_i64)).unwrap();
        assert_eq!(c, vec![Scalar::from_i64(2), Scalar::from_i64(1)]);
        assert!(s.coords(&[0, 0, 1].map(Scalar::from_i64)).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![[1, 2, 3].map(Scalar::from_i64).to_vec()];
        let ns = nullspace(&rows, 3, 0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = rows[0].iter().zip(&v).fold(Scalar::zero(), |a, (x, y)| a + x * y);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn json_roundtrip() {
        let m = MatC::new(1, 2, vec![Scalar::gauss(1, 2, -3, 4), Scalar::i()]).unwrap();
        assert_eq!(MatC::from_json(&m.to_json()).unwrap(), m);
        let f = m.to_float();
        assert_eq!(MatC::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(MatC::parse_literal("0,1;-1,0").unwrap(), make_j(2).unwrap());
    }

    proptest! {
        #[test]
        fn conj_involution(m in arb_mat(2, 3)) {
            prop_assert_eq!(m.conj().conj(), m);
        }

        #[test]
        fn antilinear_apply(m in arb_mat(3, 3), v in proptest::collection::vec((-3i64..4, -3i64..4), 3)) {
            let v: Vec<Scalar> = v.into_iter().map(|(a, b)| Scalar::gauss_int(a, b)).collect();
            let c = ConjMap::antilinear(m);
            for lam in [Scalar::one(), Scalar::i(), Scalar::gauss_int(1, 2)] {
                prop_assert_eq!(c.apply(&vec_scale(&v, &lam)), vec_scale(&c.apply(&v), &lam.conj()));
            }
        }

        #[test]
        fn product_associative(a in arb_mat(2, 3), b in arb_mat(3, 2), c in arb_mat(2, 2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }
}
