//! Finite-dimensional 3-algebras given by a bracket oracle on coordinate vectors, and the
//! checks that certify them: anti-commutativity, the fundamental identity, slot-2
//! (anti-)linearity, center, simplicity, physicalization and the Jordan 3-superalgebra axioms.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{basis_vec, nullspace, vec_approx_eq, vec_max_diff, vec_scale, ConjMap, Linearity, MatC, Span};
use crate::scalar::Scalar;
use crate::DEFAULT_TOL;

pub type BracketFn = Arc<dyn Fn(&[Scalar], &[Scalar], &[Scalar]) -> Vec<Scalar> + Send + Sync>;

/// Sparse coordinate vector: `(index, nonzero value)` pairs in increasing index order.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// The real basis vector `j` of the realification: `e_j` for `j < dim`, `i·e_{j-dim}` otherwise.
pub fn real_basis_vec(dim: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    if j < dim {
        v[j] = Scalar::one();
    } else {
        v[j - dim] = Scalar::i();
    }
    v
}

/// A finite-dimensional 3-algebra: a bracket on `ℂ^dim`, complex-linear in slots 1 and 3 and
/// linear (algebraic) or anti-linear (physical) in slot 2.
#[derive(Clone)]
pub struct TriSystem {
    pub dim: usize,
    pub slot2: Linearity,
    pub label: String,
    /// Residual tolerance used when the bracket produces float values.
    pub tol: f64,
    bracket: BracketFn,
}

impl fmt::Debug for TriSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TriSystem")
            .field("dim", &self.dim)
            .field("slot2", &self.slot2)
            .field("label", &self.label)
            .finish()
    }
}

impl TriSystem {
    pub fn new(
        dim: usize,
        slot2: Linearity,
        label: impl Into<String>,
        bracket: impl Fn(&[Scalar], &[Scalar], &[Scalar]) -> Vec<Scalar> + Send + Sync + 'static,
    ) -> Self {
        TriSystem { dim, slot2, label: label.into(), tol: DEFAULT_TOL, bracket: Arc::new(bracket) }
    }

    pub fn from_fn(dim: usize, slot2: Linearity, label: impl Into<String>, bracket: BracketFn) -> Self {
        TriSystem { dim, slot2, label: label.into(), tol: DEFAULT_TOL, bracket }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_physical(&self) -> bool {
        self.slot2 == Linearity::AntiLinear
    }

    pub fn bracket_fn(&self) -> BracketFn {
        self.bracket.clone()
    }

    pub fn eval(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
        debug_assert!(a.len() == self.dim && b.len() == self.dim && c.len() == self.dim);
        (self.bracket)(a, b, c)
    }

    /// Bracket of basis vectors, with slot 2 indexed in the realification.
    pub fn eval_basis(&self, i: usize, jr: usize, k: usize) -> Vec<Scalar> {
        self.eval(&basis_vec(self.dim, i), &real_basis_vec(self.dim, jr), &basis_vec(self.dim, k))
    }

    /// All brackets `[e_i, b_j, e_k]` with `b_j` running over the real basis of the
    /// realification, stored sparsely.
    pub fn table(&self) -> BracketTable {
        let d = self.dim;
        let entries: Vec<SparseVec> = (0..d * 2 * d * d)
            .into_par_iter()
            .map(|idx| {
                let k = idx % d;
                let jr = (idx / d) % (2 * d);
                let i = idx / (2 * d * d);
                to_sparse(&self.eval_basis(i, jr, k))
            })
            .collect();
        BracketTable { dim: d, entries }
    }

    /// The bracket `λ[·,·,·]`.
    pub fn scaled(&self, lambda: &Scalar) -> TriSystem {
        let f = self.bracket.clone();
        let lam = lambda.clone();
        TriSystem {
            dim: self.dim,
            slot2: self.slot2,
            label: format!("{}*({})", lambda, self.label),
            tol: self.tol,
            bracket: Arc::new(move |a, b, c| vec_scale(&f(a, b, c), &lam)),
        }
    }

    pub fn negated(&self) -> TriSystem {
        self.scaled(&Scalar::from_i64(-1)).with_label(format!("-({})", self.label))
    }

    /// `true` when every basis bracket vanishes.
    pub fn is_zero_bracket(&self) -> bool {
        self.table().entries.iter().all(Vec::is_empty)
    }
}

/// Basis brackets `T[i][j'][k] = [e_i, b_{j'}, e_k]` over the realified slot 2.
#[derive(Clone, Debug)]
pub struct BracketTable {
    pub dim: usize,
    pub entries: Vec<SparseVec>,
}

impl BracketTable {
    #[inline]
    pub fn get(&self, i: usize, jr: usize, k: usize) -> &SparseVec {
        &self.entries[(i * 2 * self.dim + jr) * self.dim + k]
    }

    /// `[e_a, b_{j'}, v]` for a general vector `v` (slot 3 is complex-linear).
    fn slot3(&self, a: usize, jr: usize, v: &SparseVec, out: &mut [Scalar], sign: &Scalar) {
        for (l, vl) in v {
            let f = sign * vl;
            for (m, x) in self.get(a, jr, *l) {
                out[*m] += &(&f * x);
            }
        }
    }

    /// `[v, b_{j'}, e_z]` (slot 1 is complex-linear).
    fn slot1(&self, v: &SparseVec, jr: usize, z: usize, out: &mut [Scalar], sign: &Scalar) {
        for (l, vl) in v {
            let f = sign * vl;
            for (m, x) in self.get(*l, jr, z) {
                out[*m] += &(&f * x);
            }
        }
    }

    /// `[e_x, w, e_z]` for a general complex vector `w`: slot 2 is only real-linear, so `w` is
    /// split as `Σ Re(w_l) e_l + Im(w_l) (i e_l)`.
    fn slot2(&self, x: usize, w: &SparseVec, z: usize, out: &mut [Scalar], sign: &Scalar) {
        let d = self.dim;
        for (l, wl) in w {
            let re = wl.re();
            let im = wl.im();
            if !re.is_zero() {
                let f = sign * &re;
                for (m, v) in self.get(x, *l, z) {
                    out[*m] += &(&f * v);
                }
            }
            if !im.is_zero() {
                let f = sign * &im;
                for (m, v) in self.get(x, *l + d, z) {
                    out[*m] += &(&f * v);
                }
            }
        }
    }

    /// `[b_{j'}, e_a, b_{y'}]` where both real basis vectors sit in complex-linear slots.
    fn outer_pair(&self, jr: usize, a: usize, yr: usize) -> SparseVec {
        let d = self.dim;
        let (j, ji) = (jr % d, jr >= d);
        let (y, yi) = (yr % d, yr >= d);
        let base = self.get(j, a, y);
        let factor = match (ji as u8) + (yi as u8) {
            0 => return base.clone(),
            1 => Scalar::i(),
            _ => Scalar::from_i64(-1),
        };
        base.iter().map(|(m, v)| (*m, &factor * v)).collect()
    }

    /// `[a, b, [x, y, z]] - [[a,b,x],y,z] + [x,[b,a,y],z] - [x,y,[a,b,z]]` on basis inputs,
    /// with `b` and `y` indexed in the realification.
    fn fi_defect(&self, q: Quintuple) -> Vec<Scalar> {
        let d = self.dim;
        let one = Scalar::one();
        let minus = Scalar::from_i64(-1);
        let mut out = vec![Scalar::zero(); d];
        let inner = self.get(q.x, q.y, q.z);
        self.slot3(q.a, q.b, inner, &mut out, &one);
        let abx = self.get(q.a, q.b, q.x);
        self.slot1(abx, q.y, q.z, &mut out, &minus);
        let bay = self.outer_pair(q.b, q.a, q.y);
        self.slot2(q.x, &bay, q.z, &mut out, &one);
        let abz = self.get(q.a, q.b, q.z);
        self.slot3(q.x, q.y, abz, &mut out, &minus);
        out
    }
}

/// Basis quintuple for the fundamental identity; `b`, `y` index the realified slot 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Quintuple {
    a: usize,
    b: usize,
    x: usize,
    y: usize,
    z: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckMode {
    /// All basis quintuples; refused when `dim^5` exceeds the budget.
    Exhaustive { budget: u64 },
    /// `n` basis quintuples drawn from a seeded ChaCha stream.
    Sampled { n: usize, seed: u64 },
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

impl Default for CheckMode {
    fn default() -> Self {
        CheckMode::Exhaustive { budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    Antisymmetry,
    FundamentalIdentity,
    Slot2Linearity,
}

/// Concrete inputs on which an axiom fails, with both evaluated sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub axiom: AxiomKind,
    /// Three vectors for anti-commutativity, five for the fundamental identity, and
    /// `(a, b, c, λ·b)` for slot-2 linearity.
    pub inputs: Vec<Vec<Scalar>>,
    /// For slot-2 linearity, the scalar `λ` used.
    pub lambda: Option<Scalar>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl Counterexample {
    /// Recomputes both sides through the bracket oracle.
    pub fn reevaluate(&self, t: &TriSystem) -> (Vec<Scalar>, Vec<Scalar>) {
        let v = &self.inputs;
        match self.axiom {
            AxiomKind::Antisymmetry => {
                let lhs = t.eval(&v[0], &v[1], &v[2]);
                let rhs = vec_scale(&t.eval(&v[2], &v[1], &v[0]), &Scalar::from_i64(-1));
                (lhs, rhs)
            }
            AxiomKind::FundamentalIdentity => {
                let (a, b, x, y, z) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
                let lhs = t.eval(a, b, &t.eval(x, y, z));
                let r1 = t.eval(&t.eval(a, b, x), y, z);
                let r2 = t.eval(x, &t.eval(b, a, y), z);
                let r3 = t.eval(x, y, &t.eval(a, b, z));
                let rhs = r1.iter().zip(&r2).zip(&r3).map(|((p, q), r)| p - q + r).collect();
                (lhs, rhs)
            }
            AxiomKind::Slot2Linearity => {
                let lam = self.lambda.clone().unwrap_or_else(Scalar::i);
                let lhs = t.eval(&v[0], &vec_scale(&v[1], &lam), &v[2]);
                let f = if t.is_physical() { lam.conj() } else { lam };
                let rhs = vec_scale(&t.eval(&v[0], &v[1], &v[2]), &f);
                (lhs, rhs)
            }
        }
    }
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct Fragment {
    pub verdict: Verdict,
    pub checked: u64,
    pub discrepancies: u64,
    pub counterexample: Option<Counterexample>,
}

fn zero_within(v: &[Scalar], tol: f64) -> bool {
    v.iter().all(|x| x.is_negligible(tol))
}

/// `[e_i, b, e_k] = -[e_k, b, e_i]` for all basis `e_i, e_k` and all real basis vectors `b`
/// of the realified slot 2.
pub fn check_anticommutativity(t: &TriSystem) -> Fragment {
    anticommutativity_from_table(t, &t.table())
}

fn anticommutativity_from_table(t: &TriSystem, tab: &BracketTable) -> Fragment {
    let d = t.dim;
    let mut discrepancies = 0;
    let mut first = None;
    for i in 0..d {
        for jr in 0..2 * d {
            for k in i..d {
                let lhs = to_dense(tab.get(i, jr, k), d);
                let rhs: Vec<Scalar> = to_dense(tab.get(k, jr, i), d).iter().map(|x| -x).collect();
                let diff: Vec<Scalar> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                if !zero_within(&diff, t.tol) {
                    discrepancies += 1;
                    if first.is_none() {
                        first = Some(Counterexample {
                            axiom: AxiomKind::Antisymmetry,
                            inputs: vec![basis_vec(d, i), real_basis_vec(d, jr), basis_vec(d, k)],
                            lambda: None,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    Fragment {
        verdict: Verdict::from_bool(discrepancies == 0),
        checked: (d * 2 * d * (d + 1) / 2) as u64,
        discrepancies,
        counterexample: first,
    }
}

/// The fundamental identity on basis quintuples, with slots 2 and 4 running over the real basis
/// of the realification (so `i`-scaled inputs are covered).
pub fn check_fundamental_identity(t: &TriSystem, mode: CheckMode) -> Result<Fragment> {
    fi_from_table(t, &t.table(), mode)
}

fn fi_from_table(t: &TriSystem, tab: &BracketTable, mode: CheckMode) -> Result<Fragment> {
    let d = t.dim;
    let tol = t.tol;
    let check = |q: Quintuple| -> Option<(Quintuple, Vec<Scalar>)> {
        let defect = tab.fi_defect(q);
        (!zero_within(&defect, tol)).then_some((q, defect))
    };
    let (failures, checked): (Vec<(Quintuple, Vec<Scalar>)>, u64) = match mode {
        CheckMode::Exhaustive { budget } => {
            let needed = (d as u64).pow(5);
            if needed > budget {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let d2 = 2 * d;
            let failures = (0..d * d2)
                .into_par_iter()
                .flat_map_iter(|ab| {
                    let (a, b) = (ab / d2, ab % d2);
                    (0..d * d2 * d).filter_map(move |xyz| {
                        let z = xyz % d;
                        let y = (xyz / d) % d2;
                        let x = xyz / (d * d2);
                        check(Quintuple { a, b, x, y, z })
                    })
                })
                .collect::<Vec<_>>();
            (failures, (d2 * d2) as u64 * (d as u64).pow(3))
        }
        CheckMode::Sampled { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let qs: Vec<Quintuple> = (0..n)
                .map(|_| Quintuple {
                    a: rng.gen_range(0..d),
                    b: rng.gen_range(0..2 * d),
                    x: rng.gen_range(0..d),
                    y: rng.gen_range(0..2 * d),
                    z: rng.gen_range(0..d),
                })
                .collect();
            let failures = qs.par_iter().filter_map(|&q| check(q)).collect::<Vec<_>>();
            (failures, n as u64)
        }
    };
    let counterexample = failures.iter().min_by_key(|(q, _)| *q).map(|(q, _)| {
        let inputs = vec![
            basis_vec(d, q.a),
            real_basis_vec(d, q.b),
            basis_vec(d, q.x),
            real_basis_vec(d, q.y),
            basis_vec(d, q.z),
        ];
        let mut c = Counterexample {
            axiom: AxiomKind::FundamentalIdentity,
            inputs,
            lambda: None,
            lhs: vec![],
            rhs: vec![],
        };
        let (lhs, rhs) = c.reevaluate(t);
        c.lhs = lhs;
        c.rhs = rhs;
        c
    });
    Ok(Fragment {
        verdict: Verdict::from_bool(failures.is_empty()),
        checked,
        discrepancies: failures.len() as u64,
        counterexample,
    })
}

/// `[e_i, λ e_j, e_k] = λ̄ [e_i, e_j, e_k]` (physical) or `λ [e_i, e_j, e_k]` (algebraic) for
/// `λ ∈ {i, 1+2i}`.
pub fn check_slot2_linearity(t: &TriSystem) -> Fragment {
    slot2_from_table(t, &t.table())
}

fn slot2_from_table(t: &TriSystem, tab: &BracketTable) -> Fragment {
    let d = t.dim;
    let lambdas = [Scalar::i(), Scalar::gauss_int(1, 2)];
    let results: Vec<(u64, Option<Counterexample>)> = (0..d)
        .into_par_iter()
        .map(|i| {
            let mut bad = 0;
            let mut first = None;
            for j in 0..d {
                for k in 0..d {
                    let base = to_dense(tab.get(i, j, k), d);
                    for lam in &lambdas {
                        let lhs = if *lam == Scalar::i() {
                            to_dense(tab.get(i, j + d, k), d)
                        } else {
                            t.eval(&basis_vec(d, i), &vec_scale(&basis_vec(d, j), lam), &basis_vec(d, k))
                        };
                        let f = if t.is_physical() { lam.conj() } else { lam.clone() };
                        let rhs = vec_scale(&base, &f);
                        if !vec_approx_eq(&lhs, &rhs, t.tol) {
                            bad += 1;
                            if first.is_none() {
                                first = Some(Counterexample {
                                    axiom: AxiomKind::Slot2Linearity,
                                    inputs: vec![basis_vec(d, i), basis_vec(d, j), basis_vec(d, k)],
                                    lambda: Some(lam.clone()),
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                    }
                }
            }
            (bad, first)
        })
        .collect();
    let discrepancies = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    Fragment {
        verdict: Verdict::from_bool(discrepancies == 0),
        checked: (2 * d * d * d) as u64,
        discrepancies,
        counterexample,
    }
}

/// Combined result of the axiom suite, serialized as the JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub family: String,
    pub dim: usize,
    pub antisym: Verdict,
    pub fi: Verdict,
    /// `"linear"` or `"antilinear"` when the declared slot-2 behavior is confirmed, `"fail"` otherwise.
    pub slot2: String,
    pub fi_mode: String,
    pub fi_checked: u64,
    pub fi_discrepancies: u64,
    pub seed: Option<u64>,
    pub center_dim_real: Option<usize>,
    pub simple: Option<bool>,
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.antisym.passed() && self.fi.passed() && self.slot2 != "fail"
    }
}

/// Runs anti-commutativity, the fundamental identity and the slot-2 check from one table.
pub fn check_axioms(t: &TriSystem, mode: CheckMode) -> Result<AxiomReport> {
    let tab = t.table();
    let anti = anticommutativity_from_table(t, &tab);
    let fi = fi_from_table(t, &tab, mode)?;
    let s2 = slot2_from_table(t, &tab);
    let slot2 = if s2.verdict.passed() {
        match t.slot2 {
            Linearity::Linear => "linear".to_string(),
            Linearity::AntiLinear => "antilinear".to_string(),
        }
    } else {
        "fail".to_string()
    };
    let (fi_mode, seed) = match mode {
        CheckMode::Exhaustive { .. } => ("exhaustive".to_string(), None),
        CheckMode::Sampled { seed, .. } => ("sampled".to_string(), Some(seed)),
    };
    let counterexample = anti.counterexample.or(fi.counterexample.clone()).or(s2.counterexample);
    Ok(AxiomReport {
        family: t.label.clone(),
        dim: t.dim,
        antisym: anti.verdict,
        fi: fi.verdict,
        slot2,
        fi_mode,
        fi_checked: fi.checked,
        fi_discrepancies: fi.discrepancies,
        seed,
        center_dim_real: None,
        simple: None,
        counterexample,
    })
}

/// Exhaustive mode when `dim^5` fits the budget, otherwise `fallback_samples` seeded samples.
pub fn auto_mode(dim: usize, budget: u64, fallback_samples: usize, seed: u64) -> CheckMode {
    if (dim as u64).pow(5) <= budget {
        CheckMode::Exhaustive { budget }
    } else {
        CheckMode::Sampled { n: fallback_samples, seed }
    }
}

/// Central elements `b` (with `[a, b, c] = 0` for all `a, c`), as a basis of real vectors of
/// length `2·dim` in the realification: entry `j < dim` is the coefficient of `e_j`, entry
/// `dim + j` the coefficient of `i·e_j`.
pub fn center(t: &TriSystem) -> Vec<Vec<Scalar>> {
    center_from_table(t, &t.table())
}

fn center_from_table(t: &TriSystem, tab: &BracketTable) -> Vec<Vec<Scalar>> {
    let d = t.dim;
    let mut rows = Vec::new();
    for i in 0..d {
        for k in 0..d {
            for l in 0..d {
                let mut re = vec![Scalar::zero(); 2 * d];
                let mut im = vec![Scalar::zero(); 2 * d];
                let mut any = false;
                for jr in 0..2 * d {
                    if let Some((_, v)) = tab.get(i, jr, k).iter().find(|(m, _)| *m == l) {
                        re[jr] = v.re();
                        im[jr] = v.im();
                        any = true;
                    }
                }
                if any {
                    rows.push(re);
                    rows.push(im);
                }
            }
        }
    }
    nullspace(&rows, 2 * d, t.tol)
}

/// Converts a realified real vector (as returned by [`center`]) to a complex coordinate vector.
pub fn complexify(v: &[Scalar]) -> Vec<Scalar> {
    let d = v.len() / 2;
    (0..d).map(|j| &v[j] + &(&Scalar::i() * &v[j + d])).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityVerdict {
    pub simple: bool,
    pub zero_bracket: bool,
    /// Dimension of the smallest invariant subspace containing each basis vector.
    pub closure_dims: Vec<usize>,
    /// Dimension of the associative algebra generated by the identity and all `L_{x,y}`.
    pub operator_algebra_dim: usize,
}

/// Matrix of `L_{e_i, b_{j'}}: z ↦ [e_i, b_{j'}, z]` (complex-linear in `z`).
fn l_operator(tab: &BracketTable, i: usize, jr: usize) -> MatC {
    let d = tab.dim;
    let mut m = MatC::zeros(d, d);
    for k in 0..d {
        for (l, v) in tab.get(i, jr, k) {
            m.set(*l, k, v.clone());
        }
    }
    m
}

fn flat(m: &MatC) -> Vec<Scalar> {
    m.data().to_vec()
}

/// Simplicity: the bracket is nonzero and the operators `L_{e_i, e_j}`, `L_{e_i, i e_j}` have no
/// common nontrivial invariant subspace. Two tests are run: the invariant closure of each basis
/// vector must be the whole space, and the associative algebra generated by the operators must
/// be all of `M_dim(ℂ)` (Burnside), which rules out invariant subspaces avoiding every basis vector.
pub fn is_simple(t: &TriSystem) -> SimplicityVerdict {
    is_simple_from_table(t, &t.table())
}

fn is_simple_from_table(t: &TriSystem, tab: &BracketTable) -> SimplicityVerdict {
    let d = t.dim;
    let zero_bracket = tab.entries.iter().all(Vec::is_empty);
    if zero_bracket {
        return SimplicityVerdict { simple: false, zero_bracket, closure_dims: vec![1.min(d); d], operator_algebra_dim: 1 };
    }
    // A basis of the complex span of all L operators.
    let mut op_span = Span::new(d * d, t.tol);
    let mut ops = Vec::new();
    for i in 0..d {
        for jr in 0..2 * d {
            let m = l_operator(tab, i, jr);
            if op_span.insert(&flat(&m)) {
                ops.push(m);
            }
        }
    }
    let closure_dims: Vec<usize> = (0..d)
        .into_par_iter()
        .map(|s| {
            let mut span = Span::new(d, t.tol);
            let mut frontier = vec![basis_vec(d, s)];
            span.insert(&frontier[0]);
            while let Some(v) = frontier.pop() {
                for op in &ops {
                    let w = op.apply(&v);
                    if span.insert(&w) {
                        frontier.push(w);
                    }
                }
                if span.dim() == d {
                    break;
                }
            }
            span.dim()
        })
        .collect();
    let mut alg = Span::new(d * d, t.tol);
    let ident = MatC::identity(d);
    let mut members = vec![ident.clone()];
    alg.insert(&flat(&ident));
    let mut cursor = 0;
    while cursor < members.len() && alg.dim() < d * d {
        let m = members[cursor].clone();
        cursor += 1;
        for op in &ops {
            let p = op * &m;
            if alg.insert(&flat(&p)) {
                members.push(p);
            }
        }
    }
    let operator_algebra_dim = alg.dim();
    let simple = closure_dims.iter().all(|&c| c == d) && operator_algebra_dim == d * d;
    SimplicityVerdict { simple, zero_bracket, closure_dims, operator_algebra_dim }
}

/// Center and simplicity from one table: `(real center basis, verdict)`.
pub fn center_and_simplicity(t: &TriSystem) -> (Vec<Vec<Scalar>>, SimplicityVerdict) {
    let tab = t.table();
    (center_from_table(t, &tab), is_simple_from_table(t, &tab))
}

/// Full suite: axioms plus center and simplicity, from a single table.
pub fn full_report(t: &TriSystem, mode: CheckMode) -> Result<AxiomReport> {
    let tab = t.table();
    let anti = anticommutativity_from_table(t, &tab);
    let fi = fi_from_table(t, &tab, mode)?;
    let s2 = slot2_from_table(t, &tab);
    let c = center_from_table(t, &tab);
    let s = is_simple_from_table(t, &tab);
    let slot2 = if s2.verdict.passed() {
        match t.slot2 {
            Linearity::Linear => "linear",
            Linearity::AntiLinear => "antilinear",
        }
    } else {
        "fail"
    };
    let (fi_mode, seed) = match mode {
        CheckMode::Exhaustive { .. } => ("exhaustive", None),
        CheckMode::Sampled { seed, .. } => ("sampled", Some(seed)),
    };
    Ok(AxiomReport {
        family: t.label.clone(),
        dim: t.dim,
        antisym: anti.verdict,
        fi: fi.verdict,
        slot2: slot2.to_string(),
        fi_mode: fi_mode.to_string(),
        fi_checked: fi.checked,
        fi_discrepancies: fi.discrepancies,
        seed,
        center_dim_real: Some(c.len()),
        simple: Some(s.simple),
        counterexample: anti.counterexample.or(fi.counterexample).or(s2.counterexample),
    })
}

/// `[a, b, c]_{ph,C} = [a, C(b), c]` for an algebraic `T` and an anti-linear involution `C`
/// that commutes with the bracket.
pub fn physicalize(t: &TriSystem, c: &ConjMap, label: impl Into<String>) -> Result<TriSystem> {
    if t.slot2 != Linearity::Linear {
        return Err(Error::arg("physicalize needs an algebraic 3-algebra"));
    }
    if !c.is_antilinear() {
        return Err(Error::arg("physicalize needs an anti-linear map"));
    }
    let d = t.dim;
    if c.dim() != d || !c.mat.is_square() {
        return Err(Error::arg("involution has the wrong dimension"));
    }
    let sq = c.square_matrix();
    if !sq.approx_eq(&MatC::identity(d), t.tol) {
        return Err(Error::arg("map is not an involution"));
    }
    let cols: Vec<Vec<Scalar>> = (0..d).map(|j| c.apply(&basis_vec(d, j))).collect();
    let compatible = (0..d * d * d).into_par_iter().all(|idx| {
        let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
        let lhs = t.eval(&cols[i], &cols[j], &cols[k]);
        let rhs = c.apply(&t.eval(&basis_vec(d, i), &basis_vec(d, j), &basis_vec(d, k)));
        vec_approx_eq(&lhs, &rhs, t.tol)
    });
    if !compatible {
        return Err(Error::arg("map is not an automorphism of the bracket"));
    }
    let f = t.bracket_fn();
    let cm = c.clone();
    Ok(TriSystem {
        dim: d,
        slot2: Linearity::AntiLinear,
        label: label.into(),
        tol: t.tol,
        bracket: Arc::new(move |a, b, x| f(a, &cm.apply(b), x)),
    })
}

/// Largest deviation of `f([a,b,c]_1)` from `[f a, f b, f c]_2` over basis triples, with slot 2
/// running over the real basis of the realification. `f` is complex-linear.
pub fn iso_residual(t1: &TriSystem, t2: &TriSystem, f: &MatC) -> f64 {
    let d = t1.dim;
    assert_eq!(t2.dim, f.rows());
    assert_eq!(d, f.cols());
    let images: Vec<Vec<Scalar>> = (0..2 * d).map(|j| f.apply(&real_basis_vec(d, j))).collect();
    (0..d * 2 * d * d)
        .into_par_iter()
        .map(|idx| {
            let k = idx % d;
            let jr = (idx / d) % (2 * d);
            let i = idx / (2 * d * d);
            let lhs = f.apply(&t1.eval_basis(i, jr, k));
            let rhs = t2.eval(&images[i], &images[jr], &images[k]);
            if lhs.iter().chain(&rhs).all(Scalar::is_exact) {
                if lhs == rhs {
                    0.0
                } else {
                    vec_max_diff(&lhs, &rhs).max(f64::MIN_POSITIVE)
                }
            } else {
                vec_max_diff(&lhs, &rhs)
            }
        })
        .reduce(|| 0.0, f64::max)
}

/// `true` when two 3-algebras on the same space have equal brackets on all basis triples
/// (realified slot 2).
pub fn same_bracket(t1: &TriSystem, t2: &TriSystem) -> bool {
    t1.dim == t2.dim && iso_residual(t1, t2, &MatC::identity(t1.dim)) <= t1.tol.max(t2.tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingCheck {
    pub lambda: Scalar,
    pub alpha: Scalar,
    pub residual: f64,
    pub pass: bool,
}

/// For a physical `T` and real `λ > 0`, checks that `f_α(x) = αx` with `α = λ^{-1/2}` maps
/// `(T, [·,·,·])` isomorphically onto `(T, λ[·,·,·])`.
pub fn scaled_bracket_iso_check(t: &TriSystem, lambda: &Scalar) -> Result<ScalingCheck> {
    if !t.is_physical() {
        return Err(Error::arg("scaling check applies to physical 3-algebras"));
    }
    if lambda.real_sign() != Some(1) {
        return Err(Error::arg(format!("λ must be real and positive, got {lambda}")));
    }
    let alpha = lambda.sqrt_nonneg_real().expect("positive real").inv().expect("nonzero");
    let target = t.scaled(lambda);
    let f = MatC::identity(t.dim).scale(&alpha);
    let residual = iso_residual(t, &target, &f);
    let tol = if alpha.is_exact() { 0.0 } else { t.tol };
    Ok(ScalingCheck { lambda: lambda.clone(), alpha, residual, pass: residual <= tol })
}

/// Direct sum `T1 ⊕ T2` with coordinates `(x1, x2)`; brackets mixing the summands vanish.
pub fn direct_sum(t1: &TriSystem, t2: &TriSystem) -> Result<TriSystem> {
    if t1.slot2 != t2.slot2 {
        return Err(Error::arg("direct sum of 3-algebras with different slot-2 linearity"));
    }
    let (d1, d2) = (t1.dim, t2.dim);
    let (f1, f2) = (t1.bracket_fn(), t2.bracket_fn());
    Ok(TriSystem {
        dim: d1 + d2,
        slot2: t1.slot2,
        label: format!("({}) + ({})", t1.label, t2.label),
        tol: t1.tol.max(t2.tol),
        bracket: Arc::new(move |a, b, c| {
            let mut out = f1(&a[..d1], &b[..d1], &c[..d1]);
            out.extend(f2(&a[d1..], &b[d1..], &c[d1..]));
            out
        }),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanReport {
    pub axiom_a: Verdict,
    pub axiom_b: Verdict,
    pub checked: u64,
    pub counterexample: Option<(Vec<usize>, Vec<Scalar>, Vec<Scalar>)>,
}

impl JordanReport {
    pub fn passed(&self) -> bool {
        self.axiom_a.passed() && self.axiom_b.passed()
    }
}

/// Axioms of a Jordan 3-superalgebra on a homogeneous basis with the given parities, for a
/// bracket linear in all three slots:
/// (a) `[a,b,c] = (-1)^{p(a)p(b)+p(a)p(c)+p(b)p(c)} [c,b,a]`;
/// (b) `[a,b,[x,y,z]] = [[a,b,x],y,z] - (-1)^{p(x)(p(a)+p(b))+p(a)p(b)+p(a)} [x,[b,a,y],z]
///      + (-1)^{(p(x)+p(y))(p(a)+p(b))} [x,y,[a,b,z]]`.
pub fn check_jordan_axioms(parity: &[u8], bracket: &BracketFn, tol: f64) -> JordanReport {
    let d = parity.len();
    let e = |i: usize| basis_vec(d, i);
    let sign = |k: u32| if k % 2 == 0 { Scalar::one() } else { Scalar::from_i64(-1) };
    let p = |i: usize| parity[i] as u32 % 2;
    let tab: Vec<Vec<Scalar>> = (0..d * d * d)
        .into_par_iter()
        .map(|idx| bracket(&e(idx / (d * d)), &e((idx / d) % d), &e(idx % d)))
        .collect();
    let at = |i: usize, j: usize, k: usize| &tab[(i * d + j) * d + k];
    let br_vec = |u: &[Scalar], j: usize, k: usize, slot: usize| -> Vec<Scalar> {
        // bracket with a general vector in slot `slot` (0 or 2) and basis vectors elsewhere
        let mut out = vec![Scalar::zero(); d];
        for (l, ul) in u.iter().enumerate() {
            if ul.is_zero() {
                continue;
            }
            let v = if slot == 0 { at(l, j, k) } else { at(j, k, l) };
            for (m, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    out[m] += &(ul * x);
                }
            }
        }
        out
    };
    let mid = |x: usize, w: &[Scalar], z: usize| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); d];
        for (l, wl) in w.iter().enumerate() {
            if wl.is_zero() {
                continue;
            }
            for (m, v) in at(x, l, z).iter().enumerate() {
                if !v.is_zero() {
                    out[m] += &(wl * v);
                }
            }
        }
        out
    };
    let mut a_ok = true;
    let mut counterexample = None;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let s = sign(p(i) * p(j) + p(i) * p(k) + p(j) * p(k));
                let rhs = vec_scale(at(k, j, i), &s);
                if !vec_approx_eq(at(i, j, k), &rhs, tol) {
                    a_ok = false;
                    if counterexample.is_none() {
                        counterexample = Some((vec![i, j, k], at(i, j, k).clone(), rhs));
                    }
                }
            }
        }
    }
    let failures: Vec<(Vec<usize>, Vec<Scalar>, Vec<Scalar>)> = (0..d.pow(5))
        .into_par_iter()
        .filter_map(|idx| {
            let z = idx % d;
            let y = (idx / d) % d;
            let x = (idx / d.pow(2)) % d;
            let b = (idx / d.pow(3)) % d;
            let a = idx / d.pow(4);
            let lhs = br_vec(at(x, y, z), a, b, 2);
            let t1 = br_vec(at(a, b, x), y, z, 0);
            let t2 = mid(x, at(b, a, y), z);
            let t3 = br_vec(at(a, b, z), x, y, 2);
            let s2 = sign(p(x) * (p(a) + p(b)) + p(a) * p(b) + p(a));
            let s3 = sign((p(x) + p(y)) * (p(a) + p(b)));
            let rhs: Vec<Scalar> =
                (0..d).map(|m| &(&t1[m] - &(&s2 * &t2[m])) + &(&s3 * &t3[m])).collect();
            (!vec_approx_eq(&lhs, &rhs, tol)).then(|| (vec![a, b, x, y, z], lhs, rhs))
        })
        .collect();
    if counterexample.is_none() {
        counterexample = failures.first().cloned();
    }
    JordanReport {
        axiom_a: Verdict::from_bool(a_ok),
        axiom_b: Verdict::from_bool(failures.is_empty()),
        checked: (d * d * d + d.pow(5)) as u64,
        counterexample,
    }
}

/// An algebraic 3-algebra viewed as a Jordan 3-superalgebra on a purely odd space (parity
/// reversal): all parities 1, same bracket.
pub fn parity_reversed(t: &TriSystem) -> Result<(Vec<u8>, BracketFn)> {
    if t.slot2 != Linearity::Linear {
        return Err(Error::arg("parity reversal applies to algebraic 3-algebras"));
    }
    Ok((vec![1; t.dim], t.bracket_fn()))
}
