//! Sparse multivariate polynomials over [`Scalar`] in a named variable roster.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::MatC;
use crate::scalar::Scalar;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Poly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Scalar) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn var(vars: &[String], idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, Scalar::one())
    }

    /// The variable called `name`, or an argument error if the roster lacks it.
    pub fn var_named(vars: &[String], name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::arg(format!("variable `{name}` is not in the roster")))?;
        Ok(Self::var(vars, idx))
    }

    pub fn monomial(vars: &[String], exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(tol))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, exps: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn same_roster(&self, other: &Poly) {
        assert_eq!(self.vars, other.vars, "polynomials in different rosters");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_roster(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(&self.vars);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_roster(other);
        let mut out = Poly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Conjugates the coefficients (the variables are real).
    pub fn conj(&self) -> Poly {
        self.map_coeffs(Scalar::conj)
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Multiplies each monomial by `w(exponents)`.
    pub fn weight(&self, w: impl Fn(&[u32]) -> Scalar) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * &w(e));
        }
        out
    }

    pub fn deriv(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] > 0 {
                let mut e2 = e.clone();
                e2[idx] -= 1;
                out.add_term(e2, c * &Scalar::from_i64(e[idx] as i64));
            }
        }
        out
    }

    /// `Σ_{i ∈ idxs} x_i ∂f/∂x_i`.
    pub fn euler(&self, idxs: &[usize]) -> Poly {
        self.weight(|e| Scalar::from_i64(idxs.iter().map(|&i| e[i] as i64).sum()))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn without_constant(&self) -> Poly {
        let mut out = self.clone();
        out.terms.remove(&vec![0; self.vars.len()]);
        out
    }

    /// `f(φ(x))` where `φ(x)_i = Σ_j m_ij x_j`.
    pub fn substitute_linear(&self, m: &MatC) -> Poly {
        let n = self.vars.len();
        assert_eq!((m.rows(), m.cols()), (n, n));
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::zero(&self.vars);
                for j in 0..n {
                    p = p.add(&Poly::var(&self.vars, j).scale(m.get(i, j)));
                }
                p
            })
            .collect();
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&self.vars), p.clone()]).collect();
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(&self.vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn to_float(&self) -> Poly {
        self.map_coeffs(Scalar::to_float)
    }

    pub fn max_abs_diff(&self, other: &Poly) -> f64 {
        self.sub(other).terms.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// `{"vars": [...], "terms": [{"e": [...], "c": scalar}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars,
            "terms": self.terms.iter().map(|(e, c)| serde_json::json!({"e": e, "c": c.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Poly> {
        let vars: Vec<String> = serde_json::from_value(v.get("vars").cloned().unwrap_or_default())
            .map_err(|e| Error::Parse(format!("polynomial vars: {e}")))?;
        let terms = v
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("polynomial JSON needs `terms`".into()))?;
        let mut p = Poly::zero(&vars);
        for t in terms {
            let e: Exponents = serde_json::from_value(t.get("e").cloned().unwrap_or_default())
                .map_err(|e| Error::Parse(format!("polynomial exponents: {e}")))?;
            if e.len() != vars.len() {
                return Err(Error::Parse("exponent length differs from the roster".into()));
            }
            let c = Scalar::from_json(t.get("c").unwrap_or(&serde_json::Value::Null))?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// A random polynomial with `n_terms` monomials of total degree at most `max_deg` and
    /// Gaussian-integer coefficients with parts in `-3..=3`.
    pub fn random<R: Rng>(vars: &[String], max_deg: u32, n_terms: usize, rng: &mut R) -> Poly {
        let mut p = Poly::zero(vars);
        for _ in 0..n_terms {
            let mut e = vec![0u32; vars.len()];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                e[rng.gen_range(0..vars.len())] += 1;
            }
            let c = Scalar::gauss_int(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            p.add_term(e, c);
        }
        p
    }
}

pub fn roster(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert_eq, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xy() -> Vec<String> {
        roster(&["x", "y"])
    }

    #[test]
    fn products_and_derivatives() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let f = x.mul(&x).add(&y.scale(&Scalar::i()));
        assert_eq!(f.deriv(0), x.scale(&Scalar::from_i64(2)));
        assert_eq!(f.deriv(1), Poly::constant(&v, Scalar::i()));
        assert_eq!(f.euler(&[0, 1]), x.mul(&x).scale(&Scalar::from_i64(2)).add(&y.scale(&Scalar::i())));
        assert_eq!(f.degree(), Some(2));
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn linear_substitution() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let swap = MatC::from_i64(2, 2, &[0, 1, 1, 0]);
        let f = x.mul(&x).mul(&y);
        assert_eq!(f.substitute_linear(&swap), y.mul(&y).mul(&x));
        let shear = MatC::from_i64(2, 2, &[1, 1, 0, 1]);
        // (x + y)^2 = x^2 + 2xy + y^2
        let g = x.mul(&x).substitute_linear(&shear);
        assert_eq!(g, x.mul(&x).add(&x.mul(&y).scale(&Scalar::from_i64(2))).add(&y.mul(&y)));
    }

    #[test]
    fn json_roundtrip() {
        let v = xy();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Poly::random(&v, 4, 3, &mut rng);
        assert_eq!(Poly::from_json(&p.to_json()).unwrap(), p);
    }

    proptest! {
        #[test]
        fn product_rule(seed in 0u64..500) {
            let v = roster(&["t", "p", "q"]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Poly::random(&v, 3, 3, &mut rng);
            let g = Poly::random(&v, 3, 3, &mut rng);
            for i in 0..3 {
                prop_assert_eq!(f.mul(&g).deriv(i), f.deriv(i).mul(&g).add(&f.mul(&g.deriv(i))));
            }
        }

        #[test]
        fn substitution_is_multiplicative(seed in 0u64..500) {
            let v = xy();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Poly::random(&v, 3, 2, &mut rng);
            let g = Poly::random(&v, 3, 2, &mut rng);
            let m = MatC::from_fn(2, 2, |_, _| Scalar::gauss_int(rng.gen_range(-2..=2), rng.gen_range(-2..=2)));
            prop_assert_eq!(f.mul(&g).substitute_linear(&m), f.substitute_linear(&m).mul(&g.substitute_linear(&m)));
        }
    }
}
