//! Complex scalars with two backends: exact Gaussian rationals and `f64` complex numbers.
//!
//! Arithmetic between two exact values is always exact. Combining an exact value with a
//! float promotes the result to float, since the float operand already carries rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which arithmetic a value (or a whole matrix) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact { re: BigRational, im: BigRational },
    Float(Complex64),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn i() -> Self {
        Scalar::Exact { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Exact { re: rat(n, 1), im: BigRational::zero() }
    }

    pub fn gauss_int(re: i64, im: i64) -> Self {
        Scalar::Exact { re: rat(re, 1), im: rat(im, 1) }
    }

    /// `re_num/re_den + (im_num/im_den) i`. Panics on a zero denominator.
    pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Scalar::Exact { re: rat(re_num, re_den), im: rat(im_num, im_den) }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact { re: rat(num, den), im: BigRational::zero() }
    }

    pub fn from_rationals(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact { re, im }
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    /// Zero in the given backend.
    pub fn zero_in(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Self::zero(),
            Backend::Float => Self::float(0.0, 0.0),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact { .. } => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact { .. })
    }

    /// Exact zero test. Floats are zero only when both parts are exactly `0.0`.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Zero up to `tol` for floats; exact values ignore `tol`.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact { .. } => self.is_zero(),
            Scalar::Float(z) => z.norm() <= tol,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact { im, .. } => im.is_zero(),
            Scalar::Float(z) => z.im == 0.0,
        }
    }

    pub fn is_imaginary(&self) -> bool {
        match self {
            Scalar::Exact { re, .. } => re.is_zero(),
            Scalar::Float(z) => z.re == 0.0,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: re.clone(), im: -im },
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// Real part, as a scalar of the same backend.
    pub fn re(&self) -> Self {
        match self {
            Scalar::Exact { re, .. } => Scalar::Exact { re: re.clone(), im: BigRational::zero() },
            Scalar::Float(z) => Scalar::float(z.re, 0.0),
        }
    }

    /// Imaginary part, as a (real) scalar of the same backend.
    pub fn im(&self) -> Self {
        match self {
            Scalar::Exact { im, .. } => Scalar::Exact { re: im.clone(), im: BigRational::zero() },
            Scalar::Float(z) => Scalar::float(z.im, 0.0),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact { re, im } => Complex64::new(rat_to_f64(re), rat_to_f64(im)),
            Scalar::Float(z) => *z,
        }
    }

    pub fn to_float(&self) -> Self {
        Scalar::Float(self.to_c64())
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `|z|²`, exact when possible.
    pub fn norm_sqr(&self) -> Self {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: re * re + im * im, im: BigRational::zero() },
            Scalar::Float(z) => Scalar::float(z.norm_sqr(), 0.0),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact { re, im } => {
                let n = re * re + im * im;
                Scalar::Exact { re: re / &n, im: -im / &n }
            }
            Scalar::Float(z) => Scalar::Float(z.inv()),
        })
    }

    /// Distance `|a - b|` as `f64`.
    pub fn dist(&self, other: &Scalar) -> f64 {
        (self - other).abs()
    }

    /// Sign of a real exact scalar: `Some(1)`, `Some(-1)`, `Some(0)`; `None` when not real.
    pub fn real_sign(&self) -> Option<i32> {
        match self {
            Scalar::Exact { re, im } if im.is_zero() => Some(if re.is_positive() {
                1
            } else if re.is_negative() {
                -1
            } else {
                0
            }),
            Scalar::Float(z) if z.im == 0.0 => Some(if z.re > 0.0 {
                1
            } else if z.re < 0.0 {
                -1
            } else {
                0
            }),
            _ => None,
        }
    }

    /// Square root of a nonnegative real scalar, exact when it is the square of a rational.
    pub fn sqrt_nonneg_real(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact { re, im } if im.is_zero() && !re.is_negative() => {
                Some(match exact_rational_sqrt(re) {
                    Some(r) => Scalar::Exact { re: r, im: BigRational::zero() },
                    None => Scalar::float(rat_to_f64(re).sqrt(), 0.0),
                })
            }
            Scalar::Float(z) if z.im == 0.0 && z.re >= 0.0 => Some(Scalar::float(z.re.sqrt(), 0.0)),
            _ => None,
        }
    }

    /// Principal square root (argument in `(-π/2, π/2]`). Exact for squares of rationals,
    /// for `-1` and for negative rational squares; otherwise float.
    pub fn principal_sqrt(&self) -> Scalar {
        if let Scalar::Exact { re, im } = self {
            if im.is_zero() {
                if let Some(r) = exact_rational_sqrt(&re.abs()) {
                    return if re.is_negative() {
                        Scalar::Exact { re: BigRational::zero(), im: r }
                    } else {
                        Scalar::Exact { re: r, im: BigRational::zero() }
                    };
                }
            }
        }
        Scalar::Float(self.to_c64().sqrt())
    }

    fn promote(a: &Scalar, b: &Scalar) -> (Complex64, Complex64) {
        (a.to_c64(), b.to_c64())
    }
}

fn exact_rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                Scalar::Exact { re: a + c, im: b + d }
            }
            _ => {
                let (x, y) = Scalar::promote(self, rhs);
                Scalar::Float(x + y)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                Scalar::Exact { re: a - c, im: b - d }
            }
            _ => {
                let (x, y) = Scalar::promote(self, rhs);
                Scalar::Float(x - y)
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                if b.is_zero() && d.is_zero() {
                    return Scalar::Exact { re: a * c, im: BigRational::zero() };
                }
                Scalar::Exact { re: a * c - b * d, im: a * d + b * c }
            }
            _ => {
                let (x, y) = Scalar::promote(self, rhs);
                Scalar::Float(x * y)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: -re, im: -im },
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                *a += c;
                *b += d;
            }
            _ => *self = &*self + rhs,
        }
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                *a -= c;
                *b -= d;
            }
            _ => *self = &*self - rhs,
        }
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact values print as `a/b+c/di`; floats as `x+yi` with Rust's shortest round-trip format.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact { re, im } => {
                if im.is_zero() {
                    return write!(f, "{}", fmt_rat(re));
                }
                let im_abs = fmt_rat(&im.abs());
                let im_part = if im.abs().is_one() { "i".to_string() } else { format!("{im_abs}i") };
                if re.is_zero() {
                    if im.is_negative() {
                        write!(f, "-{im_part}")
                    } else {
                        write!(f, "{im_part}")
                    }
                } else {
                    let sign = if im.is_negative() { '-' } else { '+' };
                    write!(f, "{}{}{}", fmt_rat(re), sign, im_part)
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

fn parse_real(tok: &str) -> Result<(Option<BigRational>, f64)> {
    let bad = || Error::Parse(format!("invalid number `{tok}`"));
    if tok.is_empty() {
        return Err(bad());
    }
    if tok.contains(['.', 'e', 'E']) {
        let v: f64 = tok.parse().map_err(|_| bad())?;
        return Ok((None, v));
    }
    let r = if let Some((n, d)) = tok.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{tok}`")));
        }
        BigRational::new(n, d)
    } else {
        BigRational::from_integer(tok.parse::<BigInt>().map_err(|_| bad())?)
    };
    let f = rat_to_f64(&r);
    Ok((Some(r), f))
}

/// Parses `a/b+c/di`, `3/5+4/5i`, `-i`, `2`, `1-2i`, or decimals such as `0.5+0.25i`.
/// Any decimal component makes the whole value a float.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let (re_tok, im_tok) = if let Some(body) = s.strip_suffix('i') {
            // Split at the last sign that is not leading and not part of an exponent.
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            match split {
                Some(k) => (body[..k].to_string(), body[k..].to_string()),
                None => (String::new(), body.to_string()),
            }
        } else {
            (s.clone(), String::new())
        };
        let im_tok = match im_tok.as_str() {
            "" if s.ends_with('i') => "1".to_string(),
            "+" => "1".to_string(),
            "-" => "-1".to_string(),
            t => t.trim_start_matches('+').to_string(),
        };
        let (re, re_f) = if re_tok.is_empty() {
            (Some(BigRational::zero()), 0.0)
        } else {
            parse_real(re_tok.trim_start_matches('+'))?
        };
        let (im, im_f) = if im_tok.is_empty() {
            (Some(BigRational::zero()), 0.0)
        } else {
            parse_real(&im_tok)?
        };
        Ok(match (re, im) {
            (Some(re), Some(im)) => Scalar::Exact { re, im },
            _ => Scalar::float(re_f, im_f),
        })
    }
}

fn int_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn json_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Scalar {
    /// `[re_num, re_den, im_num, im_den]` for exact values, `[re, im]` for floats.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Exact { re, im } => serde_json::Value::Array(vec![
                int_json(re.numer()),
                int_json(re.denom()),
                int_json(im.numer()),
                int_json(im.denom()),
            ]),
            Scalar::Float(z) => serde_json::json!([z.re, z.im]),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("scalar must be a JSON array".into()))?;
        match arr.len() {
            4 => {
                let ints: Option<Vec<BigInt>> = arr.iter().map(json_int).collect();
                let ints = ints.ok_or_else(|| Error::Parse("exact scalar entries must be integers".into()))?;
                if ints[1].is_zero() || ints[3].is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Scalar::Exact {
                    re: BigRational::new(ints[0].clone(), ints[1].clone()),
                    im: BigRational::new(ints[2].clone(), ints[3].clone()),
                })
            }
            2 => {
                let re = arr[0].as_f64().ok_or_else(|| Error::Parse("float scalar".into()))?;
                let im = arr[1].as_f64().ok_or_else(|| Error::Parse("float scalar".into()))?;
                Ok(Scalar::float(re, im))
            }
            _ => Err(Error::Parse("scalar array must have 2 or 4 entries".into())),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        Scalar::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_exact() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| Scalar::gauss(a, b, c, d))
    }

    proptest! {
        #[test]
        fn addition_associative(a in arb_exact(), b in arb_exact(), c in arb_exact()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        }

        #[test]
        fn multiplicative_inverse(a in arb_exact()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }

        #[test]
        fn conj_is_involution(a in arb_exact()) {
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn display_parse_roundtrip(a in arb_exact()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Scalar>().unwrap(), a);
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/5+4/5i".parse::<Scalar>().unwrap(), Scalar::gauss(3, 5, 4, 5));
        assert_eq!("-i".parse::<Scalar>().unwrap(), Scalar::gauss_int(0, -1));
        assert_eq!("i".parse::<Scalar>().unwrap(), Scalar::i());
        assert_eq!("1-2i".parse::<Scalar>().unwrap(), Scalar::gauss_int(1, -2));
        assert_eq!("2".parse::<Scalar>().unwrap(), Scalar::from_i64(2));
        assert_eq!("-1/2".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
        let f = "0.5+0.25i".parse::<Scalar>().unwrap();
        assert_eq!(f, Scalar::float(0.5, 0.25));
        assert!("1e-3".parse::<Scalar>().unwrap().backend() == Backend::Float);
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn exact_stays_exact() {
        let a = Scalar::gauss(1, 3, -2, 7);
        let b = Scalar::gauss(5, 2, 1, 1);
        assert!((&a * &b + &a / &b - &a).is_exact());
        assert!((&a + &Scalar::float(1.0, 0.0)).backend() == Backend::Float);
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::ratio(9, 4).sqrt_nonneg_real().unwrap(), Scalar::ratio(3, 2));
        assert!(!Scalar::from_i64(2).sqrt_nonneg_real().unwrap().is_exact());
        assert_eq!(Scalar::from_i64(-1).principal_sqrt(), Scalar::i());
        assert!(Scalar::from_i64(-1).sqrt_nonneg_real().is_none());
    }

    #[test]
    fn json_roundtrip() {
        let a = Scalar::gauss(-3, 5, 4, 5);
        assert_eq!(Scalar::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.to_json(), serde_json::json!([-3, 5, 4, 5]));
    }
}
