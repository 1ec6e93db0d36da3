//! Exact scalars: rationals and Gaussian rationals.
//!
//! A [`Scalar`] always carries a real and an imaginary rational part. Values
//! over the rational field simply have a zero imaginary part; the field an
//! object lives over is tracked separately by [`FieldTag`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base field of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTag {
    /// The rationals, standing in for the real field.
    Rational,
    /// The Gaussian rationals, standing in for the complex field.
    GaussianRational,
}

impl FieldTag {
    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Rational => "rational",
            FieldTag::GaussianRational => "gaussian_rational",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(FieldTag::Rational),
            "gaussian_rational" => Ok(FieldTag::GaussianRational),
            other => Err(Error::Parse(format!("unknown field tag `{other}`"))),
        }
    }
}

/// Exact Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar { re: rat(n, d), im: BigRational::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar { re: r, im: BigRational::zero() }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Sign of a real scalar: `1`, `-1` or `0`. Panics on non-real input.
    pub fn real_sign(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        if self.re.is_zero() {
            0
        } else if self.re.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `n!` as a scalar.
    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= BigInt::from(k);
        }
        Scalar::from_rational(BigRational::from_integer(acc))
    }

    /// Rendering of a single rational as `p` or `p/q`.
    pub fn fmt_rational(r: &BigRational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Serialized form: `"p/q"` for real values, `["re","im"]` otherwise.
    pub fn to_json(&self, field: FieldTag) -> serde_json::Value {
        match field {
            FieldTag::Rational => serde_json::Value::String(Scalar::fmt_rational(&self.re)),
            FieldTag::GaussianRational => serde_json::json!([
                Scalar::fmt_rational(&self.re),
                Scalar::fmt_rational(&self.im)
            ]),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(n) => n.to_string().parse(),
            serde_json::Value::Array(parts) if parts.len() == 2 => {
                let re = Scalar::from_json(&parts[0])?;
                let im = Scalar::from_json(&parts[1])?;
                if !re.is_real() || !im.is_real() {
                    return Err(Error::Parse("nested complex scalar".into()));
                }
                Ok(Scalar { re: re.re, im: im.re })
            }
            other => Err(Error::Parse(format!("not a scalar: {other}"))),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    } else if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(n, d);
        Ok(if neg { -r } else { r })
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Scalar::from_rational(parse_rational(s)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", Scalar::fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", Scalar::fmt_rational(&self.im))
        } else if self.im.is_negative() {
            write!(f, "({}-{}i)", Scalar::fmt_rational(&self.re), Scalar::fmt_rational(&-self.im.clone()))
        } else {
            write!(f, "({}+{}i)", Scalar::fmt_rational(&self.re), Scalar::fmt_rational(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar { re: &self.re * &o.re, im: BigRational::zero() };
        }
        Scalar {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}
