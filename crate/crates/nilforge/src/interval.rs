//! Rational interval arithmetic with outward rounding, enough for `exp`, `cos` and `sin`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn ten_pow(d: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(10), d as usize))
}

impl Interval {
    pub fn point(r: BigRational) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::point(BigRational::zero())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, r: &BigRational) -> Interval {
        if r.is_negative() {
            Interval { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            Interval { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    /// Reciprocal of an interval not containing zero.
    pub fn recip(&self) -> Interval {
        assert!(self.lo.is_positive() || self.hi.is_negative(), "reciprocal of an interval containing 0");
        Interval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    /// Enlarge to endpoints with denominator `10^digits`.
    pub fn round_outward(&self, digits: u32) -> Interval {
        let s = ten_pow(digits);
        Interval { lo: (&self.lo * &s).floor() / &s, hi: (&self.hi * &s).ceil() / &s }
    }

    fn widen(&self, r: &BigRational) -> Interval {
        Interval { lo: &self.lo - r, hi: &self.hi + r }
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        decimal(&self.midpoint(), digits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal(&self.lo, 12), decimal(&self.hi, 12))
    }
}

/// Rounds `r` to `digits` fractional digits.
pub fn decimal(r: &BigRational, digits: u32) -> String {
    let s = ten_pow(digits);
    let scaled = (r * &s).round().to_integer();
    let neg = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    if digits > 0 {
        while body.len() <= digits as usize {
            body.insert(0, '0');
        }
        body.insert(body.len() - digits as usize, '.');
    }
    if neg && scaled != BigInt::zero() {
        body.insert(0, '-');
    }
    body
}

fn factorial_bound(k: u32) -> BigRational {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= i;
    }
    BigRational::from_integer(f)
}

/// Taylor sum `Σ_{k ≤ N} sign_k y^k/k!` over the given parity with remainder `|y|^{N+1}/(N+1)!·bound`.
fn taylor(y: &BigRational, digits: u32, parity: Option<u32>, alternating: bool, bound: &BigRational) -> Interval {
    let eps = ten_pow(digits).recip();
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k = 0u32;
    loop {
        if parity.is_none_or(|p| k % 2 == p) {
            let sgn = if alternating && (k / 2) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
            sum += &term * &sgn;
        }
        k += 1;
        term = &term * y / BigRational::from_integer(BigInt::from(k));
        let rem = term.abs() * bound;
        if rem < eps && k > 2 {
            let next = y.abs().pow(k as i32) / factorial_bound(k) * bound;
            return Interval::point(sum).widen(&next).round_outward(digits + 2);
        }
    }
}

/// Enclosure of `e^x`.
pub fn exp(x: &BigRational, digits: u32) -> Interval {
    let n = x.floor();
    let y = x - &n;
    let three = BigRational::from_integer(BigInt::from(3));
    let ey = taylor(&y, digits + 4, None, false, &three);
    let nn = n.to_integer();
    if nn.is_zero() {
        return ey;
    }
    let e = taylor(&BigRational::one(), digits + 8, None, false, &three);
    let k: u64 = nn.abs().try_into().expect("exponent too large");
    let mut acc = Interval::point(BigRational::one());
    let mut base = e;
    let mut kk = k;
    let extra = 64 - k.leading_zeros() + 4;
    while kk > 0 {
        if kk & 1 == 1 {
            acc = acc.mul(&base).round_outward(digits + 8 + extra);
        }
        base = base.mul(&base).round_outward(digits + 8 + extra);
        kk >>= 1;
    }
    if nn.is_negative() {
        acc = acc.recip();
    }
    acc.mul(&ey).round_outward(digits + 2)
}

/// Enclosures of `(cos v, sin v)`, via halving until `|v| ≤ 1` and doubling back.
pub fn cos_sin(v: &BigRational, digits: u32) -> (Interval, Interval) {
    let mut halvings = 0u32;
    let mut y = v.clone();
    let two = BigRational::from_integer(BigInt::from(2));
    while y.abs() > BigRational::one() {
        y = &y / &two;
        halvings += 1;
    }
    let work = digits + 4 + 2 * halvings;
    let one = BigRational::one();
    let mut c = taylor(&y, work, Some(0), true, &one);
    let mut s = taylor(&y, work, Some(1), true, &one);
    for _ in 0..halvings {
        let c2 = c.mul(&c).sub(&s.mul(&s)).round_outward(work);
        let s2 = s.mul(&c).scale(&two).round_outward(work);
        c = c2;
        s = s2;
    }
    (c, s)
}
