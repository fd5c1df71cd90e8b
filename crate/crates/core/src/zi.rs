//! Exact arithmetic in the Gaussian integers Z[i].
//!
//! Coordinates are arbitrary-precision so that determinants and coset
//! bookkeeping never overflow silently.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A Gaussian integer `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt { re: re.into(), im: im.into() }
    }

    pub fn from_int(re: impl Into<BigInt>) -> Self {
        GaussInt { re: re.into(), im: BigInt::zero() }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussInt::new(0, 1)
    }

    /// The four units `1, i, -1, -i`.
    pub fn units() -> [GaussInt; 4] {
        [GaussInt::new(1, 0), GaussInt::new(0, 1), GaussInt::new(-1, 0), GaussInt::new(0, -1)]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> GaussInt {
        GaussInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }

    /// Coordinates as `i64`, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.re.to_i64()?, self.im.to_i64()?))
    }

    /// Euclidean step: `self = q·divisor + r` with `q` the coordinate-wise
    /// nearest integer to `self/divisor`, so `norm(r) ≤ norm(divisor)/2`.
    pub fn div_rem_nearest(&self, divisor: &GaussInt) -> Result<(GaussInt, GaussInt)> {
        if divisor.is_zero() {
            return domain("division by the zero Gaussian integer");
        }
        let n = divisor.norm();
        let num = self * &divisor.conj();
        let q = GaussInt { re: round_div(&num.re, &n), im: round_div(&num.im, &n) };
        let r = self - &(&q * divisor);
        Ok((q, r))
    }

    /// `self / divisor` when the quotient lies in Z[i].
    pub fn exact_div(&self, divisor: &GaussInt) -> Result<Option<GaussInt>> {
        if divisor.is_zero() {
            return domain("division by the zero Gaussian integer");
        }
        let n = divisor.norm();
        let num = self * &divisor.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Ok(Some(GaussInt { re: qr, im: qi }))
        } else {
            Ok(None)
        }
    }

    /// Unit multiple of `self` in the half-open first quadrant
    /// `{re > 0, im ≥ 0}`; zero maps to zero.
    pub fn canonical_associate(&self) -> GaussInt {
        if self.is_zero() {
            return GaussInt::zero();
        }
        GaussInt::units()
            .iter()
            .map(|u| u * self)
            .find(|c| c.re.is_positive() && !c.im.is_negative())
            .expect("exactly one associate lies in the half-open first quadrant")
    }
}

/// True iff `b / a ∈ Z[i]`.
pub fn divides(a: &GaussInt, b: &GaussInt) -> Result<bool> {
    if a.is_zero() {
        return domain("divides: divisor must be nonzero");
    }
    Ok(b.exact_div(a)?.is_some())
}

/// Greatest common divisor, normalised by [`GaussInt::canonical_associate`].
pub fn gcd_gaussian(a: &GaussInt, b: &GaussInt) -> Result<GaussInt> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd of (0, 0) is undefined");
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem_nearest(&y)?;
        x = y;
        y = r;
    }
    Ok(x.canonical_associate())
}

/// gcd of a nonempty list, skipping zeros.
pub fn gcd_all<'a>(items: impl IntoIterator<Item = &'a GaussInt>) -> Result<GaussInt> {
    let mut acc = GaussInt::zero();
    for g in items {
        if acc.is_zero() && g.is_zero() {
            continue;
        }
        acc = gcd_gaussian(&acc, g)?;
    }
    if acc.is_zero() {
        return domain("gcd of an all-zero list is undefined");
    }
    Ok(acc)
}

fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    // floor((2x + n) / 2n) for n > 0
    let two = BigInt::from(2);
    (&two * x + n).div_floor(&(&two * n))
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl Add for &GaussInt {
    type Output = GaussInt;
    fn add(self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussInt {
    type Output = GaussInt;
    fn sub(self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussInt {
    type Output = GaussInt;
    fn mul(self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussInt {
            type Output = GaussInt;
            fn $m(self, o: GaussInt) -> GaussInt {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        -&self
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussInt {
    type Err = Error;

    /// Accepts `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`, `1+i` (whitespace ignored).
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a Gaussian integer: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<BigInt>().map(GaussInt::from_int).map_err(|_| bad());
        };
        // split real and imaginary parts at the last sign not in leading position
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k);
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            other => other.parse::<BigInt>().map_err(|_| bad())?,
        };
        let re = re_str.parse::<BigInt>().map_err(|_| bad())?;
        Ok(GaussInt { re, im })
    }
}

impl Serialize for GaussInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
