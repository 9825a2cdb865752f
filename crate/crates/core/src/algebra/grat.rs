//! Gaussian rationals `p/q + (r/s) i` with arbitrary precision.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parses a rational written as `p`, `-p`, `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(format!("empty rational in {s:?}")));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer in {s:?}")))?;
        Ok(BigRational::from_integer(p))
    }
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// An element of `Q(i)`. Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GRat {
    re: BigRational,
    im: BigRational,
}

impl GRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GRat { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GRat { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(rat(p, q))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|x|^2`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GRat { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if self.im.is_zero() {
            return Self::from_rational(&self.re * r);
        }
        GRat { re: &self.re * r, im: &self.im * r }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GRat::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign of a real value; `None` for non-real values.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        if !self.is_real() {
            return None;
        }
        Some(self.re.cmp(&BigRational::zero()))
    }
}

impl Zero for GRat {
    fn zero() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GRat {
    fn one() -> Self {
        Self::from_rational(BigRational::one())
    }
}

impl From<BigRational> for GRat {
    fn from(r: BigRational) -> Self {
        GRat::from_rational(r)
    }
}

impl From<i64> for GRat {
    fn from(n: i64) -> Self {
        GRat::from_int(n)
    }
}

impl<'a> Add<&'a GRat> for &'a GRat {
    type Output = GRat;
    fn add(self, o: &GRat) -> GRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GRat::from_rational(&self.re + &o.re);
        }
        GRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GRat> for &'a GRat {
    type Output = GRat;
    fn sub(self, o: &GRat) -> GRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GRat::from_rational(&self.re - &o.re);
        }
        GRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GRat> for &'a GRat {
    type Output = GRat;
    fn mul(self, o: &GRat) -> GRat {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => GRat::from_rational(&self.re * &o.re),
            (true, false) => GRat { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => GRat { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => GRat {
                re: &self.re * &o.re - &self.im * &o.im,
                im: &self.re * &o.im + &self.im * &o.re,
            },
        }
    }
}

impl<'a> Div<&'a GRat> for &'a GRat {
    type Output = GRat;
    /// Panics on division by zero; callers check first.
    fn div(self, o: &GRat) -> GRat {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division of a Gaussian rational by zero");
            return GRat { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        let inv = o.inv().expect("division of a Gaussian rational by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GRat> for GRat {
            type Output = GRat;
            fn $m(self, o: GRat) -> GRat {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GRat> for GRat {
            type Output = GRat;
            fn $m(self, o: &GRat) -> GRat {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GRat> for GRat {
    fn add_assign(&mut self, o: &GRat) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl SubAssign<&GRat> for GRat {
    fn sub_assign(&mut self, o: &GRat) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

impl MulAssign<&GRat> for GRat {
    fn mul_assign(&mut self, o: &GRat) {
        *self = &*self * o;
    }
}

impl fmt::Display for GRat {
    /// `p/q` for real values, `p/q+r/s i` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.im.is_negative() {
            write!(f, "{}-{} i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{} i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GRat {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/s i`, `p/q-r/s i`, `r/s i`, and `i`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty Gaussian rational".into()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(GRat::from_rational(parse_rational(&t)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(GRat::new(parse_rational(re)?, im))
    }
}

impl Serialize for GRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a `BigRational` as an exact `p/q` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<BigRational>`.
pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_lowest_terms() {
        let a = GRat::from_ratio(2, 4);
        assert_eq!(a.to_string(), "1/2");
        let b = GRat::new(rat(1, 2), rat(-3, 4));
        assert_eq!(b.to_string(), "1/2-3/4 i");
        let p = &b * &b.conj();
        assert_eq!(p, GRat::from_rational(rat(13, 16)));
        assert_eq!(&(&b / &b) - &GRat::one(), GRat::zero());
        assert_eq!(&GRat::i() * &GRat::i(), GRat::from_int(-1));
    }

    #[test]
    fn parse_formats() {
        for s in ["3", "-7/3", "1/2+3/4 i", "1/2-3/4i", "2 i", "-i", "0+1/5 i"] {
            let g: GRat = s.parse().unwrap();
            let back: GRat = g.to_string().parse().unwrap();
            assert_eq!(g, back, "{s}");
        }
        assert_eq!("-i".parse::<GRat>().unwrap(), -GRat::i());
        assert!("1/0".parse::<GRat>().is_err());
        assert!("x".parse::<GRat>().is_err());
    }
}
