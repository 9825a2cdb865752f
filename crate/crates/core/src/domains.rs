//! Cartan domains, their products, Wallach sets and generic norms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::grat::{parse_rational, GRat};
use crate::algebra::matrix::determinant_with;
use crate::algebra::poly::Poly;
use crate::algebra::series::HermSeries;
use crate::calabi::{normalize_diastasis, Diastasis};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `p x q` matrices, `p <= q`.
    I { p: u32, q: u32 },
    /// Skew-symmetric `n x n` matrices.
    II { n: u32 },
    /// Symmetric `n x n` matrices.
    III { n: u32 },
    /// Lie ball in `C^n`, `n >= 3`.
    IV { n: u32 },
    /// Exceptional, dimension 16.
    EVI,
    /// Exceptional, dimension 27.
    EVII,
    /// Unit ball `CH^n`.
    Ball { n: u32 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::I { p, q } => write!(f, "I:{p}x{q}"),
            Family::II { n } => write!(f, "II:{n}"),
            Family::III { n } => write!(f, "III:{n}"),
            Family::IV { n } => write!(f, "IV:{n}"),
            Family::EVI => write!(f, "EVI"),
            Family::EVII => write!(f, "EVII"),
            Family::Ball { n } => write!(f, "CH{n}"),
        }
    }
}

/// An irreducible bounded symmetric domain described by `(r, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CartanDomain {
    #[serde(flatten)]
    pub family: Family,
    pub r: u32,
    pub a: u32,
    pub b: u32,
    /// Complex dimension.
    pub n: u32,
    pub gamma: u32,
}

/// Genus and dimension from `(r, a, b)`.
pub fn genus_and_dimension(r: u32, a: u32, b: u32) -> (u32, u32) {
    ((r - 1) * a + b + 2, r + r * (r - 1) / 2 * a + r * b)
}

pub fn structural_constants(family: Family) -> Result<CartanDomain> {
    let bad = |m: &str| Err(Error::InconsistentParameters(format!("{family}: {m}")));
    let (r, a, b) = match family {
        Family::I { p, q } => {
            if p == 0 || p > q {
                return bad("need 1 <= p <= q");
            }
            (p, 2, q - p)
        }
        Family::II { n } => {
            if n < 2 {
                return bad("need n >= 2");
            }
            (n / 2, 4, if n % 2 == 0 { 0 } else { 2 })
        }
        Family::III { n } => {
            if n == 0 {
                return bad("need n >= 1");
            }
            (n, 1, 0)
        }
        Family::IV { n } => {
            if n < 3 {
                return bad("need n >= 3");
            }
            (2, n - 2, 0)
        }
        Family::EVI => (2, 6, 4),
        Family::EVII => (3, 8, 0),
        Family::Ball { n } => {
            if n == 0 {
                return bad("need n >= 1");
            }
            (1, 2, n - 1)
        }
    };
    let (gamma, n) = genus_and_dimension(r, a, b);
    let expected = match family {
        Family::I { p, q } => Some((p + q, p * q)),
        Family::II { n } => Some((2 * n - 2, n * (n - 1) / 2)),
        Family::III { n } => Some((n + 1, n * (n + 1) / 2)),
        Family::IV { n } => Some((n, n)),
        Family::EVI => Some((12, 16)),
        Family::EVII => Some((18, 27)),
        Family::Ball { n } => Some((n + 1, n)),
    };
    if let Some(e) = expected {
        if e != (gamma, n) {
            return bad("genus/dimension formulas disagree");
        }
    }
    Ok(CartanDomain { family, r, a, b, n, gamma })
}

impl CartanDomain {
    pub fn ball(n: u32) -> Self {
        structural_constants(Family::Ball { n }).expect("n >= 1")
    }

    pub fn wallach(&self) -> WallachSet {
        WallachSet { a: self.a, r: self.r }
    }

    /// Einstein constant of `g_Ω` in the sign convention used throughout
    /// (`-γ` for the noncompact metric).
    pub fn einstein_constant(&self) -> i64 {
        -(self.gamma as i64)
    }

    pub fn has_series(&self) -> bool {
        matches!(self.family, Family::Ball { .. } | Family::I { .. } | Family::III { .. } | Family::IV { .. })
    }

    /// Generic norm `N(z, z̄)` truncated at total degree `order`.
    pub fn generic_norm_series(&self, order: u32) -> Result<HermSeries> {
        let n = self.n as usize;
        let p = match self.family {
            Family::Ball { .. } => {
                let mut p = Poly::one(2 * n);
                for i in 0..n {
                    p = &p - &(&Poly::var(2 * n, i) * &Poly::var(2 * n, n + i));
                }
                p
            }
            Family::I { p, q } => {
                let (p, q) = (p as usize, q as usize);
                // z_ij at index i*q + j
                let m = |i: usize, k: usize| {
                    let mut e = if i == k { Poly::one(2 * n) } else { Poly::zero(2 * n) };
                    for j in 0..q {
                        e = &e - &(&Poly::var(2 * n, i * q + j) * &Poly::var(2 * n, n + k * q + j));
                    }
                    e
                };
                determinant_with(p, 2 * n, m)
            }
            Family::III { n: s } => {
                let s = s as usize;
                let idx = |i: usize, j: usize| {
                    let (i, j) = (i.min(j), i.max(j));
                    // upper triangle, row-major
                    i * s - i * (i + 1) / 2 + j
                };
                let m = |i: usize, k: usize| {
                    let mut e = if i == k { Poly::one(2 * n) } else { Poly::zero(2 * n) };
                    for j in 0..s {
                        e = &e - &(&Poly::var(2 * n, idx(i, j)) * &Poly::var(2 * n, n + idx(j, k)));
                    }
                    e
                };
                determinant_with(s, 2 * n, m)
            }
            Family::IV { .. } => {
                let mut sq = Poly::zero(2 * n);
                let mut zz = Poly::zero(2 * n);
                let mut zzb = Poly::zero(2 * n);
                for i in 0..n {
                    sq = &sq + &(&Poly::var(2 * n, i) * &Poly::var(2 * n, n + i));
                    zz = &zz + &Poly::var(2 * n, i).pow(2);
                    zzb = &zzb + &Poly::var(2 * n, n + i).pow(2);
                }
                &(&Poly::one(2 * n) - &sq.scale(&GRat::from_int(2))) + &(&zz * &zzb)
            }
            _ => return Err(Error::Unsupported(format!("no generic norm for {}", self.family))),
        };
        Ok(HermSeries::from_poly(n, order, p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WallachSet {
    pub a: u32,
    pub r: u32,
}

impl WallachSet {
    /// Start of the continuous part, `(r-1)a/2`.
    pub fn threshold(&self) -> BigRational {
        BigRational::new(BigInt::from((self.r - 1) * self.a), BigInt::from(2))
    }

    pub fn member(&self, x: &BigRational) -> Result<bool> {
        if x.is_negative() {
            return Err(Error::NegativeValue(x.to_string()));
        }
        if x > &self.threshold() {
            return Ok(true);
        }
        let j = x * BigRational::from_integer(BigInt::from(2)) / BigRational::from_integer(BigInt::from(self.a));
        Ok(j.is_integer())
    }

    /// Membership in `W \ {0}`.
    pub fn member_nonzero(&self, x: &BigRational) -> Result<bool> {
        Ok(!x.is_zero() && self.member(x)?)
    }
}

/// `Ω_1 x ... x Ω_s` with exponents `μ_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDomain {
    pub factors: Vec<CartanDomain>,
    #[serde(with = "crate::algebra::grat::rational_vec")]
    pub mu: Vec<BigRational>,
}

impl ProductDomain {
    pub fn new(factors: Vec<CartanDomain>, mu: Vec<BigRational>) -> Result<Self> {
        if factors.is_empty() || factors.len() != mu.len() {
            return Err(Error::InconsistentParameters(format!(
                "{} factors but {} exponents",
                factors.len(),
                mu.len()
            )));
        }
        if let Some(m) = mu.iter().find(|m| !m.is_positive()) {
            return Err(Error::InconsistentParameters(format!("exponent {m} is not positive")));
        }
        Ok(ProductDomain { factors, mu })
    }

    pub fn irreducible(d: CartanDomain, mu: BigRational) -> Result<Self> {
        Self::new(vec![d], vec![mu])
    }

    pub fn dimension(&self) -> u32 {
        self.factors.iter().map(|f| f.n).sum()
    }

    /// `Π N_j^{μ_j}` on the concatenated coordinates.
    pub fn generic_norm_series(&self, order: u32) -> Result<HermSeries> {
        let n = self.dimension() as usize;
        let mut acc = HermSeries::one(n, order);
        let mut offset = 0;
        for (f, mu) in self.factors.iter().zip(&self.mu) {
            let nj = f.n as usize;
            let mut s = f.generic_norm_series(order)?;
            if !mu.is_one() {
                s = s.pow_rational(mu)?;
            }
            let map: Vec<usize> = (offset..offset + nj).collect();
            acc = acc.mul(&s.embed(n, &map));
            offset += nj;
        }
        Ok(acc)
    }
}

/// `-log N` in normal form.
pub fn base_diastasis(d: &CartanDomain, order: u32) -> Result<Diastasis> {
    normalize_diastasis(&d.generic_norm_series(order)?.log()?.neg())
}

/// Parsed domain descriptor: `CH2`, `CHn:3`, `I:2x2`, `III:2`,
/// `prod:[CH1,CH1]:mu=[1,2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    pub factors: Vec<CartanDomain>,
    pub mu: Option<Vec<BigRational>>,
}

impl DomainSpec {
    pub fn single(&self) -> Option<CartanDomain> {
        (self.factors.len() == 1).then(|| self.factors[0])
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    let err = || Error::Parse(format!("unknown domain {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| err());
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("CHn:") {
        return Ok(Family::Ball { n: num(rest)? });
    }
    if let Some(rest) = s.strip_prefix("I:") {
        let (p, q) = rest.split_once('x').ok_or_else(err)?;
        return Ok(Family::I { p: num(p)?, q: num(q)? });
    }
    if let Some(rest) = s.strip_prefix("II:") {
        return Ok(Family::II { n: num(rest)? });
    }
    if let Some(rest) = s.strip_prefix("III:") {
        return Ok(Family::III { n: num(rest)? });
    }
    if let Some(rest) = s.strip_prefix("IV:") {
        return Ok(Family::IV { n: num(rest)? });
    }
    match s {
        "EVI" | "E16" => return Ok(Family::EVI),
        "EVII" | "E27" => return Ok(Family::EVII),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("CH") {
        return Ok(Family::Ball { n: num(rest)? });
    }
    Err(err())
}

fn bracket_list(s: &str) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..], got {s:?}")))?;
    Ok(inner.split(',').map(str::trim).filter(|t| !t.is_empty()).collect())
}

impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.trim().strip_prefix("prod:") {
            let (list, mu) = match rest.split_once(":mu=") {
                Some((l, m)) => (l, Some(m)),
                None => (rest, None),
            };
            let factors = bracket_list(list)?
                .into_iter()
                .map(|t| structural_constants(parse_family(t)?))
                .collect::<Result<Vec<_>>>()?;
            let mu = mu
                .map(|m| bracket_list(m)?.into_iter().map(parse_rational).collect::<Result<Vec<_>>>())
                .transpose()?;
            if let Some(m) = &mu {
                ProductDomain::new(factors.clone(), m.clone())?;
            }
            return Ok(DomainSpec { factors, mu });
        }
        Ok(DomainSpec { factors: vec![structural_constants(parse_family(s)?)?], mu: None })
    }
}

/// Every catalogued family up to small sizes, for sweeping invariants.
pub fn catalog() -> Vec<CartanDomain> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(Family::Ball { n });
    }
    for p in 1..=4 {
        for q in p..=5 {
            out.push(Family::I { p, q });
        }
    }
    for n in 2..=8 {
        out.push(Family::II { n });
    }
    for n in 1..=6 {
        out.push(Family::III { n });
    }
    for n in 3..=8 {
        out.push(Family::IV { n });
    }
    out.push(Family::EVI);
    out.push(Family::EVII);
    out.into_iter().map(|f| structural_constants(f).expect("catalogued")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    #[test]
    fn constants() {
        let d = CartanDomain::ball(1);
        assert_eq!((d.r, d.a, d.b, d.n, d.gamma), (1, 2, 0, 1, 2));
        let d = structural_constants(Family::I { p: 2, q: 2 }).unwrap();
        assert_eq!((d.r, d.a, d.b, d.n, d.gamma), (2, 2, 0, 4, 4));
        assert_eq!(CartanDomain::ball(3).gamma, 4);
        assert!(structural_constants(Family::I { p: 3, q: 2 }).is_err());
    }

    #[test]
    fn wallach() {
        let w = WallachSet { a: 2, r: 1 };
        assert!(w.member(&rat(3, 10)).unwrap());
        let w = WallachSet { a: 1, r: 2 };
        assert!(!w.member(&rat(1, 4)).unwrap());
        assert!(w.member(&rat(1, 2)).unwrap());
        assert!(w.member(&rat(0, 1)).unwrap());
        assert!(!w.member_nonzero(&rat(0, 1)).unwrap());
        assert!(w.member(&rat(-1, 2)).is_err());
    }

    #[test]
    fn descriptors() {
        let d: DomainSpec = "CHn:3".parse().unwrap();
        assert_eq!(d.single().unwrap().gamma, 4);
        let d: DomainSpec = "prod:[CH1,CH1]:mu=[1,2]".parse().unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.mu.unwrap(), vec![rat(1, 1), rat(2, 1)]);
        assert!("I:2y2".parse::<DomainSpec>().is_err());
    }

    #[test]
    fn ball_norm() {
        let s = CartanDomain::ball(2).generic_norm_series(6).unwrap();
        let expect = HermSeries::one(2, 6).sub(&HermSeries::norm_sq_sum(2, 6, 0..2));
        assert_eq!(s, expect);
    }
}
