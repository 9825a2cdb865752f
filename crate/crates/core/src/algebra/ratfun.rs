//! Exact multivariate rational functions with a canonical form.
//!
//! Canonical form: numerator and denominator are coprime. If the denominator
//! has real coefficients both parts are scaled so the denominator has integer
//! coefficients with content 1 and a positive graded-lex leading coefficient;
//! otherwise the denominator is made monic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gcd::gcd;
use super::grat::GRat;
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    vars: Vec<String>,
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(vars: Vec<String>, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.nvars() != vars.len() || den.nvars() != vars.len() {
            return Err(Error::VariableMismatch(num.nvars().max(den.nvars()), vars.len()));
        }
        Ok(Self::canonical(vars, num, den))
    }

    /// Builds without the gcd step; the caller guarantees coprimality.
    pub fn new_coprime(vars: Vec<String>, num: Poly, den: Poly) -> Self {
        let mut f = RationalFunction { vars, num, den };
        f.normalize_scale();
        f
    }

    pub fn from_poly(vars: Vec<String>, p: Poly) -> Self {
        let n = p.nvars();
        Self::new_coprime(vars, p, Poly::one(n))
    }

    pub fn constant(vars: Vec<String>, c: GRat) -> Self {
        let n = vars.len();
        Self::from_poly(vars, Poly::constant(n, c))
    }

    pub fn var(vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        Self::from_poly(vars, Poly::var(n, i))
    }

    fn canonical(vars: Vec<String>, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            let n = vars.len();
            return RationalFunction { vars, num, den: Poly::one(n) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let mut f = RationalFunction { vars, num, den };
        f.normalize_scale();
        f
    }

    fn normalize_scale(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.vars.len());
            return;
        }
        let s = if self.den.has_real_coeffs() {
            let mut l = BigInt::one();
            let mut g = BigInt::zero();
            for (_, c) in self.den.terms() {
                l = l.lcm(c.re().denom());
                g = g.gcd(c.re().numer());
            }
            let mut s = BigRational::new(l, g);
            if self.den.leading_coeff().re().is_negative() {
                s = -s;
            }
            GRat::from_rational(s)
        } else {
            self.den.leading_coeff().inv().expect("nonzero")
        };
        if !s.is_one() {
            self.num = self.num.scale(&s);
            self.den = self.den.scale(&s);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.vars, o.vars, "rational functions over different variable rosters");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        if self.den == o.den {
            return Self::canonical(self.vars.clone(), &self.num + &o.num, self.den.clone());
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::canonical(self.vars.clone(), num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { vars: self.vars.clone(), num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        // cross-cancel first to keep the gcd inputs small
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).unwrap_or_else(|| self.num.clone());
        let d2 = o.den.div_exact(&g1).unwrap_or_else(|| o.den.clone());
        let b = o.num.div_exact(&g2).unwrap_or_else(|| o.num.clone());
        let d1 = self.den.div_exact(&g2).unwrap_or_else(|| self.den.clone());
        Self::new_coprime(self.vars.clone(), &a * &b, &d1 * &d2)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new_coprime(self.vars.clone(), self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &GRat) -> Self {
        Self::new_coprime(self.vars.clone(), self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new_coprime(self.vars.clone(), self.num.pow(e), self.den.pow(e))
    }

    /// Partial derivative in the variable with roster index `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::canonical(self.vars.clone(), dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::canonical(self.vars.clone(), num, self.den.pow(2))
    }

    /// `∂/∂var` or, with `conjugate`, `∂/∂var̄`; the conjugate variable is
    /// looked up as `var` followed by `bar`.
    pub fn wirtinger_derivative(&self, var: &str, conjugate: bool) -> Result<Self> {
        let name = if conjugate { format!("{var}bar") } else { var.to_string() };
        let i = self.var_index(&name)?;
        Ok(self.derivative(i))
    }

    /// Substitutes every variable by a rational function over a new roster.
    pub fn compose(&self, images: &[RationalFunction]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::VariableMismatch(images.len(), self.vars.len()));
        }
        let vars = images[0].vars.clone();
        let eval = |p: &Poly| -> RationalFunction {
            let mut acc = RationalFunction::constant(vars.clone(), GRat::zero());
            for (m, c) in p.terms() {
                let mut t = RationalFunction::constant(vars.clone(), c.clone());
                for (k, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&images[k].pow(e));
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    /// Evaluates at a point; `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[GRat]) -> Option<GRat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(point) / &d)
    }

    pub fn coeff_num(&self, m: &Monomial) -> GRat {
        self.num.coeff(m)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.display_with(&self.vars), self.den.display_with(&self.vars))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// JSON form of a polynomial: a list of `[exponents, "coefficient"]` pairs.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<(Vec<u32>, GRat)>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson { nvars: p.nvars(), terms: p.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect() }
    }
}

impl TryFrom<PolyJson> for Poly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Poly> {
        let mut out = Poly::zero(j.nvars);
        for (e, c) in j.terms {
            if e.len() != j.nvars {
                return Err(Error::VariableMismatch(e.len(), j.nvars));
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RationalFunctionJson {
    pub vars: Vec<String>,
    pub numerator: PolyJson,
    pub denominator: PolyJson,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalFunctionJson {
            vars: self.vars.clone(),
            numerator: (&self.num).into(),
            denominator: (&self.den).into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RationalFunctionJson::deserialize(d)?;
        let num = Poly::try_from(j.numerator).map_err(serde::de::Error::custom)?;
        let den = Poly::try_from(j.denominator).map_err(serde::de::Error::custom)?;
        RationalFunction::new(j.vars, num, den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz() -> Vec<String> {
        vec!["z".into(), "zbar".into()]
    }

    fn one_plus_zzbar() -> RationalFunction {
        let z = RationalFunction::var(zz(), 0);
        let zb = RationalFunction::var(zz(), 1);
        RationalFunction::constant(zz(), GRat::one()).add(&z.mul(&zb))
    }

    #[test]
    fn quotient_rule() {
        // d/dzbar (z / (1 + z zbar)) = -z^2 / (1 + z zbar)^2
        let f = RationalFunction::var(zz(), 0).div(&one_plus_zzbar()).unwrap();
        let df = f.wirtinger_derivative("z", true).unwrap();
        let z2 = RationalFunction::var(zz(), 0).pow(2);
        let expect = z2.neg().div(&one_plus_zzbar().pow(2)).unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn canonical_form_cancels() {
        let a = one_plus_zzbar();
        let f = a.pow(3).div(&a.pow(2).scale(&GRat::from_int(-6))).unwrap();
        assert_eq!(f, a.scale(&GRat::from_ratio(-1, 6)));
        assert!(f.denom().is_constant());
    }

    #[test]
    fn unknown_variable() {
        assert!(one_plus_zzbar().wirtinger_derivative("w", false).is_err());
    }
}
