//! Truncated Hermitian power series `Σ a_IJ z^I z̄^J` with `|I| + |J| <= H`.
//!
//! Internally a polynomial in `2n` slots: `z_1..z_n` then `z̄_1..z̄_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::grat::GRat;
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: u32 = 10;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermSeries {
    nvars: usize,
    order: u32,
    poly: Poly,
}

impl HermSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        HermSeries { nvars, order, poly: Poly::zero(2 * nvars) }
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, GRat::one())
    }

    pub fn constant(nvars: usize, order: u32, c: GRat) -> Self {
        HermSeries { nvars, order, poly: Poly::constant(2 * nvars, c) }
    }

    /// Wraps a polynomial in `2 * nvars` slots, dropping terms above `order`.
    pub fn from_poly(nvars: usize, order: u32, poly: Poly) -> Self {
        assert_eq!(poly.nvars(), 2 * nvars, "series polynomial must have 2n slots");
        HermSeries { nvars, order, poly: poly.truncate(order) }
    }

    pub fn z(nvars: usize, order: u32, i: usize) -> Self {
        Self::from_poly(nvars, order, Poly::var(2 * nvars, i))
    }

    pub fn zbar(nvars: usize, order: u32, i: usize) -> Self {
        Self::from_poly(nvars, order, Poly::var(2 * nvars, nvars + i))
    }

    /// `|z_i|^2`.
    pub fn norm_sq(nvars: usize, order: u32, i: usize) -> Self {
        Self::from_poly(nvars, order, &Poly::var(2 * nvars, i) * &Poly::var(2 * nvars, nvars + i))
    }

    /// `Σ_i |z_i|^2` over the listed variables.
    pub fn norm_sq_sum(nvars: usize, order: u32, vars: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::zero(nvars, order);
        for i in vars {
            s = s.add(&Self::norm_sq(nvars, order, i));
        }
        s
    }

    /// Single term `c z^I z̄^J`.
    pub fn monomial(order: u32, i: &[u32], j: &[u32], c: GRat) -> Self {
        assert_eq!(i.len(), j.len());
        let n = i.len();
        let mut e = i.to_vec();
        e.extend_from_slice(j);
        Self::from_poly(n, order, Poly::monomial(e, c))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    fn key(&self, i: &[u32], j: &[u32]) -> Monomial {
        let mut e = i.to_vec();
        e.extend_from_slice(j);
        Monomial(e)
    }

    pub fn coeff(&self, i: &[u32], j: &[u32]) -> GRat {
        self.poly.coeff(&self.key(i, j))
    }

    pub fn constant_term(&self) -> GRat {
        self.poly.constant_term()
    }

    /// Stored terms as `(I, J, a_IJ)` in graded-lex order of `(I, J)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], &GRat)> + '_ {
        let n = self.nvars;
        self.poly.terms().map(move |(m, c)| (&m.0[..n], &m.0[n..], c))
    }

    pub fn with_order(&self, order: u32) -> Self {
        HermSeries { nvars: self.nvars, order, poly: if order < self.order { self.poly.truncate(order) } else { self.poly.clone() } }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::VariableMismatch(self.nvars, o.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let order = self.order.min(o.order);
        Ok(HermSeries { nvars: self.nvars, order, poly: (&self.poly + &o.poly).truncate(order) })
    }

    /// Sum; panics on a variable-count mismatch (use `try_add` to handle it).
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("series variable count mismatch")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        HermSeries { nvars: self.nvars, order: self.order, poly: -&self.poly }
    }

    pub fn scale(&self, c: &GRat) -> Self {
        HermSeries { nvars: self.nvars, order: self.order, poly: self.poly.scale(c) }
    }

    pub fn scale_q(&self, q: &BigRational) -> Self {
        self.scale(&GRat::from_rational(q.clone()))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let order = self.order.min(o.order);
        Ok(HermSeries { nvars: self.nvars, order, poly: self.poly.mul_truncated(&o.poly, Some(order)) })
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("series variable count mismatch")
    }

    pub fn pow_int(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `Σ_k c_k u^k` for a series `u` with zero constant term.
    fn compose_scalar(u: &Self, coeffs: impl Fn(u32) -> BigRational) -> Self {
        let mut acc = Self::constant(u.nvars, u.order, GRat::from_rational(coeffs(0)));
        let mut power = Self::one(u.nvars, u.order);
        for k in 1..=u.order {
            power = power.mul(u);
            if power.is_zero() {
                break;
            }
            let c = coeffs(k);
            if !c.is_zero() {
                acc = acc.add(&power.scale_q(&c));
            }
        }
        acc
    }

    pub fn exp(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(Error::NonzeroConstant(c0.to_string()));
        }
        let mut fact = vec![BigInt::one()];
        for k in 1..=self.order as usize {
            let f = &fact[k - 1] * BigInt::from(k);
            fact.push(f);
        }
        Ok(Self::compose_scalar(self, |k| BigRational::new(BigInt::one(), fact[k as usize].clone())))
    }

    pub fn log(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantNotOne(c0.to_string()));
        }
        let u = self.sub(&Self::one(self.nvars, self.order));
        Ok(Self::compose_scalar(&u, |k| {
            if k == 0 {
                BigRational::zero()
            } else {
                let s = if k % 2 == 1 { 1 } else { -1 };
                BigRational::new(BigInt::from(s), BigInt::from(k))
            }
        }))
    }

    /// `log(self) = log(c0) + returned series` for a positive rational
    /// constant term `c0`.
    pub fn log_scaled(&self) -> Result<(BigRational, Self)> {
        let c0 = self.constant_term();
        if !c0.is_real() || !c0.re().is_positive() {
            return Err(Error::ConstantNotOne(c0.to_string()));
        }
        let inv = GRat::from_rational(c0.re().recip());
        Ok((c0.re().clone(), self.scale(&inv).log()?))
    }

    /// Generalized binomial series `Σ_k C(q, k) (a - 1)^k`.
    pub fn pow_rational(&self, q: &BigRational) -> Result<Self> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::ConstantNotOne(c0.to_string()));
        }
        let u = self.sub(&Self::one(self.nvars, self.order));
        let binom = binomial_coeffs(q, self.order);
        Ok(Self::compose_scalar(&u, |k| binom[k as usize].clone()))
    }

    /// `a(z, -z̄)`: multiplies `a_IJ` by `(-1)^|J|`.
    pub fn substitute_negate_bar(&self) -> Self {
        let n = self.nvars;
        HermSeries {
            nvars: n,
            order: self.order,
            poly: self.poly.map_coeffs(|m, c| {
                let j: u32 = m.0[n..].iter().sum();
                if j % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            }),
        }
    }

    /// Series of the complex conjugate function: `a_IJ -> conj(a_JI)`.
    pub fn conjugate(&self) -> Self {
        let n = self.nvars;
        let perm: Vec<usize> = (0..2 * n).map(|k| if k < n { k + n } else { k - n }).collect();
        HermSeries { nvars: n, order: self.order, poly: self.poly.relabel(&perm, 2 * n).conj_coeffs() }
    }

    /// `a_JI = conj(a_IJ)` for every stored pair, i.e. the series is real-valued.
    pub fn is_hermitian(&self) -> bool {
        self.conjugate() == *self
    }

    /// `∂/∂z_i`, or `∂/∂z̄_i` with `conjugate`; order drops by one.
    pub fn derivative(&self, i: usize, conjugate: bool) -> Self {
        let slot = if conjugate { self.nvars + i } else { i };
        HermSeries {
            nvars: self.nvars,
            order: self.order.saturating_sub(1),
            poly: self.poly.derivative(slot).truncate(self.order.saturating_sub(1)),
        }
    }

    /// Embeds into a larger variable set: variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let n = self.nvars;
        let perm: Vec<usize> = (0..2 * n).map(|k| if k < n { map[k] } else { nvars + map[k - n] }).collect();
        HermSeries { nvars, order: self.order, poly: self.poly.relabel(&perm, 2 * nvars) }
    }

    /// Keeps terms satisfying a predicate on `(I, J)`.
    pub fn filter(&self, f: impl Fn(&[u32], &[u32]) -> bool) -> Self {
        let n = self.nvars;
        HermSeries { nvars: n, order: self.order, poly: self.poly.retain(|m, _| f(&m.0[..n], &m.0[n..])) }
    }

    /// Sets `z_i = z̄_i = 0` for every variable `i` with `keep[i] == false`, then
    /// drops those variables.
    pub fn restrict_vars(&self, keep: &[bool]) -> Self {
        let n = self.nvars;
        let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
        let m = kept.len();
        let filtered = self.filter(|i, j| (0..n).all(|k| keep[k] || (i[k] == 0 && j[k] == 0)));
        let terms = filtered.poly.terms().map(|(mono, c)| {
            let mut e = Vec::with_capacity(2 * m);
            for &k in &kept {
                e.push(mono.0[k]);
            }
            for &k in &kept {
                e.push(mono.0[n + k]);
            }
            (Monomial(e), c.clone())
        });
        HermSeries { nvars: m, order: self.order, poly: Poly::from_terms(2 * m, terms.collect::<Vec<_>>()) }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.terms().map(|(i, j, c)| CoeffJson { i: i.to_vec(), j: j.to_vec(), c: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let mut p = Poly::zero(2 * j.nvars);
        for t in &j.coeffs {
            if t.i.len() != j.nvars || t.j.len() != j.nvars {
                return Err(Error::VariableMismatch(t.i.len().max(t.j.len()), j.nvars));
            }
            let mut e = t.i.clone();
            e.extend_from_slice(&t.j);
            p.add_term(Monomial(e), t.c.clone());
        }
        Ok(Self::from_poly(j.nvars, j.order, p))
    }

    /// Human-readable form with variables `z1.., z1bar..`.
    pub fn display(&self) -> String {
        let mut names: Vec<String> = (1..=self.nvars).map(|k| format!("z{k}")).collect();
        names.extend((1..=self.nvars).map(|k| format!("z{k}bar")));
        self.poly.display_with(&names)
    }
}

impl std::fmt::Debug for HermSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[n={}, H={}] {}", self.nvars, self.order, self.display())
    }
}

/// `C(q, k)` for `k = 0..=h`.
pub fn binomial_coeffs(q: &BigRational, h: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for k in 1..=h as i64 {
        let prev = out.last().unwrap().clone();
        let f = (q - BigRational::from_integer(BigInt::from(k - 1))) / BigRational::from_integer(BigInt::from(k));
        out.push(prev * f);
    }
    out
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffJson {
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub c: GRat,
}

/// JSON schema for a series: `{"nvars", "order", "coeffs": [{"I", "J", "c"}]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesJson {
    pub nvars: usize,
    pub order: u32,
    pub coeffs: Vec<CoeffJson>,
}

impl Serialize for HermSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        HermSeries::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    #[test]
    fn mercator_series() {
        let x = HermSeries::norm_sq(1, 8, 0);
        let l = HermSeries::one(1, 8).add(&x).log().unwrap();
        for h in 1..=4u32 {
            let s = if h % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coeff(&[h], &[h]), GRat::from_ratio(s, h as i64));
        }
        assert_eq!(l.len(), 4);
    }

    #[test]
    fn square_root_binomial() {
        let x = HermSeries::norm_sq(1, 8, 0);
        let r = HermSeries::one(1, 8).add(&x).pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(r.coeff(&[2], &[2]), GRat::from_ratio(-1, 8));
        assert_eq!(r.coeff(&[3], &[3]), GRat::from_ratio(1, 16));
    }

    #[test]
    fn exp_requires_zero_constant() {
        assert!(HermSeries::one(1, 4).exp().is_err());
        assert!(HermSeries::zero(1, 4).log().is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = HermSeries::one(2, 4)
            .add(&HermSeries::norm_sq(2, 4, 1).scale(&GRat::from_ratio(-3, 7)))
            .add(&HermSeries::monomial(4, &[1, 0], &[0, 1], GRat::new(rat(1, 2), rat(-1, 3))));
        let j = serde_json::to_string(&s).unwrap();
        let back: HermSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
