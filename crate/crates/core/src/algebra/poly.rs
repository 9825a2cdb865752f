//! Sparse multivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::grat::GRat;

/// Exponent vector. Ordered graded-lexicographically: total degree first, then
/// the exponent vectors left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, GRat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GRat::one())
    }

    pub fn constant(nvars: usize, c: GRat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), GRat::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: GRat) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, GRat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GRat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, GRat> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> GRat {
        self.terms.get(m).cloned().unwrap_or_else(GRat::zero)
    }

    pub fn constant_term(&self) -> GRat {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn add_term(&mut self, m: Monomial, c: GRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &GRat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GRat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(GRat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(GRat::is_real)
    }

    pub fn scale(&self, c: &GRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Monomial, &GRat) -> GRat) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))))
    }

    pub fn retain(&self, f: impl Fn(&Monomial, &GRat) -> bool) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| f(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn conj_coeffs(&self) -> Poly {
        self.map_coeffs(|_, c| c.conj())
    }

    /// Product keeping only monomials of total degree `<= max_deg`.
    pub fn mul_truncated(&self, o: &Poly, max_deg: Option<u32>) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial variable count mismatch");
        let mut out: BTreeMap<Monomial, GRat> = BTreeMap::new();
        let mut rhs: Vec<(&Monomial, &GRat, u32)> = o.terms.iter().map(|(m, c)| (m, c, m.degree())).collect();
        rhs.sort_by_key(|t| t.2);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for &(mb, cb, db) in &rhs {
                if let Some(h) = max_deg {
                    if da + db > h {
                        break;
                    }
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match out.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &c;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn truncate(&self, max_deg: u32) -> Poly {
        self.retain(|m, _| m.degree() <= max_deg)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
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

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[var] -= 1;
            out.add_term(Monomial(ex), c * &GRat::from_int(e as i64));
        }
        out
    }

    /// Composition: variable `i` is replaced by `images[i]`; all images share
    /// one variable count, which becomes the result's.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval(&self, point: &[GRat]) -> GRat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]`
    /// of a ring with `nvars` variables.
    pub fn relabel(&self, perm: &[usize], nvars: usize) -> Poly {
        assert_eq!(perm.len(), self.nvars);
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (i, &p) in perm.iter().enumerate() {
                    e[p] += m.0[i];
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Coefficients of `var^k`, lowest first; each coefficient is a
    /// polynomial in the same ring not involving `var`.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_univariate(var: usize, nvars: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut e = m.0.clone();
                e[var] += k as u32;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            if !dm.divides(m) {
                return None;
            }
            let tm = m.div(&dm);
            let tc = c * &dc_inv;
            let mut t = Poly::zero(self.nvars);
            t.add_term(tm, tc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Splits into coefficients by degree in a subset of variables is not
    /// needed often; this helper returns the part of exact total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Poly {
        self.retain(|m, _| m.degree() == k)
    }

    /// Formats with variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let cs = if c.is_real() { c.to_string() } else { format!("({c})") };
            if mono.is_empty() {
                parts.push(cs);
            } else {
                parts.push(format!("{}*{}", cs, mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial variable count mismatch");
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "polynomial variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.mul_truncated(o, None)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|_, c| -c)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x(2, 0) * &x(2, 1)) + &x(2, 0).pow(2);
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.0, vec![2, 0]);
        let q = &x(2, 1).pow(3) + &x(2, 0).pow(2);
        assert_eq!(q.leading().unwrap().0 .0, vec![0, 3]);
    }

    #[test]
    fn exact_division() {
        let a = &x(2, 0) + &Poly::one(2);
        let b = &x(2, 0) - &x(2, 1);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&(&x(2, 1) + &Poly::one(2))).is_none());
    }

    #[test]
    fn compose_and_derivative() {
        // p(x, y) = x^2 y, substitute x -> t + 1, y -> t
        let p = &x(2, 0).pow(2) * &x(2, 1);
        let t = Poly::var(1, 0);
        let r = p.compose(&[&t + &Poly::one(1), t.clone()]);
        let expect = &(&t + &Poly::one(1)).pow(2) * &t;
        assert_eq!(r, expect);
        assert_eq!(p.derivative(0), (&x(2, 0) * &x(2, 1)).scale(&GRat::from_int(2)));
    }
}
