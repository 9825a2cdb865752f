//! Dense univariate polynomials over the rationals, with Sturm sequences for
//! exact real-root counting.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    /// Coefficients, lowest degree first, no trailing zeros.
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        if r.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&l.recip())
    }

    /// Only even powers present.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-BigRational::one()));
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let v = |x: &BigRational| sign_changes(seq.iter().map(|p| p.eval(x)));
        v(lo).saturating_sub(v(hi))
    }

    /// Isolates the smallest root in `(lo, hi]` to an interval of width at most
    /// `width`, returning `(a, b)` with exactly one root in `(a, b]`.
    pub fn isolate_smallest_root(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        width: &BigRational,
    ) -> Option<(BigRational, BigRational)> {
        if self.count_roots(lo, hi) == 0 {
            return None;
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let (mut a, mut b) = (lo.clone(), hi.clone());
        // shrink until exactly the smallest root is bracketed and narrow enough
        loop {
            let n = self.count_roots(&a, &b);
            if n == 1 && &(&b - &a) <= width {
                return Some((a, b));
            }
            let m = (&a + &b) / &two;
            if self.count_roots(&a, &m) >= 1 {
                b = m;
            } else {
                a = m;
            }
        }
    }
}

pub fn sign_changes(vals: impl Iterator<Item = BigRational>) -> usize {
    let mut prev: Option<bool> = None;
    let mut n = 0;
    for v in vals {
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(p) = prev {
            if p != s {
                n += 1;
            }
        }
        prev = Some(s);
    }
    n
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| if k == 0 { c.to_string() } else { format!("{c}*x^{k}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    #[test]
    fn sturm_counts_roots() {
        // (2x - 1)(x - 2)(x + 1)
        let q = UPoly::from_ints(&[-1, 2]).mul(&UPoly::from_ints(&[-2, 1])).mul(&UPoly::from_ints(&[1, 1]));
        assert_eq!(q.count_roots(&rat(0, 1), &rat(3, 1)), 2);
        assert_eq!(q.count_roots(&rat(-3, 1), &rat(3, 1)), 3);
        let (a, b) = q.isolate_smallest_root(&rat(0, 1), &rat(3, 1), &rat(1, 1024)).unwrap();
        assert!(a < rat(1, 2) && rat(1, 2) <= b);
        assert!(&b - &a <= rat(1, 1024));
    }

    #[test]
    fn division() {
        let p = UPoly::from_ints(&[1, 0, 0, 1]);
        let d = UPoly::from_ints(&[1, 1]);
        let (q, r) = p.div_rem(&d);
        assert_eq!(q, UPoly::from_ints(&[1, -1, 1]));
        assert!(r.is_zero());
    }
}
