//! Multivariate gcd by recursive primitive polynomial remainder sequences.
//!
//! A polynomial is viewed as univariate in its highest-index variable with
//! coefficients in the remaining ones; contents are computed recursively.

use num_traits::One;

use super::grat::GRat;
use super::poly::Poly;

/// Monic (graded-lex leading coefficient 1) greatest common divisor.
/// `gcd(0, 0)` is 0.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars(), b.nvars(), "polynomial variable count mismatch");
    if a.is_zero() && b.is_zero() {
        return Poly::zero(a.nvars());
    }
    monic(&gcd_rec(a, b))
}

/// Scales so that the graded-lex leading coefficient is 1.
pub fn monic(p: &Poly) -> Poly {
    match p.leading() {
        None => p.clone(),
        Some((_, c)) if c.is_one() => p.clone(),
        Some((_, c)) => p.scale(&c.inv().expect("nonzero leading coefficient")),
    }
}

fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a.div_exact(b).is_some() {
        return b.clone();
    }
    if b.div_exact(a).is_some() {
        return a.clone();
    }
    let v = match main_var(a, b) {
        Some(v) => v,
        None => return Poly::one(n),
    };
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    if ua.len() == 1 {
        return gcd_rec(a, &content(&ub));
    }
    if ub.len() == 1 {
        return gcd_rec(b, &content(&ua));
    }
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd_rec(&ca, &cb);
    let pa = divide_all(&ua, &ca);
    let pb = divide_all(&ub, &cb);
    let g = primitive_prs(pa, pb);
    &Poly::from_univariate(v, n, &g) * &c
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut it = coeffs.iter().filter(|c| !c.is_zero());
    let mut g = match it.next() {
        Some(c) => monic(c),
        None => return Poly::zero(coeffs.first().map(|c| c.nvars()).unwrap_or(0)),
    };
    for c in it {
        if g.is_constant() {
            break;
        }
        g = monic(&gcd_rec(&g, c));
    }
    if g.is_constant() {
        Poly::one(g.nvars())
    } else {
        g
    }
}

fn divide_all(coeffs: &[Poly], c: &Poly) -> Vec<Poly> {
    if c.is_constant() {
        let inv = c.constant_term().inv().expect("nonzero content");
        return coeffs.iter().map(|p| p.scale(&inv)).collect();
    }
    coeffs
        .iter()
        .map(|p| p.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn trim(p: &mut Vec<Poly>) {
    while p.last().is_some_and(Poly::is_zero) {
        p.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (both univariate over a polynomial ring),
/// without the final power of the leading coefficient.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&lr * bc);
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        trim(&mut r);
    }
    r
}

fn primitive_part(p: &[Poly]) -> Vec<Poly> {
    let c = content(p);
    let mut out = divide_all(p, &c);
    let lc = monic_factor(out.last().unwrap());
    for x in out.iter_mut() {
        *x = x.scale(&lc);
    }
    out
}

fn monic_factor(p: &Poly) -> GRat {
    p.leading_coeff().inv().expect("nonzero leading coefficient")
}

fn primitive_prs(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        let r = prem(&a, &b);
        if r.is_empty() {
            return primitive_part(&b);
        }
        if r.len() == 1 {
            let n = r[0].nvars();
            return vec![Poly::one(n)];
        }
        a = b;
        b = primitive_part(&r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn common_factor_recovered() {
        let n = 2;
        let one = Poly::one(n);
        let f = &(&v(n, 0) * &v(n, 1)) + &one;
        let g1 = &(&v(n, 0) - &v(n, 1).pow(2)) * &f;
        let g2 = &(&v(n, 0).pow(2) + &v(n, 1)) * &f.pow(2);
        assert_eq!(gcd(&g1, &g2), monic(&f));
    }

    #[test]
    fn coprime_gives_one() {
        let n = 3;
        let a = &v(n, 0) + &v(n, 2);
        let b = &v(n, 1) + &(&v(n, 2) * &v(n, 2));
        assert_eq!(gcd(&a, &b), Poly::one(n));
    }

    #[test]
    fn content_in_lower_variables() {
        let n = 2;
        let one = Poly::one(n);
        let c = &v(n, 0) + &one;
        let a = &c * &(&v(n, 1) + &one);
        let b = &c * &(&v(n, 1) - &one);
        assert_eq!(gcd(&a, &b), monic(&c));
    }
}
