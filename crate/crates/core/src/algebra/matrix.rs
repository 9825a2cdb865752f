//! Small dense matrices of polynomials.

use super::poly::Poly;

/// Leibniz expansion of `det (entry(i, k))_{i,k < size}`.
pub fn determinant_with(size: usize, slots: usize, entry: impl Fn(usize, usize) -> Poly) -> Poly {
    let m: Vec<Vec<Poly>> = (0..size).map(|i| (0..size).map(|k| entry(i, k)).collect()).collect();
    determinant(&m, slots)
}

pub fn determinant(m: &[Vec<Poly>], slots: usize) -> Poly {
    let size = m.len();
    let mut total = Poly::zero(slots);
    let mut perm: Vec<usize> = (0..size).collect();
    permute(&mut perm, 0, &mut |p| {
        if p.iter().enumerate().any(|(i, &j)| m[i][j].is_zero()) {
            return;
        }
        let mut t = Poly::one(slots);
        for (i, &j) in p.iter().enumerate() {
            t = &t * &m[i][j];
        }
        if is_odd(p) {
            total = &total - &t;
        } else {
            total = &total + &t;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn is_odd(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Matrix product.
pub fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], slots: usize) -> Vec<Vec<Poly>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Poly::zero(slots);
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            acc = &acc + &(&a[i][l] * &b[l][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GRat;

    #[test]
    fn two_by_two() {
        let v = |i| Poly::var(4, i);
        let m = vec![vec![v(0), v(1)], vec![v(2), v(3)]];
        let d = determinant(&m, 4);
        assert_eq!(d, &(&v(0) * &v(3)) - &(&v(1) * &v(2)));
        let id = vec![vec![Poly::one(4), Poly::zero(4)], vec![Poly::zero(4), Poly::constant(4, GRat::from_int(3))]];
        assert_eq!(mat_mul(&id, &m, 4)[1][0], v(2).scale(&GRat::from_int(3)));
    }
}
