//! Exact positive-semidefiniteness test for Hermitian matrices over `GRat`.
//!
//! Fraction-free symmetric elimination: after pivots `p_1..p_k` have been
//! eliminated, entry `(i, j)` of the working matrix is the minor of the
//! original matrix on rows `{p_1..p_k, i}` and columns `{p_1..p_k, j}`. A
//! negative diagonal entry is therefore a negative principal minor.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::grat::{rational_string, GRat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeMinor {
    /// Basis index whose Schur pivot was negative (for a 2x2 zero-diagonal
    /// witness, the smaller of the two indices).
    pub index: usize,
    /// Indices of the principal submatrix whose determinant is negative.
    pub indices: Vec<usize>,
    #[serde(with = "rational_string")]
    pub minor: BigRational,
    /// Schur-complement pivot `minor / previous minor`.
    #[serde(with = "rational_string")]
    pub pivot: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PsdVerdict {
    Psd { rank: usize },
    NotPsd(NegativeMinor),
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }
}

/// Decides whether the Hermitian matrix `m` is positive semidefinite.
pub fn psd_check(m: &[Vec<GRat>]) -> PsdVerdict {
    let n = m.len();
    let mut a: Vec<Vec<GRat>> = m.to_vec();
    let mut prev = BigRational::one();
    let mut chosen: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();

    while !remaining.is_empty() {
        // diagonal entries of a Hermitian matrix are real
        if let Some(&i) = remaining.iter().find(|&&i| a[i][i].re().is_negative()) {
            let minor = a[i][i].re().clone();
            let mut indices = chosen.clone();
            indices.push(i);
            indices.sort_unstable();
            return PsdVerdict::NotPsd(NegativeMinor { index: i, indices, pivot: &minor / &prev, minor });
        }
        let best = remaining
            .iter()
            .copied()
            .max_by(|&x, &y| a[x][x].re().cmp(a[y][y].re()).then_with(|| y.cmp(&x)))
            .unwrap();
        if a[best][best].is_zero() {
            for (pos, &i) in remaining.iter().enumerate() {
                for &j in &remaining[pos + 1..] {
                    if !a[i][j].is_zero() {
                        let minor = -a[i][j].norm_sqr() / &prev;
                        let mut indices = chosen.clone();
                        indices.push(i);
                        indices.push(j);
                        indices.sort_unstable();
                        let pivot = &minor / &prev;
                        return PsdVerdict::NotPsd(NegativeMinor { index: i.min(j), indices, minor, pivot });
                    }
                }
            }
            return PsdVerdict::Psd { rank: chosen.len() };
        }
        let k = best;
        remaining.retain(|&i| i != k);
        let p = a[k][k].clone();
        let prev_g = GRat::from_rational(prev.clone());
        for &i in &remaining {
            for &j in remaining.iter().filter(|&&j| j >= i) {
                let v = &(&(&p * &a[i][j]) - &(&a[i][k] * &a[k][j])) / &prev_g;
                a[i][j] = v;
            }
        }
        for &i in &remaining {
            for &j in &remaining {
                if j < i {
                    a[i][j] = a[j][i].conj();
                }
            }
        }
        prev = p.re().clone();
        chosen.push(k);
    }
    PsdVerdict::Psd { rank: chosen.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    fn g(p: i64, q: i64) -> GRat {
        GRat::from_ratio(p, q)
    }

    #[test]
    fn identity_is_psd() {
        let m = vec![vec![g(1, 1), g(0, 1)], vec![g(0, 1), g(1, 1)]];
        assert_eq!(psd_check(&m), PsdVerdict::Psd { rank: 2 });
    }

    #[test]
    fn negative_diagonal() {
        let m = vec![vec![g(1, 1), g(0, 1)], vec![g(0, 1), g(-1, 8)]];
        match psd_check(&m) {
            PsdVerdict::NotPsd(w) => {
                assert_eq!(w.index, 1);
                assert_eq!(w.minor, rat(-1, 8));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn rank_one_gram() {
        let m = vec![vec![g(1, 1), g(1, 1)], vec![g(1, 1), g(1, 1)]];
        assert_eq!(psd_check(&m), PsdVerdict::Psd { rank: 1 });
    }

    #[test]
    fn zero_diagonal_with_coupling() {
        let m = vec![
            vec![g(1, 1), g(0, 1), g(0, 1)],
            vec![g(0, 1), g(0, 1), GRat::i()],
            vec![g(0, 1), GRat::i().conj(), g(0, 1)],
        ];
        match psd_check(&m) {
            PsdVerdict::NotPsd(w) => {
                assert_eq!(w.indices, vec![0, 1, 2]);
                assert_eq!(w.minor, rat(-1, 1));
            }
            v => panic!("{v:?}"),
        }
    }
}
