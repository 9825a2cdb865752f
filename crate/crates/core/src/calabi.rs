//! Diastasis normal form, the dual trick, forbidden monomials and Calabi's
//! criterion on truncated coefficient matrices.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::grat::{rational_string, GRat};
use crate::algebra::series::HermSeries;
use crate::error::{Error, Result};
use crate::psd::{psd_check, PsdVerdict};

/// A real-valued series with `a_I0 = a_0J = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diastasis {
    series: HermSeries,
}

impl Diastasis {
    pub fn series(&self) -> &HermSeries {
        &self.series
    }

    pub fn into_series(self) -> HermSeries {
        self.series
    }

    pub fn nvars(&self) -> usize {
        self.series.nvars()
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn with_order(&self, order: u32) -> Diastasis {
        Diastasis { series: self.series.with_order(order) }
    }

    pub fn scale(&self, q: &BigRational) -> Diastasis {
        Diastasis { series: self.series.scale_q(q) }
    }

    pub fn add(&self, o: &Diastasis) -> Diastasis {
        Diastasis { series: self.series.add(&o.series) }
    }

    pub fn coeff(&self, i: &[u32], j: &[u32]) -> GRat {
        self.series.coeff(i, j)
    }
}

/// Drops the purely holomorphic and antiholomorphic parts (including the
/// constant term).
pub fn normalize_diastasis(potential: &HermSeries) -> Result<Diastasis> {
    if !potential.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    Ok(Diastasis { series: pluriharmonic_free(potential) })
}

pub(crate) fn pluriharmonic_free(s: &HermSeries) -> HermSeries {
    s.filter(|i, j| i.iter().any(|&e| e > 0) && j.iter().any(|&e| e > 0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForbiddenMonomial {
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub coefficient: GRat,
}

impl ForbiddenMonomial {
    /// `(|I|, |J|)`.
    pub fn kind(&self) -> (u32, u32) {
        (self.i.iter().sum(), self.j.iter().sum())
    }
}

/// All stored `(I, J)` whose norms have different parity.
pub fn scan_forbidden_series(s: &HermSeries) -> Vec<ForbiddenMonomial> {
    s.terms()
        .filter(|(i, j, _)| (i.iter().sum::<u32>() + j.iter().sum::<u32>()) % 2 == 1)
        .map(|(i, j, c)| ForbiddenMonomial { i: i.to_vec(), j: j.to_vec(), coefficient: c.clone() })
        .collect()
}

pub fn scan_forbidden(d: &Diastasis) -> Vec<ForbiddenMonomial> {
    scan_forbidden_series(&d.series)
}

/// `a*_IJ = -(-1)^|J| a_IJ`, defined when no forbidden monomial is present.
pub fn dual_diastasis(d: &Diastasis) -> Result<Diastasis> {
    let bad = scan_forbidden(d);
    if !bad.is_empty() {
        return Err(Error::ForbiddenMonomials(bad.len()));
    }
    Ok(Diastasis { series: d.series.substitute_negate_bar().neg() })
}

/// Exponent vectors of norm `1..=h` in `n` variables: by norm, then
/// lexicographically descending (`(1,0)` before `(0,1)`).
pub fn monomial_basis(n: usize, h: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 1..=h {
        let mut level = Vec::new();
        compositions(n, d, &mut vec![], &mut level);
        out.extend(level);
    }
    out
}

fn compositions(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if n == 0 {
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e);
        compositions(n, d - e, prefix, out);
        prefix.pop();
    }
}

/// Coefficient matrix of `e^D - 1` on a monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CalabiMatrix {
    pub basis: Vec<Vec<u32>>,
    pub entries: Vec<Vec<GRat>>,
    /// Maximal basis norm.
    pub order: u32,
    /// Index of the distinguished fiber variable, if any.
    pub fiber: Option<usize>,
}

impl CalabiMatrix {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn norm(&self, j: usize) -> u32 {
        self.basis[j].iter().sum()
    }

    /// `(|m|_n, m_{n+1})`: norm without the fiber variable, and fiber degree.
    pub fn block_label(&self, j: usize) -> Option<(u32, u32)> {
        let f = self.fiber?;
        let m = &self.basis[j];
        let w = m[f];
        Some((m.iter().sum::<u32>() - w, w))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, c)| i == j || c.is_zero()))
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i].conj()))
    }
}

/// Series `e^D - 1`.
pub fn exp_minus_one(d: &Diastasis) -> Result<HermSeries> {
    let e = d.series.exp()?;
    Ok(e.sub(&HermSeries::one(d.nvars(), d.order())))
}

/// `B_jk` for every basis monomial of norm `<= h`; the diastasis must be
/// known through total degree `2h`.
pub fn calabi_matrix(d: &Diastasis, h: u32) -> Result<CalabiMatrix> {
    if d.order() < 2 * h {
        return Err(Error::TruncationTooLow { needed: 2 * h, have: d.order() });
    }
    let e = exp_minus_one(&d.with_order(2 * h))?;
    Ok(matrix_of(&e, d.nvars(), h, None))
}

pub(crate) fn matrix_of(e: &HermSeries, n: usize, h: u32, fiber: Option<usize>) -> CalabiMatrix {
    let basis = monomial_basis(n, h);
    let entries = basis.iter().map(|mj| basis.iter().map(|mk| e.coeff(mj, mk)).collect()).collect();
    CalabiMatrix { basis, entries, order: h, fiber }
}

pub fn calabi_matrix_with_fiber(d: &Diastasis, h: u32, fiber: usize) -> Result<CalabiMatrix> {
    let mut m = calabi_matrix(d, h)?;
    m.fiber = Some(fiber);
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Basis monomials `(m_j, m_k)` of the entry that carries the certificate.
    pub index_pair: (Vec<u32>, Vec<u32>),
    /// Norm `|m_j|` of the row monomial, i.e. the degree at which the
    /// obstruction appears.
    pub degree: u32,
    /// Negative Schur pivot (equal to the coefficient itself when it is the
    /// first basis element in its block).
    #[serde(with = "rational_string")]
    pub value: BigRational,
    /// Negative principal minor and its basis indices.
    #[serde(with = "rational_string")]
    pub minor: BigRational,
    pub minor_indices: Vec<usize>,
    /// `(|m_j|_n, m_{j,n+1})` when the matrix has a fiber variable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProjectiveVerdict {
    Refuted { order: u32, witness: Witness },
    ConsistentUpTo { order: u32 },
}

impl ProjectiveVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, ProjectiveVerdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ProjectiveVerdict::Refuted { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Runs the PSD test on a Calabi matrix and phrases the outcome as a verdict.
pub fn verdict_of(m: &CalabiMatrix) -> ProjectiveVerdict {
    match psd_check(&m.entries) {
        PsdVerdict::Psd { .. } => ProjectiveVerdict::ConsistentUpTo { order: m.order },
        PsdVerdict::NotPsd(neg) => {
            let (a, b) = if neg.indices.len() >= 2 && m.entries[neg.index][neg.index].is_zero() {
                let other = *neg.indices.iter().rev().find(|&&k| k != neg.index && m.entries[k][k].is_zero()).unwrap_or(&neg.index);
                (neg.index, other)
            } else {
                (neg.index, neg.index)
            };
            let witness = Witness {
                index_pair: (m.basis[a].clone(), m.basis[b].clone()),
                degree: m.norm(a),
                value: neg.pivot.clone(),
                minor: neg.minor.clone(),
                minor_indices: neg.indices.clone(),
                block: m.block_label(a),
            };
            ProjectiveVerdict::Refuted { order: m.order, witness }
        }
    }
}

/// Calabi's criterion truncated at basis norm `h`. Only refutations are
/// conclusive.
pub fn projective_witness(d: &Diastasis, h: u32) -> Result<ProjectiveVerdict> {
    witness_search(d, h, None)
}

/// As [`projective_witness`], with block labels relative to a fiber variable.
pub fn projective_witness_with_fiber(d: &Diastasis, h: u32, fiber: usize) -> Result<ProjectiveVerdict> {
    witness_search(d, h, Some(fiber))
}

fn witness_search(d: &Diastasis, h: u32, fiber: Option<usize>) -> Result<ProjectiveVerdict> {
    if d.order() < 2 * h {
        return Err(Error::TruncationTooLow { needed: 2 * h, have: d.order() });
    }
    let e = exp_minus_one(&d.with_order(2 * h))?;
    // a refutation visible at a smaller basis norm is reported there
    for k in 1..=h {
        let v = verdict_of(&matrix_of(&e, d.nvars(), k, fiber));
        if v.is_refuted() {
            return Ok(v);
        }
    }
    Ok(ProjectiveVerdict::ConsistentUpTo { order: h })
}

/// Radial shortcut used for cross-checks: every coefficient of `e^D - 1` is
/// nonnegative through total degree `2h`.
pub fn coefficients_nonnegative(d: &Diastasis, h: u32) -> Result<bool> {
    let e = exp_minus_one(&d.with_order(2 * h))?;
    let ok = e.terms().all(|(_, _, c)| c.is_real() && !c.re().is_negative());
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    fn x(order: u32) -> HermSeries {
        HermSeries::norm_sq(1, order, 0)
    }

    #[test]
    fn normal_form_drops_pluriharmonic_part() {
        let s = x(4)
            .add(&HermSeries::z(1, 4, 0))
            .add(&HermSeries::zbar(1, 4, 0))
            .add(&HermSeries::constant(1, 4, GRat::from_int(3)));
        assert_eq!(normalize_diastasis(&s).unwrap().series(), &x(4));
    }

    #[test]
    fn basis_order() {
        let b = monomial_basis(2, 2);
        assert_eq!(b, vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn half_fubini_study_refuted() {
        let d = normalize_diastasis(&HermSeries::one(1, 4).add(&x(4)).log().unwrap().scale_q(&rat(1, 2))).unwrap();
        let v = projective_witness(&d, 2).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.value, rat(-1, 8));
        assert_eq!(w.degree, 2);
    }

    #[test]
    fn fs_squared_consistent() {
        let d = normalize_diastasis(&HermSeries::one(1, 20).add(&x(20)).log().unwrap().scale_q(&rat(2, 1))).unwrap();
        assert_eq!(projective_witness(&d, 10).unwrap(), ProjectiveVerdict::ConsistentUpTo { order: 10 });
    }
}
