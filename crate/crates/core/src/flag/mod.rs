//! Painted Dynkin diagrams, Alekseevsky–Perelomov coordinates, admissible
//! minors and their forbidden monomials.

pub mod roots;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::grat::GRat;
use crate::algebra::matrix::{determinant, mat_mul};
use crate::algebra::poly::{Monomial, Poly};
use crate::algebra::series::HermSeries;
use crate::calabi::{normalize_diastasis, scan_forbidden, ForbiddenMonomial};
use crate::error::{Error, Result};

pub use roots::{Group, Root};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaintedDiagram {
    pub group: Group,
    /// Painted simple roots, 1-based, increasing.
    pub black: Vec<u32>,
}

impl PaintedDiagram {
    pub fn new(group: Group, mut black: Vec<u32>) -> Result<Self> {
        group.validate()?;
        black.sort_unstable();
        black.dedup();
        if black.is_empty() {
            return Err(Error::InconsistentParameters("at least one black node".into()));
        }
        if let Some(&b) = black.iter().find(|&&b| b == 0 || b > group.rank()) {
            return Err(Error::OutOfRange(b as usize));
        }
        Ok(PaintedDiagram { group, black })
    }

    /// Roots of `Q`: positive roots with a positive coefficient on some
    /// black node. Coordinate `z_k` belongs to the `k`-th of them.
    pub fn q_roots(&self) -> Vec<Root> {
        self.group
            .positive_roots()
            .into_iter()
            .filter(|r| {
                let c = self.group.simple_coefficients(r);
                self.black.iter().any(|&b| c[b as usize - 1] > 0)
            })
            .collect()
    }

    pub fn ncoords(&self) -> usize {
        self.q_roots().len()
    }

    /// One black node at `1 < r <= n-1` of `Sp(n)`, `SO(2n+1)` or `SO(2n)`,
    /// and not Hermitian symmetric.
    pub fn is_single_black_nonsymmetric(&self) -> bool {
        self.black.len() == 1
            && !matches!(self.group, Group::SU(_))
            && !self.group.is_symmetric_node(self.black[0])
    }

    /// Matrix size of each admissible minor: the black node position, read
    /// as the leading block of the defining representation.
    pub fn minor_sizes(&self) -> Vec<usize> {
        self.black.iter().map(|&b| b as usize).collect()
    }
}

/// Square matrix of polynomials in `z_1..z_m, z̄_1..z̄_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub ncoords: usize,
    pub entries: Vec<Vec<Poly>>,
}

impl SymbolicMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn slots(&self) -> usize {
        2 * self.ncoords
    }

    pub fn identity(dim: usize, ncoords: usize) -> Self {
        let entries = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Poly::one(2 * ncoords) } else { Poly::zero(2 * ncoords) }).collect())
            .collect();
        SymbolicMatrix { ncoords, entries }
    }

    pub fn mul(&self, o: &Self) -> Self {
        SymbolicMatrix { ncoords: self.ncoords, entries: mat_mul(&self.entries, &o.entries, self.slots()) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        SymbolicMatrix { ncoords: self.ncoords, entries }
    }

    pub fn scale(&self, c: &GRat) -> Self {
        let entries = self.entries.iter().map(|row| row.iter().map(|p| p.scale(c)).collect()).collect();
        SymbolicMatrix { ncoords: self.ncoords, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    /// `ᵀ(conj M)`, with `z` and `z̄` exchanged.
    pub fn conj_transpose(&self) -> Self {
        let n = self.dim();
        let entries = (0..n).map(|i| (0..n).map(|j| conj_poly(&self.entries[j][i], self.ncoords)).collect()).collect();
        SymbolicMatrix { ncoords: self.ncoords, entries }
    }

    pub fn is_hermitian(&self) -> bool {
        self.conj_transpose() == *self
    }

    pub fn constant_term(&self) -> Vec<Vec<GRat>> {
        self.entries.iter().map(|row| row.iter().map(Poly::constant_term).collect()).collect()
    }
}

/// Complex conjugate of a polynomial in `z, z̄`.
pub fn conj_poly(p: &Poly, m: usize) -> Poly {
    let perm: Vec<usize> = (0..2 * m).map(|k| if k < m { k + m } else { k - m }).collect();
    p.relabel(&perm, 2 * m).conj_coeffs()
}

/// `Z(z) = Σ_{α ∈ Q} z_α E_{-α}`.
pub fn build_z(d: &PaintedDiagram) -> SymbolicMatrix {
    let q = d.q_roots();
    let m = q.len();
    let mut z = SymbolicMatrix { ncoords: m, entries: vec![vec![Poly::zero(2 * m); d.group.dim()]; d.group.dim()] };
    for (k, r) in q.iter().enumerate() {
        for (row, col, v) in d.group.negative_root_vector(r) {
            let t = Poly::var(2 * m, k).scale(&GRat::from_int(v));
            z.entries[row][col] = &z.entries[row][col] + &t;
        }
    }
    z
}

/// Smallest `k` with `Z^k = 0`.
pub fn check_nilpotency(z: &SymbolicMatrix) -> Result<usize> {
    let cap = z.dim() + 1;
    let mut p = z.clone();
    for k in 1..=cap {
        if p.is_zero() {
            return Ok(k);
        }
        p = p.mul(z);
    }
    Err(Error::NotNilpotent(cap))
}

/// `exp(Z)` as the finite sum `Σ_{k<index} Z^k/k!`.
pub fn exp_nilpotent(z: &SymbolicMatrix) -> Result<SymbolicMatrix> {
    let index = check_nilpotency(z)?;
    let mut acc = SymbolicMatrix::identity(z.dim(), z.ncoords);
    let mut term = acc.clone();
    for k in 1..index {
        term = term.mul(z).scale(&GRat::from_ratio(1, k as i64));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// `A = ᵀ(conj exp Z) exp Z`.
pub fn gram_matrix(z: &SymbolicMatrix) -> Result<SymbolicMatrix> {
    let e = exp_nilpotent(z)?;
    Ok(e.conj_transpose().mul(&e))
}

/// Leading principal `r x r` minor of `a`.
pub fn admissible_minor(a: &SymbolicMatrix, r: usize) -> Result<Poly> {
    if r == 0 || r > a.dim() {
        return Err(Error::OutOfRange(r));
    }
    let block: Vec<Vec<Poly>> = (0..r).map(|i| a.entries[i][..r].to_vec()).collect();
    Ok(determinant(&block, a.slots()))
}

/// All admissible minors of a diagram, one per black node.
pub fn admissible_minors(d: &PaintedDiagram) -> Result<Vec<Poly>> {
    let a = gram_matrix(&build_z(d))?;
    d.minor_sizes().into_iter().map(|r| admissible_minor(&a, r)).collect()
}

/// `(|I|, |J|)` of a monomial in `z, z̄` slots.
fn kind_of(m: &Monomial, ncoords: usize) -> (u32, u32) {
    (m.0[..ncoords].iter().sum(), m.0[ncoords..].iter().sum())
}

/// Coordinate and sign with `Z_{row,col} = sign * z_k` (0-based indices).
pub fn entry_coordinate(z: &SymbolicMatrix, row: usize, col: usize) -> Option<(usize, i64)> {
    let p = &z.entries[row][col];
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let k = m.0.iter().position(|&e| e == 1)?;
    let sign = if c.is_one() {
        1
    } else if *c == -GRat::one() {
        -1
    } else {
        return None;
    };
    Some((k, sign))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// `-½ Z_{γi} Z_{αj} Z̄_{αi} Z̄_{βj} Z̄_{γβ}`.
    MinusHalf,
    /// `+½ Z_{αi} Z_{γj} Z̄_{αi} Z̄_{βj} Z̄_{γβ}`.
    PlusHalf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedMonomial {
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub coefficient: GRat,
    pub templates: Vec<Template>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan23 {
    pub monomials: Vec<ClassifiedMonomial>,
    /// Every row `<= r` of `Z` vanishes, so the other two candidate products
    /// (which need some `Z̄_{jα}` with `j <= r`) are identically zero.
    pub leading_rows_vanish: bool,
    /// The `(2,3)` part equals the sum of both templates exactly.
    pub matches_templates: bool,
}

fn template_poly(z: &SymbolicMatrix, r: usize, t: Template) -> Poly {
    let m = z.ncoords;
    let dim = z.dim();
    let e = |a: usize, b: usize| &z.entries[a][b];
    let c = |a: usize, b: usize| conj_poly(&z.entries[a][b], m);
    let coeff = GRat::from_ratio(if t == Template::MinusHalf { -1 } else { 1 }, 2);
    let mut acc = Poly::zero(2 * m);
    for i in 0..r {
        for j in 0..r {
            for al in r..dim {
                for be in r..dim {
                    for ga in r..dim {
                        let (f1, f2) = match t {
                            Template::MinusHalf => (e(ga, i), e(al, j)),
                            Template::PlusHalf => (e(al, i), e(ga, j)),
                        };
                        if f1.is_zero() || f2.is_zero() || e(al, i).is_zero() || e(be, j).is_zero() || e(ga, be).is_zero() {
                            continue;
                        }
                        let prod = &(&(&(f1 * f2) * &c(al, i)) * &c(be, j)) * &c(ga, be);
                        acc = &acc + &prod.scale(&coeff);
                    }
                }
            }
        }
    }
    acc
}

/// Classifies every `(2,3)` monomial of the minor `Δ_r` against the two
/// templates.
pub fn forbidden_23_scan(z: &SymbolicMatrix, delta: &Poly, r: usize) -> Result<Scan23> {
    let m = z.ncoords;
    let part = delta.retain(|mono, _| kind_of(mono, m) == (2, 3));
    let f1 = template_poly(z, r, Template::MinusHalf);
    let f2 = template_poly(z, r, Template::PlusHalf);
    let leading_rows_vanish = (0..r).all(|i| z.entries[i].iter().all(Poly::is_zero));
    let mut monomials = Vec::new();
    for (mono, c) in part.terms() {
        let mut templates = Vec::new();
        if !f1.coeff(mono).is_zero() {
            templates.push(Template::MinusHalf);
        }
        if !f2.coeff(mono).is_zero() {
            templates.push(Template::PlusHalf);
        }
        if templates.is_empty() {
            return Err(Error::Mismatch(format!("unclassifiable (2,3) monomial {:?}", mono.0)));
        }
        monomials.push(ClassifiedMonomial {
            i: mono.0[..m].to_vec(),
            j: mono.0[m..].to_vec(),
            coefficient: c.clone(),
            templates,
        });
    }
    Ok(Scan23 { monomials, leading_rows_vanish, matches_templates: part == &f1 + &f2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishedMonomial {
    #[serde(rename = "I")]
    pub i: Vec<u32>,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    /// Coefficient of the coordinate monomial in `Δ_r`.
    pub coefficient: GRat,
    /// Product of the signs relating the five matrix entries to coordinates.
    pub sign: i64,
    /// `coefficient / sign`: the coefficient in terms of matrix entries.
    pub entry_coefficient: GRat,
}

/// `Z_{n1} Z_{n+1,2} Z̄_{n1} Z̄_{2n,2} Z̄_{n+1,2n}` as a coordinate monomial.
pub fn distinguished_monomial(d: &PaintedDiagram, z: &SymbolicMatrix) -> Result<(Vec<u32>, Vec<u32>, i64)> {
    let n = d.group.rank() as usize;
    let m = z.ncoords;
    let (mut i, mut j) = (vec![0u32; m], vec![0u32; m]);
    let mut sign = 1;
    // 1-based (row, col), conjugated?
    let entries = [(n, 1, false), (n + 1, 2, false), (n, 1, true), (2 * n, 2, true), (n + 1, 2 * n, true)];
    for (row, col, bar) in entries {
        let (k, s) = entry_coordinate(z, row - 1, col - 1)
            .ok_or_else(|| Error::Mismatch(format!("Z_{{{row},{col}}} is not a coordinate")))?;
        sign *= s;
        if bar {
            j[k] += 1;
        } else {
            i[k] += 1;
        }
    }
    Ok((i, j, sign))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoCancellation {
    pub group: Group,
    pub r: u32,
    pub monomial: DistinguishedMonomial,
    pub scan: Scan23,
}

/// The distinguished `(2,3)` monomial survives in `Δ_r` with entry
/// coefficient `+½`.
pub fn no_cancellation_check(d: &PaintedDiagram) -> Result<NoCancellation> {
    if !d.is_single_black_nonsymmetric() {
        return Err(Error::Unsupported(format!("{} with black nodes {:?}", d.group, d.black)));
    }
    let r = d.black[0] as usize;
    let z = build_z(d);
    let delta = admissible_minor(&gram_matrix(&z)?, r)?;
    let (i, j, sign) = distinguished_monomial(d, &z)?;
    let mut e = i.clone();
    e.extend_from_slice(&j);
    let coefficient = delta.coeff(&Monomial(e));
    if coefficient.is_zero() {
        return Err(Error::Mismatch("distinguished monomial cancels".into()));
    }
    let entry_coefficient = coefficient.scale(&BigRational::from_integer(sign.into()));
    let scan = forbidden_23_scan(&z, &delta, r)?;
    Ok(NoCancellation {
        group: d.group,
        r: r as u32,
        monomial: DistinguishedMonomial { i, j, coefficient, sign, entry_coefficient },
        scan,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BochnerCase {
    /// One black node, any group and class.
    SingleBlack,
    /// Two black nodes of `SU(d)` with equal coefficients.
    SuTwoEqual,
    /// `SO(2d)` painted at `α_1` and `α_d` with `c_1 = 2 c_d`.
    SoEvenEnds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BochnerEntry {
    pub case: BochnerCase,
    pub group: &'static str,
    pub black: &'static str,
    pub condition: &'static str,
}

/// Painted diagrams whose coordinates are Bochner up to rescaling.
pub const BOCHNER_TABLE: [BochnerEntry; 3] = [
    BochnerEntry { case: BochnerCase::SingleBlack, group: "any classical", black: "one node", condition: "none" },
    BochnerEntry { case: BochnerCase::SuTwoEqual, group: "SU(d)", black: "two nodes", condition: "c1 = c2" },
    BochnerEntry { case: BochnerCase::SoEvenEnds, group: "SO(2d)", black: "alpha_1, alpha_d", condition: "c1 = 2 c_d" },
];

pub fn bochner_case(d: &PaintedDiagram, c: &[BigRational]) -> Option<BochnerCase> {
    match (d.black.len(), d.group) {
        (1, _) => Some(BochnerCase::SingleBlack),
        (2, Group::SU(_)) if c.len() == 2 && c[0] == c[1] => Some(BochnerCase::SuTwoEqual),
        (2, Group::SO(m)) if m % 2 == 0 => {
            let l = m / 2;
            let two = BigRational::from_integer(2.into());
            (d.black == [1, l] && c.len() == 2 && c[0] == &two * &c[1]).then_some(BochnerCase::SoEvenEnds)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagVerdict {
    /// No forbidden monomial through the truncation order.
    pub admits_dual_up_to_order: bool,
    pub order: u32,
    pub forbidden_count: usize,
    pub kinds: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ForbiddenMonomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bochner_case: Option<BochnerCase>,
}

/// Diastasis `Σ c_j log Δ_j` as a series.
pub fn flag_diastasis(d: &PaintedDiagram, c: &[BigRational], order: u32) -> Result<HermSeries> {
    if c.len() != d.black.len() {
        return Err(Error::InconsistentParameters(format!("{} coefficients for {} black nodes", c.len(), d.black.len())));
    }
    let m = d.ncoords();
    let mut acc = HermSeries::zero(m, order);
    for (delta, cj) in admissible_minors(d)?.into_iter().zip(c) {
        acc = acc.add(&HermSeries::from_poly(m, order, delta).log()?.scale_q(cj));
    }
    Ok(acc)
}

pub fn flag_dual_verdict(d: &PaintedDiagram, c: &[BigRational], order: u32) -> Result<FlagVerdict> {
    let series = flag_diastasis(d, c, order)?;
    let forb = scan_forbidden(&normalize_diastasis(&series)?);
    let kinds: BTreeSet<(u32, u32)> = forb.iter().map(ForbiddenMonomial::kind).collect();
    let mut witness = None;
    if d.is_single_black_nonsymmetric() {
        let (i, j, _) = distinguished_monomial(d, &build_z(d))?;
        witness = forb.iter().find(|f| f.i == i && f.j == j).cloned();
    }
    if witness.is_none() {
        let low = forb.iter().map(|f| f.i.iter().sum::<u32>() + f.j.iter().sum::<u32>()).min();
        witness = forb
            .iter()
            .filter(|f| Some(f.i.iter().sum::<u32>() + f.j.iter().sum::<u32>()) == low)
            .find(|f| {
                let (a, b) = f.kind();
                a < b
            })
            .cloned();
    }
    Ok(FlagVerdict {
        admits_dual_up_to_order: forb.is_empty(),
        order,
        forbidden_count: forb.len(),
        kinds: kinds.into_iter().collect(),
        witness,
        bochner_case: bochner_case(d, c),
    })
}

/// Names `z1..zm, z1bar..zmbar` for printing minors.
pub fn coordinate_names(m: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=m).map(|k| format!("z{k}")).collect();
    v.extend((1..=m).map(|k| format!("z{k}bar")));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su3() -> PaintedDiagram {
        PaintedDiagram::new(Group::SU(3), vec![1, 2]).unwrap()
    }

    #[test]
    fn su3_placement() {
        let z = build_z(&su3());
        assert_eq!(entry_coordinate(&z, 1, 0), Some((0, 1)));
        assert_eq!(entry_coordinate(&z, 2, 0), Some((1, 1)));
        assert_eq!(entry_coordinate(&z, 2, 1), Some((2, 1)));
        assert_eq!(check_nilpotency(&z).unwrap(), 3);
    }

    #[test]
    fn su2_minor() {
        let d = PaintedDiagram::new(Group::SU(2), vec![1]).unwrap();
        let delta = &admissible_minors(&d).unwrap()[0];
        let expect = &Poly::one(2) + &(&Poly::var(2, 0) * &Poly::var(2, 1));
        assert_eq!(delta, &expect);
    }

    #[test]
    fn gram_is_hermitian() {
        let d = PaintedDiagram::new(Group::Sp(3), vec![2]).unwrap();
        let a = gram_matrix(&build_z(&d)).unwrap();
        assert!(a.is_hermitian());
        let c = a.constant_term();
        assert!((0..a.dim()).all(|i| (0..a.dim()).all(|j| c[i][j] == if i == j { GRat::one() } else { GRat::zero() })));
    }
}
