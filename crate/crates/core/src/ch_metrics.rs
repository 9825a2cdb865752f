//! Cartan–Hartogs potentials `g`, `ĝ`, their duals, and identity checks.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::grat::{rational_string, GRat};
use crate::algebra::poly::{Monomial, Poly};
use crate::algebra::series::HermSeries;
use crate::calabi::{calabi_matrix_with_fiber, normalize_diastasis, Diastasis};
use crate::domains::{CartanDomain, ProductDomain};
use crate::error::{Error, Result};

/// `M_{Ω,μ̄} = {(z, w) : |w|^2 < Π N_j^{μ_j}}`; the fiber `w` is the last
/// variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CHDomain {
    pub base: ProductDomain,
}

impl CHDomain {
    pub fn new(base: CartanDomain, mu: BigRational) -> Result<Self> {
        Ok(CHDomain { base: ProductDomain::irreducible(base, mu)? })
    }

    pub fn generalized(base: ProductDomain) -> Self {
        CHDomain { base }
    }

    pub fn base_dim(&self) -> usize {
        self.base.dimension() as usize
    }

    pub fn nvars(&self) -> usize {
        self.base_dim() + 1
    }

    pub fn fiber(&self) -> usize {
        self.base_dim()
    }

    /// `N^μ̄(z, z̄)` as a series in all `n + 1` variables.
    pub fn norm_power(&self, order: u32) -> Result<HermSeries> {
        let n = self.base_dim();
        let map: Vec<usize> = (0..n).collect();
        Ok(self.base.generic_norm_series(order)?.embed(n + 1, &map))
    }

    fn w_sq(&self, order: u32) -> HermSeries {
        HermSeries::norm_sq(self.nvars(), order, self.fiber())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChKind {
    G,
    Ghat,
    GStar,
    GhatStar,
}

impl ChKind {
    pub fn is_dual(self) -> bool {
        matches!(self, ChKind::GStar | ChKind::GhatStar)
    }

    pub fn dual(self) -> ChKind {
        match self {
            ChKind::G => ChKind::GStar,
            ChKind::Ghat => ChKind::GhatStar,
            ChKind::GStar => ChKind::G,
            ChKind::GhatStar => ChKind::Ghat,
        }
    }
}

impl fmt::Display for ChKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChKind::G => "g",
            ChKind::Ghat => "ghat",
            ChKind::GStar => "g_star",
            ChKind::GhatStar => "ghat_star",
        })
    }
}

impl FromStr for ChKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "g" => ChKind::G,
            "ghat" => ChKind::Ghat,
            "g_star" | "dual_g" | "gstar" => ChKind::GStar,
            "ghat_star" | "dual_ghat" | "ghatstar" => ChKind::GhatStar,
            _ => return Err(Error::Parse(format!("unknown metric kind {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CHPotential {
    pub domain: CHDomain,
    pub kind: ChKind,
    pub alpha: BigRational,
    pub diastasis: Diastasis,
}

impl CHPotential {
    /// Diastasis of `α` times the metric.
    pub fn scaled(&self, alpha: &BigRational) -> CHPotential {
        CHPotential {
            domain: self.domain.clone(),
            kind: self.kind,
            alpha: &self.alpha * alpha,
            diastasis: self.diastasis.scale(alpha),
        }
    }
}

/// Diastasis of the chosen CH metric, truncated at total degree `order`.
pub fn ch_potential(d: &CHDomain, kind: ChKind, order: u32) -> Result<CHPotential> {
    let n_mu = d.norm_power(order)?;
    let w2 = d.w_sq(order);
    let series = match kind {
        ChKind::G => n_mu.sub(&w2).log()?.neg(),
        // one logarithm of the product, independent of the g series
        ChKind::Ghat => n_mu.sub(&w2).mul(&n_mu).log()?.neg(),
        ChKind::GStar => n_mu.substitute_negate_bar().add(&w2).log()?,
        ChKind::GhatStar => {
            let ns = n_mu.substitute_negate_bar();
            ns.add(&w2).log()?.add(&ns.log()?)
        }
    };
    Ok(CHPotential { domain: d.clone(), kind, alpha: BigRational::one(), diastasis: normalize_diastasis(&series)? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockInfo {
    /// `|m|_n`.
    pub base_degree: u32,
    /// `m_{n+1}`.
    pub fiber_degree: u32,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub order: u32,
    pub blocks: Vec<BlockInfo>,
    /// Nonzero entries off the block diagonal (empty when the structure holds).
    pub cross_block_nonzero: usize,
    /// Diagonal of the `F_{z(0),w(i)}` block against `(α)_i / i!`.
    pub fiber_block_matches: bool,
}

/// Checks `B_jk = 0` unless `m_j` and `m_k` share base degree and fiber
/// degree; `order` is the maximal basis norm.
pub fn verify_block_structure(p: &CHPotential, order: u32) -> Result<BlockReport> {
    if p.kind.is_dual() {
        return Err(Error::Unsupported("block structure is stated for g and ghat".into()));
    }
    let fiber = p.domain.fiber();
    let m = calabi_matrix_with_fiber(&p.diastasis, order, fiber)?;
    let labels: Vec<(u32, u32)> = (0..m.len()).map(|j| m.block_label(j).expect("fiber set")).collect();
    let mut cross = 0;
    for j in 0..m.len() {
        for k in 0..m.len() {
            if labels[j] != labels[k] && !m.entries[j][k].is_zero() {
                cross += 1;
            }
        }
    }
    let mut blocks: Vec<BlockInfo> = Vec::new();
    for &(b, f) in &labels {
        match blocks.iter_mut().find(|x| x.base_degree == b && x.fiber_degree == f) {
            Some(x) => x.size += 1,
            None => blocks.push(BlockInfo { base_degree: b, fiber_degree: f, size: 1 }),
        }
    }
    let mut fiber_ok = true;
    let mut expected = BigRational::one();
    for i in 1..=order {
        let k = BigRational::from_integer(BigInt::from(i));
        expected = expected * (&p.alpha + &k - BigRational::one()) / &k;
        let mut e = vec![0; m.basis[0].len()];
        e[fiber] = i;
        let j = m.basis.iter().position(|b| *b == e).expect("pure fiber monomial in basis");
        fiber_ok &= m.entries[j][j] == GRat::from_rational(expected.clone());
    }
    if cross > 0 {
        return Err(Error::Mismatch(format!("{cross} nonzero cross-block entries")));
    }
    Ok(BlockReport { order, blocks, cross_block_nonzero: cross, fiber_block_matches: fiber_ok })
}

fn pochhammer(a: &BigRational, s: u32) -> BigRational {
    (0..s).fold(BigRational::one(), |acc, k| acc * (a + BigRational::from_integer(BigInt::from(k))))
}

fn factorial(s: u32) -> BigRational {
    BigRational::from_integer((1..=s).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberIdentity {
    pub s: u32,
    #[serde(with = "rational_string")]
    pub alpha: BigRational,
    /// `s! (α)_s`.
    #[serde(with = "rational_string")]
    pub factor: BigRational,
    pub order: u32,
}

/// `∂^{2s}/∂w^s∂w̄^s |_{w=0}` of `N^{-αμ}(N^μ - |w|^2)^{-α}` equals
/// `s! (α)_s N^{-(2α+s)μ}`, as series in `z` through `order - 2s`.
pub fn fiber_derivative_identity(d: &CHDomain, alpha: &BigRational, s: u32, order: u32) -> Result<FiberIdentity> {
    if 2 * s > order {
        return Err(Error::TruncationTooLow { needed: 2 * s, have: order });
    }
    let n = d.base_dim();
    let n_mu = d.norm_power(order)?;
    let f = n_mu.pow_rational(&-alpha)?.mul(&n_mu.sub(&d.w_sq(order)).pow_rational(&-alpha)?);
    let fib = d.fiber();
    let slice = f.filter(|i, j| i[fib] == s && j[fib] == s);
    let mut shifted = Poly::zero(2 * n);
    for (i, j, c) in slice.terms() {
        let mut e: Vec<u32> = i[..n].to_vec();
        e.extend_from_slice(&j[..n]);
        shifted.add_term(Monomial(e), c.clone());
    }
    let lo = order - 2 * s;
    let fs = factorial(s);
    let lhs = HermSeries::from_poly(n, lo, shifted).scale_q(&(&fs * &fs));
    let factor = &fs * pochhammer(alpha, s);
    let expo = -(alpha * BigRational::from_integer(BigInt::from(2)) + BigRational::from_integer(BigInt::from(s)));
    let base = d.base.generic_norm_series(lo)?.pow_rational(&expo)?;
    let rhs = base.scale_q(&factor);
    if lhs != rhs {
        return Err(Error::Mismatch(format!("fiber derivative identity at s={s}, alpha={alpha}")));
    }
    Ok(FiberIdentity { s, alpha: alpha.clone(), factor, order })
}

/// `∂_i ∂̄_j D` for all pairs.
pub fn hessian(d: &HermSeries) -> Vec<Vec<HermSeries>> {
    let n = d.nvars();
    (0..n).map(|i| (0..n).map(|j| d.derivative(i, false).derivative(j, true)).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSumReport {
    pub order: u32,
    pub fiber_fiber_equal: bool,
    pub mixed_equal: bool,
    pub base_equal: bool,
}

impl MetricSumReport {
    pub fn holds(&self) -> bool {
        self.fiber_fiber_equal && self.mixed_equal && self.base_equal
    }
}

/// Hessian of `ĝ` equals Hessian of `g` plus the pullback of `μ g_Ω`.
pub fn metric_sum_identity(d: &CHDomain, order: u32) -> Result<MetricSumReport> {
    let g = ch_potential(d, ChKind::G, order)?;
    let gh = ch_potential(d, ChKind::Ghat, order)?;
    let base = normalize_diastasis(&d.norm_power(order)?.log()?.neg())?;
    let (hg, hh, hb) = (hessian(g.diastasis.series()), hessian(gh.diastasis.series()), hessian(base.series()));
    let f = d.fiber();
    let n = d.nvars();
    let mut rep = MetricSumReport { order, fiber_fiber_equal: true, mixed_equal: true, base_equal: true };
    for i in 0..n {
        for j in 0..n {
            let ok = hh[i][j] == hg[i][j].add(&hb[i][j]);
            if i == f && j == f {
                rep.fiber_fiber_equal &= ok && hh[i][j] == hg[i][j];
            } else if i == f || j == f {
                rep.mixed_equal &= ok && hh[i][j] == hg[i][j];
            } else {
                rep.base_equal &= ok;
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactificationReport {
    pub mu: u32,
    pub order: u32,
    /// `‖F(z)‖^2 / |F_0|^2 = (1 + |z|^2)^μ`.
    pub norm_identity: bool,
    /// Pulled-back potential equals the `ĝ*` diastasis.
    pub potential_identity: bool,
}

/// Rank-one base: `F` is the degree-`μ` Veronese map with components
/// `sqrt(C(μ,k)) z^k`.
pub fn rank1_compactification_check(mu: u32, order: u32) -> Result<CompactificationReport> {
    if mu == 0 {
        return Err(Error::InconsistentParameters("mu must be a positive integer".into()));
    }
    let mut veronese = Poly::zero(4);
    let mut c = BigInt::one();
    for k in 0..=mu {
        veronese.add_term(Monomial(vec![k, 0, k, 0]), GRat::from_rational(BigRational::from_integer(c.clone())));
        c = c * BigInt::from(mu - k) / BigInt::from(k + 1);
    }
    let one_plus = &Poly::one(4) + &(&Poly::var(4, 0) * &Poly::var(4, 2));
    let norm_identity = veronese == one_plus.pow(mu);
    let fs = HermSeries::from_poly(2, order, veronese);
    let w2 = HermSeries::norm_sq(2, order, 1);
    let pulled = normalize_diastasis(&fs.add(&w2).log()?.add(&fs.log()?))?;
    let d = CHDomain::new(CartanDomain::ball(1), BigRational::from_integer(BigInt::from(mu)))?;
    let target = ch_potential(&d, ChKind::GhatStar, order)?;
    Ok(CompactificationReport { mu, order, norm_identity, potential_identity: pulled == target.diastasis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;
    use crate::calabi::dual_diastasis;

    fn ch1(mu: BigRational) -> CHDomain {
        CHDomain::new(CartanDomain::ball(1), mu).unwrap()
    }

    #[test]
    fn g_over_disc_is_ball_potential() {
        let p = ch_potential(&ch1(rat(1, 1)), ChKind::G, 6).unwrap();
        let ch2 = crate::domains::base_diastasis(&CartanDomain::ball(2), 6).unwrap();
        assert_eq!(p.diastasis, ch2);
    }

    #[test]
    fn duals_commute_with_constructors() {
        for mu in [rat(1, 1), rat(2, 1), rat(1, 2)] {
            let d = ch1(mu);
            for kind in [ChKind::G, ChKind::Ghat] {
                let p = ch_potential(&d, kind, 6).unwrap();
                let q = ch_potential(&d, kind.dual(), 6).unwrap();
                assert_eq!(dual_diastasis(&p.diastasis).unwrap(), q.diastasis);
            }
        }
    }

    #[test]
    fn blocks() {
        let p = ch_potential(&ch1(rat(1, 1)), ChKind::Ghat, 8).unwrap();
        let r = verify_block_structure(&p, 4).unwrap();
        assert!(r.fiber_block_matches);
        let r = verify_block_structure(&p.scaled(&rat(1, 3)), 4).unwrap();
        assert!(r.fiber_block_matches);
    }

    #[test]
    fn fiber_identity() {
        let d = ch1(rat(1, 1));
        assert_eq!(fiber_derivative_identity(&d, &rat(1, 2), 2, 8).unwrap().factor, rat(3, 2));
        fiber_derivative_identity(&d, &rat(1, 1), 1, 8).unwrap();
    }

    #[test]
    fn compactification() {
        let r = rank1_compactification_check(2, 6).unwrap();
        assert!(r.norm_identity && r.potential_identity);
    }
}
