//! Closed-form inducibility decisions and the series witnesses behind them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::grat::{rational_string, rational_vec, GRat};
use crate::algebra::series::HermSeries;
use crate::calabi::{projective_witness_with_fiber, ProjectiveVerdict};
use crate::ch_metrics::{ch_potential, CHDomain, ChKind};
use crate::domains::{CartanDomain, ProductDomain};
use crate::error::{Error, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `(α + s)μ ∈ W \ {0}` for every `s >= 0`.
    WallachShiftG,
    /// `(2α + s)μ ∈ W \ {0}` for every `s >= 0`.
    WallachShiftGhat,
    /// `α` and every `μ_j` positive integers.
    Integrality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedPoint {
    pub s: u32,
    #[serde(with = "rational_string")]
    pub value: BigRational,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: bool,
    pub rule: Rule,
    pub checked: Vec<CheckedPoint>,
    /// First `s` whose value lies in the continuous part; not enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_from: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing: Option<CheckedPoint>,
}

fn positive(x: &BigRational, name: &str) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::InconsistentParameters(format!("{name} = {x} must be positive")));
    }
    Ok(())
}

fn shift_decision(d: &CartanDomain, start: &BigRational, mu: &BigRational, rule: Rule) -> Result<Decision> {
    positive(start, "alpha")?;
    positive(mu, "mu")?;
    let w = d.wallach();
    let t = w.threshold();
    let mut checked = Vec::new();
    let mut s = 0u32;
    loop {
        let value = (start + q(s as i64)) * mu;
        if value > t {
            break;
        }
        let member = w.member_nonzero(&value)?;
        checked.push(CheckedPoint { s, value, member });
        if !member {
            let failing = checked.last().cloned();
            return Ok(Decision { verdict: false, rule, checked, tail_from: None, failing });
        }
        s += 1;
    }
    Ok(Decision { verdict: true, rule, checked, tail_from: Some(s), failing: None })
}

pub fn decide_g_infinite(d: &CartanDomain, alpha: &BigRational, mu: &BigRational) -> Result<Decision> {
    shift_decision(d, alpha, mu, Rule::WallachShiftG)
}

pub fn decide_ghat_infinite(d: &CartanDomain, alpha: &BigRational, mu: &BigRational) -> Result<Decision> {
    shift_decision(d, &(alpha * q(2)), mu, Rule::WallachShiftGhat)
}

pub fn decide_dual_finite(alpha: &BigRational, mu: &[BigRational]) -> Result<Decision> {
    positive(alpha, "alpha")?;
    let mut checked = vec![CheckedPoint { s: 0, value: alpha.clone(), member: alpha.is_integer() }];
    for (j, m) in mu.iter().enumerate() {
        positive(m, "mu")?;
        checked.push(CheckedPoint { s: j as u32 + 1, value: m.clone(), member: m.is_integer() });
    }
    let failing = checked.iter().find(|c| !c.member).cloned();
    Ok(Decision { verdict: failing.is_none(), rule: Rule::Integrality, checked, tail_from: None, failing })
}

/// Closed-form decision for `α` times the given CH metric.
pub fn decide(d: &CartanDomain, kind: ChKind, alpha: &BigRational, mu: &BigRational) -> Result<Decision> {
    match kind {
        ChKind::G => decide_g_infinite(d, alpha, mu),
        ChKind::Ghat => decide_ghat_infinite(d, alpha, mu),
        ChKind::GStar | ChKind::GhatStar => decide_dual_finite(alpha, std::slice::from_ref(mu)),
    }
}

/// Smallest positive integer `α` for which the decision is positive.
pub fn minimal_integer_alpha(d: &CartanDomain, kind: ChKind, mu: &BigRational) -> Result<Option<u32>> {
    if kind.is_dual() {
        return Ok(mu.is_integer().then_some(1));
    }
    let t = d.wallach().threshold();
    for a in 1.. {
        let alpha = q(a as i64);
        if decide(d, kind, &alpha, mu)?.verdict {
            return Ok(Some(a));
        }
        if &alpha * mu > t {
            break;
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstNegative {
    pub index: u32,
    #[serde(with = "rational_string")]
    pub raw: BigRational,
    #[serde(with = "rational_string")]
    pub normalized: BigRational,
}

/// Coefficients of `x^h` of an expansion in `x = |ξ|^2`, both raw and divided
/// by the constant term (the latter are the coefficients of `e^D`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionWitness {
    pub a: u32,
    pub b: u32,
    pub k: u32,
    pub order: u32,
    #[serde(with = "rational_vec")]
    pub raw: Vec<BigRational>,
    #[serde(with = "rational_vec")]
    pub normalized: Vec<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_negative: Option<FirstNegative>,
}

fn params(a: u32, b: u32, k: u32) -> Result<()> {
    if a == 0 || b == 0 || k == 0 || a.gcd(&b) != 1 {
        return Err(Error::InconsistentParameters(format!("need positive coprime a, b and k >= 1, got ({a},{b},{k})")));
    }
    Ok(())
}

fn witness(a: u32, b: u32, k: u32, order: u32, raw: Vec<BigRational>) -> ExpansionWitness {
    let c0 = raw[0].clone();
    let normalized: Vec<BigRational> = raw.iter().map(|c| c / &c0).collect();
    let first_negative = raw.iter().position(|c| c.is_negative()).map(|i| FirstNegative {
        index: i as u32,
        raw: raw[i].clone(),
        normalized: normalized[i].clone(),
    });
    ExpansionWitness { a, b, k, order, raw, normalized, first_negative }
}

fn radial_coeffs(s: &HermSeries, h: u32) -> Vec<BigRational> {
    (0..=h).map(|i| s.coeff(&[i], &[i]).re().clone()).collect()
}

fn binom_int(n: u32, p: u32) -> BigRational {
    let mut c = BigInt::one();
    for i in 0..p {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(c)
}

/// `B_{h,p} = C(kb, p) (pa/b)(pa/b - 1)...(pa/b - h + 1)`.
pub fn b_coefficient(a: u32, b: u32, k: u32, h: u32, p: u32) -> BigRational {
    let e = BigRational::new(BigInt::from(p * a), BigInt::from(b));
    let falling = (0..h).fold(BigRational::one(), |acc, i| acc * (&e - q(i as i64)));
    binom_int(k * b, p) * falling
}

/// `A_h = Σ_p B_{h,p}`.
pub fn a_coefficient(a: u32, b: u32, k: u32, h: u32) -> BigRational {
    (0..=k * b).map(|p| b_coefficient(a, b, k, h, p)).sum()
}

fn factorial(h: u32) -> BigRational {
    BigRational::from_integer((1..=h).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// `Ψ(x) = ((1+x)^{a/b} + 1)^{bk}` through `x^order`, computed by series
/// powers and by the closed sum; the two must agree.
pub fn psi_expansion(a: u32, b: u32, k: u32, order: u32) -> Result<ExpansionWitness> {
    params(a, b, k)?;
    let x = HermSeries::norm_sq(1, 2 * order, 0);
    let one = HermSeries::one(1, 2 * order);
    let s = one.add(&x).pow_rational(&BigRational::new(BigInt::from(a), BigInt::from(b)))?;
    // (s + 1)^{bk} = 2^{bk} ((s + 1)/2)^{bk}
    let half = s.add(&one).scale_q(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let pow = half.pow_rational(&q((b * k) as i64))?.scale_q(&q(2).pow((b * k) as i32));
    let series = radial_coeffs(&pow, order);
    let closed: Vec<BigRational> = (0..=order).map(|h| a_coefficient(a, b, k, h) / factorial(h)).collect();
    if let Some(h) = (0..=order as usize).find(|&h| series[h] != closed[h]) {
        return Err(Error::Disagreement(format!(
            "coefficient of x^{h}: series {} vs closed sum {}",
            series[h], closed[h]
        )));
    }
    Ok(witness(a, b, k, order, series))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub a: u32,
    pub b: u32,
    pub k: u32,
    /// `A_h / B_{h,1}` for `h = 1..=order`.
    #[serde(with = "rational_vec")]
    pub ratios: Vec<BigRational>,
    /// Signs of `A_h` alternate strictly for every `h >= h0` up to the order.
    pub h0: u32,
    pub order: u32,
}

impl RatioReport {
    pub fn ratio(&self, h: u32) -> &BigRational {
        &self.ratios[h as usize - 1]
    }
}

pub fn psi_ratio_limit(a: u32, b: u32, k: u32, order: u32) -> Result<RatioReport> {
    params(a, b, k)?;
    if a.is_multiple_of(b) {
        return Err(Error::InconsistentParameters(format!("a/b = {a}/{b} is an integer")));
    }
    let mut ratios = Vec::new();
    let mut signs = Vec::new();
    for h in 1..=order {
        let b1 = b_coefficient(a, b, k, h, 1);
        if b1.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ah = a_coefficient(a, b, k, h);
        signs.push(ah.signum());
        ratios.push(ah / b1);
    }
    let mut h0 = order;
    while h0 > 1 {
        let (i, j) = (h0 as usize - 2, h0 as usize - 1);
        if signs[i].is_zero() || signs[i] != -signs[j].clone() {
            break;
        }
        h0 -= 1;
    }
    Ok(RatioReport { a, b, k, ratios, h0, order })
}

/// Coefficients of `((1+x)^{a/2b} + 1)^{bk} (1+x)^{ak/2}`.
pub fn propalphamu_witness(a: u32, b: u32, k: u32, order: u32) -> Result<ExpansionWitness> {
    params(a, b, k)?;
    let x = HermSeries::norm_sq(1, 2 * order, 0);
    let one = HermSeries::one(1, 2 * order);
    let base = one.add(&x);
    let s = base.pow_rational(&BigRational::new(BigInt::from(a), BigInt::from(2 * b)))?;
    let half = s.add(&one).scale_q(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let bk = q((b * k) as i64);
    let series = half
        .pow_rational(&bk)?
        .mul(&base.pow_rational(&BigRational::new(BigInt::from(a * k), BigInt::from(2)))?)
        .scale_q(&q(2).pow((b * k) as i32));
    Ok(witness(a, b, k, order, radial_coeffs(&series, order)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeCondition {
    /// `γ_j / (n + 1)` per factor.
    #[serde(with = "rational_vec")]
    pub mu_ke: Vec<BigRational>,
    /// `γ_j / (n_j + 1) <= 1` for every factor.
    pub bound_holds: bool,
    /// Factors attaining equality in the bound (exactly the rank-one ones).
    pub equality: Vec<bool>,
}

impl KeCondition {
    pub fn check(&self, mu: &[BigRational]) -> bool {
        mu == self.mu_ke.as_slice()
    }
}

pub fn ke_condition(factors: &[CartanDomain]) -> KeCondition {
    let n: u32 = factors.iter().map(|f| f.n).sum();
    let mu_ke = factors.iter().map(|f| BigRational::new(BigInt::from(f.gamma), BigInt::from(n + 1))).collect();
    let ratios: Vec<BigRational> =
        factors.iter().map(|f| BigRational::new(BigInt::from(f.gamma), BigInt::from(f.n + 1))).collect();
    KeCondition {
        mu_ke,
        bound_holds: ratios.iter().all(|r| r <= &BigRational::one()),
        equality: ratios.iter().map(|r| r.is_one()).collect(),
    }
}

/// `Σ_j (n + 1 - γ_j/μ_j) n_j`; zero exactly for constant scalar curvature.
pub fn csc_condition(p: &ProductDomain) -> BigRational {
    let n = q(p.dimension() as i64);
    p.factors
        .iter()
        .zip(&p.mu)
        .map(|(f, mu)| (&n + BigRational::one() - q(f.gamma as i64) / mu) * q(f.n as i64))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeResidual {
    #[serde(with = "rational_string")]
    pub gamma: BigRational,
    #[serde(with = "rational_string")]
    pub mu: BigRational,
    pub n: u32,
    pub d_param: u32,
    pub order: u32,
    /// Coefficients of `L/R` in powers of `X`.
    #[serde(with = "rational_vec")]
    pub ratio: Vec<BigRational>,
    /// First `k >= 1` with a nonzero ratio coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonconstant: Option<u32>,
    /// `L_k / R_k` coefficientwise; all equal when `L = kR`.
    #[serde(with = "rational_vec")]
    pub termwise: Vec<BigRational>,
}

impl OdeResidual {
    pub fn nonconstant(&self) -> bool {
        self.first_nonconstant.is_some()
    }
}

fn x_series(coeffs: &[BigRational], order: u32) -> HermSeries {
    let mut s = HermSeries::zero(1, 2 * order);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let k = k as u32;
            s = s.add(&HermSeries::monomial(2 * order, &[k], &[k], GRat::from_rational(c.clone())));
        }
    }
    s
}

/// Tests whether `h(X) = -c log(1 - X)`, `c = (γ+μ)/((μ+1)(d+2))`, solves
/// `(μ X h' + (γ+μ)/(d+2))^d [X h']' = k e^{(n+2)h}` for some constant `k`.
pub fn ode_residual(gamma: &BigRational, mu: &BigRational, n: u32, d_param: u32, order: u32) -> Result<OdeResidual> {
    positive(mu, "mu")?;
    let dp2 = q(d_param as i64 + 2);
    let c = (gamma + mu) / ((mu + BigRational::one()) * &dp2);
    // X h' = c Σ_{k>=1} X^k, [X h']' = c Σ_{k>=0} (k+1) X^k
    let xh: Vec<BigRational> = (0..=order).map(|k| if k == 0 { BigRational::zero() } else { c.clone() }).collect();
    let dxh: Vec<BigRational> = (0..=order).map(|k| &c * q(k as i64 + 1)).collect();
    let mut inner = x_series(&xh, order).scale_q(mu);
    inner = inner.add(&HermSeries::constant(1, 2 * order, GRat::from_rational((gamma + mu) / &dp2)));
    let l = inner.pow_int(d_param).mul(&x_series(&dxh, order));
    let one_minus = HermSeries::one(1, 2 * order).sub(&HermSeries::norm_sq(1, 2 * order, 0));
    // 1/R = (1 - X)^{c(n+2)}
    let e = &c * q(n as i64 + 2);
    let r_inv = one_minus.pow_rational(&e)?;
    let ratio = radial_coeffs(&l.mul(&r_inv), order);
    let first_nonconstant = (1..=order).find(|&k| !ratio[k as usize].is_zero());
    let (lc, rc) = (radial_coeffs(&l, order), radial_coeffs(&one_minus.pow_rational(&-e)?, order));
    let termwise = lc.iter().zip(&rc).take_while(|(_, r)| !r.is_zero()).map(|(l, r)| l / r).collect();
    Ok(OdeResidual { gamma: gamma.clone(), mu: mu.clone(), n, d_param, order, ratio, first_nonconstant, termwise })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub kind: ChKind,
    #[serde(with = "rational_string")]
    pub alpha: BigRational,
    #[serde(with = "rational_string")]
    pub mu: BigRational,
    pub decision: Decision,
    pub series: ProjectiveVerdict,
    pub agree: bool,
}

/// Compares the closed-form decision with Calabi's criterion on the series
/// truncated at total degree `order` (basis norm `order / 2`).
pub fn cross_validate(
    d: &CartanDomain,
    alpha: &BigRational,
    mu: &BigRational,
    kind: ChKind,
    order: u32,
) -> Result<CrossValidation> {
    let decision = decide(d, kind, alpha, mu)?;
    let dom = CHDomain::new(*d, mu.clone())?;
    let p = ch_potential(&dom, kind, order)?.scaled(alpha);
    let series = projective_witness_with_fiber(&p.diastasis, order / 2, dom.fiber())?;
    let agree = decision.verdict != series.is_refuted();
    let cv = CrossValidation { kind, alpha: alpha.clone(), mu: mu.clone(), decision, series, agree };
    if !agree {
        return Err(Error::Disagreement(format!(
            "{kind} alpha={alpha} mu={mu}: decision {} but series {:?}; diastasis {:?}",
            cv.decision.verdict,
            cv.series,
            p.diastasis.series()
        )));
    }
    Ok(cv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;
    use crate::domains::{structural_constants, Family};

    #[test]
    fn wallach_shift() {
        let ch = CartanDomain::ball(3);
        assert!(decide_g_infinite(&ch, &rat(1, 7), &rat(2, 9)).unwrap().verdict);
        let d = structural_constants(Family::III { n: 2 }).unwrap();
        assert!(decide_g_infinite(&d, &rat(1, 1), &rat(1, 2)).unwrap().verdict);
        let no = decide_g_infinite(&d, &rat(1, 1), &rat(1, 3)).unwrap();
        assert_eq!(no.failing.unwrap().s, 0);
        let i22 = structural_constants(Family::I { p: 2, q: 2 }).unwrap();
        assert!(decide_ghat_infinite(&i22, &rat(1, 1), &rat(1, 2)).unwrap().verdict);
        assert!(!decide_ghat_infinite(&i22, &rat(2, 5), &rat(1, 1)).unwrap().verdict);
    }

    #[test]
    fn psi() {
        let w = psi_expansion(1, 2, 1, 6).unwrap();
        let f = w.first_negative.unwrap();
        assert_eq!((f.index, f.raw), (2, rat(-1, 4)));
        assert_eq!(w.raw[0], rat(4, 1));
        let w = psi_expansion(2, 1, 1, 6).unwrap();
        assert!(w.first_negative.is_none());
    }

    #[test]
    fn propalphamu() {
        let w = propalphamu_witness(1, 1, 1, 4).unwrap();
        let f = w.first_negative.unwrap();
        assert_eq!((f.index, f.normalized), (2, rat(-1, 16)));
    }

    #[test]
    fn csc() {
        let ch1 = CartanDomain::ball(1);
        let p = ProductDomain::new(vec![ch1, ch1], vec![rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(csc_condition(&p), rat(2, 1));
        let k = ke_condition(&[ch1, ch1]);
        assert_eq!(k.mu_ke, vec![rat(2, 3), rat(2, 3)]);
    }

    #[test]
    fn ode() {
        let r = ode_residual(&rat(2, 1), &rat(1, 1), 1, 1, 6).unwrap();
        assert!(r.nonconstant());
        assert_eq!(r.ratio[0], rat(1, 2));
    }
}
