//! Metrics and curvatures along holomorphic curves, and Ricci potentials of
//! diastasis series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::grat::{rational_string, GRat};
use crate::algebra::matrix::determinant_with;
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RationalFunction;
use crate::algebra::series::HermSeries;
use crate::algebra::upoly::UPoly;
use crate::calabi::{dual_diastasis, normalize_diastasis, Diastasis};
use crate::ch_metrics::hessian;
use crate::error::{Error, Result};

fn curve_vars() -> Vec<String> {
    vec!["z".into(), "zbar".into()]
}

/// `coefficient * log(argument)` with `argument` a rational function of
/// formally independent `z, z̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePotential {
    pub coefficient: BigRational,
    pub argument: RationalFunction,
}

impl CurvePotential {
    pub fn log_of(argument: RationalFunction) -> Result<Self> {
        Self::check(&argument)?;
        Ok(CurvePotential { coefficient: BigRational::one(), argument })
    }

    pub fn neg_log_of(argument: RationalFunction) -> Result<Self> {
        Self::check(&argument)?;
        Ok(CurvePotential { coefficient: -BigRational::one(), argument })
    }

    fn check(f: &RationalFunction) -> Result<()> {
        if f.vars() != curve_vars().as_slice() {
            return Err(Error::VariableMismatch(f.vars().len(), 2));
        }
        let origin = [GRat::zero(), GRat::zero()];
        match f.eval(&origin) {
            Some(v) if !v.is_zero() => Ok(()),
            _ => Err(Error::DegenerateMetric),
        }
    }

    /// `log(1 + z z̄)`.
    pub fn fubini_study() -> Self {
        Self::log_of(one_plus_sign_zzbar(1)).expect("valid at the origin")
    }

    /// `-log(1 - z z̄)`.
    pub fn hyperbolic() -> Self {
        Self::neg_log_of(one_plus_sign_zzbar(-1)).expect("valid at the origin")
    }

    /// `log det A*(γ(z))` for the dual of the homogeneous nonsymmetric domain
    /// in `Sym(2) x C^2`, along `γ(z) = ([[0, z], [z, 0]], (z, 0))`.
    pub fn u21_dual_curve() -> Self {
        Self::log_of(u21_dual_det()).expect("valid at the origin")
    }
}

fn one_plus_sign_zzbar(sign: i64) -> RationalFunction {
    let p = &Poly::one(2) + &(&Poly::var(2, 0) * &Poly::var(2, 1)).scale(&GRat::from_int(sign));
    RationalFunction::from_poly(curve_vars(), p)
}

type M2 = [[RationalFunction; 2]; 2];

fn rf(p: Poly) -> RationalFunction {
    RationalFunction::from_poly(curve_vars(), p)
}

fn m2_mul(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]))))
}

fn m2_add(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].add(&b[i][j])))
}

fn m2_scale(a: &M2, c: &GRat) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].scale(c)))
}

fn m2_det(a: &M2) -> RationalFunction {
    a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]))
}

/// Adjugate over determinant.
fn m2_inv(a: &M2) -> Result<M2> {
    let d = m2_det(a).inv()?;
    let adj: M2 = [[a[1][1].clone(), a[0][1].neg()], [a[1][0].neg(), a[0][0].clone()]];
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| adj[i][j].mul(&d))))
}

fn m2_identity() -> M2 {
    let one = rf(Poly::one(2));
    let zero = rf(Poly::zero(2));
    [[one.clone(), zero.clone()], [zero, one]]
}

/// `det A*(W, V)` with
/// `A* = I + W W̄ + ½ V V̄ᵗ + ½ (I - W)(I + W̄)⁻¹ V̄ Vᵗ (I - W)⁻¹ (I + W̄)`.
fn u21_dual_det() -> RationalFunction {
    let z = rf(Poly::var(2, 0));
    let zb = rf(Poly::var(2, 1));
    let zero = rf(Poly::zero(2));
    let w: M2 = [[zero.clone(), z.clone()], [z.clone(), zero.clone()]];
    let wb: M2 = [[zero.clone(), zb.clone()], [zb.clone(), zero.clone()]];
    let v = [z, zero.clone()];
    let vb = [zb, zero];
    let v_vbt: M2 = std::array::from_fn(|i| std::array::from_fn(|j| v[i].mul(&vb[j])));
    let vb_vt: M2 = std::array::from_fn(|i| std::array::from_fn(|j| vb[i].mul(&v[j])));
    let id = m2_identity();
    let i_minus_w = m2_add(&id, &m2_scale(&w, &GRat::from_int(-1)));
    let i_plus_wb = m2_add(&id, &wb);
    let half = GRat::from_ratio(1, 2);
    let tail = m2_mul(
        &m2_mul(&m2_mul(&m2_mul(&i_minus_w, &m2_inv(&i_plus_wb).expect("invertible")), &vb_vt), &m2_inv(&i_minus_w).expect("invertible")),
        &i_plus_wb,
    );
    let a = m2_add(&m2_add(&m2_add(&id, &m2_mul(&w, &wb)), &m2_scale(&v_vbt, &half)), &m2_scale(&tail, &half));
    m2_det(&a)
}

/// `(p p_{zz̄} - p_z p_z̄, p²)`: `∂∂̄ log p` as numerator and denominator.
fn log_laplacian_parts(p: &Poly) -> (Poly, Poly) {
    let pz = p.derivative(0);
    let pzb = p.derivative(1);
    let pzzb = pz.derivative(1);
    (&(p * &pzzb) - &(&pz * &pzb), p.pow(2))
}

/// `∂∂̄ log(num/den)` without any gcd step.
fn log_laplacian_unreduced(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let (a, b) = log_laplacian_parts(num);
    if den.is_constant() {
        return (a, b);
    }
    let (c, d) = log_laplacian_parts(den);
    (&(&a * &d) - &(&c * &b), &b * &d)
}

/// `h = ∂²φ/∂z∂z̄` for the potential `φ`.
pub fn metric_along_curve(p: &CurvePotential) -> Result<RationalFunction> {
    let (n, d) = log_laplacian_unreduced(p.argument.numer(), p.argument.denom());
    let c = GRat::from_rational(p.coefficient.clone());
    RationalFunction::new(curve_vars(), n.scale(&c), d)
}

/// `K = -(1/h) ∂∂̄ log h`, reduced.
pub fn sectional_curvature_along_curve(h: &RationalFunction) -> Result<RationalFunction> {
    let (n, d) = sectional_curvature_unreduced(h)?;
    RationalFunction::new(curve_vars(), n, d)
}

fn sectional_curvature_unreduced(h: &RationalFunction) -> Result<(Poly, Poly)> {
    if h.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (a, b) = log_laplacian_unreduced(h.numer(), h.denom());
    // -(den/num) * a/b
    Ok((-&(&a * h.denom()), &b * h.numer()))
}

/// A real univariate rational function `num/den` in `x`, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFunction {
    pub num: UPoly,
    pub den: UPoly,
}

impl LineFunction {
    /// Reduces and scales so the denominator is monic.
    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let lead = den.leading();
        num = num.scale(&lead.recip());
        den = den.scale(&lead.recip());
        Ok(LineFunction { num, den })
    }

    /// Rescales so the denominator equals `target`, if it is proportional.
    pub fn with_denominator(&self, target: &UPoly) -> Option<(UPoly, UPoly)> {
        if target.degree() != self.den.degree() || target.is_zero() {
            return None;
        }
        let c = target.leading() / self.den.leading();
        let den = self.den.scale(&c);
        (den == *target).then(|| (self.num.scale(&c), den))
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

/// Coefficients of `p(λx, λ̄x)` in `x`.
fn restrict_poly(p: &Poly, lambda: &GRat) -> Vec<GRat> {
    let lb = lambda.conj();
    let mut out = vec![GRat::zero(); p.total_degree() as usize + 1];
    for (m, c) in p.terms() {
        let (a, b) = (m.0[0], m.0[1]);
        let t = &(c * &lambda.pow(a)) * &lb.pow(b);
        out[(a + b) as usize] += &t;
    }
    out
}

fn gmul(a: &[GRat], b: &[GRat]) -> Vec<GRat> {
    let mut out = vec![GRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn real_part(v: &[GRat]) -> Result<UPoly> {
    if let Some(c) = v.iter().find(|c| !c.is_real()) {
        return Err(Error::NonReal(c.to_string()));
    }
    Ok(UPoly::new(v.iter().map(|c| c.re().clone()).collect()))
}

fn restrict_parts(num: &Poly, den: &Poly, lambda: &GRat) -> Result<LineFunction> {
    if lambda.is_zero() {
        return Err(Error::InconsistentParameters("direction must be nonzero".into()));
    }
    let n = restrict_poly(num, lambda);
    let d = restrict_poly(den, lambda);
    let dc: Vec<GRat> = d.iter().map(GRat::conj).collect();
    LineFunction::new(real_part(&gmul(&n, &dc))?, real_part(&gmul(&d, &dc))?)
}

/// `f(λx, λ̄x)` for real `x`; fails unless the result is exactly real.
pub fn restrict_to_line(f: &RationalFunction, lambda: &GRat) -> Result<LineFunction> {
    if f.vars() != curve_vars().as_slice() {
        return Err(Error::VariableMismatch(f.vars().len(), 2));
    }
    restrict_parts(f.numer(), f.denom(), lambda)
}

/// Curvature restricted to the line, computed from the unreduced
/// two-variable expression and reduced after restriction.
pub fn sectional_curvature_on_line(h: &RationalFunction, lambda: &GRat) -> Result<LineFunction> {
    let (n, d) = sectional_curvature_unreduced(h)?;
    restrict_parts(&n, &d, lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupWitness {
    /// `x₀ ∈ (lo, hi]`.
    #[serde(with = "rational_string")]
    pub lo: BigRational,
    #[serde(with = "rational_string")]
    pub hi: BigRational,
    /// `P` has no root in `[0, lo]` and `P(0) > 0`.
    pub p_positive_before: bool,
    /// `R > 0` on `[lo, hi]`.
    pub r_positive_at_root: bool,
    /// Every coefficient of `R` is nonnegative and `R(0) > 0`.
    pub r_coefficients_positive: bool,
}

impl BlowupWitness {
    pub fn certified(&self) -> bool {
        self.p_positive_before && self.r_positive_at_root
    }
}

/// Brackets the smallest positive root of `P` in `(0, 1]` to width `width`
/// and certifies that `K = R/P²` tends to `+∞` there.
pub fn blowup_witness(r: &UPoly, p: &UPoly, width: &BigRational) -> Result<BlowupWitness> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let (lo, hi) = p.isolate_smallest_root(&zero, &one, width).ok_or_else(|| Error::NoSignChange("(0, 1]".into()))?;
    let p_positive_before = p.eval(&zero).is_positive() && p.count_roots(&zero, &lo) == 0 && !p.eval(&lo).is_zero();
    let r_coefficients_positive = r.coeff(0).is_positive() && r.coeffs().iter().all(|c| !c.is_negative());
    // R has no root in [lo, hi] and is positive at lo
    let r_positive_at_root = r.eval(&lo).is_positive() && r.count_roots(&lo, &hi) == 0;
    Ok(BlowupWitness { lo, hi, p_positive_before, r_positive_at_root, r_coefficients_positive })
}

/// Printed numerator of `h` along `x + ix/2`.
pub fn hideyuki_p() -> UPoly {
    UPoly::from_ints(&[12288, 0, 4096, 0, -62592, 0, -12320, 0, -19800, 0, -138750, 0, 78125])
        .scale(&BigRational::from_integer(BigInt::from(4)))
}

/// Printed denominator of `h` along `x + ix/2`.
pub fn hideyuki_q() -> UPoly {
    let q = UPoly::from_ints(&[128, 0, 288, 0, -120, 0, -50, 0, 625]);
    q.mul(&q)
}

pub fn hideyuki_direction() -> GRat {
    GRat::new(BigRational::one(), BigRational::new(BigInt::one(), BigInt::from(2)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HideyukiReport {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub r: Vec<String>,
    pub h_matches: bool,
    #[serde(with = "rational_string")]
    pub h_at_zero: BigRational,
    /// `k` with the reduced denominator of `K` proportional to `P^k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_denominator_power: Option<u32>,
    pub r_degree: usize,
    pub witness: BlowupWitness,
}

impl HideyukiReport {
    pub fn passes(&self) -> bool {
        self.h_matches
            && self.k_denominator_power.is_some()
            && self.r_degree == 36
            && self.witness.certified()
            && self.witness.r_coefficients_positive
    }
}

fn coeff_strings(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

/// `(k, R)` with `f = R / P^k` exactly.
pub fn denominator_power(f: &LineFunction, p: &UPoly) -> Option<(u32, UPoly)> {
    if p.degree() == 0 || !f.den.degree().is_multiple_of(p.degree()) {
        return None;
    }
    let k = (f.den.degree() / p.degree()) as u32;
    let mut pk = UPoly::from_ints(&[1]);
    for _ in 0..k {
        pk = pk.mul(p);
    }
    f.with_denominator(&pk).map(|(num, _)| (k, num))
}

/// The whole curve computation: `h`, its restriction, `K = R/P²` and the
/// blow-up bracket.
pub fn hideyuki_check(width: &BigRational) -> Result<HideyukiReport> {
    let lambda = hideyuki_direction();
    let h = metric_along_curve(&CurvePotential::u21_dual_curve())?;
    let hl = restrict_to_line(&h, &lambda)?;
    let (p, q) = (hideyuki_p(), hideyuki_q());
    let h_matches = hl.with_denominator(&q).is_some_and(|(num, _)| num == p);
    let h_at_zero = hl.eval(&BigRational::zero()).ok_or(Error::DivisionByZero)?;
    let kl = sectional_curvature_on_line(&h, &lambda)?;
    let (r, k_denominator_power) = match denominator_power(&kl, &p) {
        Some((k, num)) => (num, Some(k)),
        None => (kl.num.clone(), None),
    };
    let witness = blowup_witness(&r, &p, width)?;
    Ok(HideyukiReport {
        p: coeff_strings(&p),
        q: coeff_strings(&q),
        r: coeff_strings(&r),
        h_matches,
        h_at_zero,
        k_denominator_power,
        r_degree: r.degree(),
        witness,
    })
}

/// Normal form of `-log det (∂²D/∂z_i∂z̄_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciSeries {
    pub input: Diastasis,
    pub output: Diastasis,
}

/// Ricci potential through order `order - 2`.
pub fn ricci_series(d: &Diastasis, order: u32) -> Result<RicciSeries> {
    let s = d.series().with_order(order);
    let hess = hessian(&s);
    let n = s.nvars();
    let ord = order.saturating_sub(2);
    let det = HermSeries::from_poly(n, ord, determinant_with(n, 2 * n, |i, j| hess[i][j].poly().clone()));
    let c0 = det.constant_term();
    if !c0.is_real() || !c0.re().is_positive() {
        return Err(Error::DegenerateMetric);
    }
    let (_, log_det) = det.log_scaled()?;
    Ok(RicciSeries { input: d.clone(), output: normalize_diastasis(&log_det.neg())? })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciDuality {
    pub order: u32,
    pub holds: bool,
}

/// `ricci(d*) = ricci(d)(z, -z̄)`, coefficientwise.
pub fn ricci_duality_check(d: &Diastasis, order: u32) -> Result<RicciDuality> {
    let dual = dual_diastasis(d)?;
    let lhs = ricci_series(&dual, order)?.output;
    let rhs = ricci_series(d, order)?.output.series().substitute_negate_bar();
    if lhs.series() != &rhs {
        return Err(Error::Mismatch(format!("ricci of dual differs at order {order}")));
    }
    Ok(RicciDuality { order, holds: true })
}

/// `ricci(d) + λ d` through order `order - 2`.
pub fn ke_defect(d: &Diastasis, lambda: &BigRational, order: u32) -> Result<HermSeries> {
    let ric = ricci_series(d, order)?.output;
    let ord = order.saturating_sub(2);
    Ok(ric.series().add(&d.series().with_order(ord).scale_q(lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::grat::rat;

    #[test]
    fn constant_curvature_models() {
        let lam = GRat::one();
        let h = metric_along_curve(&CurvePotential::fubini_study()).unwrap();
        let k = sectional_curvature_along_curve(&h).unwrap();
        assert_eq!(k, RationalFunction::constant(curve_vars(), GRat::from_int(2)));
        assert_eq!(restrict_to_line(&h, &lam).unwrap().den, UPoly::from_ints(&[1, 0, 2, 0, 1]));
        let h = metric_along_curve(&CurvePotential::hyperbolic()).unwrap();
        let k = sectional_curvature_along_curve(&h).unwrap();
        assert_eq!(k, RationalFunction::constant(curve_vars(), GRat::from_int(-2)));
        let l = restrict_to_line(&h, &GRat::i()).unwrap();
        assert_eq!(l.den, UPoly::from_ints(&[1, 0, -2, 0, 1]));
        assert_eq!(l.num, UPoly::from_ints(&[1]));
    }

    #[test]
    fn einstein_ball() {
        let order = 8;
        let n = 2;
        let s = HermSeries::one(n, order).sub(&HermSeries::norm_sq_sum(n, order, 0..n)).log().unwrap().neg();
        let d = normalize_diastasis(&s).unwrap();
        assert!(ke_defect(&d, &rat(3, 1), order).unwrap().is_zero());
        assert!(!ke_defect(&d, &rat(2, 1), order).unwrap().is_zero());
        ricci_duality_check(&d, order).unwrap();
    }
}
