//! Values checked against closed forms computed here, independently of the
//! library routes that produce them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use kahler_core::algebra::grat::{rat, GRat};
use kahler_core::algebra::series::HermSeries;
use kahler_core::calabi::{dual_diastasis, normalize_diastasis};
use kahler_core::ch_metrics::{ch_potential, CHDomain, ChKind};
use kahler_core::curvature::{hideyuki_check, hideyuki_p, ricci_series};
use kahler_core::domains::{CartanDomain, ProductDomain};
use kahler_core::inducibility::{csc_condition, ode_residual, propalphamu_witness, psi_expansion};

/// `C(q, k)` by the falling product.
fn binom(q: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (q - rat(i as i64, 1)) / rat(i as i64 + 1, 1);
    }
    acc
}

fn radial(s: &HermSeries, k: u32) -> GRat {
    s.coeff(&[k], &[k])
}

#[test]
fn dual_of_hyperbolic_disc_has_alternating_harmonic_coefficients() {
    let order = 24;
    let x = HermSeries::norm_sq(1, order, 0);
    let d = normalize_diastasis(&HermSeries::one(1, order).sub(&x).log().unwrap().neg()).unwrap();
    let dual = dual_diastasis(&d).unwrap();
    for k in 1..=12u32 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        assert_eq!(radial(dual.series(), k), GRat::from_ratio(sign, k as i64), "k = {k}");
    }
}

#[test]
fn psi_half_power_closed_form() {
    // ((1+x)^{1/2} + 1)^2 = 2 + x + 2 (1+x)^{1/2}
    let w = psi_expansion(1, 2, 1, 20).unwrap();
    let half = rat(1, 2);
    for k in 0..=20u32 {
        let mut expect = rat(2, 1) * binom(&half, k);
        if k == 0 {
            expect += rat(2, 1);
        }
        if k == 1 {
            expect += rat(1, 1);
        }
        assert_eq!(w.raw[k as usize], expect, "x^{k}");
    }
    assert_eq!(w.raw[2], rat(-1, 4));
}

#[test]
fn alphamu_closed_form() {
    // ((1+x)^{1/2} + 1)(1+x)^{1/2} = (1+x) + (1+x)^{1/2}
    let w = propalphamu_witness(1, 1, 1, 8).unwrap();
    let half = rat(1, 2);
    for k in 0..=8u32 {
        let mut expect = binom(&half, k);
        if k <= 1 {
            expect += rat(1, 1);
        }
        assert_eq!(w.raw[k as usize], expect);
        assert_eq!(w.normalized[k as usize], &expect / rat(2, 1));
    }
    let f = w.first_negative.unwrap();
    assert_eq!((f.index, f.raw, f.normalized), (2, rat(-1, 8), rat(-1, 16)));
}

#[test]
fn ricci_of_disc_is_minus_two_times_potential() {
    let order = 12;
    let x = HermSeries::norm_sq(1, order, 0);
    let d = normalize_diastasis(&HermSeries::one(1, order).sub(&x).log().unwrap().neg()).unwrap();
    let r = ricci_series(&d, order).unwrap();
    for k in 1..=5u32 {
        assert_eq!(radial(r.output.series(), k), GRat::from_ratio(-2, k as i64));
    }
}

#[test]
fn ricci_of_fubini_study_line() {
    // g = 1/(1+x)^2, so -log det = 2 log(1+x)
    let order = 12;
    let x = HermSeries::norm_sq(1, order, 0);
    let d = normalize_diastasis(&HermSeries::one(1, order).add(&x).log().unwrap()).unwrap();
    let r = ricci_series(&d, order).unwrap();
    for k in 1..=5u32 {
        let sign = if k % 2 == 1 { 2 } else { -2 };
        assert_eq!(radial(r.output.series(), k), GRat::from_ratio(sign, k as i64));
    }
}

#[test]
fn ch_potential_over_disc_with_unit_exponent_is_ball() {
    // N^1 - |w|^2 = 1 - |z|^2 - |w|^2
    let order = 8;
    let d = CHDomain::new(CartanDomain::ball(1), rat(1, 1)).unwrap();
    let g = ch_potential(&d, ChKind::G, order).unwrap();
    let ball = HermSeries::one(2, order).sub(&HermSeries::norm_sq_sum(2, order, 0..2)).log().unwrap().neg();
    assert_eq!(g.diastasis.series(), normalize_diastasis(&ball).unwrap().series());
}

#[test]
fn csc_closed_form() {
    // Σ_j (n + 1 - γ_j/μ_j) n_j with n = 2, γ = 2
    let ch1 = CartanDomain::ball(1);
    let p = ProductDomain::new(vec![ch1, ch1], vec![rat(1, 1), rat(1, 1)]).unwrap();
    assert_eq!(csc_condition(&p), rat(2, 1));
    let p = ProductDomain::new(vec![ch1, ch1], vec![rat(2, 3), rat(2, 3)]).unwrap();
    assert!(csc_condition(&p).is_zero());
    let p = ProductDomain::new(vec![ch1, ch1], vec![rat(1, 2), rat(2, 1)]).unwrap();
    // (3 - 4) + (3 - 1)
    assert_eq!(csc_condition(&p), rat(1, 1));
}

#[test]
fn ode_ratio_for_disc_base() {
    // c = 1/2: L/R = (2 - X) / (4 (1 - X)^{3/2})
    let r = ode_residual(&rat(2, 1), &rat(1, 1), 1, 1, 8).unwrap();
    let e = rat(-3, 2);
    for k in 0..=8u32 {
        let tail = |j: u32| binom(&e, j) * if j.is_multiple_of(2) { rat(1, 1) } else { rat(-1, 1) };
        let mut expect = rat(2, 1) * tail(k);
        if k >= 1 {
            expect -= tail(k - 1);
        }
        assert_eq!(r.ratio[k as usize], expect / rat(4, 1), "X^{k}");
    }
    assert_eq!(r.first_nonconstant, Some(1));
}

/// `h(0)` and `K(0)` of the curve example from a power series route:
/// inverses as geometric series, determinant, logarithm and derivatives.
#[test]
fn curve_metric_and_curvature_at_origin() {
    let order = 8;
    let z = HermSeries::z(1, order, 0);
    let zb = HermSeries::zbar(1, order, 0);
    let zero = HermSeries::zero(1, order);
    let one = HermSeries::one(1, order);
    type M = [[HermSeries; 2]; 2];
    let mul = |a: &M, b: &M| -> M {
        std::array::from_fn(|i| std::array::from_fn(|j| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]))))
    };
    let add = |a: &M, b: &M| -> M { std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].add(&b[i][j]))) };
    let scale = |a: &M, c: &BigRational| -> M { std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].scale_q(c))) };
    let id: M = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
    let w: M = [[zero.clone(), z.clone()], [z.clone(), zero.clone()]];
    let wb: M = [[zero.clone(), zb.clone()], [zb.clone(), zero.clone()]];
    // (I + W̄)^{-1} = Σ (-W̄)^k, (I - W)^{-1} = Σ W^k
    let geometric = |m: &M, sign: i64| -> M {
        let mut acc = id.clone();
        let mut p = id.clone();
        for _ in 0..order {
            p = scale(&mul(&p, m), &rat(sign, 1));
            acc = add(&acc, &p);
        }
        acc
    };
    let vvb: M = [[z.mul(&zb), zero.clone()], [zero.clone(), zero.clone()]];
    let i_minus_w = add(&id, &scale(&w, &rat(-1, 1)));
    let i_plus_wb = add(&id, &wb);
    let tail = mul(&mul(&mul(&mul(&i_minus_w, &geometric(&wb, -1)), &vvb), &geometric(&w, 1)), &i_plus_wb);
    let a = add(&add(&add(&id, &mul(&w, &wb)), &scale(&vvb, &rat(1, 2))), &scale(&tail, &rat(1, 2)));
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    let h = det.log().unwrap().derivative(0, false).derivative(0, true);
    let h0 = h.constant_term();
    assert_eq!(h0, GRat::from_int(3));
    let lh = h.scale(&h0.inv().unwrap()).log().unwrap();
    let k0 = -(&lh.derivative(0, false).derivative(0, true).constant_term() / &h0);
    // frozen from this route
    assert_eq!(k0, GRat::from_ratio(10, 9));

    let report = hideyuki_check(&BigRational::new(BigInt::one(), BigInt::from(1 << 20))).unwrap();
    assert_eq!(report.h_at_zero, rat(3, 1));
    let r0: BigRational = report.r[0].parse::<kahler_core::algebra::grat::GRat>().unwrap().re().clone();
    let p0 = hideyuki_p().coeff(0);
    let k = report.k_denominator_power.unwrap() as i32;
    assert_eq!(GRat::from_rational(r0 / p0.pow(k)), k0);
}

#[test]
fn smallest_root_of_p_by_floating_bisection() {
    let p = hideyuki_p();
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
    let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    // first sign change on a fine grid, then bisection
    let mut lo = 0.0;
    let step = 1e-4;
    while f(lo + step) > 0.0 {
        lo += step;
    }
    let mut hi = lo + step;
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let report = hideyuki_check(&BigRational::new(BigInt::one(), BigInt::from(1 << 20))).unwrap();
    let (a, b) = (report.witness.lo.to_f64().unwrap(), report.witness.hi.to_f64().unwrap());
    assert!(a < lo && lo <= b, "{a} < {lo} <= {b}");
    assert!(report.witness.lo.is_positive());
}
