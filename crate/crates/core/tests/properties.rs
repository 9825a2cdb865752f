use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use kahler_core::algebra::grat::{rat, GRat};
use kahler_core::algebra::poly::Poly;
use kahler_core::algebra::ratfun::RationalFunction;
use kahler_core::algebra::series::HermSeries;
use kahler_core::algebra::upoly::UPoly;
use kahler_core::calabi::{dual_diastasis, normalize_diastasis, scan_forbidden};
use kahler_core::ch_metrics::{ch_potential, CHDomain, ChKind};
use kahler_core::curvature::{metric_along_curve, restrict_to_line, ricci_series, CurvePotential};
use kahler_core::domains::{catalog, CartanDomain, ProductDomain};
use kahler_core::flag::{build_z, check_nilpotency, gram_matrix, Group, PaintedDiagram};
use kahler_core::inducibility::{csc_condition, decide_dual_finite, decide_g_infinite, decide_ghat_infinite, ke_condition, psi_expansion};
use kahler_core::psd::psd_check;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn pos_rat() -> impl Strategy<Value = BigRational> {
    (1i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn grat() -> impl Strategy<Value = GRat> {
    (small_rat(), small_rat()).prop_map(|(a, b)| GRat::new(a, b))
}

/// Polynomial in `slots` variables with up to 5 terms of degree <= 3.
fn poly(slots: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=1, slots), grat()), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(slots), |acc, (e, c)| &acc + &Poly::monomial(e, c))
    })
}

/// Radial real potential `Σ c_k (|z_1|^2 + 2|z_2|^2)^k` (forbidden-free).
fn radial_diastasis(order: u32) -> impl Strategy<Value = HermSeries> {
    prop::collection::vec(small_rat(), 1..4).prop_map(move |cs| {
        let x = HermSeries::norm_sq(2, order, 0).add(&HermSeries::norm_sq(2, order, 1).scale_q(&rat(2, 1)));
        let mut acc = HermSeries::zero(2, order);
        let mut p = HermSeries::one(2, order);
        for c in cs {
            p = p.mul(&x);
            acc = acc.add(&p.scale_q(&c));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_rationals_form_a_field(a in grat(), b in grat(), c in grat()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn polynomial_ring_laws(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).derivative(0), &(&a.derivative(0) * &b) + &(&a * &b.derivative(0)));
    }

    #[test]
    fn rational_function_canonical_form(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let vars = vec!["x".to_string(), "y".to_string()];
        let f = RationalFunction::new(vars.clone(), a.clone(), b.clone()).unwrap();
        let g = RationalFunction::new(vars.clone(), &a * &c, &b * &c).unwrap();
        prop_assert_eq!(&f, &g);
        let h = RationalFunction::new(vars, c, b).unwrap();
        prop_assert_eq!(f.add(&h).sub(&h), f);
    }

    #[test]
    fn log_and_exp_are_inverse(d in radial_diastasis(8)) {
        let one = HermSeries::one(2, 8);
        let e = d.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), d.clone());
        let s = one.add(&d);
        prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn log_turns_products_into_sums(a in radial_diastasis(8), b in radial_diastasis(8)) {
        let one = HermSeries::one(2, 8);
        let (p, q) = (one.add(&a), one.add(&b));
        prop_assert_eq!(p.mul(&q).log().unwrap(), p.log().unwrap().add(&q.log().unwrap()));
    }

    #[test]
    fn dual_is_an_involution(s in radial_diastasis(10)) {
        let d = normalize_diastasis(&s).unwrap();
        prop_assert!(scan_forbidden(&d).is_empty());
        let dd = dual_diastasis(&dual_diastasis(&d).unwrap()).unwrap();
        prop_assert_eq!(dd, d);
    }

    #[test]
    fn ricci_commutes_with_permutation(c1 in pos_rat(), c2 in pos_rat()) {
        let order = 8;
        let pot = |a: &BigRational, b: &BigRational| {
            let x = HermSeries::norm_sq(2, order, 0).scale_q(a).add(&HermSeries::norm_sq(2, order, 1).scale_q(b));
            normalize_diastasis(&HermSeries::one(2, order).add(&x).log().unwrap()).unwrap()
        };
        let r = ricci_series(&pot(&c1, &c2), order).unwrap().output;
        let swapped = ricci_series(&pot(&c2, &c1), order).unwrap().output;
        prop_assert_eq!(r.series().embed(2, &[1, 0]), swapped.series().clone());
    }

    #[test]
    fn wallach_continuous_part(i in 0usize..40, x in pos_rat()) {
        let cat = catalog();
        let d = cat[i % cat.len()];
        let w = d.wallach();
        let y = w.threshold() + x;
        prop_assert!(w.member(&y).unwrap());
        prop_assert!(w.member(&-y).is_err());
    }

    #[test]
    fn decisions_are_monotone_in_alpha(i in 0usize..40, a in pos_rat(), m in pos_rat()) {
        let cat = catalog();
        let d = cat[i % cat.len()];
        let one = rat(1, 1);
        if decide_g_infinite(&d, &a, &m).unwrap().verdict {
            prop_assert!(decide_g_infinite(&d, &(&a + &one), &m).unwrap().verdict);
        }
        if decide_ghat_infinite(&d, &a, &m).unwrap().verdict {
            prop_assert!(decide_g_infinite(&d, &(&a * rat(2, 1)), &m).unwrap().verdict);
        }
    }

    #[test]
    fn decisions_never_enumerate_the_tail(i in 0usize..40, a in pos_rat(), m in pos_rat()) {
        let cat = catalog();
        let d = cat[i % cat.len()];
        let t = d.wallach().threshold();
        let dec = decide_g_infinite(&d, &a, &m).unwrap();
        prop_assert!(dec.checked.iter().all(|c| c.value <= t));
    }

    #[test]
    fn dual_decision_on_products_reduces_to_single(a in pos_rat(), m in pos_rat()) {
        let v = decide_dual_finite(&a, std::slice::from_ref(&m)).unwrap().verdict;
        prop_assert_eq!(v, a.is_integer() && m.is_integer());
    }

    #[test]
    fn ke_exponents_are_csc(i in 0usize..40) {
        let cat = catalog();
        let d = cat[i % cat.len()];
        let ke = ke_condition(&[d]);
        let p = ProductDomain::new(vec![d], ke.mu_ke.clone()).unwrap();
        prop_assert!(csc_condition(&p).is_zero());
        prop_assert_eq!(ke.equality[0], d.r == 1);
    }

    #[test]
    fn psi_routes_agree(a in 1u32..6, b in 1u32..4, k in 1u32..3) {
        let r = psi_expansion(a, b, k, 8);
        prop_assert_eq!(r.is_ok(), num_integer::gcd(a, b) == 1);
    }

    #[test]
    fn gram_of_unipotent_is_psd(a in prop::collection::vec(grat(), 3)) {
        // E = I + strictly lower triangular; E^H E must be PSD
        let e = [[GRat::from_int(1), GRat::zero(), GRat::zero()],
                 [a[0].clone(), GRat::from_int(1), GRat::zero()],
                 [a[1].clone(), a[2].clone(), GRat::from_int(1)]];
        let m: Vec<Vec<GRat>> = (0..3).map(|i| (0..3).map(|j| {
            (0..3).fold(GRat::zero(), |acc, k| &acc + &(&e[k][i].conj() * &e[k][j]))
        }).collect()).collect();
        prop_assert!(psd_check(&m).is_psd());
    }

    #[test]
    fn restriction_to_lines_is_real(re in small_rat(), im in small_rat()) {
        let lam = GRat::new(re, im);
        prop_assume!(!lam.is_zero());
        let h = metric_along_curve(&CurvePotential::fubini_study()).unwrap();
        let l = restrict_to_line(&h, &lam).unwrap();
        // 1/(1 + |λ|^2 x^2)^2
        let s = lam.norm_sqr();
        let expect = UPoly::new(vec![rat(1, 1), BigRational::zero(), s]);
        let expect = expect.mul(&expect);
        prop_assert_eq!(l.with_denominator(&expect).map(|(n, _)| n), Some(UPoly::new(vec![rat(1, 1)])));
    }

    #[test]
    fn sturm_brackets_a_sign_change(r in 1i64..40) {
        // (x - r/41)(x^2 + 1)
        let root = rat(r, 41);
        let p = UPoly::new(vec![-root.clone(), rat(1, 1)]).mul(&UPoly::from_ints(&[1, 0, 1]));
        let (lo, hi) = p.isolate_smallest_root(&rat(0, 1), &rat(1, 1), &rat(1, 1 << 10)).unwrap();
        prop_assert!(lo < root && root <= hi);
        prop_assert!(!p.eval(&lo).is_positive() || !p.eval(&hi).is_negative());
    }
}

#[test]
fn ch_potentials_are_hermitian_and_duals_forbidden_free() {
    for mu in [rat(1, 2), rat(1, 1), rat(3, 1)] {
        let d = CHDomain::new(CartanDomain::ball(1), mu).unwrap();
        for kind in [ChKind::G, ChKind::Ghat, ChKind::GStar, ChKind::GhatStar] {
            let p = ch_potential(&d, kind, 8).unwrap();
            assert!(p.diastasis.series().is_hermitian());
            assert!(scan_forbidden(&p.diastasis).is_empty());
        }
    }
}

#[test]
fn every_single_black_diagram_is_nilpotent_with_hermitian_gram() {
    for g in [Group::SU(3), Group::SU(4), Group::Sp(2), Group::Sp(3), Group::SO(5), Group::SO(7), Group::SO(8)] {
        for r in 1..=g.rank() {
            let d = PaintedDiagram::new(g, vec![r]).unwrap();
            let z = build_z(&d);
            assert!(check_nilpotency(&z).unwrap() <= z.dim());
            assert!(gram_matrix(&z).unwrap().is_hermitian());
        }
    }
}
