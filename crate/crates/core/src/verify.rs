//! The reproduction suite: one check per published computable, shared by the
//! `verify-paper` subcommand and the acceptance test target.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::grat::{rat, GRat};
use crate::algebra::poly::Poly;
use crate::algebra::series::HermSeries;
use crate::calabi::{dual_diastasis, normalize_diastasis};
use crate::ch_metrics::{ch_potential, rank1_compactification_check, verify_block_structure, CHDomain, ChKind};
use crate::curvature::{hideyuki_check, ke_defect, ricci_duality_check};
use crate::domains::{structural_constants, CartanDomain, Family, ProductDomain};
use crate::error::Result;
use crate::flag::{admissible_minors, build_z, check_nilpotency, no_cancellation_check, Group, PaintedDiagram};
use crate::inducibility::{
    cross_validate, csc_condition, decide_dual_finite, decide_g_infinite, ode_residual,
    propalphamu_witness, psi_expansion, psi_ratio_limit,
};

pub const SCHEMA_VERSION: &str = "1";

/// Tolerance for the limit `A_h / B_{h,1} -> 1`.
pub const RATIO_TOLERANCE: f64 = 1e-3;
/// Width of the bracket around the smallest positive root of `P`.
pub const ROOT_WIDTH_LOG2: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A refutation the check expects, e.g. a negative coefficient.
    RefutedAsExpected,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub witnesses: Value,
    pub millis: u128,
    pub budget_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub suite: &'static str,
    pub order: u32,
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status.ok())
    }
}

struct Outcome {
    ok: bool,
    refutation: bool,
    detail: String,
    witnesses: Value,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>, witnesses: Value) -> Self {
        Outcome { ok, refutation: false, detail: detail.into(), witnesses }
    }

    fn refuted(mut self) -> Self {
        self.refutation = true;
        self
    }
}

type CheckFn = fn(u32) -> Result<Outcome>;

const CHECKS: [(u32, &str, u64, CheckFn); 11] = [
    (1, "wallach decisions", 1, wallach_decisions),
    (2, "psi expansion", 5, psi_machinery),
    (3, "alpha-mu witness", 1, alpha_mu_witness),
    (4, "dual trick", 1, dual_trick),
    (5, "block structure", 30, block_structure),
    (6, "rank-one compactification", 10, compactification),
    (7, "flag pipeline", 60, flag_pipeline),
    (8, "curve curvature blow-up", 120, curve_blowup),
    (9, "ricci duality", 60, ricci_duality),
    (10, "ode residual", 5, ode),
    (11, "generalized arithmetic", 1, generalized_arithmetic),
];

pub fn check_ids() -> impl Iterator<Item = (u32, &'static str)> {
    CHECKS.iter().map(|&(id, name, _, _)| (id, name))
}

/// Runs one check. `order` is the truncation used by the checks stated
/// "through order 8"; the others use their own fixed orders.
pub fn run_check(id: u32, order: u32) -> Option<CheckResult> {
    let &(id, name, budget, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let out = f(order);
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (status, detail, witnesses) = match out {
        Ok(o) if o.ok && elapsed <= budget => {
            (if o.refutation { Status::RefutedAsExpected } else { Status::Pass }, o.detail, o.witnesses)
        }
        Ok(o) if o.ok => (Status::Fail, format!("{} (over time budget)", o.detail), o.witnesses),
        Ok(o) => (Status::Fail, o.detail, o.witnesses),
        Err(e) => (Status::Fail, format!("error: {e}"), Value::Null),
    };
    Some(CheckResult { id, name, status, detail, witnesses, millis: elapsed.as_millis(), budget_ms: budget.as_millis() })
}

pub fn run_suite(order: u32) -> RunReport {
    let checks = CHECKS.iter().filter_map(|c| run_check(c.0, order)).collect();
    RunReport { schema_version: SCHEMA_VERSION, suite: "verify-paper", order, checks }
}

fn grid(points: &[(i64, i64)]) -> Vec<BigRational> {
    points.iter().map(|&(p, q)| rat(p, q)).collect()
}

fn wallach_decisions(_: u32) -> Result<Outcome> {
    let alphas = grid(&[(1, 7), (1, 3), (1, 2), (1, 1), (5, 2)]);
    let mus = grid(&[(1, 5), (1, 2), (1, 1), (7, 3)]);
    let mut all = true;
    for n in 1..=3 {
        let ch = CartanDomain::ball(n);
        for a in &alphas {
            for m in &mus {
                all &= decide_g_infinite(&ch, a, m)?.verdict;
            }
        }
    }
    let d = structural_constants(Family::III { n: 2 })?;
    let yes = decide_g_infinite(&d, &rat(1, 1), &rat(1, 2))?;
    let no = decide_g_infinite(&d, &rat(1, 1), &rat(1, 3))?;
    let s0 = no.failing.as_ref().map(|f| f.s);
    let ok = all && yes.verdict && !no.verdict && s0 == Some(0);
    Ok(Outcome::new(
        ok,
        format!("CH^1..3 grid all true: {all}; r=2,a=1: (1,1/2) {} (1,1/3) {} at s={s0:?}", yes.verdict, no.verdict),
        json!({ "refuted": no }),
    ))
}

fn psi_machinery(_: u32) -> Result<Outcome> {
    let w = psi_expansion(1, 2, 1, 20)?;
    let f = w.first_negative.clone();
    let coeff_ok = f.as_ref().is_some_and(|f| f.index == 2 && f.raw == rat(-1, 4));
    let r = psi_ratio_limit(1, 2, 1, 40)?;
    let dev = (r.ratio(40) - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
    let ok = coeff_ok && dev < RATIO_TOLERANCE && r.h0 < 40;
    Ok(Outcome::new(
        ok,
        format!("x^2 coefficient {} (two routes agree to order 20); |A_40/B_40,1 - 1| = {dev:e}; alternation from h0 = {}", f.as_ref().map_or("none".into(), |f| f.raw.to_string()), r.h0),
        json!({ "first_negative": f, "h0": r.h0 }),
    ))
}

fn alpha_mu_witness(_: u32) -> Result<Outcome> {
    let w = propalphamu_witness(1, 1, 1, 6)?;
    let f = w.first_negative.clone();
    let ok = f.as_ref().is_some_and(|f| f.index == 2 && f.normalized == rat(-1, 16));
    Ok(Outcome::new(
        ok,
        format!("first negative normalized coefficient {}", f.as_ref().map_or("none".into(), |f| format!("{} at degree {}", f.normalized, f.index))),
        json!({ "first_negative": f }),
    )
    .refuted())
}

fn dual_trick(_: u32) -> Result<Outcome> {
    let order = 24;
    let x = HermSeries::norm_sq(1, order, 0);
    let one = HermSeries::one(1, order);
    let hyp = normalize_diastasis(&one.sub(&x).log()?.neg())?;
    let fs = normalize_diastasis(&one.add(&x).log()?)?;
    let ok = dual_diastasis(&hyp)? == fs;
    Ok(Outcome::new(ok, "dual of -log(1-|z|^2) equals log(1+|z|^2) through |z|^24", Value::Null))
}

fn block_structure(_: u32) -> Result<Outcome> {
    let d = CHDomain::new(CartanDomain::ball(1), rat(1, 1))?;
    let p = ch_potential(&d, ChKind::Ghat, 12)?;
    let blocks = verify_block_structure(&p, 6)?;
    let i22 = structural_constants(Family::I { p: 2, q: 2 })?;
    let points = [(1, 5, 1, 1), (1, 2, 1, 1), (1, 1, 1, 2), (1, 1, 1, 1), (2, 1, 1, 1), (3, 4, 1, 1), (1, 3, 3, 2), (1, 1, 2, 1), (1, 4, 2, 1), (5, 2, 1, 3)];
    let mut refuted = 0;
    let mut verdicts = Vec::new();
    for (ap, aq, mp, mq) in points {
        let (a, m) = (rat(ap, aq), rat(mp, mq));
        let cv = cross_validate(&i22, &a, &m, ChKind::Ghat, 4)?;
        if cv.series.is_refuted() {
            refuted += 1;
        }
        verdicts.push(json!({ "alpha": a.to_string(), "mu": m.to_string(), "decision": cv.decision.verdict }));
    }
    let ok = blocks.cross_block_nonzero == 0 && blocks.fiber_block_matches && refuted >= 1;
    Ok(Outcome::new(
        ok,
        format!(
            "{} blocks, {} nonzero cross-block entries, fiber blocks match: {}; 10 I(2,2) points agree, {refuted} refuted",
            blocks.blocks.len(),
            blocks.cross_block_nonzero,
            blocks.fiber_block_matches
        ),
        json!({ "grid": verdicts }),
    ))
}

fn compactification(order: u32) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for mu in [2, 3] {
        let r = rank1_compactification_check(mu, order)?;
        ok &= r.norm_identity && r.potential_identity;
        parts.push(format!("mu={mu}: norm {} potential {}", r.norm_identity, r.potential_identity));
    }
    Ok(Outcome::new(ok, parts.join("; "), Value::Null))
}

fn su3_expected() -> [Poly; 2] {
    let e = |exps: [u32; 6], p: i64, q: i64| Poly::monomial(exps.to_vec(), GRat::from_ratio(p, q));
    let common = [e([0; 6], 1, 1), e([1, 0, 1, 1, 0, 1], 1, 4)];
    let d1 = [e([1, 0, 0, 1, 0, 0], 1, 1), e([0, 1, 0, 0, 1, 0], 1, 1), e([0, 1, 0, 1, 0, 1], 1, 2), e([1, 0, 1, 0, 1, 0], 1, 2)];
    let d2 = [e([0, 1, 0, 0, 1, 0], 1, 1), e([0, 0, 1, 0, 0, 1], 1, 1), e([0, 1, 0, 1, 0, 1], -1, 2), e([1, 0, 1, 0, 1, 0], -1, 2)];
    let sum = |ts: &[Poly]| ts.iter().chain(&common).fold(Poly::zero(6), |a, t| &a + t);
    [sum(&d1), sum(&d2)]
}

fn flag_pipeline(_: u32) -> Result<Outcome> {
    let su3 = PaintedDiagram::new(Group::SU(3), vec![1, 2])?;
    let minors = admissible_minors(&su3)?;
    let su3_ok = minors == su3_expected();
    let mut ok = su3_ok;
    let mut parts = vec![format!("SU(3) minors match: {su3_ok}")];
    let mut wit = Vec::new();
    for g in [Group::Sp(3), Group::SO(7), Group::SO(8)] {
        let d = PaintedDiagram::new(g, vec![2])?;
        let index = check_nilpotency(&build_z(&d))?;
        let nc = no_cancellation_check(&d)?;
        let half = nc.monomial.entry_coefficient == GRat::from_ratio(1, 2);
        let templates = nc.scan.matches_templates && nc.scan.monomials.iter().all(|m| !m.templates.is_empty());
        ok &= index <= 3 && half && templates;
        parts.push(format!("{g} r=2: Z^{index}=0, coefficient {}, {} (2,3) monomials classified", nc.monomial.entry_coefficient, nc.scan.monomials.len()));
        wit.push(json!({ "group": g.to_string(), "monomial": nc.monomial }));
    }
    Ok(Outcome::new(ok, parts.join("; "), Value::Array(wit)))
}

fn curve_blowup(_: u32) -> Result<Outcome> {
    let width = BigRational::new(BigInt::one(), BigInt::from(2).pow(ROOT_WIDTH_LOG2));
    let r = hideyuki_check(&width)?;
    let w = &r.witness;
    let inside = w.lo.is_positive() && w.hi < BigRational::one() && &w.hi - &w.lo <= width;
    let ok = r.passes() && inside && r.h_at_zero == rat(3, 1);
    Ok(Outcome::new(
        ok,
        format!(
            "h = P/Q: {}; h(0) = {}; K = R/P^{} with deg R = {}, R > 0: {}; x0 in ({}, {}]",
            r.h_matches,
            r.h_at_zero,
            r.k_denominator_power.map_or("?".into(), |k| k.to_string()),
            r.r_degree,
            w.r_coefficients_positive,
            w.lo,
            w.hi
        ),
        serde_json::to_value(&r).unwrap_or(Value::Null),
    ))
}

fn ricci_duality(order: u32) -> Result<Outcome> {
    let x = HermSeries::norm_sq(1, order, 0);
    let ch1 = normalize_diastasis(&HermSeries::one(1, order).sub(&x).log()?.neg())?;
    ricci_duality_check(&ch1, order)?;
    let g = ch_potential(&CHDomain::new(CartanDomain::ball(1), rat(1, 1))?, ChKind::G, order)?;
    ricci_duality_check(&g.diastasis, order)?;
    let gh = ch_potential(&CHDomain::new(CartanDomain::ball(1), rat(2, 1))?, ChKind::Ghat, order)?;
    ricci_duality_check(&gh.diastasis, order)?;
    let ch2 = normalize_diastasis(&HermSeries::one(2, order).sub(&HermSeries::norm_sq_sum(2, order, 0..2)).log()?.neg())?;
    let ke = ke_defect(&ch2, &rat(3, 1), order)?.is_zero();
    let lambdas: Vec<BigRational> = (1..=10).map(|k| rat(k, 2)).collect();
    let mut never = true;
    for mu in [rat(1, 2), rat(1, 1), rat(2, 1)] {
        let p = ch_potential(&CHDomain::new(CartanDomain::ball(1), mu)?, ChKind::Ghat, order)?;
        for l in &lambdas {
            never &= !ke_defect(&p.diastasis, l, order)?.is_zero();
        }
    }
    Ok(Outcome::new(
        ke && never,
        format!("duality exact through order {order} for CH^1, g, ghat; CH^2 KE at 3: {ke}; ghat never KE on grid: {never}"),
        Value::Null,
    ))
}

fn ode(order: u32) -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, m, n) in [(rat(2, 1), rat(1, 1), 1), (rat(4, 1), rat(4, 5), 4)] {
        let r = ode_residual(&g, &m, n, n, order)?;
        let differ = r.termwise.len() >= 2 && r.termwise[0] != r.termwise[1];
        ok &= r.nonconstant() && differ;
        parts.push(format!(
            "(γ,μ,n)=({g},{m},{n}): L/R = {} + {} X + ..., L_0/R_0 = {}, L_1/R_1 = {}",
            r.ratio[0], r.ratio[1], r.termwise[0], r.termwise[1]
        ));
    }
    Ok(Outcome::new(ok, parts.join("; "), Value::Null))
}

fn generalized_arithmetic(_: u32) -> Result<Outcome> {
    let ch1 = CartanDomain::ball(1);
    let ch2 = CartanDomain::ball(2);
    let i22 = structural_constants(Family::I { p: 2, q: 2 })?;
    let mut ok = true;
    for factors in [vec![ch1, ch1], vec![ch2, i22], vec![ch1, ch2, i22]] {
        let n: u32 = factors.iter().map(|f| f.n).sum();
        let mu = factors.iter().map(|f| BigRational::new(f.gamma.into(), (n + 1).into())).collect();
        ok &= csc_condition(&ProductDomain::new(factors, mu)?).is_zero();
    }
    let two = csc_condition(&ProductDomain::new(vec![ch1, ch1], vec![rat(1, 1), rat(1, 1)])?);
    ok &= two == rat(2, 1);
    let cases = [(vec![rat(1, 1), rat(2, 1)], true), (vec![rat(3, 1)], true), (vec![rat(1, 2), rat(1, 1)], false), (vec![rat(2, 1), rat(5, 3)], false)];
    for (mu, expect) in &cases {
        ok &= decide_dual_finite(&rat(1, 1), mu)?.verdict == *expect;
        ok &= !decide_dual_finite(&rat(1, 2), mu)?.verdict;
    }
    Ok(Outcome::new(ok, format!("csc vanishes at KE exponents; (CH^1,CH^1) at (1,1) gives {two}; integrality grid matches"), Value::Null))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sequential() {
        assert!(check_ids().map(|(i, _)| i).eq(1..=11));
    }

    #[test]
    fn su3_expected_minors_are_hermitian() {
        for p in su3_expected() {
            assert_eq!(crate::flag::conj_poly(&p, 3), p);
        }
    }
}
