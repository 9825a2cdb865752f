//! One line per acceptance criterion. Runs as a plain binary (no libtest
//! harness) so the lines are always printed.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use kahler_core::algebra::grat::rat;
use kahler_core::curvature::hideyuki_check;
use kahler_core::inducibility::{propalphamu_witness, psi_expansion, psi_ratio_limit};
use kahler_core::verify::{run_check, Status, RATIO_TOLERANCE, ROOT_WIDTH_LOG2};

/// Series order handed to the order-dependent checks.
const ORDER: u32 = 8;
/// Degree at which the psi ratio must be within `RATIO_TOLERANCE` of 1.
const RATIO_DEGREE: u32 = 40;

type Extra = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn psi_extra() -> Result<String, String> {
    let w = psi_expansion(1, 2, 1, 20).map_err(|e| e.to_string())?;
    ensure(w.raw[2] == rat(-1, 4), format!("x^2 coefficient {}", w.raw[2]))?;
    let r = psi_ratio_limit(1, 2, 1, RATIO_DEGREE).map_err(|e| e.to_string())?;
    let dev = (r.ratio(RATIO_DEGREE) - rat(1, 1)).abs().to_f64().unwrap();
    ensure(dev <= RATIO_TOLERANCE, format!("ratio deviation {dev}"))?;
    Ok(format!("ratio within {RATIO_TOLERANCE:e} at h = {RATIO_DEGREE}"))
}

fn alphamu_extra() -> Result<String, String> {
    let w = propalphamu_witness(1, 1, 1, 8).map_err(|e| e.to_string())?;
    let f = w.first_negative.ok_or("no negative coefficient")?;
    ensure(f.index == 2 && f.normalized == rat(-1, 16), format!("{} at {}", f.normalized, f.index))?;
    Ok("confirmed directly".into())
}

fn curve_extra() -> Result<String, String> {
    let width = BigRational::new(BigInt::one(), BigInt::one() << ROOT_WIDTH_LOG2);
    let r = hideyuki_check(&width).map_err(|e| e.to_string())?;
    ensure(r.witness.certified(), "root bracket not certified")?;
    ensure(&r.witness.hi - &r.witness.lo <= width, "bracket too wide")?;
    ensure(r.witness.lo.is_positive(), "bracket not positive")?;
    Ok(format!("bracket width <= 2^-{ROOT_WIDTH_LOG2}"))
}

fn main() {
    let extras: [(u32, Option<Extra>); 11] = [
        (1, None),
        (2, Some(psi_extra)),
        (3, Some(alphamu_extra)),
        (4, None),
        (5, None),
        (6, None),
        (7, None),
        (8, Some(curve_extra)),
        (9, None),
        (10, None),
        (11, None),
    ];
    println!("pinned: ratio tolerance {RATIO_TOLERANCE:e}, root width 2^-{ROOT_WIDTH_LOG2}, order {ORDER}");
    let mut failed = 0;
    for (id, extra) in extras {
        let start = Instant::now();
        let c = run_check(id, ORDER).expect("known check id");
        let mut ok = c.status.ok();
        let mut detail = c.detail.clone();
        if let Some(f) = extra {
            match f() {
                Ok(s) => detail = format!("{detail}; {s}"),
                Err(s) => {
                    ok = false;
                    detail = format!("{detail}; {s}");
                }
            }
        }
        let elapsed = start.elapsed().as_millis();
        let note = match c.status {
            Status::RefutedAsExpected => " (refuted as expected)",
            _ => "",
        };
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2}: {verdict}{note} {} [{} ms, budget {} ms]: {detail}",
            c.name, elapsed, c.budget_ms
        );
        if !ok {
            failed += 1;
        }
    }
    println!("{} of 11 criteria pass", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
