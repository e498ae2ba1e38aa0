//! `fmk descent --p P --a A --b B [--ell L]`: the factorisation identity,
//! the mod-3 case analysis, ideal-coprimality screens, and (optionally) the
//! perfect-power consistency screen at a hypothetical exponent.

use std::path::Path;

use serde::Serialize;

use fmk_core::descent::{
    check_three_divides_a, coprimality_profile, gauss_pow, verify_factorization,
    CoprimalityReport, DescentWitness, EllPowerReport, ThreeDividesReport, WitnessProfile,
};
use fmk_core::{Int, Result};

use crate::report;

#[derive(Serialize)]
struct DescentReport {
    p: u64,
    a: String,
    b: String,
    factorization_identity: bool,
    gaussian_power: (String, String),
    three_divides_a: ThreeDividesReport,
    coprimality: CoprimalityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell_power_screen: Option<EllPowerReport>,
    profile_z3p_valid: bool,
}

pub fn run(p: u64, a: i64, b: i64, ell: Option<u32>, out: Option<&Path>) -> Result<u8> {
    let field = super::open_field(p)?;
    let (ai, bi) = (Int::from(a), Int::from(b));
    let identity = verify_factorization(&field, &ai, &bi)?;
    let (re, im) = gauss_pow(&ai, &bi, p as u32);
    let three = check_three_divides_a(&ai, &bi, &Int::from(0));
    let coprimality = coprimality_profile(&field, &ai, &bi)?;
    let witness = DescentWitness::new(&field, ai.clone(), bi.clone(), WitnessProfile::Z3p);
    let profile_ok = witness.is_ok();
    let ell_screen = match (ell, witness) {
        (Some(l), Ok(w)) => Some(w.ell_power_consistency(l)?),
        _ => None,
    };
    let ok = identity;
    let doc = report::Document {
        meta: report::meta(&format!("descent --p {p} --a {a} --b {b}"), &[])?,
        report: DescentReport {
            p,
            a: ai.to_string(),
            b: bi.to_string(),
            factorization_identity: identity,
            gaussian_power: (re.to_string(), im.to_string()),
            three_divides_a: three,
            coprimality,
            ell_power_screen: ell_screen,
            profile_z3p_valid: profile_ok,
        },
    };
    report::emit(&doc, out)?;
    Ok(if ok { 0 } else { 2 })
}
