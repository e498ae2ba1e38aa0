//! `fmk bounds --p P [--constants path] [--curves path]`: the exponent-bound
//! constants for p, the p = 7 endgame quantities, prime factors of p * B_p,
//! and the p | y branch report over the fixture curves.

use std::path::Path;

use serde::Serialize;

use fmk_core::bounds::{
    c_of_p, irred_threshold_cubic, pmidy_bound, survivor_bound, BoundReport,
};
use fmk_core::dataio::{
    self, load_constants, load_curves, parse_constants, ConstantsFile, CurvesFile, PmidyReport,
};
use fmk_core::{arith, Error, Int, Result};

use crate::report;

const EMBEDDED_CONSTANTS: &str = include_str!("../../../../data/constants.json");
const EMBEDDED_CURVES: &str = include_str!("../../../../data/curves96.json");

#[derive(Serialize)]
struct Endgame {
    survivor_bound_norm27_d1: String,
    survivor_bound_norm27_d4: String,
    survivor_bound_norm27_d5: String,
    irreducibility_threshold: u64,
    threshold_below_1e7: bool,
}

#[derive(Serialize)]
struct BoundsReport {
    p: u64,
    pmidy_bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_of_p: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_times_bp_prime_factors: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    endgame_cubic: Option<Endgame>,
    norm_q3_used: String,
    norm_q3_matches_residue_degree: bool,
    p_mid_y: PmidyReport,
}

pub fn run(
    p: u64,
    constants: Option<&Path>,
    curves: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8> {
    let consts: ConstantsFile = match constants {
        Some(path) => load_constants(path)?,
        None => parse_constants(EMBEDDED_CONSTANTS, "embedded:constants.json")?,
    };
    let curve_file: CurvesFile = match curves {
        Some(path) => load_curves(path)?,
        None => serde_json::from_str(EMBEDDED_CURVES).map_err(|e| Error::LoadError {
            path: "embedded:curves96.json".into(),
            message: e.to_string(),
        })?,
    };
    // a p without a constants entry is a data error (exit 3)
    let entry = consts.entry(p).map_err(|_| Error::LoadError {
        path: "constants".into(),
        message: format!("no constants entry for p = {p}"),
    })?;
    let level = "2^3*O_K";
    let (c_report, bp_factors, norm_used, norm_matches) = if entry.b_p.is_some() {
        let inputs = consts.bound_inputs(p, level)?;
        let bp = inputs.b_p.clone();
        let factors: Vec<String> = arith::prime_divisors(&(Int::from(p) * &bp))
            .iter()
            .map(|x| x.to_string())
            .collect();
        let norm = inputs.norm_q3.to_string();
        let matches = inputs.norm_matches_residue_degree;
        (Some(c_of_p(&inputs)?), Some(factors), norm, matches)
    } else {
        (None, None, entry.norm_q3.clone(), true)
    };
    let endgame = if p == 7 {
        Some(Endgame {
            survivor_bound_norm27_d1: survivor_bound(&Int::from(27), 1)?.to_string(),
            survivor_bound_norm27_d4: survivor_bound(&Int::from(27), 4)?.to_string(),
            survivor_bound_norm27_d5: survivor_bound(&Int::from(27), 5)?.to_string(),
            irreducibility_threshold: irred_threshold_cubic(),
            threshold_below_1e7: irred_threshold_cubic() < 10_000_000,
        })
    } else {
        None
    };
    let fixtures: Vec<_> = curve_file
        .curves
        .iter()
        .filter(|c| c.conductor == 96)
        .cloned()
        .collect();
    let p_mid_y = dataio::pmidy_report(p, &fixtures)?;
    let mut inputs_hashed: Vec<(&str, &str)> = vec![];
    if constants.is_none() {
        inputs_hashed.push(("embedded:constants.json", EMBEDDED_CONSTANTS));
    }
    if curves.is_none() {
        inputs_hashed.push(("embedded:curves96.json", EMBEDDED_CURVES));
    }
    let mut meta = report::meta_with_embedded(&format!("bounds --p {p}"), &inputs_hashed);
    let mut paths = Vec::new();
    if let Some(c) = constants {
        paths.push(c);
    }
    if let Some(c) = curves {
        paths.push(c);
    }
    if !paths.is_empty() {
        let file_meta = report::meta(&format!("bounds --p {p}"), &paths)?;
        meta.inputs.extend(file_meta.inputs);
    }
    let doc = report::Document {
        meta,
        report: BoundsReport {
            p,
            pmidy_bound: pmidy_bound(p)?,
            c_of_p: c_report,
            p_times_bp_prime_factors: bp_factors,
            endgame_cubic: endgame,
            norm_q3_used: norm_used,
            norm_q3_matches_residue_degree: norm_matches,
            p_mid_y,
        },
    };
    report::emit(&doc, out)?;
    Ok(0)
}
