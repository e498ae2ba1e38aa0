//! `fmk field --p P`: minimal polynomial, unit-lemma checks, and the
//! splitting data of 2, 3, and p. Exits 2 when any lemma check fails.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use fmk_core::ring::UnitLemmaReport;
use fmk_core::Result;

use crate::report;

#[derive(Serialize)]
struct SplittingRow {
    index: usize,
    gen_poly: Vec<u64>,
    e: usize,
    f: usize,
    norm: String,
    inert: bool,
}

#[derive(Serialize)]
struct FieldReport {
    p: u64,
    degree: usize,
    minpoly: Vec<String>,
    unit_lemma: UnitLemmaReport,
    splittings: BTreeMap<String, Vec<SplittingRow>>,
}

pub fn run(p: u64, out: Option<&Path>) -> Result<u8> {
    let field = super::open_field(p)?;
    let unit_lemma = field.verify_unit_lemma()?;
    let mut splittings = BTreeMap::new();
    for q in [2u64, 3, p] {
        let ideals = field.factor_rational_prime(q)?;
        let count = ideals.len();
        let rows: Vec<SplittingRow> = ideals
            .into_iter()
            .map(|i| SplittingRow {
                index: i.index,
                gen_poly: i.gen_poly.clone(),
                e: i.e,
                f: i.f,
                norm: num_traits::pow::pow(fmk_core::Int::from(q), i.f).to_string(),
                inert: count == 1 && i.e == 1 && i.f == field.degree(),
            })
            .collect();
        splittings.insert(q.to_string(), rows);
    }
    let all_pass = unit_lemma.all_pass;
    let doc = report::Document {
        meta: report::meta(&format!("field --p {p}"), &[])?,
        report: FieldReport {
            p,
            degree: field.degree(),
            minpoly: field.minpoly().iter().map(|c| c.to_string()).collect(),
            unit_lemma,
            splittings,
        },
    };
    report::emit(&doc, out)?;
    Ok(if all_pass { 0 } else { 2 })
}
