//! `fmk sieve --newforms path --p P --kind f1|f2 --primes q:idx,...
//! [--floor F]`: ingest newform records and run the elimination sieve.

use std::path::Path;

use serde::Serialize;

use fmk_core::dataio::{load_newforms, RejectedRecord};
use fmk_core::frey::FreyKind;
use fmk_core::sieve::{run_sieve, SieveReport};
use fmk_core::{Error, Result};

use crate::report;
use crate::SieveKindArg;

#[derive(Serialize)]
struct SieveCmdReport {
    p: u64,
    kind: String,
    primes: Vec<(u64, usize)>,
    floor: u64,
    rejected_records: Vec<RejectedRecord>,
    reports: Vec<SieveReport>,
}

pub fn run(
    newforms: &Path,
    p: u64,
    kind: SieveKindArg,
    primes: &str,
    floor: u64,
    out: Option<&Path>,
) -> Result<u8> {
    let field = super::open_field(p)?;
    let loaded = load_newforms(newforms)?;
    let prime_list = parse_primes(primes)?;
    let fkind = match kind {
        SieveKindArg::F1 => FreyKind::F1,
        SieveKindArg::F2 => FreyKind::F2,
    };
    let reports = run_sieve(&loaded.records, &field, fkind, 1, 4, &prime_list, floor)?;
    let kind_name = match kind {
        SieveKindArg::F1 => "F1",
        SieveKindArg::F2 => "F2",
    };
    let doc = report::Document {
        meta: report::meta(
            &format!(
                "sieve --newforms {} --p {p} --kind {kind_name} --primes {primes} --floor {floor}",
                newforms.display()
            ),
            &[newforms],
        )?,
        report: SieveCmdReport {
            p,
            kind: kind_name.to_string(),
            primes: prime_list,
            floor,
            rejected_records: loaded.rejected,
            reports,
        },
    };
    report::emit(&doc, out)?;
    Ok(0)
}

fn parse_primes(s: &str) -> Result<Vec<(u64, usize)>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (q, idx) = match part.split_once(':') {
            Some((q, idx)) => (q, idx),
            None => (part, "0"),
        };
        let q: u64 = q
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad prime spec: {part}")))?;
        let idx: usize = idx
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad ideal index: {part}")))?;
        out.push((q, idx));
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty prime list".into()));
    }
    Ok(out)
}
