//! `fmk search --mode z3p|z17 [--p P] [--n N] --max Z`.

use std::path::Path;

use fmk_core::{Error, Result};

use crate::report;
use crate::search;
use crate::ModeArg;

pub fn run(mode: ModeArg, p: Option<u64>, n: Option<u32>, max: u64, out: Option<&Path>) -> Result<u8> {
    let rep = match mode {
        ModeArg::Z3p => {
            let p = p.ok_or_else(|| Error::InvalidArgument("z3p mode needs --p".into()))?;
            let n = n.ok_or_else(|| Error::InvalidArgument("z3p mode needs --n".into()))?;
            search::search_z3p(p, n, max)?
        }
        ModeArg::Z17 => search::search_z17(n, max)?,
    };
    let found_nontrivial = !rep.nontrivial_solutions.is_empty();
    let mode_name = match mode {
        ModeArg::Z3p => "z3p",
        ModeArg::Z17 => "z17",
    };
    let doc = report::Document {
        meta: report::meta(&format!("search --mode {mode_name} --max {max}"), &[])?,
        report: rep,
    };
    report::emit(&doc, out)?;
    // finding a non-trivial primitive solution would falsify the analysis
    Ok(if found_nontrivial { 2 } else { 0 })
}
