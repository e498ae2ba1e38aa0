//! `fmk frey --p P --a A --b B [--j J --k K] [--kind e|f1|f2]`: construct
//! the curve and emit local data at every prime above 2, 3, p, and above
//! the small primes dividing Norm(u v w). Degenerate witnesses yield a
//! singular flag, not an error.

use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use fmk_core::frey::{build_e, build_f1, build_f2, local_data, FreyCurve, LocalData};
use fmk_core::{Int, Rat, Result};

use crate::report;
use crate::KindArg;

#[derive(Serialize)]
struct LocalRow {
    q: u64,
    #[serde(flatten)]
    data: LocalDataOrError,
}

#[derive(Serialize)]
#[serde(untagged)]
enum LocalDataOrError {
    Ok { local: LocalData },
    Err { error: String },
}

#[derive(Serialize)]
struct FreyReport {
    p: u64,
    kind: String,
    j: usize,
    k: usize,
    a: String,
    b: String,
    singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    local_data: Vec<LocalRow>,
}

pub fn run(
    p: u64,
    a: i64,
    b: i64,
    j: Option<usize>,
    k: Option<usize>,
    kind: KindArg,
    out: Option<&Path>,
) -> Result<u8> {
    let field = super::open_field(p)?;
    let (ai, bi) = (Int::from(a), Int::from(b));
    let curve = match kind {
        KindArg::E => {
            let j = j.unwrap_or(1);
            let k = k.unwrap_or(2);
            build_e(&field, &ai, &bi, j, k)?
        }
        KindArg::F1 => build_f1(&field, &ai, &bi)?,
        KindArg::F2 => build_f2(&field, &ai, &bi)?,
    };
    let (singular, note) = if curve.is_singular() {
        (
            true,
            Some("discriminant vanishes: the witness degenerates the curve".to_string()),
        )
    } else {
        (false, None)
    };
    let mut rows = Vec::new();
    if !singular {
        let mut qs = vec![2u64, 3, p];
        for q in norm_uvw_primes(&curve) {
            if !qs.contains(&q) {
                qs.push(q);
            }
        }
        qs.sort();
        for q in qs {
            for ideal in field.factor_rational_prime(q)? {
                let data = match local_data(&curve, &ideal) {
                    Ok(local) => LocalDataOrError::Ok { local },
                    Err(e) => LocalDataOrError::Err {
                        error: e.to_string(),
                    },
                };
                rows.push(LocalRow { q, data });
            }
        }
    }
    let kind_name = match kind {
        KindArg::E => "E",
        KindArg::F1 => "F1",
        KindArg::F2 => "F2",
    };
    let doc = report::Document {
        meta: report::meta(
            &format!("frey --p {p} --a {a} --b {b} --kind {kind_name}"),
            &[],
        )?,
        report: FreyReport {
            p,
            kind: kind_name.to_string(),
            j: curve.j,
            k: curve.k,
            a: ai.to_string(),
            b: bi.to_string(),
            singular,
            note,
            local_data: rows,
        },
    };
    report::emit(&doc, out)?;
    Ok(0)
}

/// Odd primes up to 10^4 dividing Norm(u v w), beyond 2, 3, p.
fn norm_uvw_primes(curve: &FreyCurve) -> Vec<u64> {
    let field = curve.field;
    let prod = field.mul(&curve.u, &field.mul(&curve.v, &curve.w));
    let norm: Rat = field.norm(&prod);
    let numer = norm.numer().abs() * norm.denom().abs();
    let mut out = Vec::new();
    let mut m = numer;
    let mut d = Int::from(2);
    while &d * &d <= m && d < Int::from(10_000) {
        while (&m % &d).is_zero() {
            m /= &d;
            if let Some(q) = num_traits::ToPrimitive::to_u64(&d) {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        d += 1;
    }
    // remaining small cofactor
    if m > Int::one() && m < Int::from(10_000) {
        if let Some(q) = num_traits::ToPrimitive::to_u64(&m) {
            if fmk_core::ring::is_prime_u64(q) && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}
