//! File formats: the bound-constants fixture, newform eigenvalue records,
//! rational-curve fixtures for the p | y branch, and deterministic report
//! emission.
//!
//! All integers that may exceed 64 bits travel as decimal strings. Maps are
//! ordered (BTreeMap) and struct fields have fixed order, so serialising the
//! same data twice is byte-identical.

use std::collections::BTreeMap;
use std::path::Path;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fq::ResidueField;
use crate::sieve::{count_points, trace_from_count, NewformRecord, ResidueCurve};
use crate::{arith, bounds, Int};

pub fn ser_int<S: Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.to_string().serialize(s)
}

pub fn ser_int_vec<S: Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    strings.serialize(s)
}

pub fn de_int_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Int>, D::Error> {
    let strings: Vec<String> = Vec::deserialize(d)?;
    strings
        .iter()
        .map(|s| {
            Int::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| serde::de::Error::custom(format!("bad integer string: {s}")))
        })
        .collect()
}

fn parse_int(s: &str, what: &str, path: &str) -> Result<Int> {
    Int::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::LoadError {
        path: path.to_string(),
        message: format!("{what} is not a decimal integer: {s}"),
    })
}

// ---------------------------------------------------------------------------
// constants.json
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantsEntry {
    /// Decimal string; absent where the pipeline does not use it.
    #[serde(rename = "B_p", skip_serializing_if = "Option::is_none")]
    pub b_p: Option<String>,
    /// Prime factorisation cross-check [[prime, exponent], ...].
    #[serde(rename = "B_p_factors", skip_serializing_if = "Option::is_none")]
    pub b_p_factors: Option<Vec<(u64, u32)>>,
    pub h: u32,
    /// Dimension of the new subspace per level label.
    pub dims: BTreeMap<String, u64>,
    /// Norm attached to the prime above 3 at the headline level (decimal).
    pub norm_q3: String,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantsFile {
    pub entries: BTreeMap<String, ConstantsEntry>,
}

impl ConstantsFile {
    pub fn entry(&self, p: u64) -> Result<&ConstantsEntry> {
        self.entries
            .get(&p.to_string())
            .ok_or_else(|| Error::InvalidArgument(format!("no constants entry for p = {p}")))
    }

    /// Assemble the bound inputs for a given p and level label.
    pub fn bound_inputs(&self, p: u64, level: &str) -> Result<bounds::BoundInputs> {
        let e = self.entry(p)?;
        let b = e
            .b_p
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("no B_p recorded for p = {p}")))?;
        let b = parse_int(b, "B_p", "constants")?;
        let d = *e
            .dims
            .get(level)
            .ok_or_else(|| Error::InvalidArgument(format!("no dimension for level {level}")))?;
        let norm = parse_int(&e.norm_q3, "norm_q3", "constants")?;
        bounds::BoundInputs::new(p, b, e.h, d, norm)
    }
}

/// Parse and validate the constants file: required entries for p in
/// {7, 11, 13, 17}, positive integers, and B_p equal to its recorded prime
/// factorisation where both are present.
pub fn load_constants(path: &Path) -> Result<ConstantsFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::LoadError {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_constants(&text, &path.display().to_string())
}

pub fn parse_constants(text: &str, path: &str) -> Result<ConstantsFile> {
    let file: ConstantsFile = serde_json::from_str(text).map_err(|e| Error::LoadError {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    for p in [7u64, 11, 13, 17] {
        let key = p.to_string();
        let entry = file.entries.get(&key).ok_or_else(|| Error::LoadError {
            path: path.to_string(),
            message: format!("missing entry for p = {p}"),
        })?;
        if entry.h == 0 {
            return Err(Error::LoadError {
                path: path.to_string(),
                message: format!("p = {p}: h must be positive"),
            });
        }
        let norm = parse_int(&entry.norm_q3, "norm_q3", path)?;
        if !norm.is_positive() {
            return Err(Error::LoadError {
                path: path.to_string(),
                message: format!("p = {p}: norm_q3 must be positive"),
            });
        }
        if let Some(b) = &entry.b_p {
            let b = parse_int(b, "B_p", path)?;
            if !b.is_positive() {
                return Err(Error::LoadError {
                    path: path.to_string(),
                    message: format!("p = {p}: B_p must be positive"),
                });
            }
            if let Some(factors) = &entry.b_p_factors {
                let mut prod = Int::one();
                for (q, e) in factors {
                    prod *= Int::from(*q).pow(*e);
                }
                if prod != b {
                    return Err(Error::LoadError {
                        path: path.to_string(),
                        message: format!("p = {p}: B_p does not match its factorisation"),
                    });
                }
            }
        }
    }
    Ok(file)
}

// ---------------------------------------------------------------------------
// curves96.json
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalCurveFixture {
    pub label: String,
    pub a_invariants: [i64; 5],
    pub conductor: u64,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvesFile {
    pub curves: Vec<RationalCurveFixture>,
}

impl RationalCurveFixture {
    pub fn b_invariants(&self) -> (Int, Int, Int) {
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(Int::from);
        let b2 = &a1 * &a1 + Int::from(4) * &a2;
        let b4 = Int::from(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + Int::from(4) * &a6;
        (b2, b4, b6)
    }

    pub fn disc(&self) -> Int {
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(Int::from);
        let b2 = &a1 * &a1 + Int::from(4) * &a2;
        let b4 = Int::from(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + Int::from(4) * &a6;
        let b8 = &a1 * &a1 * &a6 + Int::from(4) * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3
            - &a4 * &a4;
        -(&b2 * &b2 * &b8) - Int::from(8) * &b4 * &b4 * &b4 - Int::from(27) * &b6 * &b6
            + Int::from(9) * &b2 * &b4 * &b6
    }

    pub fn c4(&self) -> Int {
        let (b2, b4, _) = self.b_invariants();
        &b2 * &b2 - Int::from(24) * &b4
    }

    /// Trial-division screen: the discriminant is non-zero, its prime
    /// support matches the conductor's, and the multiplicative/additive
    /// split (via c4) agrees with the conductor exponents.
    pub fn check(&self) -> Result<()> {
        let disc = self.disc();
        if disc.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{}: singular model",
                self.label
            )));
        }
        let cond = Int::from(self.conductor);
        let disc_primes = arith::prime_divisors(&disc);
        let cond_factors = arith::trial_factor(&cond);
        for p in &disc_primes {
            if (&cond % p).is_zero() {
                continue;
            }
            return Err(Error::InvalidArgument(format!(
                "{}: prime {p} divides the discriminant but not the conductor",
                self.label
            )));
        }
        let c4 = self.c4();
        for (p, e) in &cond_factors {
            if !(&disc % p).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "{}: conductor prime {p} does not divide the discriminant",
                    self.label
                )));
            }
            let divides_c4 = (&c4 % p).is_zero();
            if *e == 1 && divides_c4 {
                return Err(Error::InvalidArgument(format!(
                    "{}: multiplicative prime {p} divides c4",
                    self.label
                )));
            }
            if *e >= 2 && !divides_c4 {
                return Err(Error::InvalidArgument(format!(
                    "{}: additive prime {p} does not divide c4",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// Frobenius trace over F_p for an odd prime of good reduction, by the
    /// halved model y^2 = x^3 + (b2/4) x^2 + (b4/2) x + (b6/4).
    pub fn a_p(&self, p: u64) -> Result<i64> {
        if p < 3 || !crate::ring::is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("bad prime {p}")));
        }
        if self.conductor % p == 0 {
            return Err(Error::InvalidArgument(format!(
                "{}: bad reduction at {p}",
                self.label
            )));
        }
        let k = ResidueField::new(p, vec![0, 1]);
        let (b2, b4, b6) = self.b_invariants();
        let red = |x: &Int| -> u64 { x.mod_floor(&Int::from(p)).to_u64().unwrap() };
        let inv4 = crate::fq::invm(4 % p, p);
        let inv2 = crate::fq::invm(2 % p, p);
        let a2 = k.from_u64(crate::fq::mulm(red(&b2), inv4, p));
        let a4 = k.from_u64(crate::fq::mulm(red(&b4), inv2, p));
        let a6 = k.from_u64(crate::fq::mulm(red(&b6), inv4, p));
        let curve = ResidueCurve {
            a2,
            a4,
            a6,
            field: k.clone(),
        };
        let n = count_points(&curve)?;
        trace_from_count(p, n)
    }
}

pub fn load_curves(path: &Path) -> Result<CurvesFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::LoadError {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file: CurvesFile = serde_json::from_str(&text).map_err(|e| Error::LoadError {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    for c in &file.curves {
        c.check().map_err(|e| Error::LoadError {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(file)
}

// ---------------------------------------------------------------------------
// newforms.json
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NewformsFile {
    newforms: Vec<NewformRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RejectedRecord {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedNewforms {
    pub records: Vec<NewformRecord>,
    pub rejected: Vec<RejectedRecord>,
}

/// Load newform records. Structural problems (non-monic minimal polynomial,
/// degree mismatch) fail the load; Hasse-bound violations reject the single
/// record with a diagnostic and keep going.
pub fn load_newforms(path: &Path) -> Result<LoadedNewforms> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::LoadError {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_newforms(&text, &path.display().to_string())
}

pub fn parse_newforms(text: &str, path: &str) -> Result<LoadedNewforms> {
    let file: NewformsFile = serde_json::from_str(text).map_err(|e| Error::LoadError {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for mut rec in file.newforms {
        rec.canonicalize().map_err(|e| Error::LoadError {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        match rec.hasse_check() {
            Ok(()) => records.push(rec),
            Err(reason) => rejected.push(RejectedRecord {
                label: rec.label.clone(),
                reason,
            }),
        }
    }
    Ok(LoadedNewforms { records, rejected })
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

/// Report for the p | y branch: traces of the fixture curves at p and the
/// resulting exponent divisors, next to the headline bound.
#[derive(Debug, Clone, Serialize)]
pub struct PmidyReport {
    pub p: u64,
    pub bound: u64,
    pub per_curve: Vec<PmidyCurveRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PmidyCurveRow {
    pub label: String,
    pub conductor: u64,
    pub a_p: i64,
    pub divisor_primes: Vec<String>,
}

pub fn pmidy_report(p: u64, fixtures: &[RationalCurveFixture]) -> Result<PmidyReport> {
    if fixtures.is_empty() {
        return Err(Error::InvalidArgument("no fixture curves supplied".into()));
    }
    let bound = bounds::pmidy_bound(p)?;
    let mut per_curve = Vec::new();
    for c in fixtures {
        let a_p = c.a_p(p)?;
        let divisors = bounds::trace_divisibility(&Int::from(p), &Int::from(a_p))?;
        per_curve.push(PmidyCurveRow {
            label: c.label.clone(),
            conductor: c.conductor,
            a_p,
            divisor_primes: divisors.iter().map(|d| d.to_string()).collect(),
        });
    }
    Ok(PmidyReport {
        p,
        bound,
        per_curve,
    })
}

/// Serialise a report to pretty JSON; deterministic for identical inputs.
pub fn report_to_json<T: Serialize>(report: &T) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Internal(e.to_string()))
}

pub fn emit_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let json = report_to_json(report)?;
    std::fs::write(path, json.as_bytes()).map_err(|e| Error::WriteError {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::HeckeEntry;

    const CONSTANTS: &str = include_str!("../../../data/constants.json");
    const CURVES: &str = include_str!("../../../data/curves96.json");

    #[test]
    fn constants_fixture_parses_and_validates() {
        let file = parse_constants(CONSTANTS, "embedded").unwrap();
        let e11 = file.entry(11).unwrap();
        assert_eq!(e11.b_p.as_deref(), Some("1"));
        assert_eq!(e11.h, 1);
        assert_eq!(e11.dims.get("2^3*O_K"), Some(&1201));
        // B_13 recomputed from its factorisation
        let e13 = file.entry(13).unwrap();
        let b13 = Int::from(2).pow(18)
            * Int::from(3).pow(12)
            * Int::from(5).pow(6)
            * Int::from(13).pow(3);
        assert_eq!(e13.b_p.as_deref(), Some(b13.to_string().as_str()));
        let e17 = file.entry(17).unwrap();
        assert_eq!(e17.dims.get("2*O_K"), Some(&647));
        assert_eq!(e17.dims.get("2*B_17"), Some(&49));
        assert_eq!(e17.dims.get("2^3*O_K"), Some(&41883752));
    }

    #[test]
    fn constants_missing_field_names_it() {
        let text = r#"{"entries": {"7": {"dims": {}, "norm_q3": "27", "provenance": ""}}}"#;
        let err = parse_constants(text, "t").unwrap_err();
        assert!(err.to_string().contains('h'), "{err}");
    }

    #[test]
    fn constants_bad_factorisation_rejected() {
        let text = r#"{"entries": {
            "7": {"h": 1, "dims": {}, "norm_q3": "27", "provenance": ""},
            "11": {"B_p": "6", "B_p_factors": [[2, 1], [5, 1]], "h": 1, "dims": {}, "norm_q3": "243", "provenance": ""},
            "13": {"B_p": "1", "h": 1, "dims": {}, "norm_q3": "729", "provenance": ""},
            "17": {"B_p": "1", "h": 1, "dims": {}, "norm_q3": "6561", "provenance": ""}}}"#;
        let err = parse_constants(text, "t").unwrap_err();
        assert!(err.to_string().contains("factorisation"));
    }

    #[test]
    fn curves_fixture_valid() {
        let file: CurvesFile = serde_json::from_str(CURVES).unwrap();
        assert!(file.curves.len() >= 3);
        for c in &file.curves {
            c.check().unwrap();
        }
        assert!(file.curves.iter().any(|c| c.conductor == 96));
        assert!(file.curves.iter().any(|c| c.conductor == 32));
    }

    #[test]
    fn pmidy_report_examples() {
        let file: CurvesFile = serde_json::from_str(CURVES).unwrap();
        let fixtures: Vec<_> = file
            .curves
            .iter()
            .filter(|c| c.conductor == 96)
            .cloned()
            .collect();
        let rep = pmidy_report(7, &fixtures).unwrap();
        assert_eq!(rep.bound, 13);
        for row in &rep.per_curve {
            assert!((row.a_p * row.a_p) as u64 <= 28);
            for d in &row.divisor_primes {
                let d: u64 = d.parse().unwrap();
                assert!(d <= 13, "divisor {d} above the bound");
            }
        }
        let rep5 = pmidy_report(5, &fixtures).unwrap();
        assert_eq!(rep5.bound, 10);
        assert!(pmidy_report(7, &[]).is_err());
    }

    #[test]
    fn newforms_load_and_reject() {
        let good = r#"{"newforms": [
            {"label": "ok", "level": "2*O_K", "eigenfield_degree": 1,
             "hecke": [{"q": 3, "ideal_index": 0, "residue_degree": 3, "minpoly": ["-4", "1"]}]},
            {"label": "too-big", "level": "2*O_K", "eigenfield_degree": 1,
             "hecke": [{"q": 3, "ideal_index": 0, "residue_degree": 3, "minpoly": ["-12", "1"]}]},
            {"label": "empty", "level": "2*O_K", "eigenfield_degree": 1, "hecke": []}
        ]}"#;
        let loaded = parse_newforms(good, "t").unwrap();
        assert_eq!(loaded.records.len(), 2);
        assert_eq!(loaded.rejected.len(), 1);
        assert_eq!(loaded.rejected[0].label, "too-big");
        // non-monic fails the whole load
        let bad = r#"{"newforms": [
            {"label": "nm", "level": "L", "eigenfield_degree": 1,
             "hecke": [{"q": 3, "ideal_index": 0, "residue_degree": 3, "minpoly": ["0", "2"]}]}
        ]}"#;
        assert!(parse_newforms(bad, "t").is_err());
    }

    #[test]
    fn sieve_report_roundtrip() {
        use crate::frey::FreyKind;
        use crate::sieve::{run_sieve, SieveReport};
        let k = crate::ring::CyclotomicField::new(17).unwrap();
        let rec = NewformRecord {
            label: "r".into(),
            level_label: "2*O_K".into(),
            eigenfield_degree: 1,
            hecke: vec![HeckeEntry {
                q: 3,
                ideal_index: 0,
                residue_degree: 8,
                minpoly: vec![Int::from(-1), Int::one()],
            }],
        };
        let reports = run_sieve(&[rec], &k, FreyKind::F1, 1, 4, &[(3, 0)], 5).unwrap();
        let json = report_to_json(&reports).unwrap();
        let back: Vec<SieveReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reports);
    }

    #[test]
    fn reports_deterministic_and_roundtrip() {
        let rec = NewformRecord {
            label: "demo".into(),
            level_label: "2*O_K".into(),
            eigenfield_degree: 2,
            hecke: vec![HeckeEntry {
                q: 3,
                ideal_index: 0,
                residue_degree: 8,
                minpoly: vec![Int::from(-2), Int::zero(), Int::one()],
            }],
        };
        let a = serde_json::to_string_pretty(&rec).unwrap();
        let b = serde_json::to_string_pretty(&rec).unwrap();
        assert_eq!(a, b);
        // big integers as decimal strings, never scientific notation
        assert!(a.contains("\"-2\""));
        let back: NewformRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(back, rec);
        // file roundtrip
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        emit_report(&rec, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, a);
        emit_report(&rec, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    }
}
