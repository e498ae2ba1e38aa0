//! The newform-elimination sieve.
//!
//! For a rational prime q (away from 2 and p) and each residue pair
//! (eta, mu) with 0 <= eta, mu <= q-1, (eta, mu) != (0, 0), the Frey
//! coefficients are specialised modulo a chosen prime ideal above q. A good
//! specialisation contributes the norm of a_q(f) - a_q(E) against an
//! ingested Hecke minimal polynomial, a multiplicative one contributes the
//! norm of (N(q)+1)^2 - a_q(f)^2, and the product over all pairs (times q)
//! gives B_q. Any exponent surviving elimination must divide every B_q, so
//! the gcd across several primes bounds the survivors.
//!
//! Point counts over residue fields are naive x-enumeration against a
//! precomputed square-count table; fields are capped at 10^7 elements.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::fq::{FqElem, ResidueField};
use crate::frey::FreyKind;
use crate::polys;
use crate::ring::{CyclotomicField, PrimeIdealData};
use crate::{Int, Rat};

/// All q^2 - 1 residue pairs in row-major order.
pub fn enumerate_a_q(q: u64) -> Result<Vec<(u64, u64)>> {
    if q < 2 {
        return Err(Error::InvalidArgument("q must be >= 2".into()));
    }
    let mut out = Vec::with_capacity((q * q - 1) as usize);
    for eta in 0..q {
        for mu in 0..q {
            if eta == 0 && mu == 0 {
                continue;
            }
            out.push((eta, mu));
        }
    }
    Ok(out)
}

/// A cubic-in-x curve y^2 = x^3 + a2 x^2 + a4 x + a6 over a residue field.
#[derive(Debug, Clone)]
pub struct ResidueCurve {
    pub field: ResidueField,
    pub a2: FqElem,
    pub a4: FqElem,
    pub a6: FqElem,
}

impl ResidueCurve {
    /// Discriminant of the right-hand cubic; zero exactly at repeated roots.
    pub fn cubic_disc(&self) -> FqElem {
        let k = &self.field;
        let (a, b, c) = (&self.a2, &self.a4, &self.a6);
        // 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2
        let t1 = k.mul(&k.from_u64(18), &k.mul(a, &k.mul(b, c)));
        let a3 = k.mul(a, &k.mul(a, a));
        let t2 = k.mul(&k.from_u64(4), &k.mul(&a3, c));
        let t3 = k.mul(&k.mul(a, a), &k.mul(b, b));
        let t4 = k.mul(&k.from_u64(4), &k.mul(b, &k.mul(b, b)));
        let t5 = k.mul(&k.from_u64(27), &k.mul(c, c));
        let mut d = k.sub(&t1, &t2);
        d = k.add(&d, &t3);
        d = k.sub(&d, &t4);
        k.sub(&d, &t5)
    }
}

/// Exact point count of a nonsingular residue curve, point at infinity
/// included, by x-enumeration against a square-count table.
pub fn count_points(curve: &ResidueCurve) -> Result<u64> {
    let k = &curve.field;
    if k.q == 2 {
        return Err(Error::InvalidArgument(
            "point counting is implemented for odd characteristic".into(),
        ));
    }
    let size = k.size();
    if size > 10_000_000 {
        return Err(Error::InvalidArgument(format!(
            "residue field too large: {size}"
        )));
    }
    if k.is_zero(&curve.cubic_disc()) {
        return Err(Error::SingularReduction);
    }
    // square-count table: sq[rank(t)] = #{ y : y^2 = t }
    let mut sq = vec![0u8; size as usize];
    for r in 0..size {
        let y = k.unrank(r as usize);
        let y2 = k.mul(&y, &y);
        sq[k.rank(&y2)] += 1;
    }
    let mut total = 1u64; // infinity
    for r in 0..size {
        let x = k.unrank(r as usize);
        // f(x) = x^3 + a2 x^2 + a4 x + a6 by Horner
        let mut acc = k.add(&x, &curve.a2);
        acc = k.mul(&acc, &x);
        acc = k.add(&acc, &curve.a4);
        acc = k.mul(&acc, &x);
        acc = k.add(&acc, &curve.a6);
        total += sq[k.rank(&acc)] as u64;
    }
    Ok(total)
}

/// Frobenius trace from a point count, with the Hasse bound enforced.
pub fn trace_from_count(size: u64, count: u64) -> Result<i64> {
    let a = size as i64 + 1 - count as i64;
    if (a as i128) * (a as i128) > 4 * size as i128 {
        return Err(Error::Internal(format!(
            "trace {a} violates the Hasse bound for field size {size}"
        )));
    }
    Ok(a)
}

/// Outcome of specialising the Frey coefficients at a residue pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialOutcome {
    Good { a_q: i64 },
    Multiplicative,
}

/// Substitute a = eta, b = mu into the Frey coefficients modulo the given
/// prime (q away from 2 and p) and either count points (good reduction of
/// the specialisation) or return the multiplicative marker.
pub fn specialize_trace(
    field: &CyclotomicField,
    kind: FreyKind,
    j: usize,
    k: usize,
    ideal: &PrimeIdealData,
    eta: u64,
    mu: u64,
) -> Result<SpecialOutcome> {
    if ideal.q == 2 || ideal.q == field.p() {
        return Err(Error::UnsupportedPrime(format!(
            "specialisation prime q={} must avoid 2 and p={}",
            ideal.q,
            field.p()
        )));
    }
    if eta % ideal.q == 0 && mu % ideal.q == 0 {
        return Err(Error::InvalidArgument(
            "(eta, mu) must not both vanish".into(),
        ));
    }
    let (j, k) = match kind {
        FreyKind::Ejk => {
            if !(1 <= j && j < k && k <= field.degree()) {
                return Err(Error::InvalidArgument(format!(
                    "need 1 <= j < k <= {}, got j={j}, k={k}",
                    field.degree()
                )));
            }
            (j, k)
        }
        FreyKind::F1 | FreyKind::F2 => {
            if field.p() != 17 {
                return Err(Error::InvalidArgument("F1/F2 require p = 17".into()));
            }
            (1, 4)
        }
    };
    let kf = field.residue_field(ideal);
    let tj = field.reduce_mod(&field.theta(j)?, ideal)?.rep;
    let tk = field.reduce_mod(&field.theta(k)?, ideal)?.rep;
    let two = kf.from_u64(2);
    let eta2 = {
        let e = kf.from_u64(eta % ideal.q);
        kf.mul(&e, &e)
    };
    let mu2 = {
        let m = kf.from_u64(mu % ideal.q);
        kf.mul(&m, &m)
    };
    let beta_of = |t: &FqElem| {
        kf.add(
            &kf.mul(&kf.add(t, &two), &eta2),
            &kf.mul(&kf.sub(t, &two), &mu2),
        )
    };
    let bj = beta_of(&tj);
    let bk = beta_of(&tk);
    let tj2 = kf.sub(&tj, &two);
    let tk2 = kf.sub(&tk, &two);
    // theta - 2 generates the prime above p, hence is invertible away from p
    let (u, v) = match kind {
        FreyKind::Ejk | FreyKind::F1 => {
            let ratio = kf.mul(&tj2, &kf.inv(&tk2)?);
            (bj.clone(), kf.neg(&kf.mul(&ratio, &bk)))
        }
        FreyKind::F2 => (
            kf.mul(&bj, &kf.inv(&tj2)?),
            kf.neg(&kf.mul(&bk, &kf.inv(&tk2)?)),
        ),
    };
    let w = kf.neg(&kf.add(&u, &v));
    // disc = 16 (u v w)^2: zero iff some root collides
    let uvw = kf.mul(&u, &kf.mul(&v, &w));
    if kf.is_zero(&uvw) {
        return Ok(SpecialOutcome::Multiplicative);
    }
    // model by kind: Ejk roots (0, v, -w); F1/F2 roots (0, u, -v)
    let (r1, r2) = match kind {
        FreyKind::Ejk => (v.clone(), w.clone()),
        FreyKind::F1 | FreyKind::F2 => (u.clone(), v.clone()),
    };
    let curve = ResidueCurve {
        a2: kf.sub(&r2, &r1),
        a4: kf.neg(&kf.mul(&r1, &r2)),
        a6: kf.zero(),
        field: kf.clone(),
    };
    let count = count_points(&curve)?;
    let a_q = trace_from_count(kf.size(), count)?;
    Ok(SpecialOutcome::Good { a_q })
}

// ---------------------------------------------------------------------------
// Hecke data
// ---------------------------------------------------------------------------

/// Minimal polynomial of a_q(f) at one prime of the field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeEntry {
    pub q: u64,
    pub ideal_index: usize,
    pub residue_degree: usize,
    /// Monic integer coefficients, little-endian, as decimal strings in the
    /// file format; parsed exactly.
    #[serde(
        serialize_with = "crate::dataio::ser_int_vec",
        deserialize_with = "crate::dataio::de_int_vec"
    )]
    pub minpoly: Vec<Int>,
}

/// One ingested newform record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformRecord {
    pub label: String,
    #[serde(rename = "level")]
    pub level_label: String,
    pub eigenfield_degree: u64,
    pub hecke: Vec<HeckeEntry>,
}

impl NewformRecord {
    /// Structural canonicalisation: positive eigenfield degree, monic
    /// minimal polynomials (a -1 lead is normalised by global negation)
    /// whose degrees divide the eigenfield degree.
    pub fn canonicalize(&mut self) -> Result<()> {
        if self.eigenfield_degree == 0 {
            return Err(Error::InvalidEigenvalue(format!(
                "{}: eigenfield degree must be positive",
                self.label
            )));
        }
        for entry in &mut self.hecke {
            let mut mp = polys::trim_int(entry.minpoly.clone());
            if mp.len() < 2 {
                return Err(Error::InvalidEigenvalue(format!(
                    "{}: minpoly at q={} must have degree >= 1",
                    self.label, entry.q
                )));
            }
            if *mp.last().unwrap() == -Int::one() {
                for c in mp.iter_mut() {
                    *c = -c.clone();
                }
            }
            if !mp.last().unwrap().is_one() {
                return Err(Error::InvalidEigenvalue(format!(
                    "{}: minpoly at q={} is not monic",
                    self.label, entry.q
                )));
            }
            let deg = (mp.len() - 1) as u64;
            if self.eigenfield_degree % deg != 0 {
                return Err(Error::InvalidEigenvalue(format!(
                    "{}: minpoly degree {deg} does not divide eigenfield degree {}",
                    self.label, self.eigenfield_degree
                )));
            }
            entry.minpoly = mp;
        }
        Ok(())
    }

    /// Hasse screen: every real root of each minimal polynomial lies in
    /// [-2 sqrt(q^f), 2 sqrt(q^f)] with 1e-6 relative slack. The failure
    /// reason is returned so callers can reject a single record.
    pub fn hasse_check(&self) -> std::result::Result<(), String> {
        for entry in &self.hecke {
            let size = Int::from(entry.q).pow(entry.residue_degree as u32);
            if !real_roots_within_hasse(&entry.minpoly, &size) {
                return Err(format!(
                    "minpoly at q={} has a real root beyond 2 sqrt({size})",
                    entry.q
                ));
            }
        }
        Ok(())
    }

    /// Full validation: canonicalise then screen against the Hasse bound.
    pub fn validate(&mut self) -> Result<()> {
        self.canonicalize()?;
        self.hasse_check()
            .map_err(|m| Error::InvalidEigenvalue(format!("{}: {m}", self.label)))
    }

    pub fn entry(&self, q: u64, ideal_index: usize) -> Option<&HeckeEntry> {
        self.hecke
            .iter()
            .find(|e| e.q == q && e.ideal_index == ideal_index)
    }
}

/// All real roots of the monic integer polynomial lie in [-H, H] where
/// H = 2 sqrt(size) (1 + 1e-6).
///
/// Uses the derivative-sign test at the endpoints, which characterises the
/// root interval exactly for polynomials with all-real roots (the case for
/// totally real Hecke eigenvalues) and is conservative otherwise.
fn real_roots_within_hasse(minpoly: &[Int], size: &Int) -> bool {
    let scale = Int::from(1_000_000);
    let s = arith::isqrt(&(Int::from(4) * size * &scale * &scale));
    // H = (s + s/10^6 + 1) / 10^6, a rational slightly above 2 sqrt(size)
    let h = Rat::new(&s + &s / &scale + Int::one(), scale);
    let f: Vec<Rat> = minpoly.iter().map(|c| Rat::from(c.clone())).collect();
    if !polys::newton_all_nonneg(&f, &h) {
        return false;
    }
    // mirror: g(x) = +-f(-x), monic
    let mut g: Vec<Rat> = f
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    if (f.len() - 1) % 2 == 1 {
        for c in g.iter_mut() {
            *c = -c.clone();
        }
    }
    polys::newton_all_nonneg(&g, &h)
}

/// Per-pair contribution: the norm of a_q(f) - a_q(E) at a good pair, or of
/// (N+1)^2 - a_q(f)^2 at a multiplicative pair, via resultants of the
/// minimal polynomial with the matching linear or quadratic form.
pub fn b_pair(minpoly: &[Int], size: u64, outcome: &SpecialOutcome) -> Int {
    match outcome {
        SpecialOutcome::Good { a_q } => polys::eval_int(minpoly, &Int::from(*a_q)).abs(),
        SpecialOutcome::Multiplicative => {
            let n1 = Int::from(size) + Int::one();
            (polys::eval_int(minpoly, &n1) * polys::eval_int(minpoly, &(-n1.clone()))).abs()
        }
    }
}

/// B_q = q * prod over all residue pairs of the per-pair norms.
pub fn b_q_total(
    record: &NewformRecord,
    field: &CyclotomicField,
    kind: FreyKind,
    j: usize,
    k: usize,
    q: u64,
    ideal_index: usize,
) -> Result<Int> {
    let entry = record
        .entry(q, ideal_index)
        .ok_or(Error::MissingEigenvalue { q, index: ideal_index })?;
    let ideals = field.factor_rational_prime(q)?;
    let ideal = ideals
        .get(ideal_index)
        .ok_or_else(|| Error::InvalidArgument(format!("no prime index {ideal_index} above {q}")))?;
    if entry.residue_degree != ideal.f {
        return Err(Error::InvalidEigenvalue(format!(
            "{}: residue degree {} at q={q} disagrees with the field ({})",
            record.label, entry.residue_degree, ideal.f
        )));
    }
    let size = ideal_size(ideal);
    let pairs = enumerate_a_q(q)?;
    let product = pairs
        .par_iter()
        .map(|&(eta, mu)| {
            let outcome = specialize_trace(field, kind, j, k, ideal, eta, mu)?;
            Ok(b_pair(&entry.minpoly, size, &outcome))
        })
        .try_reduce(Int::one, |a, b| Ok(a * b))?;
    Ok(product * Int::from(q))
}

/// Serial twin of `b_q_total` (identical output; used to pin determinism).
pub fn b_q_total_serial(
    record: &NewformRecord,
    field: &CyclotomicField,
    kind: FreyKind,
    j: usize,
    k: usize,
    q: u64,
    ideal_index: usize,
) -> Result<Int> {
    let entry = record
        .entry(q, ideal_index)
        .ok_or(Error::MissingEigenvalue { q, index: ideal_index })?;
    let ideals = field.factor_rational_prime(q)?;
    let ideal = &ideals[ideal_index];
    let size = ideal_size(ideal);
    let mut product = Int::one();
    for (eta, mu) in enumerate_a_q(q)? {
        let outcome = specialize_trace(field, kind, j, k, ideal, eta, mu)?;
        product *= b_pair(&entry.minpoly, size, &outcome);
    }
    Ok(product * Int::from(q))
}

fn ideal_size(ideal: &PrimeIdealData) -> u64 {
    let mut s = 1u64;
    for _ in 0..ideal.f {
        s *= ideal.q;
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BValue {
    pub q: u64,
    pub ideal_index: usize,
    pub gen_poly: Vec<u64>,
    pub residue_degree: usize,
    pub b_q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub label: String,
    pub level_label: String,
    pub b_values: Vec<BValue>,
    pub gcd: String,
    pub gcd_factors: Vec<(String, u32)>,
    /// Non-trivial cofactor left unfactored by trial division, if any.
    pub unfactored_cofactor: Option<String>,
    pub floor: u64,
    pub excluded_small_primes: Vec<String>,
    pub surviving_primes: Vec<String>,
    /// True when the gcd vanished (every B_q was zero): the sieve cannot
    /// eliminate this record.
    pub inconclusive: bool,
    /// The elimination claim "no surviving exponent above the floor".
    pub eliminated_above_floor: bool,
    /// Set when required eigenvalue data was absent.
    pub missing_data: Option<String>,
}

/// Run the sieve over a list of records against the given (q, ideal_index)
/// choices. Output is independent of the order of the prime list.
pub fn run_sieve(
    records: &[NewformRecord],
    field: &CyclotomicField,
    kind: FreyKind,
    j: usize,
    k: usize,
    primes: &[(u64, usize)],
    floor: u64,
) -> Result<Vec<SieveReport>> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("empty prime list".into()));
    }
    let mut sorted_primes = primes.to_vec();
    sorted_primes.sort();
    sorted_primes.dedup();
    let mut out = Vec::with_capacity(records.len());
    for record in records {
        let mut b_values = Vec::new();
        let mut missing = None;
        for &(q, idx) in &sorted_primes {
            match b_q_total(record, field, kind, j, k, q, idx) {
                Ok(b) => {
                    let ideals = field.factor_rational_prime(q)?;
                    let ideal = &ideals[idx];
                    b_values.push(BValue {
                        q,
                        ideal_index: idx,
                        gen_poly: ideal.gen_poly.clone(),
                        residue_degree: ideal.f,
                        b_q: b.to_string(),
                    });
                }
                Err(Error::MissingEigenvalue { q, index }) => {
                    missing = Some(format!("missing eigenvalue data for q={q} (index {index})"));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(msg) = missing {
            out.push(SieveReport {
                label: record.label.clone(),
                level_label: record.level_label.clone(),
                b_values: Vec::new(),
                gcd: "0".into(),
                gcd_factors: Vec::new(),
                unfactored_cofactor: None,
                floor,
                excluded_small_primes: Vec::new(),
                surviving_primes: Vec::new(),
                inconclusive: true,
                eliminated_above_floor: false,
                missing_data: Some(msg),
            });
            continue;
        }
        // fold the gcd smallest-first (commutative, so order-independent)
        let mut values: Vec<Int> = b_values
            .iter()
            .map(|b| Int::parse_bytes(b.b_q.as_bytes(), 10).unwrap())
            .collect();
        values.sort_by_key(|v| v.magnitude().bits());
        let mut g = Int::zero();
        for v in &values {
            g = g.gcd(v);
        }
        let inconclusive = g.is_zero();
        let (factors, cofactor) = if inconclusive {
            (Vec::new(), None)
        } else {
            arith::factor_with_cap(&g, 1_000_000)
        };
        let mut excluded = Vec::new();
        let mut surviving = Vec::new();
        for (p, _) in &factors {
            if *p <= Int::from(floor) {
                excluded.push(p.to_string());
            } else {
                surviving.push(p.to_string());
            }
        }
        let eliminated = !inconclusive && surviving.is_empty() && cofactor.is_none();
        out.push(SieveReport {
            label: record.label.clone(),
            level_label: record.level_label.clone(),
            b_values,
            gcd: g.to_string(),
            gcd_factors: factors
                .iter()
                .map(|(p, e)| (p.to_string(), *e))
                .collect(),
            unfactored_cofactor: cofactor.map(|c| c.to_string()),
            floor,
            excluded_small_primes: excluded,
            surviving_primes: surviving,
            inconclusive,
            eliminated_above_floor: eliminated,
            missing_data: None,
        });
    }
    Ok(out)
}
