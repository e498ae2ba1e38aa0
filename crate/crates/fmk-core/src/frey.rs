//! Frey curves attached to descent witnesses, their invariants, and local
//! reduction data.
//!
//! Three curve kinds share the (u, v, w) machinery with u + v + w = 0:
//!
//! * `Ejk`:  Y^2 = X (X - v)(X + w), the family for x^2 + y^{2l} = z^{3p};
//! * `F1`:   Y^2 = X (X - u)(X + v), for x^{2l} + y^{2m} = z^17, 17 not | x;
//! * `F2`:   Y^2 = X (X - u')(X + v'), same equation when 17 | x, with the
//!   primed quantities carrying denominators supported at the prime above 17.
//!
//! Local data at primes above 2 comes from a genuine Tate walk (steps 1-7
//! with the step-7 subprocedure) run in the unramified 2-adic completion;
//! walks that would continue past step 7 return an error rather than guess.
//! At odd primes the classification good / multiplicative / additive is read
//! off exact valuations of (c4, c6, disc); the split test reduces -c6.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith;
use crate::descent::{beta, DescentWitness, WitnessProfile};
use crate::error::{Error, Result};
use crate::local2::{Local2Ring, LocalElem};
use crate::ring::{CyclotomicField, PrimeIdealData};
use crate::{Int, Rat, RingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FreyKind {
    Ejk,
    F1,
    F2,
}

#[derive(Debug, Clone)]
pub struct FreyCurve<'a> {
    pub field: &'a CyclotomicField,
    pub kind: FreyKind,
    pub j: usize,
    pub k: usize,
    pub a: Int,
    pub b: Int,
    pub u: RingElement,
    pub v: RingElement,
    pub w: RingElement,
    /// (a1, a2, a3, a4, a6).
    pub a_invariants: [RingElement; 5],
    pub c4: RingElement,
    pub c6: RingElement,
    pub disc: RingElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    MultSplit,
    MultNonsplit,
    Additive,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalData {
    pub q: u64,
    pub ideal_index: usize,
    pub gen_poly: Vec<u64>,
    pub residue_degree: usize,
    pub reduction: ReductionType,
    pub v_disc_min: i64,
    pub cond_exp: i64,
    pub kodaira: String,
}

impl<'a> FreyCurve<'a> {
    pub fn is_singular(&self) -> bool {
        self.disc.is_zero()
    }

    pub fn j_invariant(&self) -> Result<RingElement> {
        if self.is_singular() {
            return Err(Error::SingularCurve);
        }
        let c4_cubed = self
            .field
            .mul(&self.field.mul(&self.c4, &self.c4), &self.c4);
        self.field.exact_div(&c4_cubed, &self.disc)
    }
}

#[allow(clippy::too_many_arguments)]
fn curve_from_roots<'a>(
    field: &'a CyclotomicField,
    kind: FreyKind,
    j: usize,
    k: usize,
    a: Int,
    b: Int,
    u: RingElement,
    v: RingElement,
    w: RingElement,
    r1: &RingElement,
    r2: &RingElement,
) -> Result<FreyCurve<'a>> {
    // Y^2 = X (X - r1)(X + r2) = X^3 + (r2 - r1) X^2 - r1 r2 X
    let a2 = field.sub(r2, r1);
    let a4 = field.neg(&field.mul(r1, r2));
    let zero = field.zero();
    let ai = [zero.clone(), a2, zero.clone(), a4, zero];
    let (c4, c6, disc) = invariants(field, &ai);
    // u + v + w = 0 is an identity of the construction
    let sum = field.add(&field.add(&u, &v), &w);
    if !sum.is_zero() {
        return Err(Error::Internal("u + v + w != 0".into()));
    }
    // Weierstrass identity c4^3 - c6^2 = 1728 disc
    let lhs = field.sub(
        &field.mul(&field.mul(&c4, &c4), &c4),
        &field.mul(&c6, &c6),
    );
    let rhs = field.scale(&disc, &Rat::from(Int::from(1728)));
    if lhs != rhs {
        return Err(Error::Internal("c4^3 - c6^2 != 1728 disc".into()));
    }
    Ok(FreyCurve {
        field,
        kind,
        j,
        k,
        a,
        b,
        u,
        v,
        w,
        a_invariants: ai,
        c4,
        c6,
        disc,
    })
}

fn invariants(
    field: &CyclotomicField,
    ai: &[RingElement; 5],
) -> (RingElement, RingElement, RingElement) {
    let [a1, a2, a3, a4, a6] = ai;
    let scale = |e: &RingElement, n: i64| field.scale(e, &Rat::from(Int::from(n)));
    let b2 = field.add(&field.mul(a1, a1), &scale(a2, 4));
    let b4 = field.add(&scale(a4, 2), &field.mul(a1, a3));
    let b6 = field.add(&field.mul(a3, a3), &scale(a6, 4));
    let b8 = {
        let t1 = field.mul(&field.mul(a1, a1), a6);
        let t2 = scale(&field.mul(a2, a6), 4);
        let t3 = field.mul(&field.mul(a1, a3), a4);
        let t4 = field.mul(a2, &field.mul(a3, a3));
        let t5 = field.mul(a4, a4);
        field.sub(&field.add(&field.sub(&field.add(&t1, &t2), &t3), &t4), &t5)
    };
    let c4 = field.sub(&field.mul(&b2, &b2), &scale(&b4, 24));
    let c6 = {
        let t1 = field.mul(&field.mul(&b2, &b2), &b2);
        let t2 = scale(&field.mul(&b2, &b4), 36);
        let t3 = scale(&b6, 216);
        field.sub(&field.add(&field.neg(&t1), &t2), &t3)
    };
    let disc = {
        let t1 = field.mul(&field.mul(&b2, &b2), &b8);
        let t2 = field.mul(&field.mul(&b4, &b4), &b4);
        let t3 = field.mul(&b6, &b6);
        let t4 = field.mul(&b2, &field.mul(&b4, &b6));
        let mut d = field.neg(&t1);
        d = field.sub(&d, &scale(&t2, 8));
        d = field.sub(&d, &scale(&t3, 27));
        d = field.add(&d, &scale(&t4, 9));
        d
    };
    (c4, c6, disc)
}

/// The curve E_{j,k} for a z^{3p}-family witness: u = beta_j,
/// v = -(theta_j - 2)/(theta_k - 2) beta_k, w = 4 (theta_j - theta_k)/(theta_k - 2) a^2.
pub fn build_e<'a>(
    field: &'a CyclotomicField,
    a: &Int,
    b: &Int,
    j: usize,
    k: usize,
) -> Result<FreyCurve<'a>> {
    if !(1 <= j && j < k && k <= field.degree()) {
        return Err(Error::InvalidWitness(format!(
            "need 1 <= j < k <= {}, got j={j}, k={k}",
            field.degree()
        )));
    }
    DescentWitness::new(field, a.clone(), b.clone(), WitnessProfile::Z3p)?;
    let (u, v, w) = uvw(field, a, b, j, k)?;
    let (r1, r2) = (v.clone(), w.clone());
    curve_from_roots(field, FreyKind::Ejk, j, k, a.clone(), b.clone(), u, v, w, &r1, &r2)
}

/// The shared (u, v, w) of the constructions; the divisions are unit ratios
/// so a non-integral result signals a broken ring layer.
fn uvw(
    field: &CyclotomicField,
    a: &Int,
    b: &Int,
    j: usize,
    k: usize,
) -> Result<(RingElement, RingElement, RingElement)> {
    let theta_j = field.theta(j)?;
    let theta_k = field.theta(k)?;
    let two = field.from_i64(2);
    let tj2 = field.sub(&theta_j, &two);
    let tk2 = field.sub(&theta_k, &two);
    let u = beta(field, a, b, j)?;
    let beta_k = beta(field, a, b, k)?;
    let ratio = field.exact_div(&tj2, &tk2)?;
    if !ratio.is_integral() {
        return Err(Error::Internal(
            "(theta_j - 2)/(theta_k - 2) failed to be integral".into(),
        ));
    }
    let v = field.neg(&field.mul(&ratio, &beta_k));
    let diff_ratio = field.exact_div(&field.sub(&theta_j, &theta_k), &tk2)?;
    if !diff_ratio.is_integral() {
        return Err(Error::Internal(
            "(theta_j - theta_k)/(theta_k - 2) failed to be integral".into(),
        ));
    }
    let a2_int = field.from_int(a * a);
    let w = field.scale(&field.mul(&diff_ratio, &a2_int), &Rat::from(Int::from(4)));
    Ok((u, v, w))
}

/// F1 for the z^17 family (17 not dividing x): same (u, v, w), model
/// Y^2 = X (X - u)(X + v). Degenerate witnesses give disc = 0, flagged
/// through `is_singular`, not an error.
pub fn build_f1<'a>(field: &'a CyclotomicField, a: &Int, b: &Int) -> Result<FreyCurve<'a>> {
    let (j, k) = require_p17(field)?;
    DescentWitness::new(field, a.clone(), b.clone(), WitnessProfile::Z17)?;
    let (u, v, w) = uvw(field, a, b, j, k)?;
    let (r1, r2) = (u.clone(), v.clone());
    curve_from_roots(field, FreyKind::F1, j, k, a.clone(), b.clone(), u, v, w, &r1, &r2)
}

/// F2 for the z^17 family (17 | x): u' = beta_j/(theta_j - 2),
/// v' = -beta_k/(theta_k - 2), w' = 4 (theta_j - theta_k) a^2 /
/// ((theta_j - 2)(theta_k - 2)); field elements, denominators above 17 only.
pub fn build_f2<'a>(field: &'a CyclotomicField, a: &Int, b: &Int) -> Result<FreyCurve<'a>> {
    let (j, k) = require_p17(field)?;
    DescentWitness::new(field, a.clone(), b.clone(), WitnessProfile::Z17)?;
    let theta_j = field.theta(j)?;
    let theta_k = field.theta(k)?;
    let two = field.from_i64(2);
    let tj2 = field.sub(&theta_j, &two);
    let tk2 = field.sub(&theta_k, &two);
    let u = field.exact_div(&beta(field, a, b, j)?, &tj2)?;
    let v = field.neg(&field.exact_div(&beta(field, a, b, k)?, &tk2)?);
    let num = field.scale(
        &field.mul(&field.sub(&theta_j, &theta_k), &field.from_int(a * a)),
        &Rat::from(Int::from(4)),
    );
    let w = field.exact_div(&num, &field.mul(&tj2, &tk2))?;
    let (r1, r2) = (u.clone(), v.clone());
    curve_from_roots(field, FreyKind::F2, j, k, a.clone(), b.clone(), u, v, w, &r1, &r2)
}

fn require_p17(field: &CyclotomicField) -> Result<(usize, usize)> {
    if field.p() != 17 {
        return Err(Error::InvalidArgument(format!(
            "F1/F2 are defined for p = 17 with (j, k) = (1, 4); field has p = {}",
            field.p()
        )));
    }
    Ok((1, 4))
}

/// Local reduction data of a nonsingular curve at a prime.
pub fn local_data(curve: &FreyCurve, ideal: &PrimeIdealData) -> Result<LocalData> {
    if curve.is_singular() {
        return Err(Error::SingularCurve);
    }
    if ideal.q == 2 {
        tate_at_two(curve.field, ideal, &curve.a_invariants, &curve.disc)
    } else {
        classify_at_odd(curve.field, ideal, &curve.c4, &curve.c6, &curve.disc)
    }
}

/// Local reduction data of a raw Weierstrass model (a1, a2, a3, a4, a6).
///
/// Used for non-Frey inputs such as rational fixture curves base-changed
/// into a field where the interesting primes are unramified (the conductor
/// exponent does not move under unramified base change).
pub fn local_data_of_model(
    field: &CyclotomicField,
    ideal: &PrimeIdealData,
    ai: &[RingElement; 5],
) -> Result<LocalData> {
    let (c4, c6, disc) = invariants(field, ai);
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    if ideal.q == 2 {
        tate_at_two(field, ideal, ai, &disc)
    } else {
        classify_at_odd(field, ideal, &c4, &c6, &disc)
    }
}

// ---------------------------------------------------------------------------
// Odd primes: exact-valuation classification
// ---------------------------------------------------------------------------

fn classify_at_odd(
    field: &CyclotomicField,
    ideal: &PrimeIdealData,
    c4: &RingElement,
    c6: &RingElement,
    disc: &RingElement,
) -> Result<LocalData> {
    let kd = field.valuation(disc, ideal)?;
    let k4 = if c4.is_zero() {
        None
    } else {
        Some(field.valuation(c4, ideal)?)
    };
    let k6 = if c6.is_zero() {
        None
    } else {
        Some(field.valuation(c6, ideal)?)
    };
    // scale to the minimal triple via t = min(floor(k4/4), floor(k6/6), floor(kd/12))
    let mut t = kd.div_euclid(12);
    if let Some(k4) = k4 {
        t = t.min(k4.div_euclid(4));
    }
    if let Some(k6) = k6 {
        t = t.min(k6.div_euclid(6));
    }
    let kd_min = kd - 12 * t;
    let k4_min = k4.map(|v| v - 4 * t);
    let base = LocalData {
        q: ideal.q,
        ideal_index: ideal.index,
        gen_poly: ideal.gen_poly.clone(),
        residue_degree: ideal.f,
        reduction: ReductionType::Good,
        v_disc_min: kd_min,
        cond_exp: 0,
        kodaira: "I0".into(),
    };
    if kd_min == 0 {
        return Ok(base);
    }
    if k4_min == Some(0) {
        let split = minus_c6_is_square(field, ideal, c6)?;
        return Ok(LocalData {
            reduction: if split {
                ReductionType::MultSplit
            } else {
                ReductionType::MultNonsplit
            },
            cond_exp: 1,
            kodaira: format!("I{kd_min}"),
            ..base
        });
    }
    Err(Error::UnsupportedReduction(format!(
        "additive reduction at odd prime q={} (v(disc)={kd_min}, v(c4)={k4_min:?}); outside the implemented family",
        ideal.q
    )))
}

/// Quadratic character of the unit part of -c6 at an odd prime.
///
/// Clearing denominators by a sixth power and stripping the full (even)
/// valuation multiplies the residue by even character powers only, so the
/// character of the minimal model's -c6 survives.
fn minus_c6_is_square(
    field: &CyclotomicField,
    ideal: &PrimeIdealData,
    c6: &RingElement,
) -> Result<bool> {
    let den = c6.denominator();
    let d6 = num_traits::pow::pow(Rat::from(den), 6);
    let cleared = field.scale(c6, &d6);
    let v = field.valuation(&cleared, ideal)?;
    debug_assert!(v >= 0);
    if v % 2 != 0 {
        return Err(Error::UnsupportedReduction(
            "odd c6 valuation at a multiplicative prime".into(),
        ));
    }
    let mut elem = cleared;
    for _ in 0..v {
        elem = strip_once(field, ideal, &elem)?;
    }
    let res = field.reduce_mod(&field.neg(&elem), ideal)?;
    Ok(res.field.is_square(&res.rep))
}

fn strip_once(
    field: &CyclotomicField,
    ideal: &PrimeIdealData,
    elem: &RingElement,
) -> Result<RingElement> {
    let mut coeffs = ideal.strip_coeffs().to_vec();
    coeffs.resize(field.degree(), Int::zero());
    let strip = field.from_int_coeffs(&coeffs);
    let prod = field.mul(elem, &strip);
    let out = field.scale(&prod, &Rat::new(Int::one(), Int::from(ideal.q)));
    if !out.is_integral() {
        return Err(Error::Internal("strip division not exact".into()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Primes above 2: Tate steps 1-7 in the unramified completion
// ---------------------------------------------------------------------------

struct TateRing {
    ring: Local2Ring,
}

impl TateRing {
    fn b_invariants(&self, a: &[LocalElem; 5]) -> [LocalElem; 4] {
        let r = &self.ring;
        let [a1, a2, a3, a4, a6] = a;
        let four = r.from_int(&Int::from(4));
        let two = r.from_int(&Int::from(2));
        let b2 = r.add(&r.mul(a1, a1), &r.mul(&four, a2));
        let b4 = r.add(&r.mul(&two, a4), &r.mul(a1, a3));
        let b6 = r.add(&r.mul(a3, a3), &r.mul(&four, a6));
        let b8 = {
            let t1 = r.mul(&r.mul(a1, a1), a6);
            let t2 = r.mul(&four, &r.mul(a2, a6));
            let t3 = r.mul(&r.mul(a1, a3), a4);
            let t4 = r.mul(a2, &r.mul(a3, a3));
            let t5 = r.mul(a4, a4);
            r.sub(&r.add(&r.sub(&r.add(&t1, &t2), &t3), &t4), &t5)
        };
        [b2, b4, b6, b8]
    }

    /// In-place (r, s, t) coordinate change with unit scale.
    fn transform(&self, a: &mut [LocalElem; 5], rr: &LocalElem, ss: &LocalElem, tt: &LocalElem) {
        let ring = &self.ring;
        let two = ring.from_int(&Int::from(2));
        let three = ring.from_int(&Int::from(3));
        let [a1, a2, a3, a4, a6] = a.clone();
        let a1n = ring.add(&a1, &ring.mul(&two, ss));
        let a2n = {
            let mut x = ring.sub(&a2, &ring.mul(ss, &a1));
            x = ring.add(&x, &ring.mul(&three, rr));
            ring.sub(&x, &ring.mul(ss, ss))
        };
        let a3n = {
            let mut x = ring.add(&a3, &ring.mul(rr, &a1));
            x = ring.add(&x, &ring.mul(&two, tt));
            x
        };
        let a4n = {
            let mut x = ring.sub(&a4, &ring.mul(ss, &a3));
            x = ring.add(&x, &ring.mul(&two, &ring.mul(rr, &a2)));
            let trs = ring.add(tt, &ring.mul(rr, ss));
            x = ring.sub(&x, &ring.mul(&trs, &a1));
            x = ring.add(&x, &ring.mul(&three, &ring.mul(rr, rr)));
            ring.sub(&x, &ring.mul(&two, &ring.mul(ss, tt)))
        };
        let a6n = {
            let r2 = ring.mul(rr, rr);
            let mut x = ring.add(&a6, &ring.mul(rr, &a4));
            x = ring.add(&x, &ring.mul(&r2, &a2));
            x = ring.add(&x, &ring.mul(&r2, rr));
            x = ring.sub(&x, &ring.mul(tt, &a3));
            x = ring.sub(&x, &ring.mul(tt, tt));
            ring.sub(&x, &ring.mul(rr, &ring.mul(tt, &a1)))
        };
        *a = [a1n, a2n, a3n, a4n, a6n];
    }

    fn val_at_least(&self, e: &LocalElem, bound: u32) -> bool {
        match self.ring.valuation(e) {
            None => true,
            Some(v) => v >= bound,
        }
    }
}

fn tate_at_two(
    field: &CyclotomicField,
    ideal: &PrimeIdealData,
    ai: &[RingElement; 5],
    disc: &RingElement,
) -> Result<LocalData> {
    debug_assert_eq!(ideal.q, 2);
    let v_disc = field.valuation(disc, ideal)?;
    if v_disc < 0 {
        return Err(Error::UnsupportedReduction(
            "model not integral at the prime above 2".into(),
        ));
    }
    let base = LocalData {
        q: 2,
        ideal_index: ideal.index,
        gen_poly: ideal.gen_poly.clone(),
        residue_degree: ideal.f,
        reduction: ReductionType::Good,
        v_disc_min: v_disc,
        cond_exp: 0,
        kodaira: "I0".into(),
    };
    if v_disc == 0 {
        return Ok(base);
    }
    let precision = v_disc as u32 + 32;
    let ring = Local2Ring::new(field.minpoly(), &ideal.gen_poly, precision)?;
    let tr = TateRing { ring };
    let mut a = [
        to_local(&tr.ring, &ai[0])?,
        to_local(&tr.ring, &ai[1])?,
        to_local(&tr.ring, &ai[2])?,
        to_local(&tr.ring, &ai[3])?,
        to_local(&tr.ring, &ai[4])?,
    ];
    let k = tr.ring.residue.clone();

    // translate the singular point of the reduction to (0, 0)
    let (x0, y0) = find_singular_point(&tr, &a).ok_or_else(|| {
        Error::Internal("no singular point found despite positive disc valuation".into())
    })?;
    let rr = tr.ring.lift(&x0);
    let tt = tr.ring.lift(&y0);
    let zero = tr.ring.zero();
    tr.transform(&mut a, &rr, &zero, &tt);
    debug_assert!(
        tr.val_at_least(&a[2], 1) && tr.val_at_least(&a[3], 1) && tr.val_at_least(&a[4], 1)
    );

    // Step 2: multiplicative iff b2 is a unit
    let b = tr.b_invariants(&a);
    if !tr.val_at_least(&b[0], 1) {
        let a1r = tr.ring.reduce(&a[0]);
        let a2r = tr.ring.reduce(&a[1]);
        let mut split = false;
        for rank in 0..k.size() {
            let x = k.unrank(rank as usize);
            // tangent quadratic T^2 + a1 T - a2
            let val = k.sub(&k.add(&k.mul(&x, &x), &k.mul(&a1r, &x)), &a2r);
            if k.is_zero(&val) {
                split = true;
                break;
            }
        }
        return Ok(LocalData {
            reduction: if split {
                ReductionType::MultSplit
            } else {
                ReductionType::MultNonsplit
            },
            cond_exp: 1,
            kodaira: format!("I{v_disc}"),
            ..base
        });
    }

    // Step 3: type II
    if !tr.val_at_least(&a[4], 2) {
        return Ok(LocalData {
            reduction: ReductionType::Additive,
            cond_exp: v_disc,
            kodaira: "II".into(),
            ..base
        });
    }
    // Step 4: type III
    let b = tr.b_invariants(&a);
    if !tr.val_at_least(&b[3], 3) {
        return Ok(LocalData {
            reduction: ReductionType::Additive,
            cond_exp: v_disc - 1,
            kodaira: "III".into(),
            ..base
        });
    }
    // Step 5: type IV
    if !tr.val_at_least(&b[2], 3) {
        return Ok(LocalData {
            reduction: ReductionType::Additive,
            cond_exp: v_disc - 2,
            kodaira: "IV".into(),
            ..base
        });
    }

    // Step 6 entry normalisation: kill a2 to order 1 and a6 to order 3.
    // In residue characteristic 2 the square root is the inverse Frobenius.
    let s_res = k.sqrt_char2(&tr.ring.reduce(&a[1]));
    let ss = tr.ring.lift(&s_res);
    tr.transform(&mut a, &zero, &ss, &zero);
    let a6_quarter = tr.ring.div_pow2(&a[4], 2)?;
    let tau = k.sqrt_char2(&tr.ring.reduce(&a6_quarter));
    let tt = tr.ring.mul_int(&tr.ring.lift(&tau), &Int::from(2));
    tr.transform(&mut a, &zero, &zero, &tt);
    if !(tr.val_at_least(&a[0], 1)
        && tr.val_at_least(&a[1], 1)
        && tr.val_at_least(&a[2], 2)
        && tr.val_at_least(&a[3], 2)
        && tr.val_at_least(&a[4], 3))
    {
        return Err(Error::Internal("step 6 normalisation failed".into()));
    }

    // P(T) = T^3 + (a2/2) T^2 + (a4/4) T + (a6/8) over the residue field
    let c2 = tr.ring.reduce(&tr.ring.div_pow2(&a[1], 1)?);
    let c1 = tr.ring.reduce(&tr.ring.div_pow2(&a[3], 2)?);
    let c0 = tr.ring.reduce(&tr.ring.div_pow2(&a[4], 3)?);
    let eval_p = |x: &Vec<u64>| {
        let x2 = k.mul(x, x);
        let x3 = k.mul(&x2, x);
        let mut acc = k.add(&x3, &k.mul(&c2, &x2));
        acc = k.add(&acc, &k.mul(&c1, x));
        k.add(&acc, &c0)
    };
    // a repeated root of the cubic is rational over the residue field
    let mut repeated: Option<(Vec<u64>, usize)> = None;
    for rank in 0..k.size() {
        let x = k.unrank(rank as usize);
        if !k.is_zero(&eval_p(&x)) {
            continue;
        }
        // synthetic division of T^3 + c2 T^2 + c1 T + c0 by (T - x):
        // quotient T^2 + q1 T + q0
        let q1 = k.add(&c2, &x);
        let q0 = k.add(&c1, &k.mul(&x, &q1));
        let mut mult = 1usize;
        // remainder of quotient at x
        let rem1 = k.add(&k.add(&k.mul(&x, &x), &k.mul(&q1, &x)), &q0);
        if k.is_zero(&rem1) {
            mult = 2;
            // third division: remainder (x + q1) + x
            let rem2 = k.add(&k.add(&x, &q1), &x);
            if k.is_zero(&rem2) {
                mult = 3;
            }
        }
        if mult >= 2 {
            repeated = Some((x, mult));
            break;
        }
    }
    match repeated {
        None => Ok(LocalData {
            reduction: ReductionType::Additive,
            cond_exp: v_disc - 4,
            kodaira: "I0*".into(),
            ..base
        }),
        Some((_, 3)) => Err(Error::UnsupportedReduction(
            "Tate walk reached step 8 (triple root); outside the implemented family".into(),
        )),
        Some((rho, _)) => {
            // Step 7: move the double root to T = 0, then the I_m* subprocedure
            let rr = tr.ring.mul_int(&tr.ring.lift(&rho), &Int::from(2));
            tr.transform(&mut a, &rr, &zero, &zero);
            if !(tr.val_at_least(&a[2], 2)
                && tr.val_at_least(&a[3], 3)
                && tr.val_at_least(&a[4], 4))
            {
                return Err(Error::Internal("step 7 entry invariants failed".into()));
            }
            let alpha = tr.ring.reduce(&tr.ring.div_pow2(&a[1], 1)?);
            if k.is_zero(&alpha) {
                return Err(Error::Internal("double root with vanishing a2/2".into()));
            }
            let mut m: i64 = 1;
            loop {
                if m > v_disc + 2 {
                    return Err(Error::Internal(
                        "I_m* subprocedure failed to terminate".into(),
                    ));
                }
                let a6_div = (m + 3) as u32;
                if m % 2 == 1 {
                    let ey = ((m + 3) / 2) as u32;
                    if !tr.val_at_least(&a[2], ey) || !tr.val_at_least(&a[4], a6_div) {
                        return Err(Error::Internal("I_m* valuation invariant broken".into()));
                    }
                    let beta = tr.ring.reduce(&tr.ring.div_pow2(&a[2], ey)?);
                    if !k.is_zero(&beta) {
                        break;
                    }
                    let delta = tr.ring.reduce(&tr.ring.div_pow2(&a[4], a6_div)?);
                    let rho = k.sqrt_char2(&delta);
                    let tt = tr.ring.mul_int(&tr.ring.lift(&rho), &Int::from(2).pow(ey));
                    tr.transform(&mut a, &zero, &zero, &tt);
                } else {
                    let ex = ((m + 4) / 2) as u32;
                    if !tr.val_at_least(&a[3], ex) || !tr.val_at_least(&a[4], a6_div) {
                        return Err(Error::Internal("I_m* valuation invariant broken".into()));
                    }
                    let beta = tr.ring.reduce(&tr.ring.div_pow2(&a[3], ex)?);
                    if !k.is_zero(&beta) {
                        break;
                    }
                    let delta = tr.ring.reduce(&tr.ring.div_pow2(&a[4], a6_div)?);
                    let sigma = k.mul(&k.sqrt_char2(&delta), &k.sqrt_char2(&k.inv(&alpha)?));
                    let rr = tr
                        .ring
                        .mul_int(&tr.ring.lift(&sigma), &Int::from(2).pow(((m + 2) / 2) as u32));
                    tr.transform(&mut a, &rr, &zero, &zero);
                }
                m += 1;
            }
            Ok(LocalData {
                reduction: ReductionType::Additive,
                cond_exp: v_disc - 4 - m,
                kodaira: format!("I{m}*"),
                ..base
            })
        }
    }
}

fn to_local(ring: &Local2Ring, e: &RingElement) -> Result<LocalElem> {
    let den = e.denominator();
    if den.is_even() {
        return Err(Error::NotReducible(
            "even denominator at a prime above 2".into(),
        ));
    }
    let num: Vec<Int> = e
        .coeffs
        .iter()
        .map(|c| (c * Rat::from(den.clone())).to_integer())
        .collect();
    let local = ring.from_theta_poly(&num);
    let two_m = Int::from(2).pow(ring.precision);
    let inv = mod_inverse_odd(&den, &two_m);
    Ok(ring.mul_int(&local, &inv))
}

fn mod_inverse_odd(x: &Int, modulus: &Int) -> Int {
    let e = x.extended_gcd(modulus);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(modulus)
}

fn find_singular_point(tr: &TateRing, a: &[LocalElem; 5]) -> Option<(Vec<u64>, Vec<u64>)> {
    let k = &tr.ring.residue;
    let a1 = tr.ring.reduce(&a[0]);
    let a2 = tr.ring.reduce(&a[1]);
    let a3 = tr.ring.reduce(&a[2]);
    let a4 = tr.ring.reduce(&a[3]);
    let a6 = tr.ring.reduce(&a[4]);
    for rx in 0..k.size() {
        let x = k.unrank(rx as usize);
        let x2 = k.mul(&x, &x);
        let x3 = k.mul(&x2, &x);
        for ry in 0..k.size() {
            let y = k.unrank(ry as usize);
            let lhs = k.add(
                &k.mul(&y, &y),
                &k.add(&k.mul(&a1, &k.mul(&x, &y)), &k.mul(&a3, &y)),
            );
            let rhs = k.add(&x3, &k.add(&k.mul(&a2, &x2), &k.add(&k.mul(&a4, &x), &a6)));
            if !k.is_zero(&k.sub(&lhs, &rhs)) {
                continue;
            }
            let fx = k.sub(
                &k.mul(&a1, &y),
                &k.add(
                    &k.mul(&k.from_u64(3), &x2),
                    &k.add(&k.mul(&k.from_u64(2), &k.mul(&a2, &x)), &a4),
                ),
            );
            if !k.is_zero(&fx) {
                continue;
            }
            let fy = k.add(
                &k.mul(&k.from_u64(2), &y),
                &k.add(&k.mul(&a1, &x), &a3),
            );
            if k.is_zero(&fy) {
                return Some((x, y));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Residue obstruction at 2 for p = 17
// ---------------------------------------------------------------------------

/// Whether theta_j^2 theta_k^2 / (theta_j - theta_k)^2 avoids the prime
/// subfield F_2 of the 16-element residue field at a prime above 2.
pub fn residue_obstruction(
    field: &CyclotomicField,
    j: usize,
    k: usize,
    ideal_index: usize,
) -> Result<bool> {
    if field.p() != 17 {
        return Err(Error::InvalidArgument("defined for p = 17".into()));
    }
    if !(1 <= j && j < k && k <= 8) {
        return Err(Error::InvalidArgument("need 1 <= j < k <= 8".into()));
    }
    let ideals = field.factor_rational_prime(2)?;
    let ideal = ideals
        .get(ideal_index)
        .ok_or_else(|| Error::InvalidArgument(format!("no prime index {ideal_index} above 2")))?;
    let tj = field.theta(j)?;
    let tk = field.theta(k)?;
    let num = field.mul(&field.mul(&tj, &tj), &field.mul(&tk, &tk));
    let dif = field.sub(&tj, &tk);
    let den = field.mul(&dif, &dif);
    let num_r = field.reduce_mod(&num, ideal)?;
    let den_r = field.reduce_mod(&den, ideal)?;
    let ratio = num_r.field.mul(&num_r.rep, &num_r.field.inv(&den_r.rep)?);
    Ok(!num_r.field.in_prime_subfield(&ratio))
}

// ---------------------------------------------------------------------------
// The rational W curve of the p | y branch
// ---------------------------------------------------------------------------

/// Data for W: Y^2 = X^3 + 2uX^2 + v^2 attached to y^l = v(3u^2 - v^2).
///
/// The displayed minimal discriminant and conductor are recorded as given:
/// delta_min = 2^6 3^{-3} v^4 (3u^2 - v^2), N = 2^5 * 3 * Rad_{2,3}(delta_min).
/// They are data of the construction, never derived from the model.
#[derive(Debug, Clone, Serialize)]
pub struct WCurve {
    pub u: i64,
    pub v: i64,
    pub delta_min: String,
    pub rad_23: String,
    pub conductor: String,
}

pub fn build_w(u: i64, v: i64) -> Result<WCurve> {
    let (ui, vi) = (Int::from(u), Int::from(v));
    if u == 0 || v == 0 {
        return Err(Error::InvalidWitness("uv must be non-zero".into()));
    }
    if ui.gcd(&vi) != Int::one() {
        return Err(Error::InvalidWitness("gcd(u, v) != 1".into()));
    }
    if v % 3 != 0 || u % 2 != 0 || v % 2 == 0 {
        return Err(Error::InvalidWitness(
            "profile requires 3 | v, u even, v odd".into(),
        ));
    }
    let v4 = num_traits::pow::pow(vi.clone(), 4);
    let inner = Int::from(3) * &ui * &ui - &vi * &vi;
    let num = Int::from(64) * v4 * inner;
    let (delta, rem) = num.div_rem(&Int::from(27));
    if !rem.is_zero() {
        return Err(Error::Internal("delta_min not integral".into()));
    }
    let rad = arith::radical_excluding(&delta, &[2, 3]);
    let conductor = Int::from(96) * &rad;
    Ok(WCurve {
        u,
        v,
        delta_min: delta.to_string(),
        rad_23: rad.to_string(),
        conductor: conductor.to_string(),
    })
}
