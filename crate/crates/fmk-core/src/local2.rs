//! Truncated unramified 2-adic arithmetic.
//!
//! The completion of O_K at a prime above 2 with residue degree f is the
//! unramified extension of Z_2 of degree f; its quotient mod 2^M is the
//! Galois ring Z[x] / (2^M, g(x)) for any monic degree-f lift g of the local
//! generator polynomial. To map O_K into that ring the lift must divide the
//! minimal polynomial mod 2^M, which is what the Hensel step below arranges.
//!
//! 2 stays a uniformiser, an element is divisible by 2 exactly when all of
//! its coordinates are even, and the valuation of an element is the minimum
//! coordinate 2-valuation, which is what Tate's algorithm needs.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fq::{self, ResidueField};
use crate::Int;

/// The ring Z[x]/(2^precision, modulus), modulus monic of degree f dividing
/// the global minimal polynomial mod 2^precision.
#[derive(Debug, Clone)]
pub struct Local2Ring {
    pub f: usize,
    pub precision: u32,
    two_m: Int,
    /// Monic lift of the residue generator polynomial.
    modulus: Vec<Int>,
    /// The residue field F_{2^f}.
    pub residue: ResidueField,
}

/// Element: f coordinates in [0, 2^M).
pub type LocalElem = Vec<Int>;

impl Local2Ring {
    /// Hensel-lift `gen_poly` (a factor of `minpoly` mod 2) to a monic factor
    /// modulo 2^precision and build the ring.
    pub fn new(minpoly: &[Int], gen_poly: &[u64], precision: u32) -> Result<Self> {
        let f = gen_poly.len() - 1;
        let n = minpoly.len() - 1;
        let two_m = Int::from(2).pow(precision);
        let modulus = if f == n {
            // inert: the minimal polynomial itself is the local modulus
            minpoly
                .iter()
                .map(|c| c.mod_floor(&two_m))
                .collect::<Vec<_>>()
        } else {
            hensel_lift_factor(minpoly, gen_poly, precision)?
        };
        Ok(Local2Ring {
            f,
            precision,
            two_m,
            modulus,
            residue: ResidueField::new(2, gen_poly.to_vec()),
        })
    }

    pub fn zero(&self) -> LocalElem {
        vec![Int::zero(); self.f]
    }

    pub fn one(&self) -> LocalElem {
        let mut e = self.zero();
        e[0] = Int::one();
        e
    }

    pub fn from_int(&self, c: &Int) -> LocalElem {
        let mut e = self.zero();
        e[0] = c.mod_floor(&self.two_m);
        e
    }

    /// Map a polynomial in theta (arbitrary degree < n, integer coefficients)
    /// into the local ring by reducing modulo (2^M, modulus).
    pub fn from_theta_poly(&self, coeffs: &[Int]) -> LocalElem {
        let poly: Vec<Int> = coeffs.iter().map(|c| c.mod_floor(&self.two_m)).collect();
        self.reduce_poly(poly)
    }

    fn reduce_poly(&self, mut poly: Vec<Int>) -> LocalElem {
        let f = self.f;
        while poly.len() > f {
            let top = poly.pop().unwrap().mod_floor(&self.two_m);
            if top.is_zero() {
                continue;
            }
            let d = poly.len() - f;
            for i in 0..f {
                let t = (&top * &self.modulus[i]).mod_floor(&self.two_m);
                poly[d + i] = (&poly[d + i] - t).mod_floor(&self.two_m);
            }
        }
        poly.resize(f, Int::zero());
        for c in poly.iter_mut() {
            *c = c.mod_floor(&self.two_m);
        }
        poly
    }

    pub fn add(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + y).mod_floor(&self.two_m))
            .collect()
    }

    pub fn sub(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).mod_floor(&self.two_m))
            .collect()
    }

    pub fn neg(&self, a: &LocalElem) -> LocalElem {
        a.iter().map(|x| (-x).mod_floor(&self.two_m)).collect()
    }

    pub fn mul(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        let mut prod = vec![Int::zero(); 2 * self.f];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (&prod[i + j] + x * y).mod_floor(&self.two_m);
            }
        }
        self.reduce_poly(prod)
    }

    pub fn mul_int(&self, a: &LocalElem, c: &Int) -> LocalElem {
        a.iter().map(|x| (x * c).mod_floor(&self.two_m)).collect()
    }

    pub fn is_zero(&self, a: &LocalElem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// 2-adic valuation: minimum coordinate valuation. `None` for the zero
    /// element (valuation at least the precision).
    pub fn valuation(&self, a: &LocalElem) -> Option<u32> {
        let mut v = u32::MAX;
        for c in a {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            let mut k = 0u32;
            while t.is_even() {
                t /= 2;
                k += 1;
            }
            v = v.min(k);
        }
        if v == u32::MAX {
            None
        } else {
            Some(v)
        }
    }

    /// Exact division by 2^k; every coordinate must be divisible.
    pub fn div_pow2(&self, a: &LocalElem, k: u32) -> Result<LocalElem> {
        let d = Int::from(2).pow(k);
        let mut out = Vec::with_capacity(self.f);
        for c in a {
            let (quo, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return Err(Error::Internal(
                    "inexact division by a power of 2 in the local ring".into(),
                ));
            }
            out.push(quo);
        }
        Ok(out)
    }

    /// Image in the residue field F_{2^f}.
    pub fn reduce(&self, a: &LocalElem) -> Vec<u64> {
        let coeffs: Vec<u64> = a
            .iter()
            .map(|c| c.mod_floor(&Int::from(2)).to_u64().unwrap())
            .collect();
        self.residue.from_poly(&coeffs)
    }

    /// Lift a residue-field element with coordinates in {0, 1}.
    pub fn lift(&self, r: &[u64]) -> LocalElem {
        let mut e = self.zero();
        for (i, &c) in r.iter().enumerate() {
            e[i] = Int::from(c);
        }
        e
    }

    /// Headroom check: valuations at or beyond `precision - slack` cannot be
    /// trusted and should trigger a precision bump in the caller.
    pub fn trustworthy(&self, v: u32, slack: u32) -> bool {
        v + slack < self.precision
    }
}

/// Lift the factorisation minpoly = g * h (mod 2), gcd(g, h) = 1, to a monic
/// factor g' of minpoly modulo 2^precision, by quadratic Hensel iteration.
fn hensel_lift_factor(minpoly: &[Int], gen_poly: &[u64], precision: u32) -> Result<Vec<Int>> {
    let two = Int::from(2);
    let m2: Vec<u64> = minpoly
        .iter()
        .map(|c| c.mod_floor(&two).to_u64().unwrap())
        .collect();
    let m2 = fq::ptrim(m2);
    let (h2, rem) = fq::pdiv(&m2, gen_poly, 2);
    if !rem.is_empty() {
        return Err(Error::Internal("gen_poly does not divide minpoly mod 2".into()));
    }
    // Bezout: s*g + t*h = 1 mod 2
    let (gg, s2, t2) = ext_gcd_f2(gen_poly, &h2);
    if gg != vec![1] {
        return Err(Error::Internal("factor not coprime to cofactor mod 2".into()));
    }
    let mut g: Vec<Int> = gen_poly.iter().map(|&c| Int::from(c)).collect();
    let mut h: Vec<Int> = h2.iter().map(|&c| Int::from(c)).collect();
    let mut s: Vec<Int> = s2.iter().map(|&c| Int::from(c)).collect();
    let mut t: Vec<Int> = t2.iter().map(|&c| Int::from(c)).collect();
    let mut k = 1u32; // current precision of the factorisation
    while k < precision {
        let modulus = Int::from(2).pow(2 * k);
        // e = minpoly - g*h  (mod 2^{2k})
        let gh = int_poly_mul_mod(&g, &h, &modulus);
        let e = int_poly_sub_mod(minpoly, &gh, &modulus);
        // delta_g = (s*e mod h), delta_h = (t*e mod g), then swap per the
        // standard recipe: g += t*e mod g is wrong way round; use:
        //   g' = g + (s*e rem ... ) -- follow vZG Alg 15.10 with
        //   g' = g + (e*t mod g), h' = h + (e*s + q*h truncated)
        let et = int_poly_mul_mod(&e, &t, &modulus);
        let (q, rg) = int_poly_divrem_monic_mod(&et, &g, &modulus);
        let g_new = int_poly_add_mod(&g, &rg, &modulus);
        let es = int_poly_mul_mod(&e, &s, &modulus);
        let qh = int_poly_mul_mod(&q, &h, &modulus);
        let h_new = int_poly_add_mod(&h, &int_poly_add_mod(&es, &qh, &modulus), &modulus);
        g = g_new;
        h = h_new;
        // refresh the Bezout pair: with b = s*g + t*h - 1 (= 0 mod 2^k),
        // s' = s - (s*b mod h), t' = t - (t*b + floor(s*b/h)*g) restores
        // s'*g + t'*h = 1 - b^2 = 1 (mod 2^{2k})
        let sg = int_poly_mul_mod(&s, &g, &modulus);
        let th = int_poly_mul_mod(&t, &h, &modulus);
        let b = int_poly_sub_mod(
            &int_poly_add_mod(&sg, &th, &modulus),
            &[Int::one()],
            &modulus,
        );
        let sb = int_poly_mul_mod(&s, &b, &modulus);
        let (c, d) = int_poly_divrem_monic_mod(&sb, &h, &modulus);
        let s_new = int_poly_sub_mod(&s, &d, &modulus);
        let tb = int_poly_mul_mod(&t, &b, &modulus);
        let cg = int_poly_mul_mod(&c, &g, &modulus);
        let t_new = int_poly_sub_mod(&t, &int_poly_add_mod(&tb, &cg, &modulus), &modulus);
        s = s_new;
        t = t_new;
        k *= 2;
    }
    let modulus = Int::from(2).pow(precision);
    let mut out: Vec<Int> = g.iter().map(|c| c.mod_floor(&modulus)).collect();
    out.resize(gen_poly.len(), Int::zero());
    // monic by construction (leading coefficient untouched mod 2^k lifts)
    out[gen_poly.len() - 1] = Int::one();
    // verify the factorisation exactly at the target precision
    let hh: Vec<Int> = h.iter().map(|c| c.mod_floor(&modulus)).collect();
    let gh = int_poly_mul_mod(&out, &hh, &modulus);
    let diff = int_poly_sub_mod(minpoly, &gh, &modulus);
    if diff.iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("Hensel lift verification failed".into()));
    }
    Ok(out)
}

fn int_poly_mul_mod(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(m);
        }
    }
    trim(out)
}

fn int_poly_add_mod(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = vec![Int::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    for c in out.iter_mut() {
        *c = c.mod_floor(m);
    }
    trim(out)
}

fn int_poly_sub_mod(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = vec![Int::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    for c in out.iter_mut() {
        *c = c.mod_floor(m);
    }
    trim(out)
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn int_poly_divrem_monic_mod(a: &[Int], b: &[Int], m: &Int) -> (Vec<Int>, Vec<Int>) {
    let b = trim(b.to_vec());
    assert!(b.last().map(|c| c.is_one()).unwrap_or(false), "monic divisor");
    let db = b.len() - 1;
    let mut r = trim(a.to_vec());
    let mut q = vec![Int::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r.last().unwrap().clone();
        let shift = dr - db;
        q[shift] = (&q[shift] + &c).mod_floor(m);
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = (&r[shift + i] - &c * bc).mod_floor(m);
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    (trim(q), r)
}

fn trim(mut v: Vec<Int>) -> Vec<Int> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Extended gcd over F_2[x].
fn ext_gcd_f2(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = fq::ptrim(a.to_vec());
    let mut r1 = fq::ptrim(b.to_vec());
    let mut s0 = vec![1u64];
    let mut s1: Vec<u64> = Vec::new();
    let mut t0: Vec<u64> = Vec::new();
    let mut t1 = vec![1u64];
    while !r1.is_empty() {
        let (q, r) = fq::pdiv(&r0, &r1, 2);
        let ns = fq::psub(&s0, &fq::pmul(&q, &s1, 2), 2);
        let nt = fq::psub(&t0, &fq::pmul(&q, &t1, 2), 2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CyclotomicField;

    #[test]
    fn inert_ring_basics() {
        // p = 7: 2 inert, f = 3, local modulus is the minimal polynomial
        let k = CyclotomicField::new(7).unwrap();
        let ideal = &k.factor_rational_prime(2).unwrap()[0];
        let ring = Local2Ring::new(k.minpoly(), &ideal.gen_poly, 20).unwrap();
        let theta = ring.from_theta_poly(&[Int::zero(), Int::one(), Int::zero()]);
        let four = ring.from_int(&Int::from(4));
        assert_eq!(ring.valuation(&four), Some(2));
        assert_eq!(ring.valuation(&theta), Some(0));
        let prod = ring.mul(&theta, &four);
        assert_eq!(ring.valuation(&prod), Some(2));
        let div = ring.div_pow2(&prod, 2).unwrap();
        assert_eq!(div, theta);
    }

    #[test]
    fn hensel_split_case() {
        // p = 17: minpoly mod 2 factors into two quartics
        let k = CyclotomicField::new(17).unwrap();
        let ideals = k.factor_rational_prime(2).unwrap();
        assert_eq!(ideals.len(), 2);
        for ideal in &ideals {
            let ring = Local2Ring::new(k.minpoly(), &ideal.gen_poly, 24).unwrap();
            // theta maps to a root of the lifted quartic: minpoly(theta) = 0
            let mut acc = ring.zero();
            let theta = ring.from_theta_poly(&{
                let mut v = vec![Int::zero(); 8];
                v[1] = Int::one();
                v
            });
            for c in k.minpoly().iter().rev() {
                acc = ring.mul(&acc, &theta);
                acc = ring.add(&acc, &ring.from_int(c));
            }
            assert!(ring.is_zero(&acc), "minimal polynomial must vanish locally");
        }
    }

    #[test]
    fn reduce_and_lift_roundtrip() {
        let k = CyclotomicField::new(17).unwrap();
        let ideal = &k.factor_rational_prime(2).unwrap()[0];
        let ring = Local2Ring::new(k.minpoly(), &ideal.gen_poly, 16).unwrap();
        for r in 0..16usize {
            let res = ring.residue.unrank(r);
            let lifted = ring.lift(&res);
            assert_eq!(ring.reduce(&lifted), res);
        }
    }
}
