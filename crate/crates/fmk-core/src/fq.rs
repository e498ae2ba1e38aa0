//! Finite-field arithmetic for residue computations.
//!
//! Two layers live here:
//!
//! * polynomials over the prime field F_q (`q` a u64 prime, q <= 10^4 in
//!   practice) with the factorisation routines needed to split a minimal
//!   polynomial mod q: distinct-degree separation followed by an
//!   enumeration-based equal-degree split;
//! * the residue field F_{q^f} presented as F_q[t]/(g) for a monic
//!   irreducible g, with element arithmetic, inversion, square tests and
//!   full-field enumeration (fields are capped at 10^7 elements).
//!
//! All arithmetic uses u64 coefficients with u128 intermediates.

use crate::error::{Error, Result};

#[inline]
pub fn addm(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, q: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + q - b
    }
}

#[inline]
pub fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn powm(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, q);
        }
        a = mulm(a, a, q);
        e >>= 1;
    }
    acc
}

pub fn invm(a: u64, q: u64) -> u64 {
    // q prime
    powm(a, q - 2, q)
}

// ---------------------------------------------------------------------------
// Polynomials over F_q, little-endian coefficient vectors, trimmed.
// ---------------------------------------------------------------------------

pub fn ptrim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn pmul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(x, y, q), q);
        }
    }
    ptrim(out)
}

pub fn psub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        out[i] = x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = subm(out[i], y, q);
    }
    ptrim(out)
}

/// Remainder of a by monic-or-invertible-lead b.
pub fn prem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let b = ptrim(b.to_vec());
    assert!(!b.is_empty(), "remainder by zero polynomial");
    let db = b.len() - 1;
    let linv = invm(*b.last().unwrap(), q);
    let mut r = ptrim(a.to_vec());
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulm(*r.last().unwrap(), linv, q);
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = subm(r[shift + i], mulm(c, bc, q), q);
        }
        r = ptrim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

pub fn pdiv(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let b = ptrim(b.to_vec());
    assert!(!b.is_empty());
    let db = b.len() - 1;
    let linv = invm(*b.last().unwrap(), q);
    let mut r = ptrim(a.to_vec());
    let mut quo = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulm(*r.last().unwrap(), linv, q);
        let shift = dr - db;
        quo[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = subm(r[shift + i], mulm(c, bc, q), q);
        }
        r = ptrim(r);
        if r.is_empty() {
            break;
        }
    }
    (ptrim(quo), r)
}

pub fn pgcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut x = ptrim(a.to_vec());
    let mut y = ptrim(b.to_vec());
    while !y.is_empty() {
        let r = prem(&x, &y, q);
        x = std::mem::replace(&mut y, r);
    }
    if let Some(&l) = x.last() {
        let linv = invm(l, q);
        for c in &mut x {
            *c = mulm(*c, linv, q);
        }
    }
    x
}

/// x^(q^steps) mod f, by repeated q-power maps.
pub fn frobenius_power(f: &[u64], q: u64, steps: usize) -> Vec<u64> {
    let mut x = vec![0, 1];
    for _ in 0..steps {
        x = ppowmod(&x, q, f, q);
    }
    x
}

pub fn ppowmod(base: &[u64], mut e: u64, modulus: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = prem(base, modulus, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = prem(&pmul(&acc, &b, q), modulus, q);
        }
        b = prem(&pmul(&b, &b, q), modulus, q);
        e >>= 1;
    }
    acc
}

pub fn pderiv(f: &[u64], q: u64) -> Vec<u64> {
    if f.len() <= 1 {
        return Vec::new();
    }
    ptrim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, (i as u64) % q, q))
            .collect(),
    )
}

/// Factor a squarefree monic polynomial over F_q into monic irreducibles.
///
/// Distinct-degree separation first; components with several factors of equal
/// degree d are split by enumerating monic degree-d polynomials in
/// lexicographic coefficient order and trial-dividing. The enumeration budget
/// errors out above 10^7 candidates; the fields this crate builds keep q^d
/// far below that.
pub fn factor_squarefree_monic(f: &[u64], q: u64) -> Result<Vec<Vec<u64>>> {
    let f = ptrim(f.to_vec());
    assert!(f.len() >= 2, "constant polynomial");
    let mut out = Vec::new();
    let mut rem = f.clone();
    let mut d = 1usize;
    // x^(q^d) mod rem, maintained incrementally
    let mut xq = vec![0u64, 1];
    while rem.len() - 1 >= 2 * d {
        xq = ppowmod(&prem(&xq, &rem, q), q, &rem, q);
        // gcd(x^(q^d) - x, rem) collects all irreducible factors of degree d
        let diff = psub(&xq, &[0, 1], q);
        let g = pgcd(&diff, &rem, q);
        if g.len() > 1 {
            out.extend(split_equal_degree(&g, d, q)?);
            rem = pdiv(&rem, &g, q).0;
            if rem.len() >= 2 {
                xq = prem(&xq, &rem, q);
            }
        }
        d += 1;
    }
    if rem.len() > 1 {
        out.push(monicize(&rem, q));
    }
    out.sort();
    Ok(out)
}

fn monicize(f: &[u64], q: u64) -> Vec<u64> {
    let linv = invm(*f.last().unwrap(), q);
    f.iter().map(|&c| mulm(c, linv, q)).collect()
}

/// Split a product of distinct monic irreducibles, all of degree d.
fn split_equal_degree(g: &[u64], d: usize, q: u64) -> Result<Vec<Vec<u64>>> {
    let total = (g.len() - 1) / d;
    if total == 1 {
        return Ok(vec![monicize(g, q)]);
    }
    let budget = (q as u128).saturating_pow(d as u32);
    if budget > 10_000_000 {
        return Err(Error::InvalidArgument(format!(
            "equal-degree split budget exceeded: q={q}, d={d}"
        )));
    }
    let mut factors = Vec::new();
    let mut rem = monicize(g, q);
    // lexicographic enumeration of monic degree-d candidates
    let mut cand = vec![0u64; d + 1];
    cand[d] = 1;
    'outer: loop {
        if rem.len() - 1 == d {
            factors.push(rem.clone());
            break;
        }
        let (quo, r) = pdiv(&rem, &cand, q);
        if r.is_empty() {
            factors.push(cand.clone());
            rem = quo;
            if rem.len() <= 1 {
                break;
            }
            continue;
        }
        // increment candidate coefficients little-endian
        for i in 0..d {
            cand[i] += 1;
            if cand[i] < q {
                continue 'outer;
            }
            cand[i] = 0;
        }
        return Err(Error::Internal(
            "equal-degree enumeration exhausted without full split".into(),
        ));
    }
    Ok(factors)
}

// ---------------------------------------------------------------------------
// Residue fields F_{q^f}
// ---------------------------------------------------------------------------

/// The field F_{q^f} = F_q[t]/(gen_poly), gen_poly monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pub q: u64,
    pub f: usize,
    pub gen_poly: Vec<u64>,
}

/// Element of a `ResidueField`: polynomial of degree < f, little-endian,
/// padded to exactly f coefficients.
pub type FqElem = Vec<u64>;

impl ResidueField {
    pub fn new(q: u64, gen_poly: Vec<u64>) -> Self {
        let gen_poly = ptrim(gen_poly);
        let f = gen_poly.len() - 1;
        ResidueField { q, f, gen_poly }
    }

    pub fn size(&self) -> u64 {
        let mut s: u64 = 1;
        for _ in 0..self.f {
            s = s.checked_mul(self.q).expect("field size overflow");
        }
        s
    }

    pub fn zero(&self) -> FqElem {
        vec![0; self.f]
    }

    pub fn one(&self) -> FqElem {
        let mut e = self.zero();
        e[0] = 1 % self.q;
        e
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut e = self.zero();
        e[0] = c % self.q;
        e
    }

    /// Reduce an arbitrary F_q polynomial into the field.
    pub fn from_poly(&self, p: &[u64]) -> FqElem {
        let r = prem(p, &self.gen_poly, self.q);
        let mut e = self.zero();
        for (i, &c) in r.iter().enumerate() {
            e[i] = c;
        }
        e
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| addm(x, y, self.q))
            .collect()
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| subm(x, y, self.q))
            .collect()
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.q - x })
            .collect()
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.from_poly(&pmul(a, b, self.q))
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        // a^(q^f - 2): fine at the sizes in play
        Ok(self.pow(a, self.size() - 2))
    }

    /// Quadratic-character square test; only valid in odd characteristic.
    pub fn is_square(&self, a: &FqElem) -> bool {
        assert!(self.q % 2 == 1, "square test requires odd characteristic");
        if self.is_zero(a) {
            return true;
        }
        let e = (self.size() - 1) / 2;
        self.pow(a, e) == self.one()
    }

    /// Unique square root in characteristic 2 (Frobenius inverse).
    pub fn sqrt_char2(&self, a: &FqElem) -> FqElem {
        assert_eq!(self.q, 2);
        if self.f == 1 {
            return a.clone();
        }
        let e = 1u64 << (self.f - 1);
        self.pow(a, e)
    }

    /// Whether the element lies in the prime subfield F_q.
    pub fn in_prime_subfield(&self, a: &FqElem) -> bool {
        a.iter().skip(1).all(|&c| c == 0)
    }

    /// Rank of an element in the mixed-radix enumeration order.
    pub fn rank(&self, a: &FqElem) -> usize {
        let mut r: usize = 0;
        for &c in a.iter().rev() {
            r = r * self.q as usize + c as usize;
        }
        r
    }

    /// Element with the given rank.
    pub fn unrank(&self, mut r: usize) -> FqElem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = (r % self.q as usize) as u64;
            r /= self.q as usize;
        }
        e
    }
}
