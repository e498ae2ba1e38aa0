//! Dense univariate polynomial helpers over exact integers and rationals.
//!
//! Coefficient vectors are little-endian (index = degree) and kept trimmed:
//! the zero polynomial is the empty vector. Nothing here is asymptotically
//! clever; degrees in this crate stay below a dozen.

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

pub fn trim_int(mut v: Vec<Int>) -> Vec<Int> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

pub fn trim_rat(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

pub fn deg_rat(f: &[Rat]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = vec![Int::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim_int(out)
}

pub fn sub_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    let n = a.len().max(b.len());
    let mut out = vec![Int::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim_int(out)
}

pub fn mul_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(out)
}

/// Multiply by x (shift up one degree).
pub fn shift_int(a: &[Int]) -> Vec<Int> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero()];
    out.extend_from_slice(a);
    out
}

pub fn eval_int(f: &[Int], x: &Int) -> Int {
    let mut acc = Int::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn mul_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_rat(out)
}

pub fn sub_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim_rat(out)
}

pub fn scale_rat(f: &[Rat], c: &Rat) -> Vec<Rat> {
    if c.is_zero() {
        return Vec::new();
    }
    trim_rat(f.iter().map(|x| x * c).collect())
}

pub fn eval_rat(f: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Quotient and remainder of `a` by `b` over Q; `b` must be non-zero.
pub fn divrem_rat(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut rem: Vec<Rat> = a.to_vec();
    let mut quo = vec![Rat::zero(); a.len().saturating_sub(db)];
    while rem.len() > db || (rem.len() == b.len() && db == 0 && !rem.is_empty()) {
        let dr = rem.len() - 1;
        if dr < db {
            break;
        }
        let c = rem.last().unwrap() / &lead;
        let shift = dr - db;
        if quo.len() <= shift {
            quo.resize(shift + 1, Rat::zero());
        }
        quo[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[shift + i] -= t;
        }
        rem = trim_rat(rem);
        if rem.is_empty() {
            break;
        }
    }
    (trim_rat(quo), rem)
}

/// Resultant of two polynomials over Q by the Euclidean remainder sequence.
pub fn resultant_rat(f: &[Rat], g: &[Rat]) -> Rat {
    let f = trim_rat(f.to_vec());
    let g = trim_rat(g.to_vec());
    if f.is_empty() || g.is_empty() {
        return Rat::zero();
    }
    let mut a = f;
    let mut b = g;
    let mut res = Rat::one();
    let mut sign_flip = false;
    while b.len() > 1 {
        let (_, r) = divrem_rat(&a, &b);
        let da = a.len() - 1;
        let db = b.len() - 1;
        let dr = if r.is_empty() { 0 } else { r.len() - 1 };
        if r.is_empty() {
            return Rat::zero();
        }
        // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        if (da * db) % 2 == 1 {
            sign_flip = !sign_flip;
        }
        let lead = b.last().unwrap().clone();
        res *= pow_rat(&lead, da - dr);
        a = b;
        b = r;
    }
    // b is a non-zero constant
    let da = a.len() - 1;
    res *= pow_rat(&b[0], da);
    if sign_flip {
        -res
    } else {
        res
    }
}

fn pow_rat(x: &Rat, mut e: usize) -> Rat {
    let mut base = x.clone();
    let mut acc = Rat::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Extended gcd over Q: returns (g, s, t) with s*a + t*b = g, g monic or zero.
pub fn ext_gcd_rat(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0 = trim_rat(a.to_vec());
    let mut r1 = trim_rat(b.to_vec());
    let mut s0 = vec![Rat::one()];
    let mut s1: Vec<Rat> = Vec::new();
    let mut t0: Vec<Rat> = Vec::new();
    let mut t1 = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = divrem_rat(&r0, &r1);
        let ns = sub_rat(&s0, &mul_rat(&q, &s1));
        let nt = sub_rat(&t0, &mul_rat(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let lead = r0.last().unwrap().clone();
    let inv = Rat::one() / lead;
    (
        scale_rat(&r0, &inv),
        scale_rat(&s0, &inv),
        scale_rat(&t0, &inv),
    )
}

pub fn int_to_rat(f: &[Int]) -> Vec<Rat> {
    f.iter().map(|c| Rat::from(c.clone())).collect()
}

/// True when every coefficient is an integer.
pub fn rat_is_integral(f: &[Rat]) -> bool {
    f.iter().all(|c| c.is_integer())
}

/// Derivative over Q.
pub fn derivative_rat(f: &[Rat]) -> Vec<Rat> {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim_rat(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from(Int::from(i)))
            .collect(),
    )
}

/// Signs of f and all its derivatives at x (used for real-root interval tests
/// on polynomials with all-real roots). Returns true if every value is >= 0.
pub fn newton_all_nonneg(f: &[Rat], x: &Rat) -> bool {
    let mut g = trim_rat(f.to_vec());
    while !g.is_empty() {
        if eval_rat(&g, x).is_negative() {
            return false;
        }
        g = derivative_rat(&g);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&c| Rat::from(Int::from(c))).collect()
    }

    #[test]
    fn divrem_basic() {
        // (x^2 - 1) / (x - 1) = x + 1
        let (q, r) = divrem_rat(&rp(&[-1, 0, 1]), &rp(&[-1, 1]));
        assert_eq!(q, rp(&[1, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn resultant_known() {
        // res(x^2 - 2, x - 3) = 3^2 - 2 = 7 up to sign conventions:
        // product of g over roots of f when f monic.
        let r = resultant_rat(&rp(&[-2, 0, 1]), &rp(&[-3, 1]));
        assert_eq!(r, Rat::from(Int::from(7)));
        // res(f, g) = 0 when they share a root
        let r = resultant_rat(&rp(&[-1, 0, 1]), &rp(&[-1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn ext_gcd_inverse() {
        // inverse of x modulo x^2 - 2 is x/2
        let (g, _s, t) = ext_gcd_rat(&rp(&[-2, 0, 1]), &rp(&[0, 1]));
        assert_eq!(g, rp(&[1]));
        // t * x = 1 mod x^2-2  =>  t = x/2
        let prod = mul_rat(&t, &rp(&[0, 1]));
        let (_, rem) = divrem_rat(&prod, &rp(&[-2, 0, 1]));
        assert_eq!(rem, rp(&[1]));
    }
}
