//! Exhaustive primitive-solution searches at desk scale.
//!
//! Both families are enumerated over (z, y) with an exact residual test:
//! z^E grows fastest, so for each z the loop runs y up to the 2m-th root of
//! z^E and asks whether the residual is an exact square (or 2l-th power).
//! Cheap modular filters (mod 2^64 and a product of small odd moduli)
//! discard non-residues before any big-integer work; every reported hit is
//! verified exactly, so the filters only ever skip impossibilities.

use num_bigint::BigInt as Int;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use fmk_core::{Error, Result};

const SMALL_MODULI: [u64; 7] = [63, 65, 11, 17, 19, 23, 29];

/// Iterations allowed across the whole run; beyond this the search refuses
/// (budget exceeded) rather than run for hours.
const ITERATION_BUDGET: f64 = 2.0e10;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Solution {
    pub x: String,
    pub y: String,
    pub z: String,
    /// Exponent pair (l, m) for the z^17 family; absent for the z^{3p} one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<(u32, u32)>,
    pub trivial: bool,
    /// Congruence screens for non-trivial candidates: y = 3 (mod 6),
    /// x even, z odd.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence_flags: Option<CongruenceFlags>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CongruenceFlags {
    pub y_is_3_mod_6: bool,
    pub x_even: bool,
    pub z_odd: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub z_max: u64,
    pub trivial_solutions: Vec<Solution>,
    pub nontrivial_solutions: Vec<Solution>,
    pub nonprimitive_hits: u64,
    pub pairs_scanned: u64,
}

struct SquareFilter {
    tables: Vec<(u64, Vec<bool>)>,
    modulus: u64,
}

impl SquareFilter {
    fn new() -> Self {
        let mut tables = Vec::new();
        let mut modulus = 1u64;
        for m in SMALL_MODULI {
            let mut t = vec![false; m as usize];
            for x in 0..m {
                t[((x * x) % m) as usize] = true;
            }
            tables.push((m, t));
            modulus *= m;
        }
        SquareFilter { tables, modulus }
    }

    /// Fast necessary condition for t (mod 2^64) to be a square.
    #[inline]
    fn maybe_square_pow2(t: u64) -> bool {
        if t == 0 {
            return true;
        }
        let tz = t.trailing_zeros();
        if tz % 2 == 1 {
            return false;
        }
        (t >> tz) & 7 == 1
    }

    #[inline]
    fn passes_small(&self, residue: u64) -> bool {
        for (m, table) in &self.tables {
            if !table[(residue % m) as usize] {
                return false;
            }
        }
        true
    }
}

#[inline]
fn pow_wrapping(mut base: u64, mut e: u32) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.wrapping_mul(base);
        }
        base = base.wrapping_mul(base);
        e >>= 1;
    }
    acc
}

#[inline]
fn pow_mod(mut base: u64, mut e: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn is_perfect_kth_power(x: &Int, k: u32) -> Option<Int> {
    if x.is_negative() {
        return None;
    }
    let r = x.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

fn coprime3(x: &Int, y: &Int, z: &Int) -> bool {
    x.gcd(y).gcd(z) == num_traits::One::one()
}

fn flags_for(x: &Int, y: &Int, z: &Int) -> CongruenceFlags {
    CongruenceFlags {
        y_is_3_mod_6: y.mod_floor(&Int::from(6)) == Int::from(3),
        x_even: x.is_even(),
        z_odd: z.is_odd(),
    }
}

/// Push the sign variants of a solution (x, y >= 0; even powers admit both
/// signs, z is pinned positive by the odd outer exponent).
fn push_solutions(
    out: &mut Vec<Solution>,
    x: &Int,
    y: &Int,
    z: u64,
    exponents: Option<(u32, u32)>,
) {
    let trivial = x.is_zero() || y.is_zero();
    // a trivial triple is the same solution for every exponent pair
    let exponents = if trivial { None } else { exponents };
    let xs: Vec<Int> = if x.is_zero() {
        vec![Int::zero()]
    } else {
        vec![x.clone(), -x.clone()]
    };
    let ys: Vec<Int> = if y.is_zero() {
        vec![Int::zero()]
    } else {
        vec![y.clone(), -y.clone()]
    };
    for xv in &xs {
        for yv in &ys {
            let flags = if trivial {
                None
            } else {
                Some(flags_for(xv, yv, &Int::from(z)))
            };
            out.push(Solution {
                x: xv.to_string(),
                y: yv.to_string(),
                z: z.to_string(),
                exponents,
                trivial,
                congruence_flags: flags,
            });
        }
    }
}

/// Scan y in [0, y_max] for exact l-th power residuals x^l = big - y^{inner},
/// where `inner` is the exponent on y and `l` the one on x (both even).
/// Returns (hits as (x, y), pairs scanned).
fn scan_y_range(
    big: &Int,
    inner: u32,
    outer: u32,
    y_max: u64,
    filter: &SquareFilter,
) -> (Vec<(Int, Int)>, u64) {
    let big_low = wrap_low64(big);
    let big_small = (big % Int::from(filter.modulus)).to_u64().unwrap();
    let chunk: u64 = 1 << 16;
    let starts: Vec<u64> = (0..=y_max).step_by(chunk as usize).collect();
    let results: Vec<(Vec<(Int, Int)>, u64)> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk - 1).min(y_max);
            let mut hits = Vec::new();
            let mut scanned = 0u64;
            for y in start..=end {
                scanned += 1;
                // candidate residual mod 2^64
                let ypow = match inner {
                    4 => {
                        let y2 = y.wrapping_mul(y);
                        y2.wrapping_mul(y2)
                    }
                    6 => {
                        let y2 = y.wrapping_mul(y);
                        y2.wrapping_mul(y2).wrapping_mul(y2)
                    }
                    _ => pow_wrapping(y, inner),
                };
                let t = big_low.wrapping_sub(ypow);
                if !SquareFilter::maybe_square_pow2(t) {
                    continue;
                }
                // residual modulo the product of small odd moduli
                let ymod = pow_mod(y, inner, filter.modulus);
                let r = (big_small + filter.modulus - ymod) % filter.modulus;
                if !filter.passes_small(r) {
                    continue;
                }
                // exact check
                let residual = big - num_traits::pow::pow(Int::from(y), inner as usize);
                if residual.is_negative() {
                    continue;
                }
                if let Some(x) = is_perfect_kth_power(&residual, outer) {
                    hits.push((x, Int::from(y)));
                }
            }
            (hits, scanned)
        })
        .collect();
    let mut hits = Vec::new();
    let mut scanned = 0;
    for (h, s) in results {
        hits.extend(h);
        scanned += s;
    }
    (hits, scanned)
}

fn wrap_low64(x: &Int) -> u64 {
    let m = x.mod_floor(&(Int::from(u64::MAX) + 1));
    m.to_u64().unwrap()
}

fn budget_for(z_max: u64, total_exp: u32, inner: u32) -> f64 {
    // sum over z of z^(total_exp/inner) iterations
    let e = total_exp as f64 / inner as f64;
    let mut total = 0.0;
    let mut z = 1f64;
    while z <= z_max as f64 {
        total += z.powf(e);
        z += 1.0;
        if total > ITERATION_BUDGET * 10.0 {
            break;
        }
    }
    total
}

/// x^2 + y^{2n} = z^{3p}: exhaustive over 1 <= z <= z_max.
pub fn search_z3p(p: u64, n: u32, z_max: u64) -> Result<SearchReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    if p != 1 && (p < 5 || !fmk_core::ring::is_prime_u64(p)) {
        return Err(Error::InvalidArgument(
            "p must be 1 (plain cube stage) or a prime >= 5".into(),
        ));
    }
    let total_exp = 3 * p as u32;
    check_budget(z_max, total_exp, 2 * n)?;
    let filter = SquareFilter::new();
    let mut trivial = Vec::new();
    let mut nontrivial = Vec::new();
    let mut nonprimitive = 0u64;
    let mut pairs = 0u64;
    for z in 1..=z_max {
        let big = num_traits::pow::pow(Int::from(z), total_exp as usize);
        let y_max = big.nth_root(2 * n).to_u64().unwrap();
        let (hits, scanned) = scan_y_range(&big, 2 * n, 2, y_max, &filter);
        pairs += scanned;
        for (x, y) in hits {
            if !coprime3(&x, &y, &Int::from(z)) {
                nonprimitive += 1;
                continue;
            }
            let dest = if x.is_zero() || y.is_zero() {
                &mut trivial
            } else {
                &mut nontrivial
            };
            push_solutions(dest, &x, &y, z, None);
        }
    }
    sort_solutions(&mut trivial);
    sort_solutions(&mut nontrivial);
    Ok(SearchReport {
        mode: "z3p".into(),
        p: Some(p),
        n: Some(n),
        z_max,
        trivial_solutions: trivial,
        nontrivial_solutions: nontrivial,
        nonprimitive_hits: nonprimitive,
        pairs_scanned: pairs,
    })
}

/// x^{2l} + y^{2m} = z^17 over prime pairs (l, m); with `n` given the pair
/// is fixed to l = m = n, otherwise l, m sweep {2, 3, 5, 7}.
pub fn search_z17(n: Option<u32>, z_max: u64) -> Result<SearchReport> {
    let exps: Vec<u32> = match n {
        Some(k) => {
            if k < 2 {
                return Err(Error::InvalidArgument("n must be >= 2".into()));
            }
            vec![k]
        }
        None => vec![2, 3, 5, 7],
    };
    for &m in &exps {
        check_budget(z_max, 17, 2 * m)?;
    }
    let filter = SquareFilter::new();
    let mut trivial = Vec::new();
    let mut nontrivial = Vec::new();
    let mut nonprimitive = 0u64;
    let mut pairs = 0u64;
    for &l in &exps {
        for &m in &exps {
            for z in 1..=z_max {
                let big = num_traits::pow::pow(Int::from(z), 17);
                let y_max = big.nth_root(2 * m).to_u64().unwrap();
                let (hits, scanned) = scan_y_range(&big, 2 * m, 2 * l, y_max, &filter);
                pairs += scanned;
                for (x, y) in hits {
                    if !coprime3(&x, &y, &Int::from(z)) {
                        nonprimitive += 1;
                        continue;
                    }
                    let dest = if x.is_zero() || y.is_zero() {
                        &mut trivial
                    } else {
                        &mut nontrivial
                    };
                    push_solutions(dest, &x, &y, z, Some((l, m)));
                }
            }
        }
    }
    trivial.dedup();
    sort_solutions(&mut trivial);
    trivial.dedup();
    sort_solutions(&mut nontrivial);
    Ok(SearchReport {
        mode: "z17".into(),
        p: Some(17),
        n,
        z_max,
        trivial_solutions: trivial,
        nontrivial_solutions: nontrivial,
        nonprimitive_hits: nonprimitive,
        pairs_scanned: pairs,
    })
}

fn check_budget(z_max: u64, total_exp: u32, inner: u32) -> Result<()> {
    if z_max > 1_000_000 {
        return Err(Error::BudgetExceeded("max must be <= 10^6".into()));
    }
    if budget_for(z_max, total_exp, inner) > ITERATION_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "the (z, y) enumeration for z <= {z_max} needs more than {ITERATION_BUDGET:.0} iterations"
        )));
    }
    Ok(())
}

fn sort_solutions(v: &mut Vec<Solution>) {
    v.sort_by(|a, b| {
        (a.z.len(), &a.z, a.y.len(), &a.y, a.x.len(), &a.x, a.exponents).cmp(&(
            b.z.len(),
            &b.z,
            b.y.len(),
            &b.y,
            b.x.len(),
            &b.x,
            b.exponents,
        ))
    });
    v.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3p_small_finds_only_trivial() {
        let rep = search_z3p(7, 2, 10).unwrap();
        assert!(rep.nontrivial_solutions.is_empty());
        // (+-1, 0, 1) and (0, +-1, 1)
        assert_eq!(rep.trivial_solutions.len(), 4);
        for s in &rep.trivial_solutions {
            assert_eq!(s.z, "1");
            assert!(s.trivial);
        }
    }

    #[test]
    fn cube_stage_admits_trivial() {
        // x^2 + y^4 = z^3 carries the trivial quadruple at z = 1
        let rep = search_z3p(1, 2, 20).unwrap();
        let trivial_at_one: Vec<_> = rep
            .trivial_solutions
            .iter()
            .filter(|s| s.z == "1")
            .collect();
        assert_eq!(trivial_at_one.len(), 4);
    }

    #[test]
    fn z17_small() {
        let rep = search_z17(Some(3), 5).unwrap();
        assert!(rep.nontrivial_solutions.is_empty());
        assert_eq!(rep.trivial_solutions.len(), 4);
    }

    #[test]
    fn budget_rejected() {
        assert!(search_z3p(7, 2, 2_000_000).is_err());
    }

    #[test]
    fn filter_is_only_a_filter() {
        // squares always pass the modular screens
        let f = SquareFilter::new();
        for x in 0..2000u64 {
            let sq = x * x;
            assert!(SquareFilter::maybe_square_pow2(sq));
            assert!(f.passes_small(sq % f.modulus));
        }
    }
}
