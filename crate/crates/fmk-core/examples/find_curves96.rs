//! One-off search for rational elliptic curves of conductor 96 (and the
//! conductor-32 CM curve), used to populate data/curves96.json.
//!
//! Conductor exponents at 2 and 3 are computed by base-changing the model
//! into Q(zeta_5 + zeta_5^{-1}), where both primes are inert (hence
//! unramified); conductor exponents are invariant under unramified base
//! change.

use fmk_core::{frey, CyclotomicField, Int};
use num_traits::Zero;

fn main() {
    let field = CyclotomicField::new(5).unwrap();
    let q2 = &field.factor_rational_prime(2).unwrap()[0];
    let q3 = &field.factor_rational_prime(3).unwrap()[0];
    let mut found = Vec::new();
    for a1 in 0..=1i64 {
        for a2 in -1..=1i64 {
            for a3 in 0..=1i64 {
                for a4 in -24..=24i64 {
                    for a6 in -36..=36i64 {
                        let ai_int = [a1, a2, a3, a4, a6];
                        // quick disc support check over Z
                        let b2 = a1 * a1 + 4 * a2;
                        let b4 = 2 * a4 + a1 * a3;
                        let b6 = a3 * a3 + 4 * a6;
                        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3
                            - a4 * a4;
                        let disc: i128 = -(b2 as i128) * (b2 as i128) * (b8 as i128)
                            - 8 * (b4 as i128).pow(3)
                            - 27 * (b6 as i128) * (b6 as i128)
                            + 9 * (b2 as i128) * (b4 as i128) * (b6 as i128);
                        if disc == 0 {
                            continue;
                        }
                        let mut m = disc.unsigned_abs();
                        while m % 2 == 0 {
                            m /= 2;
                        }
                        while m % 3 == 0 {
                            m /= 3;
                        }
                        if m != 1 {
                            continue;
                        }
                        let ai = [
                            field.from_i64(a1),
                            field.from_i64(a2),
                            field.from_i64(a3),
                            field.from_i64(a4),
                            field.from_i64(a6),
                        ];
                        let l2 = match frey::local_data_of_model(&field, q2, &ai) {
                            Ok(l) => l,
                            Err(_) => continue,
                        };
                        let l3 = match frey::local_data_of_model(&field, q3, &ai) {
                            Ok(l) => l,
                            Err(_) => continue,
                        };
                        let cond: i64 = 2i64.pow(l2.cond_exp as u32) * 3i64.pow(l3.cond_exp as u32);
                        if cond == 96 || cond == 32 {
                            found.push((ai_int, cond, disc, l2.kodaira.clone()));
                        }
                    }
                }
            }
        }
    }
    let _ = Int::zero();
    println!("found {} curves:", found.len());
    for (ai, cond, disc, kod) in &found {
        println!("  a = {ai:?}, conductor {cond}, disc {disc}, kodaira at 2: {kod}");
    }
}
