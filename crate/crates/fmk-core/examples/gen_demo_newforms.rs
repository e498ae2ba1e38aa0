//! Generate the demo newform records shipped in data/newforms.json: one
//! record carries the traces of the F1 specialisation at the residue pair
//! (2, 1) (so the sieve must report it inconclusive), the other is synthetic
//! with a degree-2 eigenfield.

use fmk_core::frey::FreyKind;
use fmk_core::sieve::{specialize_trace, SpecialOutcome};
use fmk_core::CyclotomicField;

fn main() {
    let field = CyclotomicField::new(17).unwrap();
    for q in [3u64, 67, 101, 157] {
        let ideals = field.factor_rational_prime(q).unwrap();
        for ideal in &ideals {
            let out =
                specialize_trace(&field, FreyKind::F1, 1, 4, ideal, 2 % q, 1).unwrap();
            let a = match out {
                SpecialOutcome::Good { a_q } => a_q,
                SpecialOutcome::Multiplicative => {
                    println!("q={q} idx={}: multiplicative", ideal.index);
                    continue;
                }
            };
            println!(
                "q={q} idx={} f={} gen_poly={:?}: a_q = {a}",
                ideal.index, ideal.f, ideal.gen_poly
            );
        }
    }
}
