pub mod bounds;
pub mod descent;
pub mod field;
pub mod frey;
pub mod search_cmd;
pub mod sieve;

use fmk_core::{CyclotomicField, Result};

pub(crate) fn open_field(p: u64) -> Result<CyclotomicField> {
    CyclotomicField::new(p)
}
