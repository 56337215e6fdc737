//! Analysis of minimal subshifts with sublinear complexity.

pub mod block_code;
pub mod checks;
pub mod error;
pub mod language;
pub mod recurrence;
pub mod search;
pub mod special;
pub mod sturmian;
pub mod substitution;
pub mod word;

pub use error::{Error, Result};
pub use language::{
    build_language, build_language_from_sequence, CassaigneEstimate, LanguageTable, Provenance,
    Side, SpecialWord,
};
pub use substitution::Substitution;
pub use word::{Alphabet, Letter, Word};
