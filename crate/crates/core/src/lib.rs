//! Exact Kloosterman sums over GF(2^r), the binary codes attached to
//! SO^-(2,q), O^-(2,q) and SO^-(4,q), and recursive power moments of
//! Kloosterman sums derived from their weight distributions.

pub mod char_sums;
pub mod codes;
pub mod error;
pub mod field;
pub mod layout;
pub mod moments;
pub mod ortho;

pub use error::{Error, Result};
pub use field::{Felt, FieldCtx};
pub use ortho::Group;
