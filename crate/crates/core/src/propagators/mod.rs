//! Primitive filters.

mod among;
mod arith;
mod lex;

pub use among::{filter_among, post_sequence_decomposed, Among, AmongSpec};
pub use arith::{filter_sum, Equal, NotEqual, TernarySum};
pub use lex::{filter_lex, Lex, LexPair};
