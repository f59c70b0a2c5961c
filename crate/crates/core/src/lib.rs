//! Construction and certification of graph designs for the Shrikhande graph
//! and for L(K4,4): edgewise decompositions of `K_n` for every `n ≡ 1 (mod 96)`.

pub mod algebra;
pub mod assemble;
pub mod blocks;
pub mod certify;
pub mod cli;
pub mod error;
pub mod gdd;
pub mod targets;

pub use error::{Error, Result};
