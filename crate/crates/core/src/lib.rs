pub mod combinatorics;
pub mod entropy;
pub mod error;
pub mod generate;
pub mod succinct;
pub mod trie;
pub mod verify;
pub mod xbwt;

pub use error::{Error, Result};
