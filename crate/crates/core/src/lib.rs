//! Z_{2^s}-additive Hadamard codes: the Carlet Gray map, generator
//! matrices, rank and kernel invariants, and classification by type.

pub mod bits;
pub mod classify;
pub mod error;
pub mod gf2;
pub mod graymap;
pub mod hadamard;
pub mod invariants;
pub mod ring;

pub use bits::BitVector;
pub use error::{Error, Result};
pub use graymap::GrayTable;
pub use hadamard::{AdditiveCode, BinaryCode, GeneratorMatrix, TypeSpec};
pub use ring::{Residue, ResidueVector};
