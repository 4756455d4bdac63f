//! Prime-dimensional qudit magic states and the tasks they solve optimally:
//! the qudit CHSH game with Pauli measurements, MUB balancedness, entropic
//! uncertainty over stabilizer bases, and discrete Wigner negativity.

pub mod balance;
pub mod bell;
pub mod entropy;
pub mod error;
pub mod field;
pub mod lhv;
pub mod linalg;
pub mod magic;
pub mod optimize;
pub mod tables;
pub mod verify;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
