#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clique;
pub mod codes;
pub mod combinatorics;
pub mod linalg;
pub mod measurement;
pub mod observables;
pub mod povm;
pub mod qec;
pub mod readout;
pub mod rng;
pub mod state;

mod error;

pub use self::codes::{ClassicalCode, Decoded, DecoderSpec, Word};
pub use self::error::{Error, Result};
pub use self::linalg::CMatrix;
pub use self::observables::ObservableSet;
pub use self::povm::ProjectivePovm;
pub use self::state::QuantumState;

/// Default numerical tolerance for matrix identities at desk scale (dim <= 64).
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
