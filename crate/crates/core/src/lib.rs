//! A verification laboratory for the Bruhat-Chevalley order on
//! fixed-point-free involutions.
//!
//! The poset `F_2n` consists of the `(2n-1)!!` fixed-point-free involutions
//! of `[2n]` under the Bruhat-Chevalley order. This crate constructs it two
//! independent ways (rank-matrix comparison and covering transformations on
//! rises), machine-checks the EL-shellability of the rise labeling, builds
//! the Deodhar-Srinivasan poset on the same ground set and diffs the two,
//! verifies the length-function identities, and certifies the combinatorial
//! ball conditions for the order complex.
//!
//! Everything is deterministic and pure; all types are immutable after
//! construction and safe to share across threads.

pub mod bruhat;
pub mod ds;
pub mod el;
pub mod error;
pub mod involution;
pub mod poset;
pub mod rises;

pub use error::{Error, Result};
pub use involution::{double_factorial, enumerate_fpf, BracketSequence, FpfInvolution};
pub use rises::{Direction, Label};

/// Resource limits for the expensive operations. Exceeding a cap is a hard
/// error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest half-size `n` the enumerators accept.
    pub enumeration_cap: usize,
    /// Largest number of maximal chains tolerated per interval.
    pub chain_cap: u64,
    /// Largest number of distinct entries in the ridge table.
    pub ridge_mem_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration_cap: 7,
            chain_cap: 10_000_000,
            ridge_mem_cap: 10_000_000,
        }
    }
}
