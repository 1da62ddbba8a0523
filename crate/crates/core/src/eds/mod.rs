//! Division-polynomial values at points and abstract elliptic divisibility sequences.

pub mod abstract_seq;
pub mod block;
pub mod float;
pub mod psi;
pub mod recurrence;

pub use abstract_seq::{eds_extend, AbstractEds};
pub use block::{final_block, psi_pow2, psi_pow2_trimmed, EdsBlock};
pub use float::{float_track, float_track_log, FloatBlock};
pub use psi::{psi_initial_block, psi_naive, psi_seeds, DivisionValues};
pub use recurrence::Recurrence;

/// Homogeneity weight `j^2 - 1` of index `j`.
pub fn weight(j: u64) -> u64 {
    debug_assert!(j >= 1);
    j.checked_mul(j).expect("index too large for weight") - 1
}
