use serde::{Deserialize, Serialize};

/// Work limits for the exhaustive operations. Every limit can be raised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum truth-table length.
    pub table: u64,
    /// Maximum number of one-dimensional subspaces scanned by lattice enumeration.
    pub subspace_reps: u64,
    /// Largest state count for generic isomorphism search.
    pub iso_states: usize,
    /// Largest state count for congruence enumeration.
    pub congruence_states: usize,
    /// Maximum `2^m · m^(2r+1)` for the subalgebra scan.
    pub subalgebra_work: u128,
    /// Largest state count for affine recognition by exhaustive relabeling.
    pub relabel_states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            table: 10_000_000,
            subspace_reps: 1_000_000,
            iso_states: 10,
            congruence_states: 12,
            subalgebra_work: (1u128 << 16) * 16u128.pow(3),
            relabel_states: 9,
        }
    }
}

impl Caps {
    /// Multiplies every limit by `factor`.
    pub fn scaled(self, factor: u64) -> Self {
        let f = factor.max(1);
        Caps {
            table: self.table.saturating_mul(f),
            subspace_reps: self.subspace_reps.saturating_mul(f),
            iso_states: self.iso_states.saturating_mul(f as usize),
            congruence_states: self.congruence_states.saturating_mul(f as usize),
            subalgebra_work: self.subalgebra_work.saturating_mul(f as u128),
            relabel_states: self.relabel_states.saturating_mul(f as usize),
        }
    }
}
