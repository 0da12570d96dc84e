//! ∘-idempotent bases.
//!
//! Every ∘-closed subspace of `M_n(F)` containing `J` is spanned by the
//! indicators of a partition of the positions, so bases are kept as position
//! sets, one per family member.

mod basis;
mod positions;
mod strict;
mod universal;

pub use basis::{BasisEntry, IdempotentBasis};
pub use positions::PositionSet;
pub use strict::{involution_close, primitive_circ_idempotents, strictify};
pub use universal::{universal_basis, universal_basis_full, FullBasisRun, UniversalBasis};
