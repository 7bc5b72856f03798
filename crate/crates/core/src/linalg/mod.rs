//! Exact linear algebra: GF(2) matrices, integer Smith normal form and
//! elimination over ℚ and prime fields.

pub mod field;
pub mod gf2;
pub mod snf;

pub use field::{Field, PrimeField, Rationals};
pub use gf2::{phi, phi_inv, BitVec, Gf2Matrix, Membership};
pub use snf::{invariant_factors, rational_rank, smith_normal_form, IntegerInvariants, SmithForm, SparseMatrix};
