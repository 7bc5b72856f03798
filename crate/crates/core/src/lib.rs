//! Cohomology of real moment-angle complexes and real topological toric
//! manifolds `M(K, λ)` over ℚ and ℤ/q (q odd), together with the nestohedral
//! construction of real toric manifolds whose integral cohomology carries
//! q-torsion.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`] — simplicial complexes on at most 128 labelled vertices,
//!   full subcomplexes, links, joins and the wedge / `K(J)` operations.
//! * [`linalg`] — GF(2) matrices, exact integer Smith normal form and dense
//!   elimination over ℚ and 𝔽_p.
//! * [`homology`] — reduced (co)homology profiles with universal coefficient
//!   assembly and a memoised full-subcomplex cache.
//! * [`cai`] — the Stanley–Reisner differential graded ring computing the
//!   cohomology of the real moment-angle complex, the ℤ₂^m action, averaging
//!   and cohomology ring extraction for `M(K, λ)`.
//! * [`toric`] — characteristic pairs, the row-space Betti formula, torsion
//!   witnesses and a brute-force quotient-complex oracle.
//! * [`nesto`] — connected building sets, nested set complexes and canonical
//!   characteristic matrices.
//! * [`moore`] — mod-q Moore space triangulations and the torsion hunt.
//! * [`cli`] — the `toric-cohom` command line front end.

pub mod cai;
pub mod cli;
pub mod complex;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod moore;
pub mod nesto;
pub mod toric;

pub use error::{Error, Result};
