//! Finite-support ultrapowers built from arrays of ultrafilters.
//!
//! The crate covers the whole pipeline at a scale where every claim can be
//! checked exhaustively:
//!
//! - [`filters`]: eventually periodic subsets of ω, principal and
//!   factorial-tower ultrafilter oracles, ultrafilter bases and the
//!   lexicographically ordered definable array.
//! - [`index_algebra`]: finite-support subsets and functions on `I = N^A` and
//!   membership in the Fubini product `⊗ D_a`.
//! - [`ultrapower`]: the quotient of a finite structure, lifted relations,
//!   the principal collapse and the properness witness.
//! - [`logic`]: first-order formulas, Tarski and Łoś evaluation, and the
//!   exhaustive transfer checker.
//! - [`germs`]: rational-function germs, a decidable ordered field with
//!   infinitesimals and infinite elements.
//! - [`superstructure`]: the levels `V_n` over a finite base and their
//!   ultrapowers.
//! - [`random`]: seeded generators shared by the fuzz suites.

pub mod filters;
pub mod germs;
pub mod index_algebra;
pub mod logic;
pub mod random;
pub mod superstructure;
pub mod ultrapower;

pub use filters::{
    ft_membership, uob, ArraySpec, Classification, Domain, FilterBase, LabelId, PeriodicSet,
    UltrafilterOracle, Verdict,
};
pub use index_algebra::{equal_mod_d, SupportedFunction, SupportedSet};
