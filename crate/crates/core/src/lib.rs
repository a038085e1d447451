//! Exact Schubert calculus at desk scale, plus the machinery to turn
//! vanishing questions about Schubert coefficients into polynomial systems.
//!
//! The crate has three layers:
//!
//! * combinatorics and exact algebra: [`perm`] (permutations, Lehmer codes,
//!   rank matrices, Bruhat order), [`poly`] (sparse integer polynomials and
//!   divided differences), [`schubert`] (pipe dreams, Schubert polynomials,
//!   structure-constant expansion, exact vanishing);
//! * polynomial systems: [`system`] (named systems with the size measure
//!   `phi`, the POLYSYS text format, forward solving), [`dag`] (the layered
//!   clow-walk graph, division-free determinant lifts, Leibniz oracle);
//! * randomized vanishing: [`field`] (prime-field linear algebra) and
//!   [`purbhoo`] (span-criterion tester with replayable non-vanishing
//!   certificates, and the full vanishing-system emitter).
//!
//! [`selftest`] bundles the cross-module consistency suites that back the
//! `selftest` CLI subcommand.

pub mod dag;
pub mod field;
pub mod perm;
pub mod poly;
pub mod purbhoo;
pub mod schubert;
pub mod selftest;
pub mod system;

pub use perm::Permutation;
pub use poly::{MonomialKey, SparsePoly};
// re-exported once the module lands
// pub use system::PolySystem;
