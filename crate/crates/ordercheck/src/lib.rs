//! Executable mathematics for a family of index-weighted inequalities.
//!
//! Given a nondecreasing zero-sum sequence `α_1 ≤ … ≤ α_n`, the toolkit
//! verifies, certifies, and stress-tests
//!
//! ```text
//!   Σ_{j=1}^{n} φ(j·α_j) ≥ 0
//! ```
//!
//! for every odd function `φ` that is increasing and convex on `[0, ∞)` —
//! `2·sinh`, odd polynomials with nonnegative coefficients, odd extensions
//! of plus-functions, and nonnegative combinations thereof — together with
//! the machinery behind it:
//!
//! * [`stoploss`] — stop-loss transforms `π(t) = Σ (a − t)₊` and an exact
//!   finite decision procedure for the increasing convex order;
//! * [`certificate`] — machine-checkable proof traces for the truncated-sum
//!   comparison between the split parts, with an independent auditor;
//! * [`theorem`] — direct verification, the exponential and product-form
//!   corollaries, and Karamata-style convex comparisons via plus-function
//!   decomposition;
//! * [`integral`] — discretizations of increasing functions on `[0, 1]` and
//!   Riemann-sum convergence studies for `∫₀¹ φ(x·f(x)) dx`;
//! * [`search`] — exhaustive and randomized instance generation,
//!   counterexample scanning with exact escalation, and tightness probes.
//!
//! Everything runs under a [`scalar::ScalarPolicy`]: exact `BigRational`
//! arithmetic for certificates and grid enumeration, tolerance-tracked
//! doubles for analytic atoms.
//!
//! The `ordercheck` binary exposes the same operations as subcommands; see
//! the crate examples for library usage.

pub mod certificate;
pub mod cli;
pub mod convexfn;
pub mod integral;
pub mod io;
pub mod scalar;
pub mod search;
pub mod sequence;
pub mod stoploss;
pub mod theorem;

pub use crate::scalar::{Scalar, ScalarMode, ScalarPolicy};
pub use crate::sequence::{NonnegMultiset, OrderedZeroSumSequence};

/// Version of the JSON report/certificate layout emitted by this crate.
pub const FORMAT_SCHEMA_VERSION: u32 = 1;
