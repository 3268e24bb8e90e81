//! Membership, two-point Schwarz feasibility and explicit analytic-disc
//! interpolants for the tetrablock `E` and the symmetrized bidisc `G2`.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex_core`]: linear-fractional maps `Psi`/`Upsilon`, their
//!   sup-norms, the pseudohyperbolic distance, the scalar two-point Pick
//!   solver and the expression trees used to serialise analytic maps.
//! * [`domains`]: membership batteries for `E`, its closure, `G2` and
//!   `Gamma2`, witness extraction (beta pairs, 2x2 completions) and the
//!   embeddings `f(s, p) = (s/2, s/2, p)`, `g(a, b, p) = (a + b, p)`.
//! * [`schwarz`]: every closed-form feasibility condition for the two-point
//!   problem `0 -> 0`, `lambda0 -> x`, plus origin-based Lempert values.
//! * [`interpolate`]: constructive interpolants with a mandatory verifier.
//! * [`oracle`]: brute-force grid checks, samplers and the equivalence sweep.

pub mod complex_core;
pub mod domains;
mod error;
pub mod ext_float;
pub mod interpolate;
pub mod oracle;
pub mod schwarz;
pub mod verdict;

pub use complex_core::{Complex, Extended};
pub use domains::{Region, SymPoint, TetraPoint};
pub use error::{Error, Result};

/// Default width of the boundary band used to classify signed margins.
pub const DEFAULT_BAND: f64 = 1e-9;
