//! Exact arithmetic for squares in arithmetic progressions.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`] - unbounded integers/rationals, squarefree decomposition,
//!   quadratic field elements
//! * [`subsets`] - position subsets up to translation, scaling and symmetry
//! * [`ap`] - arithmetic progressions and their square positions
//! * [`curves`] - the projective curve attached to a subset and its
//!   genus-one models for four-element subsets
//! * [`elliptic`] - group law, torsion, point search, root numbers
//! * [`descent`] - 2-isogeny and full 2-descent rank bounds, certificates
//! * [`covering`] - quartic covering collections for five-element subsets
//! * [`pell`] - Pell equations and intersections of two progressions
//!
//! All computations are exact; nothing is floating point except root
//! isolation seeds, and every such seed is verified exactly afterwards.

pub mod arith;
pub mod subsets;
pub mod ap;
pub mod curves;
pub mod elliptic;
pub mod descent;
pub mod covering;
pub mod pell;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
