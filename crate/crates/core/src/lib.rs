//! Exact enumeration and asymptotic checks for S-integer points of bounded
//! Weil height over `Q` and quadratic fields `Q(sqrt d)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numberfield`] exact field arithmetic, prime splitting, the monoid of
//!   ideals supported on `S` together with Möbius and `Psi` functions;
//! * [`heights`] absolute values and the absolute multiplicative Weil height;
//! * [`mahler`] root enclosures, Mahler measure and its global version `M^k`;
//! * [`enumeration`] exact point and polynomial counting, the per-ideal
//!   decomposition and its identities;
//! * [`asymptotics`] closed-form constants, main terms, logarithmic sums and
//!   volume diagnostics;
//! * [`report`] and [`verify`] the row/CSV model used by the command line and
//!   the property suites it runs.

pub mod asymptotics;
pub mod enumeration;
mod error;
pub mod heights;
pub mod lattice;
pub mod mahler;
pub mod numberfield;
pub mod poly;
pub mod quadreal;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

pub use asymptotics::{ConstantBundle, Symbolic};
pub use enumeration::{DistanceSystem, EnumerationOptions, EnumerationResult, SystemKind};
pub use heights::{HeightValue, Place, PlaceValue};
pub use mahler::{ComplexPolynomial, MeasureValue, RootEnclosure};
pub use numberfield::{
    FieldConfig, FieldDesc, FieldElement, FieldKind, FinitePrime, PlaceSet, SIdeal, Splitting,
};
pub use poly::KPolynomial;
pub use rational::Rational;
