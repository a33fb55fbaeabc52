//! Monomial bases of the subspaces `W(Lambda)` of level one standard modules
//! in affine types `A_l` (weight `omega_m`) and `D_l` (weight `omega_1`), and
//! their characters as truncated q-series.
//!
//! The [`enumerator`] lists admissible monomials straight from the difference
//! and initial conditions; [`char_a`] and [`char_d`] evaluate the closed
//! q-series formulas, and [`verify`] checks one against the other.

pub mod char_a;
pub mod char_d;
pub mod colors;
pub mod enumerator;
pub mod error;
pub mod monomial;
pub mod qseries;
pub mod verify;

pub use colors::{AlgebraSpec, Color, Family, Weight};
pub use enumerator::{enumerate_basis, enumerate_character, EnumRequest};
pub use error::{Error, Result};
pub use monomial::{Factor, ICVariant, Monomial, Partition, Path, RestrictedSet, StartRule};
pub use qseries::QSeries;
