//! Correlation sums of multiplicative characters evaluated on elliptic
//! division polynomials.
//!
//! For a curve E: y^2 = x^3 + ax + b over F_p, a point P of order at
//! least 3 and a character chi of order d, the sequence chi(psi_n(P)) is
//! periodic with period dividing R = d * ord P. This crate generates
//! such sequences, computes their shifted correlations S(N, h), the
//! tuple averages U_m and V_m, the second-moment sum T(H) and the
//! twisted spectrum, verifies the exact identities these objects
//! satisfy, and evaluates the asymptotic right-hand sides they are
//! measured against.

pub mod character;
pub mod corr;
pub mod curve;
pub mod divpoly;
pub mod factor;
pub mod field;
pub mod oracle;

pub use character::{CharValue, Character, CycloVec};
pub use corr::{CharSeq, CorrStrategy, SeqInfo};
pub use curve::{Curve, CurvePoint};
pub use divpoly::EdsContext;
pub use field::{FieldElem, PrimeField};
