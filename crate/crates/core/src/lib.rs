//! Perturbative ladder operators for the quantum harmonic oscillator.
//!
//! Given a Hermitian perturbation `V` of `H0 = ħω(N + ½)`, the
//! [`pt::Expansion`] builds order by order the operators `α_m` such that
//! `ã = Σ λ^m α_m` lowers the perturbed eigenstates exactly as `a` lowers
//! the unperturbed ones. Everything is exact over ℚ(i, √2) with symbolic
//! powers of ħ, m and ω; [`fock`] is an independent numerical oracle.

pub mod boson;
pub mod coeff;
pub mod diag;
pub mod errata;
pub mod fock;
pub mod numeric;
pub mod parser;
pub mod pt;
pub mod random;
pub mod reference;
pub mod report;
pub mod series;
pub mod verify;

pub use boson::{Monomial, OperatorPoly};
pub use coeff::{Qi2, Scalar, ScalarSum, UnitMonomial, UnitValues};
pub use diag::DiagonalPoly;
pub use parser::{parse, parse_operator, ParseError};
pub use pt::{Expansion, PtError};
pub use series::{DiagSeries, OperatorSeries};
