//! Exact rational computations for abstract hamiltonian actions of
//! finite-dimensional Lie algebras.
//!
//! Given a Lie algebra `h`, an `h`-module `V` and a `V`-valued 2-cochain
//! `omega`, [`ham::analyze`] computes the symplectic and hamiltonian elements,
//! the radical, the admissible vectors and their Poisson bracket. For a
//! homomorphism `zeta: g -> ham(h, omega)` the [`momentum`] module solves for
//! momentum maps and builds the associated extensions of `g`, and [`group`]
//! handles explicitly supplied group elements. All arithmetic is exact.

pub mod complex;
pub mod error;
pub mod gallery;
pub mod group;
pub mod ham;
pub mod lie;
pub mod linear;
pub mod momentum;
pub mod noether;
pub mod problem;

pub use complex::Cochain;
pub use error::{Error, Result};
pub use ham::{analyze, HamiltonianAnalysis};
pub use lie::{AlgebraHom, LieAlgebra, Module};
pub use linear::{Matrix, Rational, Subspace};
pub use momentum::MomentumMap;
pub use problem::{parse_problem, Problem};
