use thiserror::Error;

use crate::linear::{Matrix, Rational};

/// Errors raised by validation and by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("linear system has no solution")]
    Unsolvable,

    #[error("antisymmetry violated at ({i},{j},{k}): c[i][j][k] + c[j][i][k] = {residual}")]
    AntisymmetryViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: Rational,
    },
    #[error("Jacobi identity violated on basis triple ({i},{j},{k}), residual [{}]", join(.residual))]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<Rational>,
    },
    #[error("action is not a homomorphism on basis pair ({i},{j})")]
    HomViolation {
        i: usize,
        j: usize,
        residual: Matrix,
    },
    #[error("map does not preserve the bracket of basis pair ({i},{j})")]
    BracketViolation { i: usize, j: usize },
    #[error("subspace is not closed under the bracket: basis pair ({i},{j})")]
    NotClosed { i: usize, j: usize },
    #[error("subspace is not an ideal")]
    NotIdeal,

    #[error("differential not supported in degree {0}")]
    UnsupportedDegree(usize),
    #[error("cannot contract a degree-0 cochain")]
    DegreeZero,

    #[error("vector is not admissible")]
    NotAdmissible,
    #[error("element is not symplectic")]
    NotSymplectic,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("1-cochain is not of the form i_xi omega with xi in the normalizer of the radical")]
    NotInImage,

    #[error("zeta(e_{index}) is not a hamiltonian element")]
    ImageNotHamiltonian { index: usize },
    #[error("momentum map equation fails on basis element {index}")]
    NotMomentumMap { index: usize },
    #[error("alpha is not a primitive of omega")]
    NotPrimitive,
    #[error("kernel mismatch: {0}")]
    KernelMismatch(String),

    #[error("Ad is not an automorphism on basis pair ({i},{j})")]
    NotAutomorphism { i: usize, j: usize },
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("rho_V does not intertwine the action of basis element {index}")]
    IntertwiningViolation { index: usize },
    #[error("pulled-back cocycle is not invariant on basis pair ({i},{j})")]
    CocycleInvarianceViolation { i: usize, j: usize },
    #[error("rho_V moves the invariant vector with index {index}")]
    InvariantsNotFixed { index: usize },
    #[error("kappa(g)(e_{index}) leaves the invariant vectors")]
    ValueOutsideInvariants { index: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("subspace is not central")]
    NotCentral,
    #[error("multiplication is not associative on basis triple ({i},{j},{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("random generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("identity check failed: {0}")]
    IdentityFailure(String),

    #[error("parse error at {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("validation error at {path}: {source}")]
    Validation { path: String, source: Box<Error> },
}

impl Error {
    /// True for input-validation failures (malformed or inconsistent data),
    /// false for mathematical failures of a construction on valid data.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation { .. }
                | Error::DimensionMismatch { .. }
                | Error::AntisymmetryViolation { .. }
                | Error::JacobiViolation { .. }
                | Error::HomViolation { .. }
                | Error::BracketViolation { .. }
                | Error::NotAutomorphism { .. }
                | Error::NotInvertible(_)
                | Error::IntertwiningViolation { .. }
                | Error::CocycleInvarianceViolation { .. }
                | Error::InvariantsNotFixed { .. }
                | Error::NotMomentumMap { .. }
                | Error::NotAssociative { .. }
        )
    }

    pub(crate) fn at(self, path: impl Into<String>) -> Error {
        match self {
            e @ (Error::Parse { .. } | Error::Validation { .. }) => e,
            e => Error::Validation {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }
}

fn join(v: &[Rational]) -> String {
    v.iter()
        .map(crate::linear::format_rational)
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
