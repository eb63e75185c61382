use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A datum failed one of the root-system axioms at construction.
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    /// Two elements from different data were combined.
    #[error("elements belong to different data")]
    DatumMismatch,
    /// An operation that needs roots was called on a torus datum.
    #[error("the root system is empty")]
    EmptyRootSystem,
    /// A vector that must be dominant is not.
    #[error("input vector is not dominant")]
    NonDominantInput,
    /// The subgroup W_J generated by the requested simple reflections is infinite.
    #[error("W_J is infinite for J = {0:?}")]
    InfiniteWJ(Vec<usize>),
    /// The parahoric type J is not stable under the Frobenius action on the simple reflections.
    #[error("J = {0:?} is not sigma-stable")]
    NonSigmaStableJ(Vec<usize>),
    /// The twist is not compatible with the datum (wrong rank, or the linear part
    /// does not permute the root system).
    #[error("incompatible twist: {0}")]
    IncompatibleTwist(String),
    /// The lattice map does not carry the root system across the quotient.
    #[error("incompatible quotient map: {0}")]
    IncompatibleQuotient(String),
    /// No positive root alpha with lambda + alpha_vee below mu exists; the
    /// preconditions of the step were violated.
    #[error("no ascent step from the given stratum")]
    NoStep,
    /// An orbit-summed ascent left the dominant cone.
    #[error("ascent step produced a non-dominant vector {0:?}")]
    NonDominantResult(Vec<i64>),
    /// The pair (c, d) violates tau(c)c + d + tau(d) = 0.
    #[error("unipotent parameters violate the hermitian constraint")]
    ConstraintViolated,
    /// The matrix is not in the ambient loop group (det or form check failed).
    #[error("matrix is not in the loop group: {0}")]
    NotInLoopGroup(String),
    /// No monomial lift of the translation element was found.
    #[error("no monomial translation lift found")]
    LiftNotFound,
    /// x = 0 was passed to a branch that inverts x.
    #[error("x = 0 has no inverse")]
    ZeroDenominator,
    /// The requested standard datum kind is not supported.
    #[error("unsupported datum kind: {0}")]
    UnsupportedKind(String),
    /// The requested coefficient field is not supported.
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    /// Case (3) requires a ramified quadratic extension.
    #[error("this case is only defined for the ramified extension")]
    RamifiedOnly,
    /// An internal search exceeded its hard cap; indicates a bug or bad input.
    #[error("internal cap exceeded: {0}")]
    CapExceeded(String),
}
