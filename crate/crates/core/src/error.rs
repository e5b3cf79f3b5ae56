use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // jets
    #[error("jet is not divisible by t^{shift}: coefficient {index} is nonzero")]
    NonDivisible { shift: usize, index: usize },
    #[error("truncation order exhausted: need order {needed}, have {available}")]
    OrderExhausted { needed: usize, available: usize },
    #[error("jet has zero constant term and cannot be inverted")]
    NotInvertible,

    // polynomials
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("no rewriting scheme covers {0}")]
    RewriterUnavailable(String),

    // linear algebra
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    // representations and catalog
    #[error("convention violation: {0}")]
    ConventionViolation(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("operation needs a finite group")]
    NotFinite,
    #[error("representation `{0}` has no section")]
    NoSection(String),
    #[error("no preimage solver for `{0}`")]
    PreimageUnavailable(String),

    // lifting
    #[error("first component is flat to truncation but component {component} is not")]
    FlatCurve { component: usize },
    #[error("every component is flat to truncation")]
    AllFlat,
    #[error("first component flat to truncation; cannot decide m(c1) >= {needed}")]
    FlatComponent { needed: usize },
    #[error("multiplicity bound violated at component {component}: m = {found}, expected >= {expected}; curve leaves the orbit space")]
    InternalInconsistency {
        component: usize,
        found: usize,
        expected: usize,
    },
    #[error("restricted Jacobian is rank deficient at the base point ({rank} < {needed})")]
    SingularPoint { rank: usize, needed: usize },
    #[error("curve is inconsistent with the orbit map at order {order}")]
    InconsistentCurve { order: usize },
    #[error("no slice data for the singular point {0}")]
    SliceUnavailable(String),
    #[error("slice embedding has a rank deficient Jacobian ({rank} < {needed})")]
    SliceDegenerate { rank: usize, needed: usize },
    #[error("flatness obstruction: {0}")]
    FlatnessObstruction(String),
    #[error("point is outside the orbit space: {0}")]
    OutsideOrbitSpace(String),
    #[error("recursion exceeded the declared chain length {0}")]
    RecursionLimit(usize),
    #[error("no group element aligns the lifts on overlap {0}")]
    NoMatchingElement(usize),
    #[error("overlap {0} sits at a point where the lift is flat to truncation")]
    FlatOverlap(usize),
    #[error("intervals {0} and {1} do not overlap")]
    NoOverlap(usize, usize),
    #[error("wedge of the input vectors is flat to truncation")]
    FlatWedge,
    #[error("input vector {0} is flat to truncation")]
    FlatVector(usize),
}

impl Error {
    /// Errors that certify the lifting problem cannot be solved as posed,
    /// as opposed to bad input or missing data.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            Error::FlatnessObstruction(_) | Error::FlatOverlap(_) | Error::OutsideOrbitSpace(_)
        )
    }
}
