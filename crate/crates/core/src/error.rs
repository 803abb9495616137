use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("number field modulus must have positive degree")]
    ConstantModulus,
    #[error("interval does not isolate exactly one real root")]
    NotIsolating,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("non-finite vector component")]
    NonFinite,
    #[error("zero vector has no line type")]
    ZeroVector,
    #[error("reflection in a plane with light-like normal is not defined")]
    LightLikeNormal,
    #[error("invalid ellipsoid: need a1 > a2 > 0 and a3 > 0")]
    InvalidEllipsoid,
    #[error("parameter {0} is a pole of the confocal family")]
    DegenerateParameter(f64),
    #[error("elliptic coordinates are degenerate at this point")]
    DegeneratePoint,
    #[error("point is not strictly inside the ellipsoid")]
    OutsideDomain,
    #[error("coordinates give a negative square ({0:e})")]
    InvalidCoords(f64),
    #[error("line does not meet the interior of the ellipsoid")]
    NoInteriorIntersection,
    #[error("tangency equation has no real roots")]
    ComplexCaustics,
    #[error("line type and caustic intervals match no admissible configuration")]
    InconsistentConfiguration,
    #[error("ray has no forward intersection with the ellipsoid")]
    NoForwardIntersection,
    #[error("reflection undefined at a tropic point for a transversal ray")]
    UndefinedReflection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("curve is singular: a caustic parameter coincides with a1, a2, -a3 or 0")]
    SingularCurve,
    #[error("caustic parameter must be nonzero")]
    ZeroGamma,
    #[error("series order {have} too small, need {need}")]
    InsufficientOrder { have: usize, need: usize },
    #[error("parameters do not belong to case {0}")]
    CaseMismatch(String),
    #[error("caustic parameter outside the admissible range")]
    GammaOutOfRange,
    #[error("P is negative inside integration interval {0}")]
    NonpositiveIntegrand(usize),
    #[error("period must be at least 3")]
    PeriodTooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("{0}")]
    ThresholdViolation(String),
    #[error("curve is singular")]
    SingularCurve,
    #[error("input solution does not verify")]
    UnverifiedInput,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("empty scan range: {0}")]
    EmptyRange(String),
    #[error("tangent line search did not converge (best residual {0:e})")]
    NoConvergence(f64),
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Pell(#[from] PellError),
}
