use thiserror::Error;

use crate::field::Gf;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside the supported range 1..=16")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {h} with constant term 1")]
    BadModulus { h: u32, modulus: u32 },
    #[error("value {value} is not an element of GF(2^{h})")]
    NotInField { value: u32, h: u32 },
    #[error("fields differ: GF(2^{0}) vs GF(2^{1})")]
    MixedFields(u32, u32),
    #[error("division by zero")]
    DivisionByZero,

    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error("points do not span a plane (they are collinear or repeated)")]
    DegenerateSpan,
    #[error("planes coincide, so they do not meet in a line")]
    EqualPlanes,

    #[error("conic ({alpha}, {beta}, {lambda}) is degenerate: Tr(alpha*beta) must be 1 and lambda nonzero")]
    DegenerateConic { alpha: Gf, beta: Gf, lambda: Gf },
    #[error("composition undefined: both conics have lambda = {0}")]
    EqualLambda(Gf),
    #[error("closure produced two different conics with lambda = {lambda}")]
    LambdaCollision { lambda: Gf },
    #[error("conics with lambda {first} and {second} meet")]
    ConicsMeet { first: Gf, second: Gf },
    #[error("closure exceeds q-1 = {0} conics")]
    ClosureTooLarge(u32),
    #[error("empty seed set")]
    EmptySeed,
    #[error("Tr(alpha) must be 1 for a Denniston arc, got alpha = {0}")]
    DennistonAlpha(Gf),
    #[error("set is not an additive subgroup with zero removed")]
    NotSubgroup,
    #[error("lambda = {0} already lies in the lambda group of the arc")]
    LambdaInGroup(Gf),
    #[error("operation needs an arc of degree at least {need}, got {got}")]
    DegreeTooSmall { need: usize, got: usize },

    #[error("plane {0:?} passes through the vertex of the cone")]
    PlaneThroughVertex([u32; 4]),
    #[error("plane {0:?} passes through the projection point, so it has no standard equation")]
    PlaneContainsP([u32; 4]),
    #[error("plane {0:?} passes through n(0,0,1,0) or x(1,0,0,0); the nuclear inversion is undefined")]
    InversionUndefined([u32; 4]),
    #[error("projection point must lie on the nuclear line and differ from the vertex and from n")]
    BadProjectionPoint,
    #[error("flock planes {0} and {1} have intersecting cone sections")]
    SectionsMeet(usize, usize),
    #[error("two flock planes share the X2 coefficient {0} after normalisation")]
    RepeatedBase(Gf),
    #[error("partial flock is not additive")]
    NotAdditive,

    #[error("lambda_d = {0} lies in H")]
    LambdaDInH(Gf),
    #[error("H must be an additive subgroup containing 1")]
    BadGroup,
    #[error("rho = 0 is not allowed")]
    ZeroRho,
    #[error("rho = {rho}: the new conic meets the Denniston conic with lambda = {lambda}")]
    RhoRejected { rho: Gf, lambda: Gf },
    #[error("rho = {rho} gives beta = {beta} with Tr(beta) = 0, so the new conic is degenerate")]
    BetaTrace { rho: Gf, beta: Gf },
    #[error("the Denniston base with alpha = beta = 1 needs Tr(1) = 1, which fails for even h = {0}")]
    EvenDegreeBase(u32),
    #[error("exhaustive scan and linear solve disagree")]
    SolverMismatch,

    #[error("malformed input: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
