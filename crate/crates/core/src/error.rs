use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator of linear-fractional map vanishes (|gamma z + delta| = {0:e})")]
    DenominatorVanishes(f64),
    #[error("linear-fractional map has both numerator and denominator identically zero")]
    DegenerateMap,
    #[error("sup-norm is infinite: |x2| >= 1 and x1 x2 != x3")]
    NormInfinite,
    #[error("pole on the unit circle at grid angle {0}")]
    PoleOnBoundary(f64),
    #[error("argument {0} lies outside the open unit disc")]
    OutsideDisc(String),
    #[error("interpolation nodes coincide")]
    CoincidentNodes,
    #[error("two-point Pick problem infeasible: rho(targets) = {targets} > rho(nodes) = {nodes}")]
    PickInfeasible { targets: f64, nodes: f64 },
    #[error("|x3| = {0} is on (or outside) the unit circle; canonical beta pair is singular")]
    OnTorusX3(f64),
    #[error("grid size {got} is below the minimum {min}")]
    InvalidGrid { got: usize, min: usize },
    #[error("radius {0} must lie in (0, 1)")]
    InvalidRadius(f64),
    #[error("tolerance band {0} must be finite and nonnegative")]
    InvalidBand(f64),
    #[error("interpolation node lambda0 = {0} must satisfy 0 < |lambda0| < 1")]
    InvalidNode(String),
    #[error("point lies outside the open domain (margin {0:e})")]
    OutsideDomain(f64),
    #[error("two-point problem is infeasible (margin {0:e})")]
    InfeasibleProblem(f64),
    #[error("no strategy produced a verified interpolant: {0}")]
    ConstructionIncomplete(String),
    #[error("map has {got} components, target needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no contractive Schur-class completion found (best grid norm {0})")]
    WitnessNotConstructed(f64),
}
