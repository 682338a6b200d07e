use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function has an empty domain")]
    EmptyDomain,
    #[error("polyhedral function needs at least one affine piece")]
    NoPieces,
    #[error("non-finite or NaN coefficient in {0}")]
    BadCoefficient(&'static str),
    #[error("interval [{lo}, {hi}] is malformed")]
    BadInterval { lo: f64, hi: f64 },
    #[error("undefined sum of +inf and -inf")]
    IndefiniteSum,
    #[error("cell complex needs at least two strictly increasing finite nodes")]
    BadComplex,
    #[error("structures live on different cell complexes")]
    ComplexMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {0} has no cell on the requested side")]
    BoundaryNode(usize),
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("invalid cell bounds on cell {0}: lower exceeds upper")]
    BadCellBounds(usize),
    #[error("invalid measure: {0}")]
    BadMeasure(String),
    #[error("derivative with respect to the base measure requested for a measure with atoms")]
    AtomsPresent,
    #[error("no continuous selection: empty feasible set at node {node}")]
    Infeasible { node: usize },
    #[error("invalid integrand: {0}")]
    BadIntegrand(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
