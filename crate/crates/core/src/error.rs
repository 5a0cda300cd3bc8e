use thiserror::Error;

/// Errors raised by the symbolic engine and the analysis modules built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an expression that is identically zero")]
    DegenerateInput,
    #[error("division by the non-monomial expression `{0}`")]
    NonMonomialDivision(String),
    #[error("cannot differentiate `{0}`: function applied to composite arguments")]
    UnsupportedComposition(String),
    #[error("expression is not polynomial in `{0}`")]
    NonPolynomial(String),
    #[error("jet order {order} exceeds the configured limit {limit}")]
    OrderLimit { order: usize, limit: usize },
    #[error("ill-posed solved form: {0}")]
    IllPosedSolvedForm(String),
    #[error("determining equation is not linear and homogeneous in the unknowns: {0}")]
    NotLinear(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("[{i}, {j}] does not lie in the span of the basis")]
    NotClosed { i: usize, j: usize },
    #[error("basis elements are linearly dependent")]
    LinearlyDependent,
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),
    #[error("spectrum of {matrix} does not split over the rationals (unresolved factor {factor})")]
    UnsupportedSpectrum { matrix: String, factor: String },
    #[error("generator `{generator}` is neither a translation nor a scaling (coefficient of {coordinate}: {coefficient})")]
    UnsupportedGeneratorShape {
        generator: String,
        coordinate: String,
        coefficient: String,
    },
    #[error("vector field is not affine in the base coordinates: {0}")]
    NotAffine(String),
    #[error("cannot evaluate {0} at a rational point")]
    IrrationalValue(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
