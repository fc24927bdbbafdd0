use thiserror::Error;

/// Errors raised by ingestion, fitting, inversion and diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("column `{0}` not found in header")]
    NamedColumnMissing(String),

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a finite real")]
    Parse { row: usize, column: String, value: String },

    #[error("dataset has no observations")]
    EmptyDataset,

    #[error("column lengths differ: {0}")]
    LengthMismatch(String),

    #[error("non-finite value at row {row}")]
    NonFinite { row: usize },

    #[error("term syntax error: {0}")]
    TermSyntax(String),

    #[error("duplicate term `{0}`")]
    DuplicateTerm(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("term `{term}` is undefined at row {row}")]
    Domain { row: usize, term: String },

    #[error("{rows} observations cannot determine {cols} coefficients")]
    Underdetermined { rows: usize, cols: usize },

    #[error("singular system (pivot {pivot})")]
    SingularSystem { pivot: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("self-weighting mean undefined: sum of observations is zero")]
    MeanUndefined,

    #[error("alpha_0 is zero; no explicit form exists")]
    ConversionUndefined,

    #[error("no solution at {at}")]
    NoSolutionAtPoint { at: f64 },

    #[error("pole at {at}")]
    PoleAtPoint { at: f64 },

    #[error("conic is not a real ellipse")]
    NotAnEllipse,

    #[error("conic has zero constant term and cannot be written as `... = 1`")]
    NotRepresentable,

    #[error("law-of-cosines argument {arg} outside [-1, 1]")]
    TriangleViolation { arg: f64 },

    #[error("model has no error component (perfect fit)")]
    PerfectFit,

    #[error("fit has no intercept")]
    InterceptRequired,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
