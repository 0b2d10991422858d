use crate::efa::PruneIteration;

/// Everything that can go wrong in the library.
///
/// Variants are split into two broad families so the CLI can map them to
/// exit codes: input/configuration problems (`is_validation() == true`)
/// and numerical/computation failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("row {row}, column '{column}': cannot parse '{value}' as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} (occupation '{code}'), column '{column}': value {value} outside [0, 100]")]
    OutOfRange {
        row: usize,
        code: String,
        column: String,
        value: f64,
    },

    #[error("duplicate occupation code '{0}'")]
    DuplicateOccupation(String),

    #[error("missing required column '{0}'")]
    MissingColumn(String),

    #[error("unknown item '{0}'")]
    UnknownItem(String),

    #[error("unknown scale '{0}'")]
    UnknownScale(String),

    #[error("empty column selection")]
    EmptyColumnSet,

    #[error("need at least {needed} complete rows, found {got}")]
    NotEnoughRows { needed: usize, got: usize },

    #[error("column '{0}' has zero variance")]
    ZeroVariance(String),

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("columns are linearly dependent: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("factor retention is degenerate: {retained} of {total} items retained as factors")]
    DegenerateRetention { retained: usize, total: usize },

    #[error("fewer than {needed} items left after pruning ({got} remain)")]
    TooFewItemsAfterPruning {
        needed: usize,
        got: usize,
        trail: Vec<PruneIteration>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by bad input or configuration, as opposed to
    /// numerical failures discovered mid-computation.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::ZeroVariance(_)
                | Error::NotSymmetric { .. }
                | Error::EigenFailure
                | Error::RankDeficient { .. }
                | Error::DegenerateRetention { .. }
                | Error::TooFewItemsAfterPruning { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
