use std::fmt;
use std::path::PathBuf;

/// Where in the mesh a failure was detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Cell1d(isize),
    Cell2d(isize, isize),
    /// Interface between 1-D cells `i-1` and `i`.
    Face1d(isize),
    /// x-face `fi` (between cells `fi-1` and `fi`) on row `j`.
    XFace(isize, isize),
    /// y-face `fj` (between cells `fj-1` and `fj`) on column `i`.
    YFace(isize, isize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Cell1d(i) => write!(f, "cell {i}"),
            Location::Cell2d(i, j) => write!(f, "cell ({i}, {j})"),
            Location::Face1d(i) => write!(f, "interface {i}"),
            Location::XFace(i, j) => write!(f, "x-face ({i}, {j})"),
            Location::YFace(i, j) => write!(f, "y-face ({i}, {j})"),
        }
    }
}

fn fmt_location(at: &Option<Location>) -> String {
    match at {
        Some(loc) => format!(" at {loc}"),
        None => String::new(),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("inadmissible state: {quantity} = {value:e}{}", fmt_location(.at))]
    Inadmissible {
        quantity: &'static str,
        value: f64,
        at: Option<Location>,
    },

    #[error("RK stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite value after step {step}{}", fmt_location(.at))]
    NonFinite { step: usize, at: Option<Location> },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown problem '{0}'")]
    UnknownProblem(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", .path.display())]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn inadmissible(quantity: &'static str, value: f64) -> Self {
        Error::Inadmissible {
            quantity,
            value,
            at: None,
        }
    }

    /// Attaches a mesh location to an admissibility error that does not carry one yet.
    pub fn located(self, loc: Location) -> Self {
        match self {
            Error::Inadmissible {
                quantity,
                value,
                at: None,
            } => Error::Inadmissible {
                quantity,
                value,
                at: Some(loc),
            },
            other => other,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical solution itself (as opposed to setup or I/O).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Inadmissible { .. } | Error::Stage { .. } | Error::NonFinite { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
