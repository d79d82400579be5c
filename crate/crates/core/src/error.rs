use thiserror::Error;

use crate::dynamics::FieldState;

pub type Result<T> = std::result::Result<T, SkyrmeError>;

#[derive(Debug, Error)]
pub enum SkyrmeError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("static equation is singular at x = {x}")]
    SingularPoint { x: f64 },

    #[error("static solve did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    SolverFailure {
        iterations: usize,
        best_residual: f64,
    },

    #[error("degenerate Jacobian in relaxation (pivot {pivot:.3e} at row {row})")]
    DegenerateSolve { row: usize, pivot: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("mode index {j} outside 1..={max}")]
    InvalidMode { j: usize, max: usize },

    #[error("integration blew up at t = {t:.6} (max |F| = {max_abs:.3e})")]
    BlowUp {
        t: f64,
        max_abs: f64,
        /// Last finite state before the failing step.
        snapshot: Option<Box<FieldState>>,
    },

    #[error("fluctuation does not vanish at the boundary (|dF| = {value:.3e})")]
    InvalidFluctuation { value: f64 },

    #[error("incompatible grids: {0}")]
    IncompatibleGrid(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("{context}: {source}")]
    Annotated {
        context: String,
        #[source]
        source: Box<SkyrmeError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SkyrmeError {
    /// Machine-readable category, used by the CLI for its error line and exit code.
    pub fn category(&self) -> &'static str {
        match self {
            SkyrmeError::InvalidParameter { .. } => "invalid-parameter",
            SkyrmeError::Domain(_) => "domain",
            SkyrmeError::SingularPoint { .. } => "singular-point",
            SkyrmeError::SolverFailure { .. } => "solver-failure",
            SkyrmeError::DegenerateSolve { .. } => "degenerate-solve",
            SkyrmeError::InvalidProfile(_) => "invalid-profile",
            SkyrmeError::InvalidMode { .. } => "invalid-mode",
            SkyrmeError::BlowUp { .. } => "blow-up",
            SkyrmeError::InvalidFluctuation { .. } => "invalid-fluctuation",
            SkyrmeError::IncompatibleGrid(_) => "incompatible-grid",
            SkyrmeError::Parse { .. } => "parse",
            SkyrmeError::Validation(_) => "validation",
            SkyrmeError::Annotated { source, .. } => source.category(),
            SkyrmeError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "parse" | "validation" | "invalid-parameter" | "invalid-mode" => 2,
            "solver-failure" | "degenerate-solve" | "blow-up" => 3,
            "io" => 4,
            _ => 1,
        }
    }

    pub fn annotate(self, context: impl Into<String>) -> Self {
        SkyrmeError::Annotated {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
