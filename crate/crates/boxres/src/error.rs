use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A quantity violates its mathematical domain (e.g. a radius ≤ 0 or a
    /// non-positive resonance energy).
    #[error("domain error: {0}")]
    Domain(String),

    /// Integration or solver parameters fail validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An energy bracket does not contain a sign change of the boundary
    /// amplitude.
    #[error("bracket [{lo}, {hi}] contains no eigenvalue of branch {branch}")]
    EmptyBracket { lo: f64, hi: f64, branch: usize },

    /// An energy bracket contains more than one eigenvalue; the caller must
    /// refine it before the root is well defined.
    #[error("bracket [{lo}, {hi}] contains {count} eigenvalues; expected exactly one")]
    AmbiguousBracket { lo: f64, hi: f64, count: usize },

    /// Branch continuation lost its eigenvalue while scanning box sizes.
    #[error("branch {branch} lost its bracket at box size {box_size}: {reason}")]
    BracketLost {
        branch: usize,
        box_size: f64,
        reason: String,
    },

    /// An eigenstate no longer reproduces under re-shooting (wrong node count
    /// or non-vanishing boundary amplitude).
    #[error("stale eigenstate: {0}")]
    StaleState(String),

    /// The width formula denominator vanished.
    #[error("width denominator within {0:e} of zero; width is singular here")]
    SingularWidth(f64),

    /// Too few phase-shift samples for a fit.
    #[error("need at least {needed} samples in the fit window, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// The fitted width does not fit inside the requested energy window.
    #[error("fitted width {width:e} exceeds the window span {span:e}; the window is ill-posed")]
    IllPosedWindow { width: f64, span: f64 },

    /// Nonlinear refinement failed; the coarse grid optimum is reported.
    #[error("fit refinement did not converge; best grid point e_gamma={e_gamma}, width={width:e}")]
    FitNotConverged { e_gamma: f64, width: f64 },

    /// The two-point asymptotic match stayed degenerate after retries.
    #[error("asymptotic match determinant stayed below {0} after retries")]
    DegenerateMatch(f64),

    /// Config file parse or range failure, with its line number.
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    /// Refusing to overwrite an existing output file without --force.
    #[error("output file {0} exists; pass --force to overwrite")]
    WouldOverwrite(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
