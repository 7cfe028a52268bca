use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid rank {have} cannot resolve the requested object (needs rank {needed})")]
    Resolution { needed: u32, have: u32 },

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction failed: {reason}")]
    ConstructionFailed {
        reason: String,
        /// Lower bound on the power sum that any admissible polynomial must
        /// reach within the frequency cap, when it proves infeasibility.
        certificate: Option<Infeasibility>,
    },

    #[error("frequency budget exceeded: needed frequency {needed} but cap is {cap}")]
    FrequencyBudgetExceeded { needed: u64, cap: u64 },

    #[error("weight needs more than {n0} blocks, only {depth} built")]
    InsufficientDepth { n0: u32, depth: usize },

    #[error("target not approximable at step {step}: best residual {best_residual:.6e} vs bound {bound:.6e}")]
    TargetNotApproximable { step: usize, best_residual: f64, bound: f64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Proof that no polynomial with at most `frequencies` nonzero coefficients
/// can meet a power-sum bound: `Σ|c|^r ≥ lower_bound ≥ bound`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Infeasibility {
    pub exponent: f64,
    pub bound: f64,
    pub lower_bound: f64,
    pub energy_floor: f64,
    pub frequencies: f64,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "sum |c|^{:.4} >= {:.4e} >= bound {:.4e} (energy >= {:.4e}, <= {:.3e} frequencies)",
            self.exponent, self.lower_bound, self.bound, self.energy_floor, self.frequencies
        )
    }
}
