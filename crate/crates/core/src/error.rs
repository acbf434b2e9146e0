use thiserror::Error;

/// Errors raised by the rate engine and its I/O layers.
#[derive(Debug, Error)]
pub enum IcdError {
    /// Two of the atoms sit on top of each other (or closer than the distance tolerance).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A Green's tensor was requested at coincident source and field points.
    #[error("Green's tensor is singular: separation {separation:e} m is below the coincidence tolerance")]
    Singular { separation: f64 },

    /// A physical parameter is outside its domain (negative polarizability, zero frequency, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The inputs to a collinear closed form do not describe a collinear arrangement.
    #[error("not collinear: {0}")]
    NotCollinear(String),

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    /// A scan or fit request that cannot produce any output.
    #[error("invalid request: {0}")]
    InvalidRequest(String),

    /// Problems with external data files (malformed CSV, bad metadata).
    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl IcdError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        IcdError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, IcdError>;
