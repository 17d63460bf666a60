use thiserror::Error;

/// Errors produced by the pricing library.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series was truncated before reaching the requested tolerance.
    #[error("series truncation failure: {context} (terms used: {terms_used}, last term: {last_term:.3e})")]
    Truncation {
        context: String,
        terms_used: usize,
        last_term: f64,
    },

    /// An ODE integration left the admissible region or blew up.
    #[error("ODE failure: {0}")]
    Ode(String),

    /// A root search failed to bracket or converge.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// The Volterra solver failed at a specific node.
    #[error("boundary solve failed at node {node}: {reason}")]
    BoundaryNode { node: usize, reason: String },

    /// The finite-difference oracle failed to converge.
    #[error("finite-difference oracle failed: {0}")]
    Oracle(String),

    /// A model was constructed with inconsistent or inadmissible parameters.
    #[error("model error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }
}
