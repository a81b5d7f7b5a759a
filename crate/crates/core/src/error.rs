use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("graph is outside the class: {vertex_count} vertices, height {height}, isolated vertices: {has_isolated}")]
    NotInClass {
        vertex_count: usize,
        height: usize,
        has_isolated: bool,
    },

    /// No perfect matching between the cover and its complement; `hall_set`
    /// is a set of cover vertices with fewer neighbours than members.
    #[error("no perfect matching from {cover:?} onto its complement; deficient set {hall_set:?}")]
    Structure {
        cover: Vec<String>,
        hall_set: Vec<String>,
    },

    #[error("invalid paired labeling: {0}")]
    Labeling(String),

    #[error("pair index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("graph is not unmixed")]
    NotUnmixed,

    #[error("graph is not Cohen-Macaulay")]
    NotCohenMacaulay,

    #[error("complex is not pure")]
    NotPure,

    #[error("capacity exceeded: {actual} {what} (limit {limit})")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("graft specification: {0}")]
    GraftSpec(String),

    /// Two routes that must agree produced different answers.
    #[error("route disagreement: {0}")]
    RouteDisagreement(String),
}

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 2,
            Error::RouteDisagreement(_) => 3,
            _ => 1,
        }
    }
}
