use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at token {token}: {message}")]
    Syntax { token: usize, message: String },

    #[error("range error at token {token}: {message}")]
    Range { token: usize, message: String },

    #[error("index out of range: triangle {t} (n = {n})")]
    IndexOutOfRange { t: usize, n: usize },

    #[error("work budget exceeded: {current} + {requested} bits > {budget} bits")]
    BudgetExceeded { requested: u64, current: u64, budget: u64 },

    #[error("deadline exceeded")]
    DeadlineExceeded,

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("vertex {vertex} has degree {degree}; the path walk needs degree <= 2")]
    DegreeTooHigh { vertex: usize, degree: usize },

    #[error("surface is not connected ({components} components)")]
    NotConnected { components: usize },

    #[error("3n + x is odd (n = {n}, x = {x})")]
    Parity { n: usize, x: usize },

    #[error("component {i} out of range (c = {c})")]
    ComponentOutOfRange { i: usize, c: usize },

    #[error("{}", invalid_surface_message(*.input, *.violations))]
    InvalidSurface { input: Option<usize>, violations: usize },

    #[error("invalid invariant triple: {0}")]
    InvalidTriple(String),

    #[error("unsupported family spec: {0}")]
    UnsupportedSpec(String),
}

fn invalid_surface_message(input: Option<usize>, violations: usize) -> String {
    match input {
        Some(i) => format!("input {i} is not a surface ({violations} violations)"),
        None => format!("input is not a surface ({violations} violations)"),
    }
}
