use thiserror::Error;

/// Failure raised by an element while advancing one step.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum StepError {
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("input out of range: {0}")]
    InputRange(String),
}

/// A dangling connection found by [`StreamNet::validate`](crate::StreamNet::validate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    UnwiredInput { element: String, node: String },
    UnwiredOutputPort { port: String },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::UnwiredInput { element, node } => {
                write!(f, "input node `{element}.{node}` is not wired")
            }
            Diagnostic::UnwiredOutputPort { port } => {
                write!(f, "net output port `{port}` is not wired")
            }
        }
    }
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NetError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown node `{element}.{node}`")]
    UnknownNode { element: String, node: String },
    #[error("unknown net port `{0}`")]
    UnknownPort(String),
    #[error("input node `{element}.{node}` is already wired (indegree must be one)")]
    IndegreeViolation { element: String, node: String },
    #[error("net output port `{0}` is already wired")]
    OutputPortWired(String),
    #[error("width mismatch: `{src}` is {src_width} wide but `{dst}` expects {dst_width}")]
    WidthMismatch {
        src: String,
        src_width: usize,
        dst: String,
        dst_width: usize,
    },
    #[error("invalid graph: {}", join_diagnostics(.0))]
    InvalidGraph(Vec<Diagnostic>),
    #[error("bad step input: {0}")]
    BadStepInput(String),
    #[error("element `{name}` failed: {source}")]
    Element {
        name: String,
        #[source]
        source: StepError,
    },
}
