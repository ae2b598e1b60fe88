/// Errors from spec validation and graph generation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RandError {
    #[error("bad spec: {0}")]
    BadSpec(String),
}
