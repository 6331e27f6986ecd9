use thiserror::Error;

use crate::graph::Mode;

/// Errors raised by graph, product, presheaf and verification operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mode mismatch: {left} vs {right}")]
    ModeMismatch { left: Mode, right: Mode },

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("map is not total: expected {expected} images, got {actual}")]
    NotTotal { expected: usize, actual: usize },

    #[error("map image {image} is outside the codomain ({size} vertices)")]
    ImageOutOfRange { image: usize, size: usize },

    #[error("map does not preserve the edge {from} -> {to}")]
    NotAHom { from: String, to: String },

    #[error("homs are not composable: codomain of the first differs from domain of the second")]
    NotComposable,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("`{name}` is not available in {mode} mode")]
    NamedGraphMode { name: String, mode: Mode },

    #[error("unknown named graph `{0}`")]
    UnknownNamedGraph(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("ill-typed diagram: {0}")]
    IllTypedDiagram(String),

    #[error("oracle `{0}` supplies no closure data")]
    MissingClosure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn same_mode(left: Mode, right: Mode) -> Result<Mode> {
    if left == right {
        Ok(left)
    } else {
        Err(Error::ModeMismatch { left, right })
    }
}
