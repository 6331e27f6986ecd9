//! Finite reflexive graphs, their box and categorical products, presheaves
//! over the graph index categories, and a mechanized classification of the
//! biclosed monoidal structures on reflexive graphs.

pub mod classify;
pub mod error;
pub mod graph;
pub mod presheaf;
pub mod products;
pub mod verify;

pub use error::{Error, Result};
