//! Positive computable structure theory on finite structures: codings,
//! positive diagrams, the Σᵖ₁ formula language, enumeration operators,
//! positive jumps, generic enumerations and positive interpretations.

pub mod coding;
pub mod compiler;
pub mod corpus;
pub mod diagram;
pub mod enumeration;
pub mod error;
pub mod formula;
pub mod generic;
pub mod interp;
pub mod iso;
pub mod jump;
pub mod operator;
pub mod structure;

pub use error::{Error, Result};
