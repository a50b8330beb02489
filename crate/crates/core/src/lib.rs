//! Traces, cotraces and the scalar enrichment of compact closed bicategories,
//! computed over finite relations, spans of finite sets and finite-set-valued
//! profunctors.

pub mod bicat;
pub(crate) mod equivariant;
pub mod error;
pub mod file;
pub mod fincat;
pub mod finset;
pub mod label;
pub mod laws;
pub mod prof;
pub mod rel;
pub mod span;

pub use bicat::{Bicategory, Concrete, Instance, IsoSearch, Lift};
pub use error::{Error, Limits, Result};
pub use fincat::{FinCat, FinFunctor};
pub use finset::FinSet;
pub use prof::{Prof, Profunctor};
pub use rel::{Rel, RelCell};
pub use span::{Span, SpanCell};
