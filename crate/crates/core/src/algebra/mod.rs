//! Number fields, their elements, complex embeddings and naive heights.

pub mod complex;
pub mod field;
pub mod naive;
pub(crate) mod poly;
pub mod roots;

pub use complex::Complex;
pub use field::{rational_to_string, Embedded, FieldElement, NumberField, DEFAULT_PRECISION};
pub use naive::{naive_height, naive_height_parts};
pub use poly::{content, derivative, eval_rational, resultant};
pub use roots::{certified_roots, RootEnclosure};
