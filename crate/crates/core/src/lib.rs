//! Numerical engine for skeletal modular tensor categories: fusion-tree hom spaces,
//! string-diagram evaluation, modular data, Frobenius algebras and the Cardy condition.

pub mod builtins;
pub mod calculus;
pub mod cardy;
pub mod category;
pub mod double;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod frobenius;
pub mod hom;
pub mod modular;
pub mod numeric;
pub mod object;
pub mod operators;
pub mod report;
pub mod sl2z;
pub mod suite;
pub mod validate;

pub use category::{load_category, parse_category, CategoryData, Label};
pub use error::{Error, Result};
pub use hom::{HomMorphism, TreeBasis};
pub use report::CheckReport;
