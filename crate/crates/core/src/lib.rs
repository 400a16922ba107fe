pub mod cli;
pub mod corpus;
pub mod error;
pub mod family;
pub mod linalg;
pub mod measure;
pub mod newton;
pub mod output;
pub mod spectral_flow;
pub mod trace_formula;

pub use error::{Error, Result};
pub use family::{FamilyKind, FamilySpec, ObservableFamily, UnitaryFamily};
pub use linalg::{ComplexMatrix, EigenPair};
pub use num_complex::Complex64;
