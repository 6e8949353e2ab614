pub mod error;
pub mod gseries;
pub mod hyper;
pub mod matrix;
pub mod perm;
pub mod perturbation;
pub mod sample;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
