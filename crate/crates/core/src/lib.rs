pub mod error;
pub mod matrix;
pub mod riccati;
pub mod catalog;
pub mod verifier;
pub mod spectral;
pub mod ladder;
pub mod models;

pub use error::{Error, Result};
