pub mod error;
pub mod experiments;
pub mod fields;
pub mod kernels;
pub mod mixed_norms;
pub mod operator;
pub mod smoothness;
pub mod steklov;

#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
