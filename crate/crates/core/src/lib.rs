pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod special_functions;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
