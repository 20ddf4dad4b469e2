pub mod arith;
pub mod cli;
pub mod closed_forms;
pub mod ct_engine;
pub mod error;
pub mod kernels;
pub mod laurent;

pub use arith::{QPoly, QRat};
pub use error::{Error, Result};
pub use laurent::{ExponentVector, MultiLaurent};
