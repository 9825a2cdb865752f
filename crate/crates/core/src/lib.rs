pub mod algebra;
pub mod calabi;
pub mod ch_metrics;
pub mod cli;
pub mod curvature;
pub mod domains;
pub mod error;
pub mod flag;
pub mod inducibility;
pub mod psd;
pub mod verify;

pub use error::{Error, Result};
