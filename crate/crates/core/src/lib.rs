pub mod cli;
pub mod erasure;
pub mod error;
pub mod groups;
pub mod hsp;
pub mod landauer;
pub mod qstate;
pub mod simplify;

pub use error::{Error, Result};
