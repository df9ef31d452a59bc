pub mod error;
pub mod exactalg;

pub use error::{Error, Result};
pub mod classical;
pub mod mindex;
pub mod deform;
pub mod numroots;
pub mod spectral;
pub mod cli;
