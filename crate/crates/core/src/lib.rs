pub mod cli;
pub mod csp;
pub mod cube;
pub mod error;
pub mod io;
pub mod learn;
pub mod liftmat;
pub mod pseudo;
pub mod rng;
pub(crate) mod sdp;
pub mod sos;
pub mod symmat;

pub use error::{Error, Result};
