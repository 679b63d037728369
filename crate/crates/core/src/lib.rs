pub mod capture;
pub mod distance;
pub mod environment;
pub mod error;
pub mod evaluation;
pub mod generation;
pub mod geometry;
pub mod io;
pub mod raster;
pub mod ridge;
pub mod rng;
pub mod subject;

pub use error::{Error, Result};
