pub mod angular;
pub mod error;
pub mod io;
pub mod measures;
pub mod optim;
pub mod phasespace;
pub mod random;
pub mod search;
pub mod stellar;

pub use angular::{HalfInt, Spin};
pub use error::{Error, Result};
pub use stellar::{Constellation, SpinState, Star};

pub use num_complex;
