pub mod channel;
pub mod error;
pub mod floquet;
pub mod io;
pub mod kp1d;
pub mod numerics;
pub mod params;
pub mod secular;
pub mod wkb;

pub use error::{Error, Result};
