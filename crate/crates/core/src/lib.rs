pub mod cli;
pub mod error;
pub mod integrator;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod prequantum;
pub mod shapes;
pub mod spaces;
pub mod symmetry;
pub mod verify;

pub use error::{PqError, Result};
