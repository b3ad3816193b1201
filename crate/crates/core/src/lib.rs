pub mod background;
pub mod closedform;
pub mod error;
pub mod mana;
pub mod oracle;
pub mod quadrature;
pub mod series;
pub mod specfn;
pub mod verify;

pub use error::{Error, Result};
