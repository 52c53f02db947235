pub mod bounds;
pub mod characters;
pub mod error;
pub mod ffield;
pub mod fqpoly;
pub mod intarith;
pub mod modstruct;
pub mod search;

pub use error::{Error, Result};
