pub mod addpoly;
pub mod charsum;
pub mod construct;
pub mod error;
pub mod ffield;
pub mod laurent;
pub mod random;
pub mod text;

pub use error::{Error, Result};
pub use ffield::{CharExp, FieldCtx, FqElem};
