pub mod cob;
pub mod annulus;
pub mod arc;
pub mod chebyshev;
pub mod coeff;
pub mod complex;
pub mod error;
pub mod linalg;
pub mod modp;
pub mod projector;
pub mod tangle;
pub mod tl;
pub mod verify;

pub use coeff::{FieldElem, LaurentPoly};
pub use error::{Error, Result};
pub use tangle::FlatTangle;
pub use tl::TLElement;
