//! Scalars, cyclotomic fields and small matrices over `Q_p`.

pub mod cyclo;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod snf;

pub use cyclo::{CycloElement, CycloField};
pub use linalg::Matrix;
pub use scalar::PadicScalar;
