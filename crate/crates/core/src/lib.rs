//! Finite-precision computations with cyclotomic `(phi, Gamma)`-modules over `Q_p`.
//!
//! The crate implements the operators `phi`, `psi`, `gamma_a`, `nabla` on power
//! series over `Q_p`, the solver for `(1 - phi) y = f` in
//! `D_cris(V) (x) B^+_rig`, Perrin-Riou's exponential `Omega_{V,h}` with its
//! evaluation at the points `zeta_{p^n} - 1`, the Mellin transform relating
//! measures on `Z_p^*` to `psi = 0` series, and rank one Wach modules.

pub mod crys;
pub mod error;
pub mod io;
pub mod maps;
pub mod padic;
pub mod ops;
pub mod params;
pub mod report;
pub mod series;
pub mod suites;
pub mod wach;

pub use crys::{CrysRep, ModuleElement, PsiOneElement};
pub use error::{Error, Result};
pub use padic::{CycloElement, CycloField, Matrix, PadicScalar};
pub use params::Params;
pub use series::{RigidLaurent, RigidSeries, TSeries, Tail};
