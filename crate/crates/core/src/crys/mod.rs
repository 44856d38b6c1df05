//! Crystalline data, module elements, and the `(1 - phi) y = f` solver.

pub mod element;
pub mod psi_one;
pub mod rep;
pub mod solver;

pub use element::{apply_phi, apply_psi, one_minus_phi, ModuleElement};
pub use psi_one::PsiOneElement;
pub use rep::CrysRep;
pub use solver::{delta_map, force_delta_zero, kernel_basis, solve_one_minus_phi, DeltaEntry, DeltaReport, KernelElement, Solution};
