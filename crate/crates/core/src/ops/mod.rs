//! The operators `phi`, `psi`, `gamma_a`, `nabla_i`, `nabla_0 / (gamma_n - 1)`,
//! the localizations `phi^{-n}` and the measure layer on `psi = 0` series.

pub mod compose;
pub mod frobenius;
pub mod localize;
pub mod mellin;
pub mod nabla;
pub mod psi;

pub use compose::{compose, gamma_act, minus_one};
pub use frobenius::{frobenius, q_series};
pub use localize::{phi_inverse_n, phi_inverse_n_laurent, phi_inverse_by_substitution};
pub use mellin::{convolve, measure_of, series_of, PointMeasure, UnitMeasure};
pub use nabla::{nabla, nabla0_over_gamma, nabla_chain, t_series};
pub use psi::{psi, psi_by_eta_sum, psi_laurent};
