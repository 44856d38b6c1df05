//! Perrin-Riou's exponential, its evaluation maps, twisting and the crystalline pairing.

pub mod duality;
pub mod exp;
pub mod inclu;
pub mod omega;
pub mod recip;
pub mod twist;

pub use duality::{check_reciprocity_evaluation, DualPair, ReciprocityChecks};
pub use exp::{exp_eval, exp_eval_formula};
pub use inclu::{inclusion_probe, InclusionProbe};
pub use omega::{omega, reduce_mod_lines, t_pow, Omega};
pub use recip::{check_recip_taylor, RecipOutcome, SignConvention};
pub use twist::{twist_element, twist_pair, TwistPair};
