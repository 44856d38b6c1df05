//! Power series, Laurent series in `pi`, and `t`-expansions over `F_n`.

pub mod laurent;
pub mod rigid;
pub mod tseries;

pub use laurent::RigidLaurent;
pub use rigid::{RigidSeries, Tail};
pub use tseries::TSeries;
