//! Exact analysis of multivariate stationary subdivision schemes with
//! dilation `mI`: polynomial generation and reproduction degrees from the
//! mask symbol, plus an exact subdivision engine to check them against.

pub mod analysis;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod laurent;
pub mod mask;
pub mod multi_index;
pub mod rational;
pub mod schemes;

pub use analysis::{analyze, AnalysisReport, ParamShift, Witness};
pub use engine::{cascade, stepwise_oracle, subdivide_once, GridData, PolyFunc};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use mask::{read_mask, write_mask, Mask};
pub use multi_index::{IndexBox, MultiIndex};
pub use rational::Rational;
