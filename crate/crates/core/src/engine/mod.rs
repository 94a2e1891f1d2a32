//! Exact subdivision: grids, polynomial sampling, the one-step oracle and
//! the cascade algorithm.

mod grid;
mod oracle;
mod poly;
mod subdivide;

pub use grid::GridData;
pub use oracle::{default_oracle_box, stepwise_oracle, OracleReport};
pub use poly::{param_point, sample_polynomial, PolyFunc};
pub use subdivide::{cascade, subdivide_once, MAX_CASCADE_LEVEL};
