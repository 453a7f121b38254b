//! icx-core: exact integer complexity at scale.
//!
//! The complexity of a positive integer is the least number of 1's needed to
//! write it using additions, multiplications, and parentheses. This crate
//! provides:
//!
//! - [`table`]: byte-packed exact complexity tables with binary persistence
//!   and a brute-force reference oracle;
//! - [`expr`]: expression trees over the constant 1, with reconstruction of
//!   optimal witnesses from a table, rendering, and parsing;
//! - [`digit_bounds`]: certified upper bounds for the marginal cost of
//!   appending a digit in a given base, with applicable witness schemas;
//! - [`synth`]: constructive expression synthesis for arbitrarily large
//!   integers by digit expansion of `(n - n mod k) / k`;
//! - [`defect`]: defect and leader classification, census counts, and a
//!   verification suite for the finite enumerations behind them;
//! - [`analysis`]: discrepancy of remainder point sets, complexity-ratio and
//!   density scans, and the 2^a 3^b 5^c cost check.

pub mod analysis;
pub mod dd;
pub mod defect;
pub mod digit_bounds;
pub mod error;
pub mod expr;
pub mod synth;
pub mod table;

pub use error::{Error, Result};
pub use expr::{reconstruct, Expression};
pub use table::{
    brute_oracle, build_table, load_table, save_table, BruteOracle, ComplexityTable, TableBuilder,
};
