//! Exact computer algebra for iterative (Hasse–Schmidt) differential
//! algebra in characteristic p and for q-Mahler difference systems.
//!
//! Module map:
//! - [`exactnum`]: rationals, prime fields, binomials with Lucas reduction
//! - [`polyseries`]: polynomials, rational functions, truncated Laurent series
//! - [`hasse`]: iterative derivations on `k[t]`, `k(t)`, `k((t))`
//! - [`idmod`]: iterative differential modules and the rank-2 obstruction example
//! - [`mahler`]: q-Mahler systems over `Q(z)`
//! - [`relations`]: polynomial relations among truncated series
//! - [`linalg`]: exact elimination over `Q` and `F_p`

pub mod exactnum;
pub mod hasse;
pub mod idmod;
pub mod linalg;
pub mod mahler;
pub mod par;
pub mod polyseries;
pub mod relations;

pub use exactnum::{BigRational, Field, PrimeFieldElem, PrimeModulus, Rationals};
pub use par::Execution;
pub use polyseries::{Poly, RatFun, TruncSeries};
