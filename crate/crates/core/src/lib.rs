//! Exact combinatorics, generating functions and large-deviation rate
//! functions for the moments of increasing-subsequence counts `Z_{n,k}`.
//!
//! Module map:
//! - [`numkernel`]: exact rationals, log-space reals, binomials.
//! - [`ulam_exact`]: `E[Z_{n,k}]`, `E[Z_{n,k} Z_{n,l}]` and the arrays `A`, `Ã_r`.
//! - [`perm_oracle`]: brute-force enumeration over permutations and lattice walks.
//! - [`genfun`]: truncated multivariate power series and contour quadrature.
//! - [`elliptic3`]: the three-variable squared-multinomial generating function.
//! - [`ratefun`]: rate functions, implicit equations and the Laplace optimizer.
//! - [`solvable`]: the small-sums model, replica formulas and partitions.

pub mod elliptic3;
pub mod error;
pub mod genfun;
pub mod limits;
pub mod numkernel;
pub mod perm_oracle;
pub mod quad;
pub mod ratefun;
pub mod solvable;
pub mod ulam_exact;

pub use error::{Error, Result};
pub use limits::Limits;
pub use numkernel::{ExactRational, LogReal};
