use serde::{Deserialize, Serialize};

/// Size caps shared across modules. Every cap bounds a computation whose cost
/// grows exponentially or with big-integer digit length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    /// Exact-mode convolution cap on `k * l * j` (each factor floored at 1).
    pub exact_cap: u64,
    /// Largest `n` for permutation enumeration.
    pub perm_cap: usize,
    /// Largest `k + l` for lattice-walk enumeration.
    pub walk_cap: usize,
    /// Largest total degree for the three-variable generating function.
    pub series_cap: usize,
    /// Largest `n` and `k` accepted by the Monte Carlo subset counter.
    pub mc_n_cap: usize,
    pub mc_k_cap: usize,
    /// First and last node counts for contour quadrature doubling.
    pub contour_min_nodes: usize,
    pub contour_max_nodes: usize,
    /// Convergence threshold between successive quadrature estimates.
    pub contour_tol: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            exact_cap: 20 * 20 * 20,
            perm_cap: 9,
            walk_cap: 10,
            series_cap: 14,
            mc_n_cap: 40,
            mc_k_cap: 8,
            contour_min_nodes: 64,
            contour_max_nodes: 1 << 16,
            contour_tol: 1e-12,
        }
    }
}
