//! Numerical thresholds shared across the crate.

/// Coefficients below this modulus are dropped to keep elements canonical.
pub const PRUNE: f64 = 1e-14;

/// Smallest admissible eigenvalue of a Schoenberg kernel matrix.
pub const PSD_MIN_EIGENVALUE: f64 = -1e-10;

/// Upper bound for `sum a_g a_h psi(g^{-1} h)` on mean-zero real vectors.
pub const CONDITIONAL_NEGATIVITY: f64 = 1e-10;

/// Negative eigenvalues above this are clamped to zero in PSD square roots.
pub const PSD_SQRT_CLAMP: f64 = -1e-12;

/// Round trip of the dual transform, per coefficient.
pub const ROUND_TRIP: f64 = 1e-12;

/// Identities that hold exactly up to floating point rounding.
pub const EXACT_F64: f64 = 1e-10;

/// Witness re-evaluation and p = 2 closures in the harness.
pub const REPRODUCE: f64 = 1e-9;

/// Exact even-p torus norms against the quadrature fallback.
pub const EVEN_P_GRID: f64 = 1e-8;
