//! Verification laboratory for orbital stability of smooth solitary waves of
//! the b-family Camassa-Holm equation `u_t - u_txx + (b+1) u u_x = b u_x u_xx + u u_xxx`.
//!
//! * [`params`]: validated parameters and the scalar kernel `A, B, f, R, P, l`.
//! * [`exact`]: exact polynomial algebra, resultants and Sturm certificates.
//! * [`numeric`]: quadrature, root finding and ODE stepping primitives.
//! * [`orbit`]: level-curve quadrature of the stability functional `Q` and its derivative.
//! * [`profile`]: reconstruction of physical solitary-wave profiles.
//! * [`pde`]: periodic pseudo-spectral evolution and orbital distance.
//! * [`report`]: run configuration and report emission used by the `bchlab` binary.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod numeric;
pub mod orbit;
pub mod params;
pub mod pde;
pub mod profile;
pub mod report;

pub use error::{Error, Result};
pub use params::{KernelValues, WaveParams};
