//! Quadrature, root finding and ODE integration.

pub mod ode;
pub mod quad;
pub mod roots;

pub use ode::{Dopri5, StepStats};
pub use quad::{integrate, QuadOptions, QuadResult};
pub use roots::bracket_root;

/// Average of `f` over `[a, b]` from a single Kronrod panel.
///
/// Used for divided differences `(g(b) - g(a)) / (b - a)` where `g' = f` is
/// known in closed form; it avoids the cancellation of the direct quotient.
pub fn panel_mean<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return f(a);
    }
    quad::gk21(&mut f, a, b).0 / (b - a)
}
