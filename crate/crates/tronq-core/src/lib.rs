//! Tronquée and tritronquée solutions of the third and fourth Painlevé
//! equations.
//!
//! The five supported equation cases are reduced to a single canonical
//! second-order equation
//!
//! ```text
//! h''(w) - h(w) + (1/w) [ (β₂-β₁) h(w) + (β₂+β₁) h'(w) ] = g(w, h, h')
//! ```
//!
//! whose solutions decaying on rays in the right half `w`-plane are
//! represented as Borel-summed transseries.  The crate provides:
//!
//! * [`equations`] — the case registry: changes of variables between the
//!   original `(x, y)` and normalized `(w, h)` coordinates, exact
//!   closed-form evaluators for the nonlinearity `g`, and residuals of
//!   every equation involved.
//! * [`series`] — truncated power-series algebra in `1/w`, the recursion
//!   producing the formal solution `h̃₀` and the exponential-level series
//!   `s̃ₖ` of the transseries.
//! * [`borel`] — Borel transform, Padé continuation in the Borel plane,
//!   Laplace quadrature along rays, and the assembled tronquée /
//!   tritronquée evaluators.
//! * [`ode`] — adaptive complex-path integration of the canonical
//!   equation, pole detection and refinement, and recovery of the
//!   transseries constant `C` from sampled solution values.
//! * [`asymptotics`] — closed-form leading profiles `F₀`, their defining
//!   ODEs as residual oracles, and the asymptotic pole-position formulas
//!   with nearest-neighbour matching against observed poles.
//! * [`io`] — JSON/CSV (de)serialization of specs, series, and reports.

pub mod algebra;
pub mod asymptotics;
pub mod borel;
pub mod equations;
pub mod error;
pub mod io;
pub mod ode;
pub mod pade;
pub mod quad;
pub mod series;
pub mod special;

pub use error::Error;

/// Crate-wide complex scalar.
pub type C64 = num_complex::Complex64;

/// Convenience constructor mirroring `Complex64::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
