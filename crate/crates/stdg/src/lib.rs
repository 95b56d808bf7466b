//! Space-time discontinuous Galerkin solver for evolutionary equations
//!
//! This crate solves abstract evolutionary problems of the form
//!
//! ```text
//! (d/dt M0 + M1 + A) U = F,    U(0) = x0,
//! ```
//!
//! where `M0`, `M1` are bounded selfadjoint operators and `A` is
//! skew-selfadjoint. Indicator-valued `M0`, `M1` produce systems whose type
//! (hyperbolic / parabolic / elliptic) changes across spatial regions; all
//! three types are handled by one scheme without operator splitting.
//!
//! The time discretisation is a discontinuous Galerkin method of order `q`
//! per time slab, with all temporal inner products weighted by
//! `exp(-2*rho*t)` and evaluated by a Gauss-Radau quadrature rule that is
//! exact for the weighted integrals of polynomials up to degree `2q`. The
//! rule construction for the exponential weight lives in [`quadrature`]; the
//! slab bases and interpolation operators in [`temporal`]; the per-slab block
//! systems and the marching solver in [`solver`].
//!
//! Space is discretised on 1D intervals with continuous Lagrange elements
//! ([`space1d`]), matching the mixed pair (scalar field, flux field) of the
//! bundled benchmark problems ([`problems`]). Weighted error norms, rate
//! estimation and convergence tables are in [`norms`] and [`study`], and
//! numerical verification of the scheme's supporting inequalities in
//! [`checks`].
//!
//! With the default `parallel` feature the data-parallel inner loops (norm
//! evaluation over slabs, verification trials, convergence sweeps) run on
//! rayon; building with `--no-default-features` yields a dependency-free
//! sequential fallback with identical results.

pub mod checks;
pub mod gauss;
pub mod lagrange;
pub mod linalg;
pub mod norms;
pub mod problems;
pub mod quadrature;
pub mod solver;
pub mod space1d;
pub mod study;
pub mod temporal;

mod par;

#[cfg(test)]
pub(crate) mod testing;

/// Errors produced by rule construction, meshing and the slab solver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The moment Gram system for the orthogonal polynomial could not be
    /// solved reliably.
    #[error("orthogonal polynomial construction ill-conditioned for a={a}, q={q}: {reason}")]
    IllConditioned { a: f64, q: usize, reason: String },
    #[error("root finding failed for a={a}, q={q}: {reason}")]
    RootFinding { a: f64, q: usize, reason: String },
    #[error("mesh construction failed: {0}")]
    Mesh(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
