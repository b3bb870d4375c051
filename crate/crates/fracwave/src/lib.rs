//! Pseudo-spectral machinery for 2π-periodic standing waves of the cubic
//! fractional nonlinear Schrödinger equation
//!
//! ```text
//! i u_t − (−Δ)^s u + |u|² u = 0,        u(x, t) = e^{iωt} φ(x),
//! ```
//!
//! whose real profile φ solves
//!
//! ```text
//! (−Δ)^s φ + ω φ − φ³ = 0        on [−π, π), periodic.
//! ```
//!
//! The crate computes profiles by Petviashvili iteration ([`petviashvili`]),
//! validates them against closed forms — the dnoidal solution at s = 1 and the
//! small-amplitude expansion for all s ([`closed_form`], with the Jacobi
//! elliptic functions built in-repo, [`elliptic`]) — characterizes the
//! spectrum of the linearized operators L₁, L₂ ([`linearized`]), and sweeps
//! the Vakhitov–Kolokolov stability index q = d/dω ∫φ² over frequency ranges
//! ([`vk`]).
//!
//! # Conventions (used everywhere, defined once)
//!
//! * **Transform normalization.** The forward transform carries the 1/N
//!   factor: `c_k = (1/N) Σ_j f(x_j) e^{−i k x_j}`; the inverse is the plain
//!   sum `f(x_j) = Σ_k c_k e^{i k x_j}`.
//! * **Wavenumber layout.** Transform bin `i` holds wavenumber `k = i` for
//!   `i ≤ N/2` and `k = i − N` for `i > N/2`, so `k` ranges over
//!   `{−N/2+1, …, N/2}`. The Nyquist mode `N/2` appears once; its coefficient
//!   stays real for real fields and the fractional Laplacian treats it with
//!   multiplier `|N/2|^{2s}`.
//! * **Quadrature.** Integrals use the uniform rectangle rule
//!   `(2π/N) Σ_j`, which is spectrally accurate for smooth periodic
//!   integrands and makes Parseval exact: `(2π/N) Σ f_j² = 2π Σ |c_k|²`.
//! * **Dealiasing.** The cubic nonlinearity is evaluated by 3/2-rule zero
//!   padding (exact for band-limited inputs with modes `|k| ≤ N/4`).
//!
//! # Features
//!
//! * `parallel` (default): enables the rayon-parallel cold-start mode of the
//!   frequency sweep. Without it the same API runs sequentially.

pub mod closed_form;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod grid;
pub mod linearized;
pub mod ops;
pub mod params;
pub mod petviashvili;
pub mod transforms;
pub mod vk;

pub use error::{Error, Result};
pub use field::RealPeriodicField;
pub use grid::{make_grid, FourierGrid};
pub use linearized::{spectral_report, OperatorKind, SpectralReport};
pub use params::FractionalParams;
pub use petviashvili::{
    default_initial_guess, solve, ConvergenceTrace, PetviashviliConfig, SolveResult,
};
pub use vk::{run_sweep, Classification, SweepConfig, VKSweep};
