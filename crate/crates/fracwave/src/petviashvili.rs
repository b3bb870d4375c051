//! Petviashvili fixed-point iteration for the profile equation
//! `(−Δ)^s φ + ωφ − φ³ = 0`, with full convergence telemetry.
//!
//! One step reads, in coefficients,
//!
//! ```text
//! φ̂_{n+1}(k) = M_n^ν / (|k|^{2s} + ω) · (φ_n³)^(k),
//! M_n = (((−Δ)^s + ω) φ_n, φ_n) / (φ_n³, φ_n),
//! ```
//!
//! with stabilization exponent `ν = 1.5` by default, which makes the update
//! invariant under rescaling of the iterate (`M(λf) = M(f)/λ²` cancels the
//! cubic's `λ³` exactly at `ν = 3/2`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealPeriodicField;
use crate::grid::FourierGrid;
use crate::ops::{cube, residual, symbol};
use crate::params::FractionalParams;
use crate::transforms::{forward, inverse};
use crate::closed_form::{gamma, stokes_wave};

/// Iteration controls. Convergence is declared only when **all three**
/// monitors pass: `Error(n) = ‖φ_n − φ_{n−1}‖_∞ ≤ tol_error`,
/// `|1 − M_n| ≤ tol_m`, and `RES(n) = ‖Sφ_n‖_∞ ≤ tol_res` (a single monitor
/// can pass at spurious scalings).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PetviashviliConfig {
    /// Stabilization exponent, `ν ∈ (1, 2)`.
    pub nu: f64,
    /// Tolerance on the successive-iterate sup-norm.
    pub tol_error: f64,
    /// Tolerance on `|1 − M_n|`.
    pub tol_m: f64,
    /// Tolerance on the equation residual sup-norm. The converged residual
    /// floors near `(N/2)^{2s}·ε·‖φ‖` (round-off amplified by the Laplacian
    /// multiplier), so this sits above machine precision by design.
    pub tol_res: f64,
    pub max_iter: usize,
    /// Project every iterate onto even functions; kills translation drift of
    /// the single-lobe peak.
    pub enforce_even: bool,
}

impl Default for PetviashviliConfig {
    fn default() -> Self {
        Self {
            nu: 1.5,
            tol_error: 1e-12,
            tol_m: 1e-12,
            tol_res: 1e-10,
            max_iter: 500,
            enforce_even: true,
        }
    }
}

impl PetviashviliConfig {
    /// Defaults for use inside frequency sweeps: same gates except for a
    /// looser residual tolerance (the round-off floor grows with the grid
    /// size, the order `s`, and `ω`).
    pub fn sweep_default() -> Self {
        Self { tol_res: 1e-8, ..Self::default() }
    }
}

/// Per-iteration history of the three convergence monitors; the arrays share
/// one length, the number of iterations performed.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    /// `‖φ_n − φ_{n−1}‖_∞`
    pub error: Vec<f64>,
    /// `|1 − M_n|`
    pub m_gap: Vec<f64>,
    /// `‖(−Δ)^s φ_n + ωφ_n − φ_n³‖_∞`
    pub res: Vec<f64>,
}

impl ConvergenceTrace {
    pub fn len(&self) -> usize {
        self.error.len()
    }

    pub fn is_empty(&self) -> bool {
        self.error.is_empty()
    }
}

/// Output of [`solve`]: the final iterate, the full trace, and whether all
/// three monitors passed within the iteration budget.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub profile: RealPeriodicField,
    pub trace: ConvergenceTrace,
    pub converged: bool,
    pub params: FractionalParams,
    pub final_res: f64,
}

impl SolveResult {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

fn degenerate_check(denominator: f64, f: &RealPeriodicField) -> Result<()> {
    let scale = 2.0 * std::f64::consts::PI * f.sup_norm().powi(4);
    if denominator.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateDenominator(denominator));
    }
    Ok(())
}

/// Core step shared by [`stabilizing_factor`], [`iterate_once`] and [`solve`]:
/// computes the dealiased cube once, forms `M`, and applies the update.
fn step(
    f: &RealPeriodicField,
    p: &FractionalParams,
    nu: f64,
) -> Result<(RealPeriodicField, f64)> {
    let cu = cube(f);
    let chat = forward(&cu);
    let fhat = forward(f);
    // numerator ((−Δ)^s f + ωf, f) via Parseval; denominator (f³, f) likewise
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut num = 0.0;
    let mut den = 0.0;
    for ((cf, cc), &k) in fhat
        .coeffs()
        .iter()
        .zip(chat.coeffs())
        .zip(f.grid().wavenumbers())
    {
        let w = symbol(k, p.s()) + p.omega();
        num += w * cf.norm_sqr();
        den += (cc * cf.conj()).re;
    }
    num *= two_pi;
    den *= two_pi;
    degenerate_check(den, f)?;
    let m = num / den;
    let m_pow = m.powf(nu);
    let mut out = chat;
    let ks = out.grid().wavenumbers().to_vec();
    for (c, &k) in out.coeffs_mut().iter_mut().zip(&ks) {
        *c *= m_pow / (symbol(k, p.s()) + p.omega());
    }
    Ok((inverse(&out), m))
}

/// Stabilizing factor `M = (((−Δ)^s + ω) f, f) / (f³, f)`; equals 1 at exact
/// solutions and scales as `M(λf) = M(f)/λ²`. Errors when the denominator
/// signals collapse toward zero.
pub fn stabilizing_factor(f: &RealPeriodicField, p: &FractionalParams) -> Result<f64> {
    step(f, p, 1.5).map(|(_, m)| m)
}

/// One Petviashvili update of `f` (no projection, no trace).
pub fn iterate_once(
    f: &RealPeriodicField,
    p: &FractionalParams,
    nu: f64,
) -> Result<RealPeriodicField> {
    step(f, p, nu).map(|(out, _)| out)
}

/// Run the iteration from `initial` until all three monitors fall below
/// their tolerances or the budget runs out.
///
/// For `ω ≤ 1/2` the constant `√ω` is the ground state: it is returned
/// directly with an empty trace and `converged = true`.
/// Non-convergence is a value (`converged = false`), not an error; NaN/Inf
/// blow-up or denominator collapse are errors.
pub fn solve(
    initial: &RealPeriodicField,
    p: &FractionalParams,
    cfg: &PetviashviliConfig,
) -> Result<SolveResult> {
    if p.omega() <= 0.5 {
        let profile = RealPeriodicField::constant(initial.grid(), p.omega().sqrt());
        let (_, final_res) = residual(&profile, p)?;
        return Ok(SolveResult {
            profile,
            trace: ConvergenceTrace::default(),
            converged: true,
            params: *p,
            final_res,
        });
    }

    let mut f = if cfg.enforce_even {
        initial.even_projected()
    } else {
        initial.clone()
    };
    let mut trace = ConvergenceTrace::default();
    let mut converged = false;
    let mut final_res = f64::INFINITY;

    for n in 1..=cfg.max_iter {
        let (mut next, m) = step(&f, p, cfg.nu)?;
        if cfg.enforce_even {
            next = next.even_projected();
        }
        if !next.values().iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalBlowup(n));
        }
        let err = next.sup_distance(&f).unwrap_or(f64::INFINITY);
        let m_gap = (1.0 - m).abs();
        let (_, res) = residual(&next, p)?;
        trace.error.push(err);
        trace.m_gap.push(m_gap);
        trace.res.push(res);
        f = next;
        final_res = res;
        if err <= cfg.tol_error && m_gap <= cfg.tol_m && res <= cfg.tol_res {
            converged = true;
            break;
        }
    }

    Ok(SolveResult { profile: f, trace, converged, params: *p, final_res })
}

/// Initial guess used when nothing better is available.
///
/// * `ω ≤ 1/2`: the constant `√ω` (the ground state there).
/// * `ω` slightly above `1/2`: the small-amplitude expansion with `a` from
///   inverting `ω = 1/2 + a²γ` at leading order, valid while `γ > 0` and
///   `a ≤ 0.2`.
/// * otherwise: the cos-perturbed constant `√(2ω)(1 + 0.2 cos x)` — any
///   single-lobe seed in the basin of attraction works.
pub fn default_initial_guess(
    grid: &Arc<FourierGrid>,
    p: &FractionalParams,
) -> Result<RealPeriodicField> {
    let omega = p.omega();
    if omega <= 0.5 {
        return Ok(RealPeriodicField::constant(grid, omega.sqrt()));
    }
    let g = gamma(p.s());
    if g > 0.0 {
        let a = ((omega - 0.5) / g).sqrt();
        if a <= 0.2 {
            return Ok(stokes_wave(grid, a, p.s())?.0);
        }
    }
    let amp = (2.0 * omega).sqrt();
    Ok(RealPeriodicField::from_fn(grid, |x| amp * (1.0 + 0.2 * x.cos())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::dn_solution;
    use crate::grid::make_grid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stabilizing_factor_on_constants() {
        let g = make_grid(64).unwrap();
        // f = √ω: numerator ω·2πω, denominator 2πω² → M = 1
        let p = FractionalParams::new(0.7, 1.3).unwrap();
        let f = RealPeriodicField::constant(&g, 1.3f64.sqrt());
        assert_abs_diff_eq!(stabilizing_factor(&f, &p).unwrap(), 1.0, epsilon = 1e-12);
        // f ≡ 1, ω = 2: numerator 2·2π, denominator 2π → M = 2
        let p = FractionalParams::new(0.4, 2.0).unwrap();
        let f = RealPeriodicField::constant(&g, 1.0);
        assert_abs_diff_eq!(stabilizing_factor(&f, &p).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn stabilizing_factor_scaling_law() {
        let g = make_grid(128).unwrap();
        let p = FractionalParams::new(0.6, 1.0).unwrap();
        let f = RealPeriodicField::from_fn(&g, |x| 1.2 + x.cos());
        let m1 = stabilizing_factor(&f, &p).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = RealPeriodicField::from_fn(&g, |x| lambda * (1.2 + x.cos()));
            let m2 = stabilizing_factor(&scaled, &p).unwrap();
            assert_abs_diff_eq!(m2, m1 / (lambda * lambda), epsilon = 1e-10 * m1);
        }
    }

    #[test]
    fn stabilizing_factor_rejects_collapse() {
        let g = make_grid(64).unwrap();
        let p = FractionalParams::new(0.5, 1.0).unwrap();
        let f = RealPeriodicField::constant(&g, 0.0);
        assert!(matches!(
            stabilizing_factor(&f, &p),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn exact_solution_is_a_fixed_point() {
        let g = make_grid(1 << 10).unwrap();
        let omega = 1.0;
        let p = FractionalParams::new(1.0, omega).unwrap();
        let f = dn_solution(&g, omega).unwrap();
        let m = stabilizing_factor(&f, &p).unwrap();
        assert_abs_diff_eq!(m, 1.0, epsilon = 1e-10);
        let next = iterate_once(&f, &p, 1.5).unwrap();
        assert!(next.sup_distance(&f).unwrap() < 1e-9);
        // constants are fixed points too
        let c = RealPeriodicField::constant(&g, omega.sqrt());
        let next = iterate_once(&c, &p, 1.5).unwrap();
        assert!(next.sup_distance(&c).unwrap() < 1e-12);
    }

    #[test]
    fn update_is_scale_invariant_at_nu_three_halves() {
        let g = make_grid(128).unwrap();
        let p = FractionalParams::new(0.8, 1.0).unwrap();
        let base = RealPeriodicField::from_fn(&g, |x| 1.0 + 0.5 * x.cos());
        let ref_next = iterate_once(&base, &p, 1.5).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = RealPeriodicField::from_fn(&g, |x| lambda * (1.0 + 0.5 * x.cos()));
            let next = iterate_once(&scaled, &p, 1.5).unwrap();
            assert!(
                next.sup_distance(&ref_next).unwrap() < 1e-10 * ref_next.sup_norm(),
                "lambda = {lambda}"
            );
        }
    }

    #[test]
    fn one_step_from_stokes_guess_reduces_residual() {
        let g = make_grid(256).unwrap();
        let (f, omega) = stokes_wave(&g, 0.1, 1.0).unwrap();
        let p = FractionalParams::new(1.0, omega).unwrap();
        let r0 = residual(&f, &p).unwrap().1;
        let next = iterate_once(&f, &p, 1.5).unwrap();
        let r1 = residual(&next, &p).unwrap().1;
        assert!(r1 < r0, "RES went {r0:.3e} -> {r1:.3e}");
    }

    #[test]
    fn constant_regime_returns_immediately() {
        let g = make_grid(256).unwrap();
        let p = FractionalParams::new(0.7, 0.4).unwrap();
        let init = RealPeriodicField::from_fn(&g, |x| 1.0 + 0.3 * x.cos());
        let r = solve(&init, &p, &PetviashviliConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations(), 0);
        let expect = RealPeriodicField::constant(&g, 0.4f64.sqrt());
        assert!(r.profile.sup_distance(&expect).unwrap() < 1e-14);
        assert!(r.final_res < 1e-13);
    }

    #[test]
    fn converges_to_dnoidal_at_s_one() {
        let g = make_grid(1 << 10).unwrap();
        let p = FractionalParams::new(1.0, 1.0).unwrap();
        let init = default_initial_guess(&g, &p).unwrap();
        let r = solve(&init, &p, &PetviashviliConfig::default()).unwrap();
        assert!(r.converged, "trace: {:?}", r.trace.res.last());
        let exact = dn_solution(&g, 1.0).unwrap();
        let gap = r.profile.sup_distance(&exact).unwrap();
        assert!(gap < 1e-8, "solver vs closed form: {gap:.3e}");
        // trace invariant: on success the final entries are below tolerance
        let cfg = PetviashviliConfig::default();
        assert!(*r.trace.error.last().unwrap() <= cfg.tol_error);
        assert!(*r.trace.m_gap.last().unwrap() <= cfg.tol_m);
        assert!(*r.trace.res.last().unwrap() <= cfg.tol_res);
    }

    #[test]
    fn converged_wave_is_even_positive_single_lobe() {
        let g = make_grid(1 << 9).unwrap();
        for (s, omega) in [(0.6, 1.0), (0.5, 0.6), (1.0, 2.0)] {
            let p = FractionalParams::new(s, omega).unwrap();
            let init = default_initial_guess(&g, &p).unwrap();
            let r = solve(&init, &p, &PetviashviliConfig::default()).unwrap();
            assert!(r.converged, "s={s} omega={omega}");
            assert!(r.profile.evenness_defect() < 1e-10);
            assert!(r.profile.min_value() > 0.0);
            assert!(r.profile.is_single_lobe());
        }
    }

    #[test]
    fn smaller_s_steepens_the_wave() {
        let g = make_grid(1 << 9).unwrap();
        let cfg = PetviashviliConfig::default();
        let mut peaks = Vec::new();
        for s in [1.0, 0.6] {
            let p = FractionalParams::new(s, 1.0).unwrap();
            let r = solve(&default_initial_guess(&g, &p).unwrap(), &p, &cfg).unwrap();
            assert!(r.converged);
            peaks.push(r.profile.max_value() / r.profile.min_value());
        }
        assert!(
            peaks[1] > peaks[0],
            "peak-to-trough should grow as s decreases: {peaks:?}"
        );
    }

    #[test]
    fn non_convergence_is_reported_not_thrown() {
        let g = make_grid(256).unwrap();
        let p = FractionalParams::new(1.0, 1.0).unwrap();
        let cfg = PetviashviliConfig { max_iter: 1, ..Default::default() };
        let init = default_initial_guess(&g, &p).unwrap();
        let r = solve(&init, &p, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations(), 1);
    }

    #[test]
    fn default_guess_selects_regime() {
        let g = make_grid(128).unwrap();
        // constant below the bifurcation
        let p = FractionalParams::new(0.7, 0.4).unwrap();
        let f = default_initial_guess(&g, &p).unwrap();
        assert!(f
            .sup_distance(&RealPeriodicField::constant(&g, 0.4f64.sqrt()))
            .unwrap()
            < 1e-15);
        // small-amplitude expansion just above it: ω = 1/2 + γ(1)·0.1²
        let omega = 0.5 + gamma(1.0) * 0.01;
        let p = FractionalParams::new(1.0, omega).unwrap();
        let f = default_initial_guess(&g, &p).unwrap();
        let (expect, w) = stokes_wave(&g, 0.1, 1.0).unwrap();
        assert_abs_diff_eq!(w, omega, epsilon = 1e-14);
        assert!(f.sup_distance(&expect).unwrap() < 1e-14);
        // cos-perturbed fallback far above it
        let p = FractionalParams::new(0.55, 5.0).unwrap();
        let f = default_initial_guess(&g, &p).unwrap();
        let amp = 10.0f64.sqrt();
        assert_abs_diff_eq!(f.max_value(), amp * 1.2, epsilon = 1e-12);
    }

    #[test]
    fn fallback_guess_converges_at_large_omega() {
        let g = make_grid(1 << 9).unwrap();
        let p = FractionalParams::new(0.55, 5.0).unwrap();
        let r = solve(
            &default_initial_guess(&g, &p).unwrap(),
            &p,
            &PetviashviliConfig::sweep_default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.profile.is_single_lobe());
    }

    #[test]
    fn res_monitor_tail_decays_geometrically() {
        let g = make_grid(1 << 10).unwrap();
        let p = FractionalParams::new(1.0, 1.0).unwrap();
        let r = solve(
            &default_initial_guess(&g, &p).unwrap(),
            &p,
            &PetviashviliConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        // geometric tail: ratios bounded below 1 while above the round-off
        // floor
        let res = &r.trace.res;
        let mut checked = 0;
        for w in res.windows(2) {
            if w[0] > 1e-9 && w[0] < 1e-2 {
                assert!(w[1] / w[0] < 1.0, "non-contracting tail: {w:?}");
                checked += 1;
            }
        }
        assert!(checked >= 5, "tail too short to judge decay");
    }
}
