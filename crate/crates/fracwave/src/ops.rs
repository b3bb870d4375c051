//! Spectral operators and conserved functionals: fractional Laplacian,
//! dealiased cubic nonlinearity, profile-equation residual, and the
//! mass/energy family evaluated by rectangle-rule quadrature.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::RealPeriodicField;
use crate::params::FractionalParams;
use crate::transforms::{fft_in_place, forward, inverse, SpectralCoeffs};

/// Fourier multiplier `|k|^{2s}` of the fractional Laplacian; exact integer
/// arithmetic at `s = 1`.
pub(crate) fn symbol(k: i64, s: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k2 = (k * k) as f64;
    if s == 1.0 {
        k2
    } else {
        k2.powf(s)
    }
}

/// `(−Δ)^s f`, computed as the Fourier multiplier `|k|^{2s}` (Nyquist mode
/// included with multiplier `(N/2)^{2s}`; its coefficient stays real).
pub fn fractional_laplacian(f: &RealPeriodicField, s: f64) -> Result<RealPeriodicField> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidOrder(s));
    }
    let mut c = forward(f);
    let ks = c.grid().wavenumbers().to_vec();
    for (ci, &k) in c.coeffs_mut().iter_mut().zip(&ks) {
        *ci *= symbol(k, s);
    }
    Ok(inverse(&c))
}

/// Spectral first derivative `f′` (multiplier `ik`; the Nyquist coefficient
/// is zeroed, the standard real-output convention for odd-order derivatives).
pub fn derivative(f: &RealPeriodicField) -> RealPeriodicField {
    let mut c = forward(f);
    let n = c.grid().len();
    let ks = c.grid().wavenumbers().to_vec();
    for (i, (ci, &k)) in c.coeffs_mut().iter_mut().zip(&ks).enumerate() {
        if i == n / 2 {
            *ci = Complex64::new(0.0, 0.0);
        } else {
            *ci *= Complex64::new(0.0, k as f64);
        }
    }
    inverse(&c)
}

/// Spread `N` coefficients into a `3N/2` buffer, splitting the aggregated
/// Nyquist bin into `±N/2` halves, and return unnormalized physical values
/// on the fine grid.
fn pad_to_fine(c: &SpectralCoeffs) -> Vec<Complex64> {
    let n = c.grid().len();
    let half = n / 2;
    let np = 3 * n / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); np];
    for k in -(half as i64 - 1)..=(half as i64 - 1) {
        let src = if k >= 0 { k as usize } else { (n as i64 + k) as usize };
        let dst = if k >= 0 { k as usize } else { (np as i64 + k) as usize };
        buf[dst] = c.coeffs()[src];
    }
    let ny = c.coeffs()[half];
    buf[half] = 0.5 * ny;
    buf[np - half] = 0.5 * ny.conj();
    fft_in_place(&mut buf, true);
    buf
}

/// Transform fine-grid physical values back and truncate to the coarse grid,
/// recombining the `±N/2` bins into the single aggregated Nyquist bin.
fn truncate_to_coarse(mut fine: Vec<Complex64>, grid: &Arc<crate::grid::FourierGrid>) -> SpectralCoeffs {
    let n = grid.len();
    let half = n / 2;
    let np = fine.len();
    fft_in_place(&mut fine, false);
    let scale = 1.0 / np as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in -(half as i64 - 1)..=(half as i64 - 1) {
        let src = if k >= 0 { k as usize } else { (np as i64 + k) as usize };
        let dst = if k >= 0 { k as usize } else { (n as i64 + k) as usize };
        out[dst] = fine[src] * scale;
    }
    out[half] = (fine[half] + fine[np - half]) * scale;
    SpectralCoeffs::from_parts(Arc::clone(grid), out)
}

/// Pointwise cube `f³` with 3/2-rule zero padding. For input spectra
/// confined to `|k| ≤ N/4` the retained coefficients are exactly those of
/// `f³` (truncation, never aliasing); for `|k| ≤ N/6` the cube fits the band
/// entirely and the result is exact.
pub fn cube(f: &RealPeriodicField) -> RealPeriodicField {
    let c = forward(f);
    let mut fine = pad_to_fine(&c);
    for z in &mut fine {
        let v = z.re;
        *z = Complex64::new(v * v * v, 0.0);
    }
    inverse(&truncate_to_coarse(fine, f.grid()))
}

/// Dealiased square `f²`, returned in coefficient form (used for the
/// linearized-operator potentials). Quadratic products are what the 3/2 rule
/// is sized for: the retained band is alias-free for any input.
pub(crate) fn square_coeffs(f: &RealPeriodicField) -> SpectralCoeffs {
    let c = forward(f);
    let mut fine = pad_to_fine(&c);
    for z in &mut fine {
        let v = z.re;
        *z = Complex64::new(v * v, 0.0);
    }
    truncate_to_coarse(fine, f.grid())
}

/// `S f = (−Δ)^s f + ω f − f³` and its sup-norm — the profile-equation
/// residual used as the solver's RES monitor.
pub fn residual(
    f: &RealPeriodicField,
    p: &FractionalParams,
) -> Result<(RealPeriodicField, f64)> {
    let lap = fractional_laplacian(f, p.s())?;
    let cu = cube(f);
    let omega = p.omega();
    let values: Vec<f64> = lap
        .values()
        .iter()
        .zip(f.values())
        .zip(cu.values())
        .map(|((l, v), c)| l + omega * v - c)
        .collect();
    let field = RealPeriodicField::from_values_unchecked(Arc::clone(f.grid()), values);
    let norm = field.sup_norm();
    Ok((field, norm))
}

/// Discrete `L²` inner product `(f, g) = (2π/N) Σ f_j g_j`.
pub fn inner_product(f: &RealPeriodicField, g: &RealPeriodicField) -> Result<f64> {
    f.check_same_grid(g)?;
    let w = f.grid().spacing();
    Ok(w * f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a * b)
        .sum::<f64>())
}

/// Unhalved mass `∫ f² dx` — the quantity differentiated by the
/// Vakhitov–Kolokolov index.
pub fn mass(f: &RealPeriodicField) -> f64 {
    let w = f.grid().spacing();
    w * f.values().iter().map(|v| v * v).sum::<f64>()
}

/// Kinetic term `∫ |(−Δ)^{s/2} f|² dx`, evaluated spectrally (Parseval).
fn kinetic(f: &RealPeriodicField, s: f64) -> f64 {
    let c = forward(f);
    let two_pi = 2.0 * std::f64::consts::PI;
    two_pi
        * c.coeffs()
            .iter()
            .zip(c.grid().wavenumbers())
            .map(|(z, &k)| symbol(k, s) * z.norm_sqr())
            .sum::<f64>()
}

/// Energy `E(f) = ½ ∫ |(−Δ)^{s/2} f|² − ¼ ∫ f⁴`.
pub fn energy(f: &RealPeriodicField, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidOrder(s));
    }
    let w = f.grid().spacing();
    let quartic: f64 = w * f.values().iter().map(|v| v.powi(4)).sum::<f64>();
    Ok(0.5 * kinetic(f, s) - 0.25 * quartic)
}

/// Lyapunov functional `G(f) = E(f) + ω F(f)` with `F = ½ ∫ f²`.
pub fn lyapunov(f: &RealPeriodicField, p: &FractionalParams) -> Result<f64> {
    Ok(energy(f, p.s())? + p.omega() * 0.5 * mass(f))
}

/// Quadratic form `B_ω(f) = ½ ∫ (|(−Δ)^{s/2} f|² + ω f²)`.
pub fn quadratic_form(f: &RealPeriodicField, p: &FractionalParams) -> Result<f64> {
    Ok(0.5 * (kinetic(f, p.s()) + p.omega() * mass(f)))
}
