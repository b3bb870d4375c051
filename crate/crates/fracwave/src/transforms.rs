use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::field::RealPeriodicField;
use crate::grid::FourierGrid;

thread_local! {
    // rustfft planners cache plans but are not Sync; one per thread keeps the
    // public operations pure and safe to call concurrently.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized in-place FFT (forward or inverse) of a complex buffer.
pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        }
    });
    fft.process(buf);
}

/// Fourier coefficients of a real field, forward-normalized by `1/N` and laid
/// out in transform order (see crate docs for the wavenumber convention).
#[derive(Debug, Clone)]
pub struct SpectralCoeffs {
    grid: Arc<FourierGrid>,
    coeffs: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub(crate) fn from_parts(grid: Arc<FourierGrid>, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), coeffs.len());
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    /// Coefficients in transform bin order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of integer wavenumber `k`, `|k| ≤ N/2`. Returns zero
    /// beyond the Nyquist mode. The single Nyquist bin aggregates `±N/2`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.grid.len() as i64;
        if k.unsigned_abs() as usize > self.grid.nyquist() {
            return Complex64::new(0.0, 0.0);
        }
        let idx = if k >= 0 { k } else { n + k } as usize;
        // k = -N/2 wraps to the same bin as +N/2
        self.coeffs[idx % self.grid.len()]
    }

    /// `max_k |c(−k) − conj(c(k))|` — zero (to round-off) for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.len();
        let mut d: f64 = 0.0;
        for i in 1..n {
            let j = n - i;
            d = d.max((self.coeffs[i] - self.coeffs[j].conj()).norm());
        }
        d.max(self.coeffs[0].im.abs())
    }
}

// The physical nodes start at −π while the DFT assumes an origin-based grid,
// which taints bin k by the translation phase e^{−ikπ} = (−1)^k. Folding the
// sign in here (bin parity equals wavenumber parity for even N) makes the
// stored values true Fourier coefficients of the field on [−π, π).
fn flip_odd_bins(buf: &mut [Complex64]) {
    for c in buf.iter_mut().skip(1).step_by(2) {
        *c = -*c;
    }
}

/// Forward transform of a real field (carries the `1/N` factor).
pub fn forward(f: &RealPeriodicField) -> SpectralCoeffs {
    let n = f.len();
    let mut buf: Vec<Complex64> =
        f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    flip_odd_bins(&mut buf);
    SpectralCoeffs::from_parts(Arc::clone(f.grid()), buf)
}

/// Inverse transform back to a real field. The imaginary residue (round-off
/// for Hermitian input) is discarded.
pub fn inverse(c: &SpectralCoeffs) -> RealPeriodicField {
    let mut buf = c.coeffs().to_vec();
    flip_odd_bins(&mut buf);
    fft_in_place(&mut buf, true);
    let values = buf.iter().map(|z| z.re).collect();
    RealPeriodicField::from_values_unchecked(Arc::clone(c.grid()), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_lands_in_the_right_bins() {
        let g = make_grid(16).unwrap();
        let f = RealPeriodicField::from_fn(&g, |x| (3.0 * x).cos());
        let c = forward(&f);
        // cos(3x) = (e^{3ix} + e^{-3ix})/2
        assert_abs_diff_eq!(c.coeff(3).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(c.coeff(-3).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(c.coeff(3).im, 0.0, epsilon = 1e-14);
        for k in [0i64, 1, 2, 4, 5] {
            assert!(c.coeff(k).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = make_grid(128).unwrap();
        let f = RealPeriodicField::from_fn(&g, |x| (x.sin() + 0.3).exp());
        let back = inverse(&forward(&f));
        let rel = f.sup_distance(&back).unwrap() / f.sup_norm();
        assert!(rel < 1e-12, "round-trip relative error {rel:.3e}");
    }

    #[test]
    fn hermitian_symmetry_for_real_fields() {
        let g = make_grid(64).unwrap();
        let f = RealPeriodicField::from_fn(&g, |x| x.sin() + (2.0 * x).cos() * 0.7);
        let c = forward(&f);
        assert!(c.hermitian_defect() < 1e-14);
    }

    #[test]
    fn nyquist_coefficient_is_real() {
        let g = make_grid(16).unwrap();
        let f = RealPeriodicField::from_fn(&g, |x| (8.0 * x).cos());
        let c = forward(&f);
        let ny = c.coeff(8);
        assert_abs_diff_eq!(ny.im, 0.0, epsilon = 1e-14);
        // the single Nyquist bin carries the full cos(8x) weight
        assert_abs_diff_eq!(ny.re, 1.0, epsilon = 1e-13);
    }
}
