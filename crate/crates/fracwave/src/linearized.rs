//! Galerkin matrices and spectra of the operators obtained by linearizing
//! the standing-wave problem about a profile `φ`:
//!
//! ```text
//! L₁ = (−Δ)^s + ω − 3φ²   (acts on the real part of a perturbation)
//! L₂ = (−Δ)^s + ω − φ²    (acts on the imaginary part)
//! ```
//!
//! Both are assembled in the orthonormal real trigonometric basis
//! `{1/√(2π), cos kx/√π, sin kx/√π : k = 1..M}`, which keeps the matrices
//! real symmetric (the multiplier part is diagonal; the potential couples
//! modes through the Fourier coefficients of `φ²`).
//!
//! Exact identities used as discretization checks: `L₂φ = 0`, `L₁φ′ = 0`,
//! and `L₁φ = −2φ³`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealPeriodicField;
use crate::ops::{cube, derivative, fractional_laplacian, residual, square_coeffs, symbol};
use crate::params::FractionalParams;
use crate::transforms::inverse;

/// Which linearized operator to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    /// `(−Δ)^s + ω − 3φ²`
    L1,
    /// `(−Δ)^s + ω − φ²`
    L2,
}

impl OperatorKind {
    fn potential_factor(self) -> f64 {
        match self {
            OperatorKind::L1 => 3.0,
            OperatorKind::L2 => 1.0,
        }
    }
}

/// Dense symmetric Galerkin matrix of `L₁` or `L₂`, dimension `2M + 1` for
/// truncation order `M` (basis order: constant, `cos 1..M`, `sin 1..M`).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<f64>,
    n_modes: usize,
    kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Assemble the truncated operator about the profile `f`.
///
/// The potential `V = 3φ²` (or `φ²`) enters through its dealiased Fourier
/// coefficients `V̂(m) = α_m + iβ_m`; with the basis above the matrix is
/// `diag(|k|^{2s} + ω) − P` where
///
/// ```text
/// P[1, 1]          = α₀            P[1, cos l]      = √2 α_l
/// P[1, sin l]      = −√2 β_l
/// P[cos k, cos l]  = α_{k−l} + α_{k+l}
/// P[sin k, sin l]  = α_{k−l} − α_{k+l}
/// P[cos k, sin l]  = β_{k−l} − β_{k+l}
/// ```
///
/// (`α` is even and `β` odd in `m`; coefficients beyond the Nyquist mode are
/// zero). Requires `M ≤ N/2` for the grid of `f`.
pub fn build_operator(
    f: &RealPeriodicField,
    p: &FractionalParams,
    kind: OperatorKind,
    n_modes: usize,
) -> Result<OperatorMatrix> {
    let nyquist = f.grid().nyquist();
    if n_modes > nyquist {
        return Err(Error::TruncationTooLarge { modes: n_modes, nyquist });
    }
    let factor = kind.potential_factor();
    let v = square_coeffs(f);
    let alpha = |m: i64| factor * v.coeff(m).re;
    let beta = |m: i64| factor * v.coeff(m).im;

    let m = n_modes;
    let dim = 2 * m + 1;
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut a = DMatrix::<f64>::zeros(dim, dim);

    // wavenumber carried by basis element i
    let wn = |i: usize| -> i64 {
        if i == 0 {
            0
        } else if i <= m {
            i as i64
        } else {
            (i - m) as i64
        }
    };

    for i in 0..dim {
        for j in i..dim {
            let (k, l) = (wn(i), wn(j));
            // potential contribution; j ≥ i so (sin, cos) never occurs
            let pot = match (i, j) {
                (0, 0) => alpha(0),
                (0, _) if j <= m => sqrt2 * alpha(l),
                (0, _) => -sqrt2 * beta(l),
                _ if i <= m && j <= m => alpha(k - l) + alpha(k + l),
                _ if i <= m => beta(k - l) - beta(k + l),
                _ => alpha(k - l) - alpha(k + l),
            };
            let mut entry = -pot;
            if i == j {
                entry += symbol(k, p.s()) + p.omega();
            }
            a[(i, j)] = entry;
            a[(j, i)] = entry;
        }
    }

    Ok(OperatorMatrix { entries: a, n_modes, kind })
}

/// Eigenvalues of the assembled operator, sorted ascending. Verifies the
/// matrix is symmetric (relative defect ≤ 1e-12) before calling the
/// symmetric eigensolver — asymmetry would silently invalidate the result.
pub fn spectrum(mat: &OperatorMatrix) -> Result<Vec<f64>> {
    let a = &mat.entries;
    let mut defect: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in (i + 1)..a.ncols() {
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
            scale = scale.max(a[(i, j)].abs());
        }
        scale = scale.max(a[(i, i)].abs());
    }
    if defect > 1e-12 * scale.max(1.0) {
        return Err(Error::NotSymmetric(defect));
    }
    let eig = a.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    Ok(vals)
}

/// Spectral characterization of a profile: full truncated spectra of `L₁`
/// and `L₂`, negative/zero eigenvalue counts, and the residuals of the three
/// exact kernel/range identities evaluated on the full grid (independent of
/// the matrix truncation).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n_modes: usize,
    pub eig_l1: Vec<f64>,
    pub eig_l2: Vec<f64>,
    /// `#{λ < −ε_neg}` for L₁ / L₂
    pub n_l1: usize,
    pub n_l2: usize,
    /// `#{|λ| ≤ ε_ker}` for L₁ / L₂
    pub z_l1: usize,
    pub z_l2: usize,
    /// `‖L₂φ‖₂` and `‖L₂φ‖₂ / ‖φ‖₂`
    pub res_l2_phi: f64,
    pub res_l2_phi_rel: f64,
    /// `‖L₁φ′‖₂` and `‖L₁φ′‖₂ / ‖φ′‖₂`
    pub res_l1_dphi: f64,
    pub res_l1_dphi_rel: f64,
    /// `‖L₁φ + 2φ³‖₂` and `‖L₁φ + 2φ³‖₂ / ‖φ³‖₂`
    pub res_l1_phi_cubed: f64,
    pub res_l1_phi_cubed_rel: f64,
    /// Threshold for "zero": `1e-6 · (1 + ω)`
    pub eps_kernel: f64,
    /// Threshold for "negative": `1e-6 · (1 + ω)`
    pub eps_negative: f64,
}

fn count_signs(eigs: &[f64], eps_neg: f64, eps_ker: f64) -> (usize, usize) {
    let n = eigs.iter().filter(|&&x| x < -eps_neg).count();
    let z = eigs.iter().filter(|&&x| x.abs() <= eps_ker).count();
    (n, z)
}

fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Build both operators about `f`, extract spectra and index counts, and
/// evaluate the kernel-identity residuals.
pub fn spectral_report(
    f: &RealPeriodicField,
    p: &FractionalParams,
    n_modes: usize,
) -> Result<SpectralReport> {
    let eig_l1 = spectrum(&build_operator(f, p, OperatorKind::L1, n_modes)?)?;
    let eig_l2 = spectrum(&build_operator(f, p, OperatorKind::L2, n_modes)?)?;
    let eps = 1e-6 * (1.0 + p.omega());
    let (n_l1, z_l1) = count_signs(&eig_l1, eps, eps);
    let (n_l2, z_l2) = count_signs(&eig_l2, eps, eps);

    // L₂φ = (−Δ)^s φ + ωφ − φ³ — exactly the profile-equation residual
    let (res_field, _) = residual(f, p)?;
    let res_l2_phi = res_field.l2_norm();
    let res_l2_phi_rel = rel(res_l2_phi, f.l2_norm());

    // L₁φ + 2φ³ reduces to the same field; report it against ‖φ³‖
    let cu = cube(f);
    let res_l1_phi_cubed = res_l2_phi;
    let res_l1_phi_cubed_rel = rel(res_l1_phi_cubed, cu.l2_norm());

    // L₁φ′ = (−Δ)^s φ′ + ωφ′ − 3φ²φ′ (φ² dealiased, then pointwise)
    let df = derivative(f);
    let lap_df = fractional_laplacian(&df, p.s())?;
    let sq = inverse(&square_coeffs(f));
    let vals: Vec<f64> = lap_df
        .values()
        .iter()
        .zip(df.values())
        .zip(sq.values())
        .map(|((l, d), q)| l + p.omega() * d - 3.0 * q * d)
        .collect();
    let l1_df =
        RealPeriodicField::from_values_unchecked(std::sync::Arc::clone(f.grid()), vals);
    let res_l1_dphi = l1_df.l2_norm();
    let res_l1_dphi_rel = rel(res_l1_dphi, df.l2_norm());

    Ok(SpectralReport {
        n_modes,
        eig_l1,
        eig_l2,
        n_l1,
        n_l2,
        z_l1,
        z_l2,
        res_l2_phi,
        res_l2_phi_rel,
        res_l1_dphi,
        res_l1_dphi_rel,
        res_l1_phi_cubed,
        res_l1_phi_cubed_rel,
        eps_kernel: eps,
        eps_negative: eps,
    })
}
