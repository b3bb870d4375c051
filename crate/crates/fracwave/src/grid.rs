use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-π, π)` together with the integer wavenumbers
/// of the discrete Fourier transform.
///
/// Nodes are `x_j = -π + 2πj/N`, `j = 0..N-1`. Transform bin `i` carries
/// wavenumber `k = i` for `i ≤ N/2` and `k = i − N` otherwise (see the crate
/// docs for the full set of conventions).
#[derive(Debug, Clone)]
pub struct FourierGrid {
    n: usize,
    nodes: Vec<f64>,
    wavenumbers: Vec<i64>,
}

impl FourierGrid {
    /// Build a grid with `n_points` nodes; `n_points` must be even and ≥ 8.
    /// Powers of two give the fastest transforms.
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 8 || n_points % 2 != 0 {
            return Err(Error::InvalidGridSize(n_points));
        }
        let n = n_points;
        let h = 2.0 * PI / n as f64;
        let nodes = (0..n).map(|j| -PI + h * j as f64).collect();
        let wavenumbers = (0..n)
            .map(|i| if i <= n / 2 { i as i64 } else { i as i64 - n as i64 })
            .collect();
        Ok(Self { n, nodes, wavenumbers })
    }

    /// Number of nodes N.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid nodes `x_j = -π + 2πj/N`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Wavenumber of each transform bin, `{-N/2+1, …, N/2}` in transform order.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    /// Node spacing `2π/N`, which is also the rectangle-rule quadrature weight.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Largest represented wavenumber `N/2`.
    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    /// Index of the node at `x = 0` (namely `j = N/2`).
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }
}

/// Convenience constructor returning the shared handle used by fields.
pub fn make_grid(n_points: usize) -> Result<Arc<FourierGrid>> {
    Ok(Arc::new(FourierGrid::new(n_points)?))
}
