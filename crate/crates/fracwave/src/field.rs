use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::FourierGrid;

/// A real-valued field sampled on the nodes of a [`FourierGrid`].
#[derive(Debug, Clone)]
pub struct RealPeriodicField {
    grid: Arc<FourierGrid>,
    values: Vec<f64>,
}

impl RealPeriodicField {
    /// Wrap sampled values; the length must match the grid and every entry
    /// must be finite.
    pub fn new(grid: Arc<FourierGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch(values.len(), grid.len()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, values })
    }

    /// Sample `f(x)` at the grid nodes.
    pub fn from_fn(grid: &Arc<FourierGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid: Arc::clone(grid), values }
    }

    /// The constant field `f ≡ c`.
    pub fn constant(grid: &Arc<FourierGrid>, c: f64) -> Self {
        Self { grid: Arc::clone(grid), values: vec![c; grid.len()] }
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `‖f‖_∞` over the nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖f − g‖_∞`; the fields must share a grid size.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Discrete `L²` norm `√((2π/N) Σ f_j²)`.
    pub fn l2_norm(&self) -> f64 {
        let w = self.grid.spacing();
        (w * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Sup-norm deviation from evenness about `x = 0`:
    /// `max_j |f(x_j) − f(−x_j)|` (node `−x_j` is node `(N−j) mod N`).
    pub fn evenness_defect(&self) -> f64 {
        let n = self.len();
        let mut d: f64 = 0.0;
        for j in 1..n {
            d = d.max((self.values[j] - self.values[n - j]).abs());
        }
        d
    }

    /// Projection onto even functions: `(f(x) + f(−x))/2` nodewise.
    pub fn even_projected(&self) -> Self {
        let n = self.len();
        let mut out = self.values.clone();
        for j in 1..=n / 2 {
            let avg = 0.5 * (self.values[j] + self.values[n - j]);
            out[j] = avg;
            out[n - j] = avg;
        }
        Self { grid: Arc::clone(&self.grid), values: out }
    }

    /// Single-lobe test: values strictly decrease from the node at `x = 0`
    /// out to `x = π` (the periodic wrap node `x_0 = −π`).
    pub fn is_single_lobe(&self) -> bool {
        let n = self.len();
        let mid = self.grid.origin_index();
        for j in mid..n - 1 {
            if self.values[j + 1] >= self.values[j] {
                return false;
            }
        }
        self.values[0] < self.values[n - 1]
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.len() != other.grid.len() {
            return Err(Error::GridMismatch(self.grid.len(), other.grid.len()));
        }
        Ok(())
    }

    pub(crate) fn from_values_unchecked(grid: Arc<FourierGrid>, values: Vec<f64>) -> Self {
        Self { grid, values }
    }
}
