//! Frequency sweeps of the wave family and the Vakhitov–Kolokolov slope
//! criterion: the sign of `q(ω) = d/dω ∫ φ_ω² dx` decides orbital stability
//! (`q > 0` stable, `q < 0` unstable; a sign change brackets the critical
//! frequency).
//!
//! A sweep solves the profile equation on a shared grid at `steps` equally
//! spaced frequencies `ω_j = ω_min + jΔω`, `j = 1..steps` (the lower endpoint
//! is excluded, the upper included), then forms forward differences of the
//! mass. Two continuation modes:
//!
//! * **warm start** (default): sequential in increasing `ω`, each solve
//!   seeded with the previous converged profile — fastest and most robust;
//! * **cold start**: every point seeded independently from
//!   [`default_initial_guess`], which makes the points embarrassingly
//!   parallel. With the `parallel` feature enabled and `parallel = true`
//!   the points run on the rayon thread pool; results are bit-identical to
//!   the sequential cold run because the points share no state.

use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::RealPeriodicField;
use crate::grid::{make_grid, FourierGrid};
use crate::ops::mass;
use crate::params::FractionalParams;
use crate::petviashvili::{default_initial_guess, solve, PetviashviliConfig};

/// Sweep controls. `omega_min ≥ 1/2` is required: below the bifurcation the
/// ground state is the constant branch and the mass slope carries no
/// stability information for the wave family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub s: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Number of sweep points (the grid has `steps` frequencies).
    pub steps: usize,
    /// Spatial resolution shared by every solve.
    pub grid_n: usize,
    pub solver: PetviashviliConfig,
    /// Seed every point from scratch instead of continuing along the branch.
    pub cold_start: bool,
    /// Run cold-start points on the rayon pool (needs the `parallel`
    /// feature, otherwise the sweep silently runs sequentially). Ignored in
    /// warm-start mode, which is inherently ordered.
    pub parallel: bool,
}

impl SweepConfig {
    pub fn new(s: f64, omega_min: f64, omega_max: f64, steps: usize, grid_n: usize) -> Self {
        Self {
            s,
            omega_min,
            omega_max,
            steps,
            grid_n,
            solver: PetviashviliConfig::sweep_default(),
            cold_start: false,
            parallel: false,
        }
    }
}

/// Results of a sweep. Arrays are indexed by sweep point; `q_values` has one
/// entry fewer than `omegas` (forward differences), with `None` wherever
/// either endpoint failed to converge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VKSweep {
    pub s: f64,
    pub omegas: Vec<f64>,
    pub masses: Vec<f64>,
    pub convergence_flags: Vec<bool>,
    pub iterations: Vec<usize>,
    pub q_values: Vec<Option<f64>>,
    /// Estimated critical frequency, set by [`vk_index`] when the slope
    /// changes sign exactly once (negative to positive).
    pub omega_c: Option<f64>,
    /// Grid spacing `Δω`; also the uncertainty of `omega_c`.
    pub delta_omega: f64,
}

/// Stability verdict from the slope signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    /// Every defined slope is positive.
    Stable,
    /// Every defined slope is negative.
    Unstable,
    /// Exactly one sign change, negative to positive: the family crosses
    /// from unstable to stable at `omega_c` (known to within `uncertainty`).
    Critical {
        omega_c: f64,
        uncertainty: f64,
        bracket: (f64, f64),
    },
    /// Anything else: exact zeros, positive-to-negative changes, multiple
    /// changes, or no defined slopes at all. `sign_changes` lists the grid
    /// indices of the left member of each changing pair.
    Indeterminate { sign_changes: Vec<usize> },
}

struct Point {
    mass: f64,
    converged: bool,
    iterations: usize,
    profile: Option<RealPeriodicField>,
}

impl Point {
    fn failed() -> Self {
        Self { mass: 0.0, converged: false, iterations: 0, profile: None }
    }
}

fn solve_point(
    grid: &Arc<FourierGrid>,
    s: f64,
    omega: f64,
    cfg: &PetviashviliConfig,
    init: Option<&RealPeriodicField>,
) -> Point {
    let Ok(p) = FractionalParams::new(s, omega) else {
        return Point::failed();
    };
    let guess = match init {
        Some(f) => f.clone(),
        None => match default_initial_guess(grid, &p) {
            Ok(f) => f,
            Err(_) => return Point::failed(),
        },
    };
    match solve(&guess, &p, cfg) {
        Ok(r) => Point {
            mass: mass(&r.profile),
            converged: r.converged,
            iterations: r.iterations(),
            profile: Some(r.profile),
        },
        Err(_) => Point::failed(),
    }
}

/// Solve the family along the frequency grid and record the mass at every
/// point. Individual failures are tolerated (flagged, mass recorded as the
/// last iterate's); a sweep where *no* point converges is an error.
pub fn mass_curve(cfg: &SweepConfig) -> Result<VKSweep> {
    if !(cfg.omega_min >= 0.5
        && cfg.omega_min < cfg.omega_max
        && cfg.omega_max.is_finite()
        && cfg.steps >= 2)
    {
        return Err(Error::InvalidSweepRange);
    }
    // reject invalid s up front so per-point failures can only be numerical
    FractionalParams::new(cfg.s, cfg.omega_max)?;
    let grid = make_grid(cfg.grid_n)?;

    let delta = (cfg.omega_max - cfg.omega_min) / cfg.steps as f64;
    let omegas: Vec<f64> = (1..=cfg.steps)
        .map(|j| cfg.omega_min + j as f64 * delta)
        .collect();

    let points: Vec<Point> = if cfg.cold_start {
        run_cold(cfg, &grid, &omegas)
    } else {
        let mut out = Vec::with_capacity(omegas.len());
        let mut warm: Option<RealPeriodicField> = None;
        for &w in &omegas {
            let pt = solve_point(&grid, cfg.s, w, &cfg.solver, warm.as_ref());
            if pt.converged {
                warm = pt.profile.clone();
            }
            out.push(pt);
        }
        out
    };

    if !points.iter().any(|p| p.converged) {
        return Err(Error::AllPointsFailed);
    }

    Ok(VKSweep {
        s: cfg.s,
        masses: points.iter().map(|p| p.mass).collect(),
        convergence_flags: points.iter().map(|p| p.converged).collect(),
        iterations: points.iter().map(|p| p.iterations).collect(),
        q_values: Vec::new(),
        omega_c: None,
        delta_omega: delta,
        omegas,
    })
}

#[cfg(feature = "parallel")]
fn run_cold(cfg: &SweepConfig, grid: &Arc<FourierGrid>, omegas: &[f64]) -> Vec<Point> {
    if cfg.parallel {
        omegas
            .par_iter()
            .map(|&w| solve_point(grid, cfg.s, w, &cfg.solver, None))
            .collect()
    } else {
        omegas
            .iter()
            .map(|&w| solve_point(grid, cfg.s, w, &cfg.solver, None))
            .collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_cold(cfg: &SweepConfig, grid: &Arc<FourierGrid>, omegas: &[f64]) -> Vec<Point> {
    omegas
        .iter()
        .map(|&w| solve_point(grid, cfg.s, w, &cfg.solver, None))
        .collect()
}

/// Fill `q_values` with forward differences `(m_{j+1} − m_j)/Δω` (defined
/// only where both endpoints converged), classify the slope pattern, and
/// store the critical frequency if one is found. At least two converged
/// points are required.
pub fn vk_index(sweep: &mut VKSweep) -> Result<Classification> {
    let converged = sweep.convergence_flags.iter().filter(|&&c| c).count();
    if converged < 2 {
        return Err(Error::TooFewConverged(converged));
    }
    sweep.q_values = (0..sweep.omegas.len() - 1)
        .map(|i| {
            (sweep.convergence_flags[i] && sweep.convergence_flags[i + 1])
                .then(|| (sweep.masses[i + 1] - sweep.masses[i]) / sweep.delta_omega)
        })
        .collect();
    let cls = classify(sweep);
    sweep.omega_c = match &cls {
        Classification::Critical { omega_c, .. } => Some(*omega_c),
        _ => None,
    };
    Ok(cls)
}

/// Classify the sign pattern of the defined slopes, in grid order.
pub fn classify(sweep: &VKSweep) -> Classification {
    // (grid index, slope) for the defined entries
    let defined: Vec<(usize, f64)> = sweep
        .q_values
        .iter()
        .enumerate()
        .filter_map(|(i, q)| q.map(|v| (i, v)))
        .collect();
    if defined.is_empty() {
        return Classification::Indeterminate { sign_changes: Vec::new() };
    }
    if defined.iter().any(|&(_, v)| v == 0.0) {
        // an exact zero slope never resolves to a side
        return Classification::Indeterminate { sign_changes: Vec::new() };
    }
    let sign_changes: Vec<usize> = defined
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| w[0].0)
        .collect();
    match sign_changes.len() {
        0 => {
            if defined[0].1 > 0.0 {
                Classification::Stable
            } else {
                Classification::Unstable
            }
        }
        1 => {
            let i = sign_changes[0];
            let j = defined.iter().position(|&(gi, _)| gi == i).unwrap();
            let (gi, qi) = defined[j];
            let (gj, _) = defined[j + 1];
            if qi < 0.0 {
                // slope crosses zero somewhere in (ω_{gi}, ω_{gj+1})
                let lo = sweep.omegas[gi];
                let hi = sweep.omegas[gj + 1];
                Classification::Critical {
                    omega_c: 0.5 * (lo + hi),
                    uncertainty: 0.5 * (hi - lo),
                    bracket: (lo, hi),
                }
            } else {
                // stable-to-unstable is not the scenario this index covers
                Classification::Indeterminate { sign_changes }
            }
        }
        _ => Classification::Indeterminate { sign_changes },
    }
}

/// Convenience wrapper: run the sweep and the index in one call.
pub fn run_sweep(cfg: &SweepConfig) -> Result<(VKSweep, Classification)> {
    let mut sweep = mass_curve(cfg)?;
    let cls = vk_index(&mut sweep)?;
    Ok((sweep, cls))
}
