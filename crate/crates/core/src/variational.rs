//! Projected functional gradient ascent over the ADF.
//!
//! Each iteration takes `w ← clip(w + η·δC/δw)`, rescales to `∫w = M − 1`
//! and stops once the grid L2 change falls below the threshold. Because the
//! normalization rescales rather than shifts, the iteration settles where
//! `w` is proportional to the gradient; the best iterate seen is returned.

use std::f64::consts::LN_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{grid_steering, weighted_gram, ChannelScenario, GramMatrix};
use crate::error::{Error, Result};
use crate::geometry::{trapezoid_weights, Grid, ReceiveArray, SampledFunction, TransmitArray};
use crate::rate::rate_functional;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    pub step_size: f64,
    /// Stop once the grid L2 change is at most this; `None` means
    /// `1e−6·(M−1)`.
    pub threshold: Option<f64>,
    /// The grid has `χM + 1` nodes.
    pub grid_multiplier: usize,
    /// Linear SNR.
    pub snr: f64,
    /// Caps the raw update at `M − 1` before normalization.
    pub cap: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { max_iterations: 50, step_size: 1e-3, threshold: None, grid_multiplier: 8, snr: 10.0, cap: false }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.max_iterations < 1 {
            errs.push("max_iterations must be at least 1".to_string());
        }
        if !(self.step_size >= 0.0 && self.step_size.is_finite()) {
            errs.push(format!("step size must be finite and non-negative, got {}", self.step_size));
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0) {
                errs.push(format!("threshold must be non-negative, got {t}"));
            }
        }
        if self.grid_multiplier < 1 {
            errs.push("grid multiplier must be at least 1".to_string());
        }
        if !(self.snr > 0.0 && self.snr.is_finite()) {
            errs.push(format!("SNR must be positive, got {}", self.snr));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn threshold_for(&self, m: usize) -> f64 {
        self.threshold.unwrap_or(1e-6 * (m as f64 - 1.0))
    }
}

/// Functional derivative on the grid of `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalGradient {
    pub values: Vec<f64>,
    /// `max|Im| / max|Re|` of the quadratic forms.
    pub imaginary_residue: f64,
}

/// Steering columns on a fixed grid, reused across iterations.
struct GridChannel {
    nodes: Vec<f64>,
    columns: DMatrix<Complex64>,
    m: usize,
}

impl GridChannel {
    fn new(nodes: Vec<f64>, tx: &TransmitArray, rx: &ReceiveArray, scenario: &ChannelScenario) -> Result<Self> {
        let columns = grid_steering(&nodes, tx, rx, scenario)?;
        Ok(Self { nodes, columns, m: tx.m() })
    }

    fn gram(&self, w: &SampledFunction) -> GramMatrix {
        weighted_gram(&self.columns, w.node_weights(), self.m)
    }

    /// `(ρ/(M ln 2))·aᴴ(I + ρK)⁻¹a` at every node.
    fn gradient(&self, k: &GramMatrix, rho: f64) -> Result<FunctionalGradient> {
        let n = k.n();
        let a = DMatrix::<Complex64>::identity(n, n) + k.entries() * Complex64::new(rho, 0.0);
        let chol = a.cholesky().ok_or_else(|| Error::IllConditioned("I + ρK is not positive definite".into()))?;
        let solved = chol.solve(&self.columns);
        let scale = rho / (self.m as f64 * LN_2);
        let mut values = Vec::with_capacity(self.nodes.len());
        let (mut max_re, mut max_im) = (0.0f64, 0.0f64);
        for (col, x) in self.columns.column_iter().zip(solved.column_iter()) {
            let q = col.dotc(&x);
            max_re = max_re.max(q.re.abs());
            max_im = max_im.max(q.im.abs());
            values.push(scale * q.re);
        }
        let imaginary_residue = if max_re > 0.0 { max_im / max_re } else { 0.0 };
        Ok(FunctionalGradient { values, imaginary_residue })
    }
}

/// `δC/δw(p) = (ρ/(M ln 2))·a(p)ᴴ(I + ρK_w)⁻¹a(p)` on the grid of `w`.
///
/// With trapezoid masses, `∂C/∂wᵢ = qᵢ·gᵢ` for quadrature weight `qᵢ`.
pub fn functional_gradient(
    w: &SampledFunction,
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
    rho: f64,
) -> Result<FunctionalGradient> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("SNR must be positive, got {rho}")));
    }
    let grid = GridChannel::new(w.nodes().to_vec(), tx, rx, scenario)?;
    grid.gradient(&grid.gram(w), rho)
}

/// Clips at zero, optionally caps at `M − 1`, and rescales to `∫w = M − 1`
/// with trapezoid weights on `nodes`.
///
/// ```
/// use adf_core::geometry::Grid;
/// use adf_core::variational::project_constraints;
/// let nodes = Grid::Uniform(5).nodes().unwrap();
/// let w = project_constraints(&[4.0; 5], &nodes, 8, false).unwrap();
/// assert!(w.values().iter().all(|&v| (v - 3.5).abs() < 1e-12));
/// ```
pub fn project_constraints(raw: &[f64], nodes: &[f64], m: usize, cap: bool) -> Result<SampledFunction> {
    if raw.len() != nodes.len() {
        return Err(Error::invalid(format!("{} values for {} nodes", raw.len(), nodes.len())));
    }
    if raw.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("density update produced NaN"));
    }
    let target = m as f64 - 1.0;
    let clipped: Vec<f64> = raw
        .iter()
        .map(|&v| {
            let v = v.max(0.0);
            if cap {
                v.min(target)
            } else {
                v
            }
        })
        .collect();
    let mass: f64 = trapezoid_weights(nodes).iter().zip(&clipped).map(|(q, v)| q * v).sum();
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::DegenerateDensity);
    }
    SampledFunction::on_nodes(nodes.to_vec(), clipped.iter().map(|v| v * target / mass).collect())
}

/// One recorded iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Rate functional in bits.
    pub rate: f64,
    /// Grid L2 norm of the change from the previous iterate (0 for the
    /// initial one).
    pub delta_norm: f64,
    pub min_density: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    pub records: Vec<IterationRecord>,
    /// Best-rate iterate.
    pub best: SampledFunction,
    pub best_iteration: usize,
    /// Number of updates performed.
    pub iterations: usize,
    pub converged: bool,
}

impl OptimizerTrace {
    pub fn rates(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.rate).collect()
    }

    pub fn best_rate(&self) -> f64 {
        self.records[self.best_iteration].rate
    }
}

/// Runs the ascent from `w = (M−1)/2` on `χM + 1` uniform nodes.
pub fn optimize_adf(
    config: &OptimizerConfig,
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
) -> Result<OptimizerTrace> {
    config.validate()?;
    let m = tx.m();
    let nodes = Grid::Uniform(config.grid_multiplier * m + 1).nodes()?;
    let q = trapezoid_weights(&nodes);
    let grid = GridChannel::new(nodes.clone(), tx, rx, scenario)?;
    let threshold = config.threshold_for(m);
    let rho = config.snr;

    let mut w = SampledFunction::on_nodes(nodes.clone(), vec![(m as f64 - 1.0) / 2.0; nodes.len()])?;
    let mut k = grid.gram(&w);
    let record = |iteration: usize, w: &SampledFunction, k: &GramMatrix, delta: f64| -> Result<IterationRecord> {
        Ok(IterationRecord {
            iteration,
            rate: rate_functional(k, rho)?,
            delta_norm: delta,
            min_density: w.values().iter().copied().fold(f64::INFINITY, f64::min),
            mass: w.integral(),
        })
    };
    let mut records = vec![record(0, &w, &k, 0.0)?];
    let mut best = w.clone();
    let mut best_iteration = 0;
    let mut converged = false;
    let mut iterations = 0;
    for i in 1..=config.max_iterations {
        let g = grid.gradient(&k, rho)?;
        let raw: Vec<f64> = w.values().iter().zip(&g.values).map(|(v, d)| v + config.step_size * d).collect();
        let next = project_constraints(&raw, &nodes, m, config.cap)?;
        let delta = q
            .iter()
            .zip(next.values().iter().zip(w.values()))
            .map(|(q, (a, b))| q * (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        w = next;
        k = grid.gram(&w);
        let r = record(i, &w, &k, delta)?;
        log::debug!("iteration {i}: rate {:.9} delta {:.3e}", r.rate, delta);
        if r.rate > records[best_iteration].rate {
            best = w.clone();
            best_iteration = i;
        }
        records.push(r);
        iterations = i;
        if delta <= threshold {
            converged = true;
            break;
        }
    }
    Ok(OptimizerTrace { records, best, best_iteration, iterations, converged })
}
