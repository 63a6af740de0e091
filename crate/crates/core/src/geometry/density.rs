use std::f64::consts::FRAC_PI_2;

use super::Placement;
use crate::error::{Error, Result};

/// Node layout over `[−1, 1]`, both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// Equally spaced nodes.
    Uniform(usize),
    /// Nodes `p = sin t` for equally spaced `t ∈ [−π/2, π/2]`; dense near ±1.
    Sine(usize),
}

impl Grid {
    pub fn len(&self) -> usize {
        match *self {
            Grid::Uniform(n) | Grid::Sine(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 nodes, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut nodes: Vec<f64> = match *self {
            Grid::Uniform(_) => (0..n).map(|i| -1.0 + 2.0 * i as f64 / last).collect(),
            Grid::Sine(_) => (0..n).map(|i| (-FRAC_PI_2 + std::f64::consts::PI * i as f64 / last).sin()).collect(),
        };
        nodes[0] = -1.0;
        nodes[n - 1] = 1.0;
        Ok(nodes)
    }
}

/// Non-negative function sampled on a grid over `[−1, 1]`.
///
/// Besides node values it carries the mass of every cell and a quadrature
/// weight per node (`Σ weightᵢ k(pᵢ)` approximates `∫ w k`). Functions built
/// from samples use trapezoid masses; functions built from an antiderivative
/// carry exact cell masses, which keeps integrable endpoint singularities
/// accurate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
    cells: Vec<f64>,
    uniform: bool,
}

impl SampledFunction {
    /// Samples on the uniform grid with `values.len()` nodes.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let nodes = Grid::Uniform(values.len()).nodes()?;
        Self::on_nodes(nodes, values)
    }

    /// Evaluates `f` on a uniform grid of `grid_size` nodes.
    pub fn from_fn(grid_size: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let nodes = Grid::Uniform(grid_size).nodes()?;
        let values = nodes.iter().map(|&p| f(p)).collect();
        Self::on_nodes(nodes, values)
    }

    /// Samples on arbitrary nodes with trapezoid masses.
    pub fn on_nodes(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if values.len() != nodes.len() {
            return Err(Error::invalid(format!("{} values for {} nodes", values.len(), nodes.len())));
        }
        check_values(&values)?;
        let cells = nodes.windows(2).zip(values.windows(2)).map(|(p, v)| 0.5 * (p[1] - p[0]) * (v[0] + v[1])).collect();
        let weights = trapezoid_weights(&nodes).iter().zip(&values).map(|(q, v)| q * v).collect();
        let uniform = is_uniform(&nodes);
        Ok(Self { nodes, values, weights, cells, uniform })
    }

    /// Builds from per-cell masses; node values are the mean densities of the
    /// adjacent cells and node weights split each cell mass evenly.
    pub fn from_cell_masses(nodes: Vec<f64>, cells: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if cells.len() + 1 != nodes.len() {
            return Err(Error::invalid(format!("{} cell masses for {} nodes", cells.len(), nodes.len())));
        }
        check_values(&cells)?;
        let n = nodes.len();
        let density: Vec<f64> = cells.iter().zip(nodes.windows(2)).map(|(m, p)| m / (p[1] - p[0])).collect();
        let mut values = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            values[i] = match i {
                0 => density[0],
                i if i == n - 1 => density[n - 2],
                i => 0.5 * (density[i - 1] + density[i]),
            };
            if i > 0 {
                weights[i] += 0.5 * cells[i - 1];
            }
            if i < n - 1 {
                weights[i] += 0.5 * cells[i];
            }
        }
        let uniform = is_uniform(&nodes);
        Ok(Self { nodes, values, weights, cells, uniform })
    }

    /// Builds from an antiderivative `F` (exact cell masses) and the density
    /// `f` (node values). Where `f` is not finite, the node takes the mean
    /// density of its cell.
    pub fn from_antiderivative(
        grid: Grid,
        antiderivative: impl Fn(f64) -> f64,
        density: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let nodes = grid.nodes()?;
        let primitive: Vec<f64> = nodes.iter().map(|&p| antiderivative(p)).collect();
        let cells: Vec<f64> = primitive.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        let mut out = Self::from_cell_masses(nodes, cells)?;
        for (v, &p) in out.values.iter_mut().zip(&out.nodes) {
            let f = density(p);
            if f.is_finite() && f >= 0.0 {
                *v = f;
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature weight of each node, already multiplied by the density.
    pub fn node_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cell_masses(&self) -> &[f64] {
        &self.cells
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn integral(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Integral over `[a, b]` assuming the density is constant inside each cell.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for (i, m) in self.cells.iter().enumerate() {
            let (lo, hi) = (self.nodes[i], self.nodes[i + 1]);
            let overlap = (hi.min(b) - lo.max(a)).max(0.0);
            total += m * overlap / (hi - lo);
        }
        total
    }

    /// Piecewise-linear interpolation of the node values.
    pub fn evaluate(&self, p: f64) -> f64 {
        if p <= self.nodes[0] {
            return self.values[0];
        }
        let last = self.nodes.len() - 1;
        if p >= self.nodes[last] {
            return self.values[last];
        }
        let i = self.nodes.partition_point(|&x| x <= p) - 1;
        let t = (p - self.nodes[i]) / (self.nodes[i + 1] - self.nodes[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Multiplies the function by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        self.reweighted(|_| c)
    }

    /// Multiplies the function by a positive weight `g(p)`. Node values and
    /// node weights use `g` at the node, cell masses `g` at the cell midpoint.
    pub fn reweighted(&self, g: impl Fn(f64) -> f64) -> Self {
        let at_nodes: Vec<f64> = self.nodes.iter().map(|&p| g(p)).collect();
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().zip(&at_nodes).map(|(v, g)| v * g).collect(),
            weights: self.weights.iter().zip(&at_nodes).map(|(v, g)| v * g).collect(),
            cells: self.cells.iter().zip(self.nodes.windows(2)).map(|(m, p)| m * g(0.5 * (p[0] + p[1]))).collect(),
            uniform: self.uniform,
        }
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::invalid(format!("grid needs at least 2 nodes, got {}", nodes.len())));
    }
    if nodes[0] != -1.0 || nodes[nodes.len() - 1] != 1.0 {
        return Err(Error::invalid("grid must start at -1 and end at 1"));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("grid nodes must be strictly increasing"));
    }
    Ok(())
}

fn check_values(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        Some(i) => Err(Error::invalid(format!("value {i} = {} is negative or not finite", values[i]))),
        None => Ok(()),
    }
}

fn is_uniform(nodes: &[f64]) -> bool {
    let h = 2.0 / (nodes.len() - 1) as f64;
    nodes.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12)
}

/// Trapezoid weights `qᵢ` of a grid: half the width of the adjacent cells.
pub fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { nodes[i] - nodes[i - 1] } else { 0.0 };
            let right = if i + 1 < n { nodes[i + 1] - nodes[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Discretizes an ADF by inverting its cumulative `Φ(p) = 1 + (M−1)·∫₋₁ᵖ w / ∫w`.
///
/// `Φ` is piecewise linear between nodes. Where `w` vanishes on an interval
/// the left-most solution of `Φ(p) = m` is taken; the endpoints are pinned.
///
/// ```
/// use adf_core::geometry::{discretize_adf, uniform_apf, SampledFunction};
/// let w = SampledFunction::from_fn(129, |_| 7.5).unwrap();
/// let p = discretize_adf(&w, 16).unwrap();
/// let ula = uniform_apf(16).unwrap();
/// for (a, b) in p.positions().iter().zip(ula.positions()) {
///     assert!((a - b).abs() < 1e-9);
/// }
/// ```
pub fn discretize_adf(w: &SampledFunction, m: usize) -> Result<Placement> {
    if m < 2 {
        return Err(Error::invalid(format!("discretization needs M >= 2, got {m}")));
    }
    let total = w.integral();
    if total <= 0.0 {
        return Err(Error::DegenerateDensity);
    }
    let scale = (m - 1) as f64 / total;
    let mut phi = Vec::with_capacity(w.len());
    let mut acc = 0.0;
    phi.push(1.0);
    for c in w.cell_masses() {
        acc += c;
        phi.push(1.0 + acc * scale);
    }
    let last = phi.len() - 1;
    phi[last] = m as f64;
    let nodes = w.nodes();
    let mut positions = Vec::with_capacity(m);
    positions.push(-1.0);
    let slack = 1e-12 * m as f64;
    let mut j = 1;
    for k in 2..m {
        let target = k as f64;
        while phi[j] < target - slack {
            j += 1;
        }
        let (lo, hi) = (phi[j - 1], phi[j]);
        let t = ((target - lo) / (hi - lo)).clamp(0.0, 1.0);
        let p = nodes[j - 1] + t * (nodes[j] - nodes[j - 1]);
        positions.push(p);
    }
    positions.push(1.0);
    Placement::new(positions)
}

/// Histogram density of a placement over `bins` equal bins, scaled so that
/// it integrates to `M − 1`.
pub fn empirical_adf(placement: &Placement, bins: usize) -> Result<SampledFunction> {
    if bins < 2 {
        return Err(Error::invalid(format!("empirical ADF needs at least 2 bins, got {bins}")));
    }
    let m = placement.len();
    let mut counts = vec![0usize; bins];
    for &p in placement.positions() {
        let b = (((p + 1.0) * 0.5 * bins as f64).floor() as usize).min(bins - 1);
        counts[b] += 1;
    }
    let scale = (m.saturating_sub(1)) as f64 / m as f64;
    let cells = counts.iter().map(|&c| c as f64 * scale).collect();
    SampledFunction::from_cell_masses(Grid::Uniform(bins + 1).nodes()?, cells)
}
