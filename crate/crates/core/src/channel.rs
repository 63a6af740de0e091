//! Spherical-wave responses, channel matrices, and the discrete, continuous
//! and Toeplitz Gram forms.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::asymptotics::fourier_coeff_wadf;
use crate::closedform::NearFieldFactors;
use crate::error::{Error, Result};
use crate::geometry::{
    antenna_coordinates, receive_coordinates, Placement, Point3, ReceiveArray, SampledFunction, TransmitArray,
};

/// Minimum separation between two points that exchange a response.
pub const MIN_DISTANCE: f64 = 1e-9;

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Free-space response `e^{jκr}/r` between two points.
///
/// ```
/// use adf_core::channel::los_response;
/// use adf_core::geometry::Point3;
/// let k = 2.0 * std::f64::consts::PI / 0.03;
/// let h = los_response(&Point3::zeros(), &Point3::new(0.0, 0.0, 3.0), k).unwrap();
/// assert!((h.re - 1.0 / 3.0).abs() < 1e-12 && h.im.abs() < 1e-12);
/// ```
pub fn los_response(r_t: &Point3, r_r: &Point3, wavenumber: f64) -> Result<Complex64> {
    let r = (r_t - r_r).norm();
    if !(r > MIN_DISTANCE) {
        return Err(Error::SingularGeometry { distance: r });
    }
    Ok(Complex64::from_polar(1.0 / r, wavenumber * r))
}

/// Single-bounce response summed over scatterers:
/// `Σ h(s, r_R)·conj(h(r_T, s))`.
pub fn nlos_response(r_t: &Point3, r_r: &Point3, scatterers: &[Scatterer], wavenumber: f64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for s in scatterers {
        sum += los_response(&s.position, r_r, wavenumber)? * los_response(r_t, &s.position, wavenumber)?.conj();
    }
    Ok(sum)
}

/// Point scatterer of the multipath component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub position: Point3,
}

impl Scatterer {
    pub fn new(position: Point3) -> Self {
        Self { position }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Propagation {
    LineOfSight,
    NonLineOfSight(Vec<Scatterer>),
    /// LoS and multipath mixed with linear Rician factor `k_factor`.
    Rician {
        k_factor: f64,
        scatterers: Vec<Scatterer>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    Raw,
    /// Responses multiplied by the centroid distance `z0`.
    #[default]
    Centroid,
}

/// Channel variant, wavelength and amplitude normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelScenario {
    propagation: Propagation,
    wavelength: f64,
    normalization: Normalization,
}

impl ChannelScenario {
    pub fn new(propagation: Propagation, wavelength: f64, normalization: Normalization) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::invalid(format!("wavelength must be positive, got {wavelength}")));
        }
        match &propagation {
            Propagation::LineOfSight => {}
            Propagation::NonLineOfSight(s) if s.is_empty() => {
                return Err(Error::invalid("NLoS channel needs at least one scatterer"))
            }
            Propagation::Rician { k_factor, scatterers } => {
                if !(*k_factor >= 0.0 && k_factor.is_finite()) {
                    return Err(Error::invalid(format!("Rician factor must be >= 0, got {k_factor}")));
                }
                if scatterers.is_empty() {
                    return Err(Error::invalid("Rician channel needs at least one scatterer"));
                }
            }
            Propagation::NonLineOfSight(_) => {}
        }
        Ok(Self { propagation, wavelength, normalization })
    }

    /// Line-of-sight channel with centroid normalization.
    pub fn line_of_sight(wavelength: f64) -> Result<Self> {
        Self::new(Propagation::LineOfSight, wavelength, Normalization::Centroid)
    }

    pub fn propagation(&self) -> &Propagation {
        &self.propagation
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn with_normalization(&self, normalization: Normalization) -> Self {
        Self { normalization, ..self.clone() }
    }

    /// Response from a transmit point to one receive point, before normalization.
    pub fn response(&self, r_t: &Point3, r_r: &Point3) -> Result<Complex64> {
        let k = self.wavenumber();
        match &self.propagation {
            Propagation::LineOfSight => los_response(r_t, r_r, k),
            Propagation::NonLineOfSight(s) => nlos_response(r_t, r_r, s, k),
            Propagation::Rician { k_factor, scatterers } => {
                let los = los_response(r_t, r_r, k)?;
                let nlos = nlos_response(r_t, r_r, scatterers, k)?;
                let a = (k_factor / (1.0 + k_factor)).sqrt();
                let b = (1.0 / (1.0 + k_factor)).sqrt();
                Ok(los * a + nlos * b)
            }
        }
    }

    fn scale(&self, rx: &ReceiveArray) -> f64 {
        match self.normalization {
            Normalization::Raw => 1.0,
            Normalization::Centroid => rx.z0(),
        }
    }

    /// Normalized responses of transmit points (columns) at every receive
    /// element (rows).
    pub fn steering_matrix(&self, tx_points: &[Point3], rx: &ReceiveArray) -> Result<DMatrix<Complex64>> {
        let rx_points = receive_coordinates(rx);
        let scale = self.scale(rx);
        let mut out = DMatrix::zeros(rx_points.len(), tx_points.len());
        for (j, t) in tx_points.iter().enumerate() {
            for (i, r) in rx_points.iter().enumerate() {
                out[(i, j)] = self.response(t, r)? * scale;
            }
        }
        Ok(out)
    }
}

/// `N × M` complex channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: DMatrix<Complex64>,
}

impl ChannelMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("channel matrix has non-finite entries"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn m(&self) -> usize {
        self.entries.ncols()
    }
}

/// Hermitian positive semidefinite `N × N` Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: DMatrix<Complex64>,
}

impl GramMatrix {
    /// Validates Hermitian symmetry (1e−10 relative) and positive
    /// semidefiniteness (eigenvalues ≥ −1e−10 × the largest).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::invalid("Gram matrix must be square"));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("Gram matrix has non-finite entries"));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-10 * scale {
            return Err(Error::invalid(format!("matrix is not Hermitian (deviation {asym:e})")));
        }
        let g = Self::hermitize(entries);
        let eig = g.eigenvalues();
        if let (Some(&lo), Some(&hi)) = (eig.first(), eig.last()) {
            if lo < -1e-10 * hi.max(0.0) && lo < -1e-300 {
                return Err(Error::invalid(format!("matrix is not positive semidefinite (eigenvalue {lo:e})")));
            }
        }
        Ok(g)
    }

    pub(crate) fn hermitize(entries: DMatrix<Complex64>) -> Self {
        let adj = entries.adjoint();
        Self { entries: (entries + adj) * Complex64::new(0.5, 0.0) }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Channel of a placement: entry `(n, m)` is the response from transmit
/// element `m` to receive element `n`.
pub fn channel_matrix(
    placement: &Placement,
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
) -> Result<ChannelMatrix> {
    let points = antenna_coordinates(placement, tx)?;
    ChannelMatrix::new(scenario.steering_matrix(&points, rx)?)
}

/// `K = (1/M)·H·Hᴴ`.
pub fn gram_discrete(h: &ChannelMatrix) -> GramMatrix {
    let m = h.m().max(1) as f64;
    let k = h.entries() * h.entries().adjoint() * Complex64::new(1.0 / m, 0.0);
    GramMatrix::hermitize(k)
}

/// Responses at every grid node of `w`, one column per node.
pub(crate) fn grid_steering(
    nodes: &[f64],
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
) -> Result<DMatrix<Complex64>> {
    let points: Vec<Point3> = nodes.iter().map(|&p| tx.point_at(p)).collect();
    scenario.steering_matrix(&points, rx)
}

/// `(1/M) Σᵢ μᵢ a(pᵢ) a(pᵢ)ᴴ` for steering columns `a` and node weights `μ`.
pub(crate) fn weighted_gram(columns: &DMatrix<Complex64>, weights: &[f64], m: usize) -> GramMatrix {
    let mut scaled = columns.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(weights[j] / m as f64, 0.0);
    }
    GramMatrix::hermitize(scaled * columns.adjoint())
}

/// Density Gram `(1/M)∫ w(p) a(p) a(p)ᴴ dp`, with `a(p)` the responses of a
/// transmit point at normalized position `p`, evaluated with the node
/// weights of `w`.
pub fn gram_continuous(
    w: &SampledFunction,
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
) -> Result<GramMatrix> {
    let columns = grid_steering(w.nodes(), tx, rx, scenario)?;
    Ok(weighted_gram(&columns, w.node_weights(), tx.m()))
}

/// Toeplitz surrogate `K̄[n,n′] = (1/z0²)∫ w̃(p) e^{−jβ(n−n′)p} dp` with
/// `w̃ = w/(1−τp)²`.
pub fn gram_toeplitz(w: &SampledFunction, factors: &NearFieldFactors, n: usize) -> Result<GramMatrix> {
    let beta = factors.beta();
    if beta >= PI {
        return Err(Error::OutOfRegime { beta });
    }
    let tau = factors.tau();
    let weighted = w.reweighted(|p| (1.0 - tau * p).powi(-2));
    let scale = 1.0 / (factors.z0() * factors.z0());
    let coeffs: Vec<Complex64> = (0..n).map(|l| fourier_coeff_wadf(&weighted, beta, l as i64) * scale).collect();
    let t = DMatrix::from_fn(n, n, |i, j| if i >= j { coeffs[i - j] } else { coeffs[j - i].conj() });
    Ok(GramMatrix { entries: t })
}
