use std::f64::consts::PI;

use nalgebra::Vector3;

use super::Placement;
use crate::error::{Error, Result};

/// A point in meters.
pub type Point3 = Vector3<f64>;

/// Linear transmit array with movable elements along its axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitArray {
    m: usize,
    spacing: f64,
    theta: f64,
    phi: f64,
}

impl TransmitArray {
    /// `m` elements, unit spacing `spacing` (aperture `(m−1)·spacing`), and
    /// axis direction given by elevation `theta` and azimuth `phi`.
    pub fn new(m: usize, spacing: f64, theta: f64, phi: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("transmit array needs M >= 2, got {m}")));
        }
        check_spacing(spacing)?;
        check_angles(theta, phi)?;
        Ok(Self { m, spacing, theta, phi })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn aperture(&self) -> f64 {
        (self.m - 1) as f64 * self.spacing
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit vector along the array axis.
    pub fn axis(&self) -> Point3 {
        axis(self.theta, self.phi)
    }

    /// Coordinates of the normalized position `p ∈ [−1, 1]`.
    pub fn point_at(&self, p: f64) -> Point3 {
        self.axis() * (0.5 * self.aperture() * p)
    }
}

/// Fixed uniform receive array centered at `(0, 0, z0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiveArray {
    n: usize,
    spacing: f64,
    theta: f64,
    phi: f64,
    z0: f64,
}

impl ReceiveArray {
    pub fn new(n: usize, spacing: f64, theta: f64, phi: f64, z0: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("receive array needs N >= 1"));
        }
        check_spacing(spacing)?;
        check_angles(theta, phi)?;
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(Error::invalid(format!("centroid distance must be positive, got {z0}")));
        }
        Ok(Self { n, spacing, theta, phi, z0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn aperture(&self) -> f64 {
        (self.n - 1) as f64 * self.spacing
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn axis(&self) -> Point3 {
        axis(self.theta, self.phi)
    }

    pub fn with_z0(&self, z0: f64) -> Result<Self> {
        Self::new(self.n, self.spacing, self.theta, self.phi, z0)
    }
}

fn axis(theta: f64, phi: f64) -> Point3 {
    Point3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn check_spacing(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("element spacing must be positive, got {d}")))
    }
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::invalid(format!("elevation {theta} outside [0, pi]")));
    }
    if !(-PI..PI).contains(&phi) {
        return Err(Error::invalid(format!("azimuth {phi} outside [-pi, pi)")));
    }
    Ok(())
}

/// Transmit element coordinates for a placement.
pub fn antenna_coordinates(placement: &Placement, array: &TransmitArray) -> Result<Vec<Point3>> {
    if placement.len() != array.m() {
        return Err(Error::invalid(format!(
            "placement has {} positions but the array has M = {}",
            placement.len(),
            array.m()
        )));
    }
    Ok(placement.positions().iter().map(|&p| array.point_at(p)).collect())
}

/// Receive element coordinates: a uniform array translated to `(0, 0, z0)`.
pub fn receive_coordinates(array: &ReceiveArray) -> Vec<Point3> {
    let n = array.n();
    let center = Point3::new(0.0, 0.0, array.z0());
    if n == 1 {
        return vec![center];
    }
    let half = 0.5 * array.aperture();
    let axis = array.axis();
    (1..=n)
        .map(|k| {
            let p = (2 * k) as f64 - (n + 1) as f64;
            center + axis * (half * p / (n - 1) as f64)
        })
        .collect()
}
