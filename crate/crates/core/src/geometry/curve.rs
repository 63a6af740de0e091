use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::specfun::{complete_beta, incomplete_beta_unchecked, symmetric_beta_quantile};

/// Planar curve on which equally spaced elements reproduce the edge-singular
/// density `(R² − x²)^(2α)` in projection.
#[derive(Debug, Clone, PartialEq)]
pub struct FlexibleCurve {
    alpha: f64,
    radius: f64,
    samples: Vec<(f64, f64)>,
}

impl FlexibleCurve {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Sampled `(x, y)` points, `x` strictly increasing from `−R` to `R`.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Height `y(x)` for `|x| ≤ R`.
    pub fn height_at(&self, x: f64) -> f64 {
        curve_height(self.alpha, self.radius, x)
    }

    /// Total arc length `R·B(1/2, 1+2α)`.
    pub fn arc_length(&self) -> f64 {
        self.radius * complete_beta(0.5, 1.0 + 2.0 * self.alpha).unwrap_or(f64::NAN)
    }

    /// Arc length from `(−R, 0)` to the point above `x`.
    pub fn arc_length_to(&self, x: f64) -> f64 {
        let c = 1.0 + 2.0 * self.alpha;
        let xi = (x / self.radius).clamp(-1.0, 1.0);
        let half = 0.5 * self.arc_length();
        half + xi.signum() * 0.5 * self.radius * incomplete_beta_unchecked(xi * xi, 0.5, c)
    }

    /// Length of the polyline through the samples.
    pub fn polyline_length(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).sum()
    }
}

/// Integrates `dy/dx = sign(x)·sqrt(((R²−x²)/R²)^(4α) − 1)` from `(−R, 0)`.
///
/// Samples are placed at `x = −R cos(πj/(S−1))`, dense near the ends where
/// the slope is steep.
///
/// ```
/// use adf_core::geometry::flexible_curve;
/// let c = flexible_curve(-0.25, 1.0, 101).unwrap();
/// assert!((c.height_at(0.0) + 1.0).abs() < 1e-9);
/// ```
pub fn flexible_curve(alpha: f64, radius: f64, samples: usize) -> Result<FlexibleCurve> {
    if !(alpha > -0.5 && alpha <= 0.0) {
        return Err(Error::invalid(format!("curve order alpha = {alpha} outside (-0.5, 0]")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("curve half-aperture must be positive, got {radius}")));
    }
    if samples < 2 {
        return Err(Error::invalid(format!("curve needs at least 2 samples, got {samples}")));
    }
    let last = (samples - 1) as f64;
    let pts = (0..samples)
        .map(|j| {
            let x = match j {
                0 => -radius,
                j if j == samples - 1 => radius,
                j => -radius * (PI * j as f64 / last).cos(),
            };
            (x, curve_height(alpha, radius, x))
        })
        .collect();
    Ok(FlexibleCurve { alpha, radius, samples: pts })
}

/// `y(x) = y(−|x|)`: the integrand is odd, so the curve is even.
///
/// With `x = −R cos u` the slope integrand behaves like `u^(4α+1)` at the
/// rim; the further map `u = (π/2)·s^k`, `k = 1/(4α+2)`, makes it bounded.
fn curve_height(alpha: f64, radius: f64, x: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    let ratio = (x.abs() / radius).min(1.0);
    let u_end = ratio.acos();
    if u_end <= 0.0 {
        return 0.0;
    }
    let k = 1.0 / (4.0 * alpha + 2.0);
    let s_end = (u_end / FRAC_PI_2).powf(1.0 / k);
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let u = FRAC_PI_2 * s.powf(k);
        let su = u.sin();
        let slope = (su.powf(8.0 * alpha) - 1.0).max(0.0).sqrt() * su;
        slope * FRAC_PI_2 * k * s.powf(k - 1.0)
    };
    -radius * gauss_legendre(integrand, 0.0, s_end, 64)
}

/// Places `M` points at equal arc-length steps, both ends included.
///
/// The arc length is `R·∫(1−ξ²)^(2α) dξ`, so the projected abscissas are
/// Beta quantiles.
pub fn place_on_curve(curve: &FlexibleCurve, m: usize) -> Result<Vec<(f64, f64)>> {
    if m < 2 {
        return Err(Error::invalid(format!("curve placement needs M >= 2, got {m}")));
    }
    let c = 1.0 + 2.0 * curve.alpha;
    let r = curve.radius;
    Ok((1..=m)
        .map(|k| {
            let t = ((2 * k) as f64 - (m + 1) as f64) / (m - 1) as f64;
            let x = r * symmetric_beta_quantile(t, c);
            (x, curve.height_at(x))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_curve_at_zero_order() {
        let c = flexible_curve(0.0, 2.0, 11).unwrap();
        assert!(c.samples().iter().all(|&(_, y)| y == 0.0));
        assert!((c.arc_length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn semicircle_at_quarter_order() {
        let c = flexible_curve(-0.25, 1.0, 401).unwrap();
        for &(x, y) in c.samples() {
            assert!((y + (1.0 - x * x).max(0.0).sqrt()).abs() < 1e-6, "x={x} y={y}");
        }
        assert!((c.arc_length() - PI).abs() < 1e-6);
        assert!((c.polyline_length() - PI).abs() < 1e-3);
    }

    #[test]
    fn endpoints_return_to_axis() {
        for alpha in [-0.1, -0.3, -0.45] {
            let c = flexible_curve(alpha, 1.5, 51).unwrap();
            let s = c.samples();
            assert_eq!(s[0].1, 0.0);
            assert!(s[s.len() - 1].1.abs() < 1e-9);
            assert!(s.windows(2).all(|w| w[1].0 > w[0].0));
        }
    }

    #[test]
    fn three_points_on_semicircle() {
        let c = flexible_curve(-0.25, 1.0, 3).unwrap();
        let pts = place_on_curve(&c, 3).unwrap();
        let expected = [(-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)];
        for (p, e) in pts.iter().zip(expected) {
            assert!((p.0 - e.0).abs() < 1e-9 && (p.1 - e.1).abs() < 1e-9);
        }
        let c = flexible_curve(-0.3, 2.0, 3).unwrap();
        let pts = place_on_curve(&c, 2).unwrap();
        assert_eq!(pts[0].0, -2.0);
        assert_eq!(pts[1].0, 2.0);
        assert!(pts[1].1.abs() < 1e-9);
    }

    #[test]
    fn equal_arc_steps() {
        let c = flexible_curve(-0.35, 1.0, 3).unwrap();
        let pts = place_on_curve(&c, 9).unwrap();
        let step = c.arc_length() / 8.0;
        for (i, p) in pts.iter().enumerate() {
            assert!((c.arc_length_to(p.0) - step * i as f64).abs() < 1e-8);
        }
    }

    #[test]
    fn invalid_order() {
        assert!(flexible_curve(-0.5, 1.0, 10).is_err());
        assert!(flexible_curve(0.1, 1.0, 10).is_err());
        assert!(flexible_curve(-0.2, 0.0, 10).is_err());
    }
}
