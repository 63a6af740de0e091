//! Near-field factors, the optimal edge-singular ADF family, and its
//! closed-form cumulative and Beta-quantile positions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Grid, Placement, ReceiveArray, SampledFunction, TransmitArray};
use crate::specfun::{complete_beta, incomplete_beta_unchecked, ln_gamma_unchecked, symmetric_beta_quantile};

/// Scalars coupling geometry and wavelength in the Toeplitz Gram surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearFieldFactors {
    tau: f64,
    beta: f64,
    z0: f64,
    rho: f64,
}

impl NearFieldFactors {
    pub fn new(tau: f64, beta: f64, z0: f64, rho: f64) -> Result<Self> {
        if !(tau.abs() < 1.0) {
            return Err(Error::invalid(format!("|tau| must be below 1, got {tau}")));
        }
        if !(beta > 0.0) {
            return Err(Error::invalid(format!("beta must be positive, got {beta}")));
        }
        if beta >= PI {
            return Err(Error::OutOfRegime { beta });
        }
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(Error::invalid(format!("z0 must be positive, got {z0}")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(format!("SNR must be positive, got {rho}")));
        }
        Ok(Self { tau, beta, z0, rho })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Bias `βz0²/(2πρ)` subtracted inside the optimal ADF.
    pub fn bias(&self) -> f64 {
        self.beta * self.z0 * self.z0 / (2.0 * PI * self.rho)
    }
}

/// `τ = A_T cosθ_T/(2z0)` and `β = κ A_T d_R sinθ_T sinθ_R cos(φ_T−φ_R)/(2z0)`.
///
/// `β` is the phase slope of `h_n h*_{n+1}` per unit of `p` under the
/// Fresnel expansion; its sign is irrelevant to the spectrum and is dropped.
pub fn nearfield_factors(tx: &TransmitArray, rx: &ReceiveArray, wavelength: f64, rho: f64) -> Result<NearFieldFactors> {
    if !(wavelength > 0.0) {
        return Err(Error::invalid(format!("wavelength must be positive, got {wavelength}")));
    }
    let z0 = rx.z0();
    let tau = tx.aperture() * tx.theta().cos() / (2.0 * z0);
    let kappa = 2.0 * PI / wavelength;
    let beta = kappa * tx.aperture() * rx.spacing() * tx.theta().sin() * rx.theta().sin() * (tx.phi() - rx.phi()).cos()
        / (2.0 * z0);
    NearFieldFactors::new(tau, beta.abs(), z0, rho)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -0.5 && alpha <= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("singularity order alpha = {alpha} outside (-0.5, 0]")))
    }
}

fn check_count(m: usize) -> Result<()> {
    if m >= 2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("ADF needs M >= 2, got {m}")))
    }
}

/// Parameters of `w(p) = (γ(1−p²)^(2α) − βz0²/(2πρ))·(1−τp)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfFamilyParams {
    alpha: f64,
    m: usize,
    factors: NearFieldFactors,
    gamma: f64,
}

impl AdfFamilyParams {
    /// Computes `γ_α` and rejects parameter sets whose bias makes the ADF
    /// negative somewhere.
    pub fn new(alpha: f64, m: usize, factors: NearFieldFactors) -> Result<Self> {
        check_alpha(alpha)?;
        check_count(m)?;
        let gamma = gamma_norm(alpha, m, &factors);
        let bias = factors.bias();
        if gamma < bias {
            return Err(Error::InfeasibleParameters(format!(
                "bias {bias:.6} exceeds the edge-singular amplitude {gamma:.6}; the ADF would be negative near p = 0"
            )));
        }
        Ok(Self { alpha, m, factors, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn factors(&self) -> &NearFieldFactors {
        &self.factors
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Density at `p`; infinite at ±1 when `α < 0`.
    pub fn density(&self, p: f64) -> f64 {
        let s = if self.alpha == 0.0 { 1.0 } else { (1.0 - p * p).powf(2.0 * self.alpha) };
        (self.gamma * s - self.factors.bias()) * (1.0 - self.factors.tau * p).powi(2)
    }

    /// `∫₋₁ᵖ w`.
    pub fn cumulative(&self, p: f64) -> f64 {
        let c = 1.0 + 2.0 * self.alpha;
        let tau = self.factors.tau;
        let b = self.factors.bias();
        let moment = |k: usize| singular_moment(k, c, p) - singular_moment(k, c, -1.0);
        let singular = moment(0) - 2.0 * tau * moment(1) + tau * tau * moment(2);
        let smooth = (p + 1.0) - tau * (p * p - 1.0) + tau * tau * (p * p * p + 1.0) / 3.0;
        self.gamma * singular - b * smooth
    }
}

/// `∫₀ˣ t^k (1−t²)^(c−1) dt = sign(x)^(k+1)·½·B(x²; (k+1)/2, c)`.
fn singular_moment(k: usize, c: f64, x: f64) -> f64 {
    let sign = if x < 0.0 && k % 2 == 0 { -1.0 } else { 1.0 };
    sign * 0.5 * incomplete_beta_unchecked(x * x, (k as f64 + 1.0) / 2.0, c)
}

/// Outcome of the `γ_α` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaNorm {
    /// Value in use.
    pub value: f64,
    /// The Gamma/sine closed form.
    pub closed_form: f64,
    /// Normalization through complete Beta functions.
    pub normalized: f64,
    /// True when the closed form disagreed and the normalized value won.
    pub fallback: bool,
}

/// Normalization constant `γ_α` making `∫w = M − 1`.
pub fn gamma_norm(alpha: f64, m: usize, factors: &NearFieldFactors) -> f64 {
    gamma_norm_checked(alpha, m, factors).value
}

/// Evaluates the Gamma/sine closed form of `γ_α` and checks it against the
/// normalization integral `B(1/2, c) + τ²B(3/2, c)`, `c = 1+2α`.
pub fn gamma_norm_checked(alpha: f64, m: usize, factors: &NearFieldFactors) -> GammaNorm {
    let tau2 = factors.tau * factors.tau;
    let numerator = (m as f64 - 1.0) + factors.bias() * (2.0 + 2.0 * tau2 / 3.0);
    if alpha == 0.0 {
        let v = numerator / (2.0 + 2.0 * tau2 / 3.0);
        return GammaNorm { value: v, closed_form: v, normalized: v, fallback: false };
    }
    let c = 1.0 + 2.0 * alpha;
    let closed_form = numerator
        * (ln_gamma_unchecked(1.0 - 2.0 * alpha) + ln_gamma_unchecked(2.5 + 2.0 * alpha)).exp()
        * (2.0 * alpha * PI).sin()
        / (alpha * PI.powf(1.5) * (3.0 + 4.0 * alpha + tau2));
    let denom = complete_beta(0.5, c).unwrap_or(f64::NAN) + tau2 * complete_beta(1.5, c).unwrap_or(f64::NAN);
    let normalized = numerator / denom;
    let agree = (closed_form - normalized).abs() <= 1e-6 * normalized.abs();
    if !agree {
        log::warn!(
            "gamma closed form {closed_form} disagrees with normalization {normalized} at alpha = {alpha}; using the latter"
        );
    }
    GammaNorm { value: if agree { closed_form } else { normalized }, closed_form, normalized, fallback: !agree }
}

fn default_grid(alpha: f64, m: usize) -> Grid {
    if alpha == 0.0 {
        Grid::Uniform(8 * m + 1)
    } else {
        Grid::Sine((64 * m).max(2049) + 1)
    }
}

/// The optimal ADF sampled with exact cell masses (sine-graded grid for
/// `α < 0`, uniform `8M + 1` nodes for `α = 0`).
pub fn optimal_adf(params: &AdfFamilyParams) -> Result<SampledFunction> {
    optimal_adf_on(params, default_grid(params.alpha, params.m))
}

pub fn optimal_adf_on(params: &AdfFamilyParams, grid: Grid) -> Result<SampledFunction> {
    let w = SampledFunction::from_antiderivative(grid, |p| params.cumulative(p), |p| params.density(p).max(0.0))?;
    if let Some(p) = w.nodes().iter().find(|&&p| p.abs() < 1.0 && params.density(p) < -1e-12) {
        return Err(Error::InfeasibleParameters(format!("ADF negative at p = {p}")));
    }
    let target = (params.m - 1) as f64;
    if (w.integral() - target).abs() > 1e-6 * target.max(1.0) {
        log::warn!("optimal ADF integrates to {} instead of {target}; rescaling", w.integral());
        return Ok(w.scaled(target / w.integral()));
    }
    Ok(w)
}

/// Normalization of the simplified ADF `γ(1−p²)^(2α)`: `(M−1)/B(1/2, 1+2α)`.
pub fn simplified_gamma(alpha: f64, m: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_count(m)?;
    Ok((m - 1) as f64 / complete_beta(0.5, 1.0 + 2.0 * alpha)?)
}

/// `w(p) = γ(1−p²)^(2α)` normalized to `M − 1`.
///
/// ```
/// use adf_core::closedform::simplified_adf;
/// let w = simplified_adf(-0.25, 16).unwrap();
/// assert!((w.integral() - 15.0).abs() < 1e-9);
/// let (p, v) = (w.nodes()[100], w.values()[100]);
/// assert!((v - 15.0 / std::f64::consts::PI / (1.0 - p * p).sqrt()).abs() < 1e-9);
/// ```
pub fn simplified_adf(alpha: f64, m: usize) -> Result<SampledFunction> {
    simplified_adf_on(alpha, m, default_grid(alpha, m))
}

pub fn simplified_adf_on(alpha: f64, m: usize, grid: Grid) -> Result<SampledFunction> {
    let gamma = simplified_gamma(alpha, m)?;
    let c = 1.0 + 2.0 * alpha;
    SampledFunction::from_antiderivative(
        grid,
        |p| gamma * (singular_moment(0, c, p) - singular_moment(0, c, -1.0)),
        |p| if alpha == 0.0 { gamma } else { gamma * (1.0 - p * p).powf(2.0 * alpha) },
    )
}

/// Closed-form cumulative `Φ(p) = (M+1)/2 + sign(p)(γ/2)B(p²; 1/2, 1+2α)`.
pub fn cadf_closed(p: f64, alpha: f64, m: usize) -> Result<f64> {
    if !(-1.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("position {p} outside [-1, 1]")));
    }
    let gamma = simplified_gamma(alpha, m)?;
    let c = 1.0 + 2.0 * alpha;
    Ok((m as f64 + 1.0) / 2.0 + p.signum() * 0.5 * gamma * incomplete_beta_unchecked(p * p, 0.5, c))
}

/// Position of (possibly fractional) index `m_index ∈ [1, M]`, the inverse
/// of [`cadf_closed`].
///
/// ```
/// use adf_core::closedform::positions_closed;
/// let p = positions_closed(12.0, -0.25, 16).unwrap();
/// assert!((p - (3.5 * std::f64::consts::PI / 15.0).sin()).abs() < 1e-9);
/// ```
pub fn positions_closed(m_index: f64, alpha: f64, m: usize) -> Result<f64> {
    check_alpha(alpha)?;
    check_count(m)?;
    if !(1.0..=m as f64).contains(&m_index) {
        return Err(Error::domain("positions_closed", m_index));
    }
    let t = (2.0 * m_index - (m as f64 + 1.0)) / (m as f64 - 1.0);
    Ok(symmetric_beta_quantile(t, 1.0 + 2.0 * alpha))
}

/// All `M` closed-form positions as a placement.
pub fn closed_form_placement(alpha: f64, m: usize) -> Result<Placement> {
    let positions = (1..=m).map(|k| positions_closed(k as f64, alpha, m)).collect::<Result<Vec<_>>>()?;
    Placement::new(positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn negligible_bias(tau: f64) -> NearFieldFactors {
        NearFieldFactors::new(tau, 0.5, 3.0, 1e15).unwrap()
    }

    #[test]
    fn factor_examples() {
        let lambda = 0.03;
        let tx = TransmitArray::new(64, 0.015, FRAC_PI_2, 0.0).unwrap();
        let rx = ReceiveArray::new(4, lambda / 2.0, FRAC_PI_2, 0.0, 3.0).unwrap();
        let f = nearfield_factors(&tx, &rx, lambda, 10.0).unwrap();
        assert!(f.tau().abs() < 1e-16);
        assert!((f.beta() - PI * 0.945 / 6.0).abs() < 1e-12);
        let tx = TransmitArray::new(64, 0.015, PI / 3.0, 0.0).unwrap();
        let rx = rx.with_z0(5.0).unwrap();
        let f = nearfield_factors(&tx, &rx, lambda, 10.0).unwrap();
        assert!((f.tau() - 0.04725).abs() < 1e-12);
    }

    #[test]
    fn out_of_regime() {
        let tx = TransmitArray::new(64, 0.015, FRAC_PI_2, 0.0).unwrap();
        let rx = ReceiveArray::new(4, 0.015, FRAC_PI_2, 0.0, 0.1).unwrap();
        assert!(matches!(nearfield_factors(&tx, &rx, 0.03, 10.0), Err(Error::OutOfRegime { .. })));
    }

    #[test]
    fn gamma_examples() {
        let f = negligible_bias(0.0);
        assert!((gamma_norm(-0.25, 16, &f) - 15.0 / PI).abs() < 1e-9);
        let oracle = PI.sqrt() * ln_gamma_unchecked(0.25).exp() / ln_gamma_unchecked(0.75).exp();
        assert!((gamma_norm(-0.375, 16, &f) - 15.0 / oracle).abs() < 1e-9);
        assert!((gamma_norm(-0.375, 16, &f) - 2.8604).abs() < 1e-4);
        let g = gamma_norm_checked(-0.3, 32, &NearFieldFactors::new(0.2, 1.0, 3.0, 10.0).unwrap());
        assert!(!g.fallback);
    }

    #[test]
    fn zero_order_is_constant() {
        let p = AdfFamilyParams::new(0.0, 16, negligible_bias(0.0)).unwrap();
        let w = optimal_adf(&p).unwrap();
        assert!(w.values().iter().all(|v| (v - 7.5).abs() < 1e-9));
    }

    #[test]
    fn quarter_order_center_value() {
        let p = AdfFamilyParams::new(-0.25, 16, negligible_bias(0.0)).unwrap();
        assert!((p.density(0.0) - 15.0 / PI).abs() < 1e-9);
        let w = optimal_adf(&p).unwrap();
        assert!((w.integral() - 15.0).abs() < 1e-6);
    }

    #[test]
    fn continuity_at_zero_order() {
        let f = NearFieldFactors::new(0.1, 0.5, 3.0, 10.0).unwrap();
        let a = AdfFamilyParams::new(-1e-4, 16, f).unwrap();
        let b = AdfFamilyParams::new(0.0, 16, f).unwrap();
        for i in 0..=100 {
            let p = -0.99 + 1.98 * i as f64 / 100.0;
            assert!((a.density(p) - b.density(p)).abs() <= 1e-2 * b.density(p));
        }
    }

    #[test]
    fn infeasible_bias() {
        let f = NearFieldFactors::new(0.0, 3.0, 10.0, 0.01).unwrap();
        assert!(matches!(AdfFamilyParams::new(-0.25, 4, f), Err(Error::InfeasibleParameters(_))));
    }

    #[test]
    fn cumulative_matches_normalization() {
        let f = NearFieldFactors::new(0.3, 0.8, 3.0, 10.0).unwrap();
        for alpha in [-0.49, -0.4, -0.25, -0.1, -0.01] {
            let p = AdfFamilyParams::new(alpha, 20, f).unwrap();
            assert!((p.cumulative(1.0) - 19.0).abs() < 1e-6, "alpha {alpha}");
        }
    }

    #[test]
    fn closed_cadf_values() {
        assert!((cadf_closed(0.0, -0.3, 16).unwrap() - 8.5).abs() < 1e-15);
        assert!((cadf_closed(1.0, -0.25, 16).unwrap() - 16.0).abs() < 1e-12);
        assert!((cadf_closed(-1.0, -0.25, 16).unwrap() - 1.0).abs() < 1e-12);
        for m in [2.0, 7.0, 13.0] {
            let p = positions_closed(m, -0.25, 16).unwrap();
            assert!((cadf_closed(p, -0.25, 16).unwrap() - m).abs() < 1e-8);
        }
        assert_eq!(positions_closed(8.5, -0.25, 16).unwrap(), 0.0);
        assert!(positions_closed(0.5, -0.25, 16).is_err());
    }

    #[test]
    fn zero_order_positions_are_uniform() {
        let p = closed_form_placement(0.0, 9).unwrap();
        for (k, x) in p.positions().iter().enumerate() {
            assert!((x - (-1.0 + 0.25 * k as f64)).abs() < 1e-12);
        }
    }
}
