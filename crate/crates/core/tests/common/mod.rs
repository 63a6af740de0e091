#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use adf_core::channel::{ChannelScenario, Normalization, Propagation};
use adf_core::geometry::{ReceiveArray, TransmitArray};
use adf_core::harness::{scatterer_arc, ScattererArc, SPEED_OF_LIGHT};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub const RHO: f64 = 10.0;

pub fn wavelength() -> f64 {
    SPEED_OF_LIGHT / 10e9
}

/// Broadside arrays at half-wavelength spacing, `N` receive antennas at `z0`.
pub fn arrays(m: usize, n: usize, z0: f64) -> (TransmitArray, ReceiveArray) {
    let d = wavelength() / 2.0;
    (TransmitArray::new(m, d, FRAC_PI_2, 0.0).unwrap(), ReceiveArray::new(n, d, FRAC_PI_2, 0.0, z0).unwrap())
}

pub fn los() -> ChannelScenario {
    ChannelScenario::line_of_sight(wavelength()).unwrap()
}

pub fn rician(seed: u64, trial: u64) -> ChannelScenario {
    let scatterers = scatterer_arc(&ScattererArc::default(), seed, trial);
    ChannelScenario::new(Propagation::Rician { k_factor: 10.0, scatterers }, wavelength(), Normalization::Centroid)
        .unwrap()
}

/// `log det` of the Hermitian Toeplitz matrix with first column `c`, by
/// dense Cholesky.
pub fn dense_toeplitz_log_det(c: &[Complex64]) -> f64 {
    let n = c.len();
    let t = DMatrix::from_fn(n, n, |i, j| if i >= j { c[i - j] } else { c[j - i].conj() });
    let l = t.cholesky().expect("positive definite").l();
    2.0 * l.diagonal().iter().map(|z| z.re.ln()).sum::<f64>()
}

/// Modified Bessel `I_k(x)` by its power series.
pub fn bessel_i(k: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
    let mut sum = term;
    for j in 1..60 {
        term *= half * half / (j as f64 * (j + k) as f64);
        sum += term;
    }
    sum
}

/// Fourier coefficients of `b·4^α|cos θ|^(2α)`:
/// `b Γ(2α+1)/(Γ(1+α+k/2)Γ(1+α−k/2))` for even `k`, zero for odd `k`.
pub fn cosine_power_coefficients(alpha: f64, b: f64, n: usize) -> Vec<Complex64> {
    use statrs::function::gamma::gamma;
    (0..n)
        .map(|k| {
            if k % 2 == 1 {
                return Complex64::new(0.0, 0.0);
            }
            let h = k as f64 / 2.0;
            Complex64::new(b * gamma(2.0 * alpha + 1.0) / (gamma(1.0 + alpha + h) * gamma(1.0 + alpha - h)), 0.0)
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Configuration text for the desk-scale scenario.
pub fn config_text(propagation: &str, trials: usize, m: &[usize], z0: &[f64], schemes: &str) -> String {
    format!(
        r#"
seed = 2024
trials = {trials}

[scenario]
carrier_frequency_hz = 10e9
receive_antennas = 4
snr_db = 10
propagation = "{propagation}"

[sweep]
m = {m:?}
z0 = {z0:?}

{schemes}
"#
    )
}
