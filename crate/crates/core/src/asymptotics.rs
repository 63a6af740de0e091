//! Generating functions of the Toeplitz Gram surrogate, the strong Szegő
//! term, Fisher–Hartwig log-determinant asymptotics, and the asymptotic rate
//! of the edge-singular ADF family.

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::closedform::{check_alpha, gamma_norm, NearFieldFactors};
use crate::error::{Error, Result};
use crate::geometry::SampledFunction;
use crate::quad::tanh_sinh_nodes;
use crate::specfun::{digamma_unchecked, log_barnes_g_unchecked};

/// Angular samples used when a symbol is tabulated.
pub const SYMBOL_GRID: usize = 4096;

/// Frequency above which Fourier coefficients switch to Filon quadrature.
const FILON_THRESHOLD: f64 = 10.0;

/// Pole/zero `|2 − 2cos(θ − θ_r)|^α_r` of a symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    location: f64,
    exponent: f64,
}

impl Singularity {
    /// `location` is wrapped into `[−π, π)`; `exponent` must exceed −1/2.
    pub fn new(location: f64, exponent: f64) -> Result<Self> {
        if !(exponent > -0.5 && exponent.is_finite()) {
            return Err(Error::invalid(format!("singularity exponent {exponent} must exceed -0.5")));
        }
        if !location.is_finite() {
            return Err(Error::invalid("singularity location must be finite"));
        }
        Ok(Self { location: wrap(location), exponent })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }
}

fn wrap(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t >= PI {
        -PI
    } else {
        t
    }
}

/// `|2 − 2cos d|^α` from the angular distance `d`, accurate for small `d`.
fn singular_factor(distance: f64, exponent: f64) -> f64 {
    (2.0 * (0.5 * distance).sin().abs()).powf(2.0 * exponent)
}

/// Symbol `b(θ)·Π_r |2 − 2cos(θ − θ_r)|^α_r` with `b` tabulated on a
/// uniform grid over `[−π, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    smooth: Vec<f64>,
    singularities: Vec<Singularity>,
    support: f64,
}

impl GeneratingFunction {
    pub fn new(smooth: Vec<f64>, singularities: Vec<Singularity>, support: f64) -> Result<Self> {
        if smooth.len() < 2 {
            return Err(Error::invalid("symbol needs at least 2 samples"));
        }
        if let Some(v) = smooth.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::domain("generating function", *v));
        }
        Ok(Self { smooth, singularities, support })
    }

    /// Samples `b` on [`SYMBOL_GRID`] points.
    pub fn from_smooth_fn(b: impl Fn(f64) -> f64, singularities: Vec<Singularity>, support: f64) -> Result<Self> {
        Self::new(sample_circle(b, SYMBOL_GRID), singularities, support)
    }

    /// Constant smooth part with the given singularities.
    pub fn constant(b: f64, singularities: Vec<Singularity>, support: f64) -> Result<Self> {
        Self::new(vec![b; 2], singularities, support)
    }

    pub fn smooth_samples(&self) -> &[f64] {
        &self.smooth
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    /// Periodic linear interpolation of the smooth part.
    pub fn smooth_at(&self, theta: f64) -> f64 {
        let g = self.smooth.len();
        let x = (wrap(theta) + PI) / (2.0 * PI) * g as f64;
        let i = (x.floor() as usize).min(g - 1);
        let t = x - i as f64;
        self.smooth[i] * (1.0 - t) + self.smooth[(i + 1) % g] * t
    }

    pub fn evaluate(&self, theta: f64) -> f64 {
        let mut s = self.smooth_at(theta);
        for r in &self.singularities {
            s *= singular_factor(theta - r.location, r.exponent);
        }
        s
    }

    /// Normalized Fourier coefficients `(1/2π)∫ s(θ) e^{−jkθ} dθ` for
    /// `k = 0..=k_max`.
    ///
    /// Smooth symbols use the periodic trapezoid rule on the tabulated grid
    /// refined by interpolation; singular symbols use tanh-sinh quadrature
    /// on the arcs between singularities so that each power singularity sits
    /// at an endpoint.
    pub fn coefficients(&self, k_max: usize) -> Vec<Complex64> {
        if self.singularities.is_empty() {
            let g = (8 * (k_max + 1)).max(self.smooth.len()).max(SYMBOL_GRID);
            let samples: Vec<f64> = (0..g).map(|j| self.smooth_at(-PI + 2.0 * PI * j as f64 / g as f64)).collect();
            return (0..=k_max)
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, v) in samples.iter().enumerate() {
                        let theta = -PI + 2.0 * PI * j as f64 / g as f64;
                        acc += Complex64::from_polar(*v, -(k as f64) * theta);
                    }
                    acc / g as f64
                })
                .collect();
        }
        let mut locs: Vec<f64> = self.singularities.iter().map(|s| s.location).collect();
        locs.sort_by(f64::total_cmp);
        locs.dedup();
        let h = 0.25 / (k_max.max(4) as f64);
        let nodes = tanh_sinh_nodes(h);
        let mut out = vec![Complex64::new(0.0, 0.0); k_max + 1];
        for (i, &a) in locs.iter().enumerate() {
            let b = if i + 1 < locs.len() { locs[i + 1] } else { locs[0] + 2.0 * PI };
            let len = b - a;
            for &(x, complement, w) in &nodes {
                let (da, db) = if x < 0.0 {
                    (0.5 * len * complement, len - 0.5 * len * complement)
                } else {
                    (len - 0.5 * len * complement, 0.5 * len * complement)
                };
                let theta = a + da;
                let mut s = self.smooth_at(theta);
                for r in &self.singularities {
                    let at_a = (r.location - a).abs() < 1e-15;
                    let at_b = (wrap(r.location - b)).abs() < 1e-15;
                    let d = match (at_a, at_b) {
                        (true, true) => da.min(db),
                        (true, false) => da,
                        (false, true) => db,
                        _ => theta - r.location,
                    };
                    s *= singular_factor(d, r.exponent);
                }
                let weight = 0.5 * len * w * s / (2.0 * PI);
                let step = Complex64::from_polar(1.0, -theta);
                let mut phase = Complex64::new(weight, 0.0);
                for c in out.iter_mut() {
                    *c += phase;
                    phase *= step;
                }
            }
        }
        out
    }
}

fn sample_circle(f: impl Fn(f64) -> f64, g: usize) -> Vec<f64> {
    (0..g).map(|j| f(-PI + 2.0 * PI * j as f64 / g as f64)).collect()
}

/// `c_ℓ = ∫ w̃(p) e^{−jβℓp} dp`.
///
/// Node-weight quadrature for `|βℓ| ≤ 10`; above that, the piecewise-linear
/// interpolant of the node values is integrated exactly against the
/// oscillating factor.
pub fn fourier_coeff_wadf(w: &SampledFunction, beta: f64, l: i64) -> Complex64 {
    let omega = beta * l as f64;
    if omega.abs() <= FILON_THRESHOLD {
        return w.nodes().iter().zip(w.node_weights()).map(|(&p, &mu)| Complex64::from_polar(mu, -omega * p)).sum();
    }
    let minus_j_omega = Complex64::new(0.0, -omega);
    let mut total = Complex64::new(0.0, 0.0);
    let (nodes, values) = (w.nodes(), w.values());
    for i in 0..nodes.len() - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let h = b - a;
        let ea = Complex64::from_polar(1.0, -omega * a);
        let eb = Complex64::from_polar(1.0, -omega * b);
        let i0 = (eb - ea) / minus_j_omega;
        let i1 = (eb * h - i0) / minus_j_omega;
        total += i0 * values[i] + i1 * ((values[i + 1] - values[i]) / h);
    }
    total
}

/// `g_N(θ) = Σ_{|ℓ|<N} c_ℓ e^{jℓθ}`.
pub fn truncated_generating(w: &SampledFunction, beta: f64, n: usize, theta: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("truncated generating function needs N >= 1"));
    }
    let mut sum = fourier_coeff_wadf(w, beta, 0);
    for l in 1..n as i64 {
        let e = Complex64::from_polar(1.0, l as f64 * theta);
        sum += fourier_coeff_wadf(w, beta, l) * e + fourier_coeff_wadf(w, beta, -l) * e.conj();
    }
    debug_assert!(sum.im.abs() <= 1e-8 * sum.re.abs().max(1.0));
    Ok(sum.re)
}

/// `s(θ) = 1 + (2πρ/(βz0²))·w̃(θ/β)` on `|θ| ≤ β`, 1 elsewhere.
pub fn limit_symbol(w: &SampledFunction, beta: f64, factors: &NearFieldFactors, theta: f64) -> f64 {
    let theta = wrap(theta);
    if theta.abs() > beta {
        return 1.0;
    }
    let z0 = factors.z0();
    1.0 + 2.0 * PI * factors.rho() / (beta * z0 * z0) * w.evaluate(theta / beta)
}

/// Tabulated limit symbol of the Toeplitz surrogate.
pub fn limit_generating(w: &SampledFunction, beta: f64, factors: &NearFieldFactors) -> Result<GeneratingFunction> {
    if beta >= PI {
        return Err(Error::OutOfRegime { beta });
    }
    if !(beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    GeneratingFunction::from_smooth_fn(|t| limit_symbol(w, beta, factors, t), Vec::new(), beta)
}

/// Normalized Fourier coefficients of samples on a uniform grid over
/// `[−π, π)`; index `k` holds frequency `k` for `k ≤ G/2`.
fn normalized_spectrum(samples: &[f64]) -> Vec<Complex64> {
    let g = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(g).process(&mut buf);
    buf.iter().map(|c| c / g as f64).collect()
}

/// Strong Szegő term `N·(log b)₀ + Σ_{k≥1} k |(log b)_k|²` from samples of
/// `b` on a uniform grid over `[−π, π)`.
///
/// The series stops after eight consecutive terms below `1e−12`.
///
/// ```
/// use adf_core::asymptotics::e_b_term;
/// let e = e_b_term(&vec![3.0; 64], 4).unwrap();
/// assert!((e - 4.0 * 3f64.ln()).abs() < 1e-12);
/// ```
pub fn e_b_term(b: &[f64], n: usize) -> Result<f64> {
    if b.len() < 2 {
        return Err(Error::invalid("symbol needs at least 2 samples"));
    }
    if let Some(v) = b.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::domain("e_b_term", *v));
    }
    let logs: Vec<f64> = b.iter().map(|v| v.ln()).collect();
    let spec = normalized_spectrum(&logs);
    let mut e = n as f64 * spec[0].re;
    let mut small = 0;
    for (k, c) in spec.iter().enumerate().take(b.len().div_ceil(2)).skip(1) {
        let term = k as f64 * c.norm_sqr();
        e += term;
        small = if term < 1e-12 { small + 1 } else { 0 };
        if small >= 8 {
            break;
        }
    }
    Ok(e)
}

/// [`e_b_term`] for a function sampled on [`SYMBOL_GRID`] points.
pub fn e_b_term_fn(b: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    e_b_term(&sample_circle(b, SYMBOL_GRID), n)
}

/// How the Barnes-G and cross-singularity terms enter the log-determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FhVariant {
    /// `Σ G(1+α)²/G(1+2α)` and `Σ_{r<s} |2−2cos(θ_r−θ_s)|^(−α_rα_s)` added as is.
    Printed,
    /// Logarithms of both factors; selected by calibration against exact
    /// determinants.
    #[default]
    Logarithmic,
}

fn barnes_term(alpha: f64, variant: FhVariant) -> f64 {
    let log_ratio = 2.0 * log_barnes_g_unchecked(1.0 + alpha) - log_barnes_g_unchecked(1.0 + 2.0 * alpha);
    match variant {
        FhVariant::Printed => log_ratio.exp(),
        FhVariant::Logarithmic => log_ratio,
    }
}

fn cross_term(distance: f64, a: f64, b: f64, variant: FhVariant) -> f64 {
    let d = 4.0 * (0.5 * distance).sin().powi(2);
    match variant {
        FhVariant::Printed => d.powf(-a * b),
        FhVariant::Logarithmic => -a * b * d.ln(),
    }
}

/// Fisher–Hartwig approximation of `log det T_N(s)` in nats.
pub fn fh_log_det(gf: &GeneratingFunction, n: usize, variant: FhVariant) -> Result<f64> {
    let smooth = if gf.smooth.iter().all(|&v| v == gf.smooth[0]) {
        n as f64 * gf.smooth[0].ln()
    } else {
        e_b_term(&gf.smooth, n)?
    };
    Ok(smooth + singular_terms(gf.singularities(), n, variant))
}

fn singular_terms(sing: &[Singularity], n: usize, variant: FhVariant) -> f64 {
    let mut total = 0.0;
    for (i, r) in sing.iter().enumerate() {
        total += (n as f64).ln() * r.exponent * r.exponent + barnes_term(r.exponent, variant);
        for s in &sing[i + 1..] {
            total += cross_term(r.location - s.location, r.exponent, s.exponent, variant);
        }
    }
    total
}

/// Dense Hermitian Toeplitz matrix `T[i][j] = c_{i−j}` from `c_0..c_{N−1}`.
pub fn toeplitz_matrix(coeffs: &[Complex64]) -> DMatrix<Complex64> {
    let n = coeffs.len();
    DMatrix::from_fn(n, n, |i, j| if i >= j { coeffs[i - j] } else { coeffs[j - i].conj() })
}

/// `log det` of the Hermitian Toeplitz matrix built from `c_0..c_{N−1}`.
pub fn toeplitz_log_det(coeffs: &[Complex64]) -> Result<f64> {
    let t = toeplitz_matrix(coeffs);
    let chol = t.cholesky().ok_or_else(|| Error::IllConditioned("Toeplitz matrix is not positive definite".into()))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|z| z.re.ln()).sum::<f64>())
}

/// Exact `log det T_N(s)` from the symbol's Fourier coefficients.
pub fn exact_log_det(gf: &GeneratingFunction, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("determinant size must be positive"));
    }
    toeplitz_log_det(&gf.coefficients(n - 1))
}

/// Two edge singularities `α₁` at `−β` and `α₂` at `+β` with constant
/// smooth part `b`; zero exponents are left out.
pub fn two_edge_symbol(alpha1: f64, alpha2: f64, b: f64, beta: f64) -> Result<GeneratingFunction> {
    let mut sing = Vec::new();
    for (loc, a) in [(-beta, alpha1), (beta, alpha2)] {
        if a != 0.0 {
            sing.push(Singularity::new(loc, a)?);
        }
    }
    GeneratingFunction::constant(b, sing, beta)
}

/// Fisher–Hartwig log-determinant (nats) of [`two_edge_symbol`].
pub fn fh_two_edge_log_det(alpha1: f64, alpha2: f64, b: f64, beta: f64, n: usize, variant: FhVariant) -> Result<f64> {
    fh_log_det(&two_edge_symbol(alpha1, alpha2, b, beta)?, n, variant)
}

/// Smooth-part constant of the limit symbol of the ADF family: matching
/// `b·4^α|cosθ − cosβ|^(2α)` to `(2πργ/(βz0²))(1 − θ²/β²)^(2α)` at the
/// support edges gives `b = (2πργ/(βz0²))·β^(−4α)`.
pub fn family_smooth_constant(alpha: f64, beta: f64, factors: &NearFieldFactors, m: usize) -> f64 {
    let z0 = factors.z0();
    let gamma = gamma_norm(alpha, m, factors);
    2.0 * PI * factors.rho() * gamma / (beta * z0 * z0) * beta.powf(-4.0 * alpha)
}

/// Asymptotic rate (bits) of the order-`α` ADF family with `N` receive
/// antennas.
pub fn asymptotic_rate(
    alpha: f64,
    beta: f64,
    n: usize,
    factors: &NearFieldFactors,
    m: usize,
    variant: FhVariant,
) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::OutOfRegime { beta });
    }
    let b = family_smooth_constant(alpha, beta, factors, m);
    Ok(fh_two_edge_log_det(alpha, alpha, b, beta, n, variant)? / LN_2)
}

/// `∂/∂α₁` of [`fh_two_edge_log_det`] (nats) at fixed `b`.
///
/// The printed variant gives
/// `2α₁(log N + R(α₁)(1 + ψ(1+α₁) − 2ψ(1+2α₁))) − (2−2cos2β)^(−α₁α₂) α₂ log(2−2cos2β)`
/// with `R = G(1+α₁)²/G(1+2α₁)`; the logarithmic variant drops `R` and the
/// power factor.
pub fn rate_alpha_derivative(alpha1: f64, alpha2: f64, beta: f64, n: usize, variant: FhVariant) -> Result<f64> {
    for a in [alpha1, alpha2] {
        if !(a > -0.5 && a < 0.0) {
            return Err(Error::invalid(format!("exponent {a} outside (-0.5, 0)")));
        }
    }
    let d = 2.0 - 2.0 * (2.0 * beta).cos();
    let inner = 1.0 + digamma_unchecked(1.0 + alpha1) - 2.0 * digamma_unchecked(1.0 + 2.0 * alpha1);
    let log_n = (n as f64).ln();
    Ok(match variant {
        FhVariant::Printed => {
            let ratio = barnes_term(alpha1, FhVariant::Printed);
            2.0 * alpha1 * (log_n + ratio * inner) - d.powf(-alpha1 * alpha2) * alpha2 * d.ln()
        }
        FhVariant::Logarithmic => 2.0 * alpha1 * (log_n + inner) - alpha2 * d.ln(),
    })
}

/// Errors of one variant against exact determinants.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantErrors {
    pub variant: FhVariant,
    /// `(N, exact, approximation)`.
    pub rows: Vec<(usize, f64, f64)>,
}

impl VariantErrors {
    pub fn abs_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|(_, e, a)| (a - e).abs()).collect()
    }
}

/// Compares both variants with exact Toeplitz log-determinants of a
/// two-edge symbol and returns the better one with the error tables.
///
/// A variant qualifies when its error at the largest `N` is below its error
/// at the smallest; among qualifying variants the smaller final error wins.
pub fn calibrate_fh_variant(alpha: f64, b: f64, beta: f64, ns: &[usize]) -> Result<(FhVariant, Vec<VariantErrors>)> {
    if ns.is_empty() {
        return Err(Error::invalid("calibration needs at least one size"));
    }
    let symbol = two_edge_symbol(alpha, alpha, b, beta)?;
    let exact: Vec<f64> = ns.iter().map(|&n| exact_log_det(&symbol, n)).collect::<Result<_>>()?;
    let mut tables = Vec::new();
    for variant in [FhVariant::Printed, FhVariant::Logarithmic] {
        let rows = ns
            .iter()
            .zip(&exact)
            .map(|(&n, &e)| Ok((n, e, fh_log_det(&symbol, n, variant)?)))
            .collect::<Result<Vec<_>>>()?;
        tables.push(VariantErrors { variant, rows });
    }
    let best = tables
        .iter()
        .filter(|t| {
            let e = t.abs_errors();
            e.len() == 1 || e[e.len() - 1] < e[0]
        })
        .min_by(|a, b| a.abs_errors().last().unwrap().total_cmp(b.abs_errors().last().unwrap()))
        .or_else(|| {
            tables.iter().min_by(|a, b| a.abs_errors().last().unwrap().total_cmp(b.abs_errors().last().unwrap()))
        })
        .map(|t| t.variant)
        .unwrap_or_default();
    Ok((best, tables))
}

/// Result of comparing smooth symbols of equal mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub e_b: Vec<f64>,
    /// Common `∫b` over the circle.
    pub mass: f64,
    /// Highest perturbation frequency of each candidate (`None` if constant).
    pub frequencies: Vec<Option<usize>>,
    pub constant: Option<usize>,
    /// Whether each candidate falls in the asserted regime `kπ² < N/4`.
    pub in_regime: Vec<bool>,
    /// `Some(true)` when the constant candidate has the largest `E_b` among
    /// all in-regime candidates; `None` when nothing was asserted.
    pub holds: Option<bool>,
}

/// Reports `E_b` for candidates sampled on a common uniform grid over
/// `[−π, π)` and checks that the constant candidate maximizes it among
/// low-frequency perturbations.
pub fn corollary_check(candidates: &[Vec<f64>], n: usize) -> Result<CorollaryReport> {
    let first = candidates.first().ok_or_else(|| Error::invalid("no candidates"))?;
    let g = first.len();
    if candidates.iter().any(|c| c.len() != g) {
        return Err(Error::invalid("candidates must share one grid"));
    }
    let mass_of = |c: &[f64]| c.iter().sum::<f64>() * 2.0 * PI / g as f64;
    let mass = mass_of(first);
    for (i, c) in candidates.iter().enumerate() {
        let m = mass_of(c);
        if (m - mass).abs() > 1e-9 * mass.abs().max(1.0) {
            return Err(Error::invalid(format!("candidate {i} has mass {m}, expected {mass}")));
        }
    }
    let mut e_b = Vec::new();
    let mut frequencies = Vec::new();
    for c in candidates {
        e_b.push(e_b_term(c, n)?);
        let spec = normalized_spectrum(c);
        let scale = spec[0].norm().max(1e-300);
        frequencies.push((1..=g / 2).rev().find(|&k| spec[k].norm() > 1e-9 * scale));
    }
    let constant = frequencies.iter().position(Option::is_none);
    let in_regime: Vec<bool> =
        frequencies.iter().map(|f| f.is_some_and(|k| (k as f64) * PI * PI < n as f64 / 4.0)).collect();
    let holds = constant.and_then(|c| {
        let checked: Vec<bool> =
            in_regime.iter().enumerate().filter(|(_, r)| **r).map(|(i, _)| e_b[c] > e_b[i]).collect();
        (!checked.is_empty()).then(|| checked.iter().all(|x| *x))
    });
    Ok(CorollaryReport { e_b, mass, frequencies, constant, in_regime, holds })
}
