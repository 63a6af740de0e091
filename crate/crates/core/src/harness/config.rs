//! TOML experiment configuration.
//!
//! Every field is optional at the parsing stage so that validation can
//! report all problems at once; unknown keys are rejected by the parser.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use serde::Deserialize;

use crate::channel::{db_to_linear, Normalization};
use crate::error::{Error, Result};
use crate::variational::OptimizerConfig;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    trials: Option<usize>,
    timing: Option<bool>,
    output: Option<PathBuf>,
    scenario: Option<RawScenario>,
    sweep: Option<RawSweep>,
    #[serde(default)]
    scheme: Vec<RawScheme>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    carrier_frequency_hz: Option<f64>,
    wavelength_m: Option<f64>,
    receive_antennas: Option<usize>,
    rx_spacing_m: Option<f64>,
    tx_spacing_m: Option<f64>,
    theta_t: Option<f64>,
    phi_t: Option<f64>,
    theta_r: Option<f64>,
    phi_r: Option<f64>,
    snr_db: Option<f64>,
    normalization: Option<String>,
    propagation: Option<String>,
    rician_k_db: Option<f64>,
    scatterers: Option<RawArc>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArc {
    count: Option<usize>,
    radius_m: Option<f64>,
    angle_min: Option<f64>,
    angle_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    m: Option<Vec<usize>>,
    z0: Option<Vec<f64>>,
    alpha: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    kind: Option<String>,
    label: Option<String>,
    alpha: Option<f64>,
    step_size: Option<f64>,
    iterations: Option<usize>,
    threshold: Option<f64>,
    grid_multiplier: Option<usize>,
    cap: Option<bool>,
    candidates_per_antenna: Option<usize>,
}

/// Scatterers on a circular arc in the x–z plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScattererArc {
    pub count: usize,
    pub radius: f64,
    pub angle_min: f64,
    pub angle_max: f64,
}

impl Default for ScattererArc {
    fn default() -> Self {
        Self { count: 20, radius: 3.0, angle_min: PI / 6.0, angle_max: 5.0 * PI / 6.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropagationConfig {
    LineOfSight,
    Rician { k_db: f64, arc: ScattererArc },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub carrier_frequency: f64,
    pub wavelength: f64,
    pub receive_antennas: usize,
    pub rx_spacing: f64,
    pub tx_spacing: f64,
    pub theta_t: f64,
    pub phi_t: f64,
    pub theta_r: f64,
    pub phi_r: f64,
    pub snr_db: f64,
    pub normalization: Normalization,
    pub propagation: PropagationConfig,
}

impl ScenarioConfig {
    /// Linear SNR.
    pub fn snr(&self) -> f64 {
        db_to_linear(self.snr_db)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeKind {
    Ula,
    /// Optimal family ADF (bias and `τ` included), discretized numerically.
    ClosedForm {
        alpha: f64,
    },
    /// Beta-quantile positions of `(1−p²)^(2α)`.
    Simplified {
        alpha: f64,
    },
    Variational(OptimizerConfig),
    Greedy {
        candidates_per_antenna: usize,
    },
    Random,
}

impl SchemeKind {
    pub fn alpha(&self) -> Option<f64> {
        match self {
            SchemeKind::ClosedForm { alpha } | SchemeKind::Simplified { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub label: String,
    pub kind: SchemeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub m: Vec<usize>,
    pub z0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// 0 means one deterministic pass.
    pub trials: usize,
    /// Records wall time per evaluation; off by default so output bytes do
    /// not depend on the machine.
    pub timing: bool,
    pub output: Option<PathBuf>,
    pub scenario: ScenarioConfig,
    pub schemes: Vec<Scheme>,
    pub sweep: Sweep,
}

impl ExperimentConfig {
    pub fn trial_count(&self) -> usize {
        self.trials.max(1)
    }
}

const KINDS: [&str; 6] = ["ula", "closed-form", "simplified", "variational", "greedy", "random"];

/// Parses and validates a TOML document, reporting every problem found.
///
/// ```
/// use adf_core::harness::parse_config;
/// let cfg = parse_config(r#"
///     [scenario]
///     carrier_frequency_hz = 10e9
///     receive_antennas = 4
///     [sweep]
///     m = [16]
///     z0 = [3.0]
///     [[scheme]]
///     kind = "ula"
/// "#).unwrap();
/// assert!((cfg.scenario.wavelength - 0.029979).abs() < 1e-6);
/// assert_eq!(cfg.scenario.snr(), 10.0);
/// ```
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(vec![e.message().to_string()]))?;
    let mut errs = Vec::new();
    let scenario = validate_scenario(raw.scenario.unwrap_or_default(), &mut errs);
    let sweep_raw = raw.sweep.unwrap_or_default();
    let m = sweep_raw.m.unwrap_or_else(|| {
        errs.push("sweep.m is missing".into());
        Vec::new()
    });
    if m.is_empty() && !errs.iter().any(|e| e.starts_with("sweep.m")) {
        errs.push("sweep.m must list at least one antenna count".into());
    }
    for &v in &m {
        if v < 2 {
            errs.push(format!("sweep.m: antenna count {v} must be at least 2"));
        }
    }
    let z0 = sweep_raw.z0.unwrap_or_else(|| {
        errs.push("sweep.z0 is missing".into());
        Vec::new()
    });
    if z0.is_empty() && !errs.iter().any(|e| e.starts_with("sweep.z0")) {
        errs.push("sweep.z0 must list at least one distance".into());
    }
    for &v in &z0 {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(format!("sweep.z0: distance {v} m must be positive"));
        }
    }
    let alphas = sweep_raw.alpha.unwrap_or_default();
    for &a in &alphas {
        if !(a > -0.5 && a <= 0.0) {
            errs.push(format!("sweep.alpha: order {a} outside (-0.5, 0]"));
        }
    }
    if raw.scheme.is_empty() {
        errs.push("at least one [[scheme]] is required".into());
    }
    let mut schemes = Vec::new();
    for (i, s) in raw.scheme.into_iter().enumerate() {
        schemes.extend(validate_scheme(i, s, &alphas, scenario.as_ref().map(|s| s.snr()), &mut errs));
    }
    let mut labels: Vec<(&str, Option<u64>)> =
        schemes.iter().map(|s| (s.label.as_str(), s.kind.alpha().map(f64::to_bits))).collect();
    labels.sort();
    for w in labels.windows(2) {
        if w[0] == w[1] {
            errs.push(format!("scheme label '{}' is used twice; set distinct labels", w[0].0));
        }
    }
    match (errs.is_empty(), scenario) {
        (true, Some(scenario)) => Ok(ExperimentConfig {
            seed: raw.seed.unwrap_or(0),
            trials: raw.trials.unwrap_or(0),
            timing: raw.timing.unwrap_or(false),
            output: raw.output,
            scenario,
            schemes,
            sweep: Sweep { m, z0 },
        }),
        _ => Err(Error::Config(errs)),
    }
}

fn validate_scenario(s: RawScenario, errs: &mut Vec<String>) -> Option<ScenarioConfig> {
    let before = errs.len();
    let wavelength = match (s.carrier_frequency_hz, s.wavelength_m) {
        (None, None) => {
            errs.push("scenario.carrier_frequency_hz is missing (or give scenario.wavelength_m)".into());
            f64::NAN
        }
        (Some(f), _) if !(f > 0.0 && f.is_finite()) => {
            errs.push(format!("scenario.carrier_frequency_hz must be positive, got {f}"));
            f64::NAN
        }
        (_, Some(l)) if !(l > 0.0 && l.is_finite()) => {
            errs.push(format!("scenario.wavelength_m must be positive, got {l}"));
            f64::NAN
        }
        (Some(f), Some(l)) => {
            let expected = SPEED_OF_LIGHT / f;
            if (l - expected).abs() > 1e-9 * expected {
                errs.push(format!("scenario.wavelength_m = {l} disagrees with c/f_c = {expected}"));
            }
            l
        }
        (Some(f), None) => SPEED_OF_LIGHT / f,
        (None, Some(l)) => l,
    };
    let n = s.receive_antennas.unwrap_or_else(|| {
        errs.push("scenario.receive_antennas is missing".into());
        0
    });
    if n == 0 && s.receive_antennas.is_some() {
        errs.push("scenario.receive_antennas must be at least 1".into());
    }
    let spacing = |v: Option<f64>, name: &str, errs: &mut Vec<String>| match v {
        None => wavelength / 2.0,
        Some(d) if d > 0.0 && d.is_finite() => d,
        Some(d) => {
            errs.push(format!("scenario.{name} must be positive (meters), got {d}"));
            f64::NAN
        }
    };
    let rx_spacing = spacing(s.rx_spacing_m, "rx_spacing_m", errs);
    let tx_spacing = spacing(s.tx_spacing_m, "tx_spacing_m", errs);
    let polar = |v: Option<f64>, name: &str, errs: &mut Vec<String>| {
        let v = v.unwrap_or(FRAC_PI_2);
        if !(0.0..=PI).contains(&v) {
            errs.push(format!("scenario.{name} = {v} rad outside [0, pi]"));
        }
        v
    };
    let azimuth = |v: Option<f64>, name: &str, errs: &mut Vec<String>| {
        let v = v.unwrap_or(0.0);
        if !(-PI..PI).contains(&v) {
            errs.push(format!("scenario.{name} = {v} rad outside [-pi, pi)"));
        }
        v
    };
    let theta_t = polar(s.theta_t, "theta_t", errs);
    let theta_r = polar(s.theta_r, "theta_r", errs);
    let phi_t = azimuth(s.phi_t, "phi_t", errs);
    let phi_r = azimuth(s.phi_r, "phi_r", errs);
    let snr_db = s.snr_db.unwrap_or(10.0);
    if !snr_db.is_finite() {
        errs.push("scenario.snr_db must be finite".into());
    }
    let normalization = match s.normalization.as_deref() {
        None | Some("centroid") => Normalization::Centroid,
        Some("raw") => Normalization::Raw,
        Some(other) => {
            errs.push(format!("scenario.normalization '{other}' is not one of centroid, raw"));
            Normalization::Centroid
        }
    };
    let propagation = match s.propagation.as_deref() {
        None | Some("los") => {
            if s.rician_k_db.is_some() || s.scatterers.is_some() {
                errs.push("scenario.rician_k_db and scenario.scatterers need propagation = \"rician\"".into());
            }
            PropagationConfig::LineOfSight
        }
        Some("rician") => {
            let k_db = s.rician_k_db.unwrap_or(10.0);
            if !k_db.is_finite() {
                errs.push("scenario.rician_k_db must be finite".into());
            }
            let d = ScattererArc::default();
            let a = s.scatterers.unwrap_or_default();
            let arc = ScattererArc {
                count: a.count.unwrap_or(d.count),
                radius: a.radius_m.unwrap_or(d.radius),
                angle_min: a.angle_min.unwrap_or(d.angle_min),
                angle_max: a.angle_max.unwrap_or(d.angle_max),
            };
            if arc.count < 1 {
                errs.push("scenario.scatterers.count must be at least 1".into());
            }
            if !(arc.radius > 0.0 && arc.radius.is_finite()) {
                errs.push(format!("scenario.scatterers.radius_m must be positive, got {}", arc.radius));
            }
            if !(arc.angle_min.is_finite() && arc.angle_max.is_finite() && arc.angle_min <= arc.angle_max) {
                errs.push("scenario.scatterers angle range must satisfy angle_min <= angle_max".into());
            }
            PropagationConfig::Rician { k_db, arc }
        }
        Some(other) => {
            errs.push(format!("scenario.propagation '{other}' is not one of los, rician"));
            PropagationConfig::LineOfSight
        }
    };
    (errs.len() == before).then_some(ScenarioConfig {
        carrier_frequency: SPEED_OF_LIGHT / wavelength,
        wavelength,
        receive_antennas: n,
        rx_spacing,
        tx_spacing,
        theta_t,
        phi_t,
        theta_r,
        phi_r,
        snr_db,
        normalization,
        propagation,
    })
}

fn validate_scheme(i: usize, s: RawScheme, alphas: &[f64], snr: Option<f64>, errs: &mut Vec<String>) -> Vec<Scheme> {
    let at = format!("scheme[{i}]");
    let Some(kind) = s.kind.as_deref() else {
        errs.push(format!("{at}.kind is missing"));
        return Vec::new();
    };
    if !KINDS.contains(&kind) {
        errs.push(format!("{at}.kind '{kind}' is not one of {}", KINDS.join(", ")));
        return Vec::new();
    }
    let mut reject = |present: bool, field: &str| {
        if present {
            errs.push(format!("{at}.{field} does not apply to kind '{kind}'"));
        }
    };
    let optimizer_fields = s.step_size.is_some()
        || s.iterations.is_some()
        || s.threshold.is_some()
        || s.grid_multiplier.is_some()
        || s.cap.is_some();
    if kind != "variational" {
        reject(optimizer_fields, "step_size/iterations/threshold/grid_multiplier/cap");
    }
    if kind != "greedy" {
        reject(s.candidates_per_antenna.is_some(), "candidates_per_antenna");
    }
    if kind != "closed-form" && kind != "simplified" {
        reject(s.alpha.is_some(), "alpha");
    }
    let label = s.label.unwrap_or_else(|| kind.to_string());
    let one = |kind: SchemeKind| vec![Scheme { label: label.clone(), kind }];
    match kind {
        "ula" => one(SchemeKind::Ula),
        "random" => one(SchemeKind::Random),
        "greedy" => {
            let c = s.candidates_per_antenna.unwrap_or(2);
            if c < 1 {
                errs.push(format!("{at}.candidates_per_antenna must be at least 1"));
            }
            one(SchemeKind::Greedy { candidates_per_antenna: c })
        }
        "variational" => {
            let d = OptimizerConfig::default();
            let cfg = OptimizerConfig {
                max_iterations: s.iterations.unwrap_or(d.max_iterations),
                step_size: s.step_size.unwrap_or(d.step_size),
                threshold: s.threshold,
                grid_multiplier: s.grid_multiplier.unwrap_or(d.grid_multiplier),
                snr: snr.unwrap_or(d.snr),
                cap: s.cap.unwrap_or(false),
            };
            if let Err(Error::Config(v)) = cfg.validate() {
                errs.extend(v.into_iter().map(|e| format!("{at}: {e}")));
            }
            one(SchemeKind::Variational(cfg))
        }
        _ => {
            let list: Vec<f64> = match s.alpha {
                Some(a) => {
                    if !(a > -0.5 && a <= 0.0) {
                        errs.push(format!("{at}.alpha = {a} outside (-0.5, 0]"));
                    }
                    vec![a]
                }
                None if alphas.is_empty() => {
                    errs.push(format!("{at}.alpha is missing and sweep.alpha is empty"));
                    Vec::new()
                }
                None => alphas.to_vec(),
            };
            list.into_iter()
                .map(|alpha| Scheme {
                    label: label.clone(),
                    kind: if kind == "closed-form" {
                        SchemeKind::ClosedForm { alpha }
                    } else {
                        SchemeKind::Simplified { alpha }
                    },
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        seed = 7
        [scenario]
        carrier_frequency_hz = 10e9
        receive_antennas = 4
        [sweep]
        m = [16, 32]
        z0 = [3.0]
        alpha = [-0.25, -0.375]
    "#;

    fn with(extra: &str) -> Result<ExperimentConfig> {
        parse_config(&format!("{BASE}\n{extra}"))
    }

    #[test]
    fn defaults_and_expansion() {
        let cfg = with("[[scheme]]\nkind = \"ula\"\n[[scheme]]\nkind = \"closed-form\"\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.trials, 0);
        assert!(!cfg.timing);
        assert_eq!(cfg.schemes.len(), 3);
        assert_eq!(cfg.schemes[2].kind, SchemeKind::ClosedForm { alpha: -0.375 });
        assert!((cfg.scenario.rx_spacing - cfg.scenario.wavelength / 2.0).abs() < 1e-15);
        assert_eq!(cfg.scenario.propagation, PropagationConfig::LineOfSight);
    }

    #[test]
    fn rician_defaults() {
        let text =
            BASE.replace("receive_antennas = 4", "receive_antennas = 4\npropagation = \"rician\"\nrician_k_db = 10");
        let cfg = parse_config(&(text + "[[scheme]]\nkind = \"random\"\n")).unwrap();
        match cfg.scenario.propagation {
            PropagationConfig::Rician { k_db, arc } => {
                assert_eq!(k_db, 10.0);
                assert_eq!(arc, ScattererArc::default());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_config(
            "[scenario]\ncarrier_frequency_hz = 1e9\n[sweep]\nm=[4]\nz0=[1.0]\n[[scheme]]\nkind=\"ula\"\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("receive_antennas"), "{err}");
    }

    #[test]
    fn collects_all_errors() {
        let err = parse_config(
            "[scenario]\ncarrier_frequency_hz = 1e9\nwavelength_m = 0.2\nreceive_antennas = 2\nsnr_db = 10\n\
             [sweep]\nm=[1]\nz0=[-1.0]\n[[scheme]]\nkind=\"ula\"\nalpha=-0.1\n[[scheme]]\nkind=\"bogus\"\n",
        )
        .unwrap_err();
        match err {
            Error::Config(v) => assert_eq!(v.len(), 5, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = with("[[scheme]]\nkind = \"ula\"\ncolour = 3\n").unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(with("[[scheme]]\nkind = \"ula\"\n[[scheme]]\nkind = \"ula\"\n").is_err());
        assert!(with("[[scheme]]\nkind = \"ula\"\n[[scheme]]\nkind = \"ula\"\nlabel = \"ula-2\"\n").is_ok());
    }
}
