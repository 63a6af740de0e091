use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, PropagationConfig, ScattererArc, ScenarioConfig, Scheme, SchemeKind};
use super::records::ResultRecord;
use crate::baselines::{antenna_selection_greedy, random_placement, ula_placement};
use crate::channel::{channel_matrix, db_to_linear, ChannelScenario, Propagation, Scatterer};
use crate::closedform::{closed_form_placement, nearfield_factors, optimal_adf, AdfFamilyParams};
use crate::error::{Error, Result};
use crate::geometry::{discretize_adf, Placement, Point3, ReceiveArray, TransmitArray};
use crate::rate::achievable_rate_discrete;
use crate::rng::{stream_rng, DOMAIN_SCATTERERS};
use crate::variational::optimize_adf;

/// `count` scatterers at `radius` from the origin in the x–z plane, angles
/// uniform in `[angle_min, angle_max]`; draw `index` of stream `seed`.
///
/// ```
/// use adf_core::harness::{scatterer_arc, ScattererArc};
/// let s = scatterer_arc(&ScattererArc::default(), 1, 0);
/// assert_eq!(s.len(), 20);
/// assert!(s.iter().all(|p| (p.position.norm() - 3.0).abs() < 1e-12));
/// ```
pub fn scatterer_arc(arc: &ScattererArc, seed: u64, index: u64) -> Vec<Scatterer> {
    let mut rng = stream_rng(seed, DOMAIN_SCATTERERS, index);
    (0..arc.count)
        .map(|_| {
            let t = if arc.angle_max > arc.angle_min {
                rng.gen_range(arc.angle_min..=arc.angle_max)
            } else {
                arc.angle_min
            };
            Scatterer::new(Point3::new(arc.radius * t.cos(), 0.0, arc.radius * t.sin()))
        })
        .collect()
}

/// Channel of one trial; scatterers are shared by every sweep point.
pub fn trial_scenario(config: &ExperimentConfig, trial: usize) -> Result<ChannelScenario> {
    let s = &config.scenario;
    let propagation = match &s.propagation {
        PropagationConfig::LineOfSight => Propagation::LineOfSight,
        PropagationConfig::Rician { k_db, arc } => Propagation::Rician {
            k_factor: db_to_linear(*k_db),
            scatterers: scatterer_arc(arc, config.seed, trial as u64),
        },
    };
    ChannelScenario::new(propagation, s.wavelength, s.normalization)
}

pub fn arrays(s: &ScenarioConfig, m: usize, z0: f64) -> Result<(TransmitArray, ReceiveArray)> {
    Ok((
        TransmitArray::new(m, s.tx_spacing, s.theta_t, s.phi_t)?,
        ReceiveArray::new(s.receive_antennas, s.rx_spacing, s.theta_r, s.phi_r, z0)?,
    ))
}

/// Placement a scheme produces for one channel.
pub fn scheme_placement(
    scheme: &Scheme,
    config: &ExperimentConfig,
    tx: &TransmitArray,
    rx: &ReceiveArray,
    channel: &ChannelScenario,
    trial: usize,
) -> Result<Placement> {
    let m = tx.m();
    let rho = config.scenario.snr();
    match &scheme.kind {
        SchemeKind::Ula => ula_placement(m),
        SchemeKind::Simplified { alpha } => closed_form_placement(*alpha, m),
        SchemeKind::ClosedForm { alpha } => {
            let factors = nearfield_factors(tx, rx, config.scenario.wavelength, rho)?;
            discretize_adf(&optimal_adf(&AdfFamilyParams::new(*alpha, m, factors)?)?, m)
        }
        SchemeKind::Variational(cfg) => discretize_adf(&optimize_adf(cfg, tx, rx, channel)?.best, m),
        SchemeKind::Greedy { candidates_per_antenna } => {
            Ok(antenna_selection_greedy(tx, rx, channel, m, candidates_per_antenna * m, rho)?.placement)
        }
        SchemeKind::Random => random_placement(m, config.seed, trial as u64),
    }
}

/// Evaluates every scheme at every sweep point and trial, in parallel, and
/// returns the records in canonical order.
pub fn run_scenario(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    let trials = config.trial_count();
    let channels: Vec<ChannelScenario> = (0..trials).map(|t| trial_scenario(config, t)).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for &m in &config.sweep.m {
        for &z0 in &config.sweep.z0 {
            for trial in 0..trials {
                for scheme in &config.schemes {
                    jobs.push((m, z0, trial, scheme));
                }
            }
        }
    }
    let mut records = jobs
        .into_par_iter()
        .map(|(m, z0, trial, scheme)| {
            let context = || format!("scheme '{}' at M={m}, z0={z0}, trial {trial}", scheme.label);
            let start = Instant::now();
            let rate = (|| {
                let (tx, rx) = arrays(&config.scenario, m, z0)?;
                let channel = &channels[trial];
                let placement = scheme_placement(scheme, config, &tx, &rx, channel, trial)?;
                achievable_rate_discrete(&channel_matrix(&placement, &tx, &rx, channel)?, config.scenario.snr())
            })()
            .map_err(|e: Error| e.context(context()))?;
            let wall_time_ms = if config.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            Ok(ResultRecord {
                scheme: scheme.label.clone(),
                m,
                z0,
                alpha: scheme.kind.alpha(),
                trial,
                rate_bits: rate,
                wall_time_ms,
                seed: config.seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(ResultRecord::key_cmp);
    Ok(records)
}
