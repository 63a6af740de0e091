//! Reference placements: ULA, greedy antenna selection on a uniform grid,
//! and random placements.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distributions::Open01;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{grid_steering, ChannelScenario};
use crate::error::{Error, Result};
use crate::geometry::{uniform_apf, Placement, ReceiveArray, TransmitArray};
use crate::rng::{stream_rng, DOMAIN_PLACEMENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineScheme {
    Ula,
    /// Greedy selection from `candidates` uniform grid points.
    Greedy {
        candidates: usize,
    },
    /// Random placements, one per trial.
    Random {
        trials: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineConfig {
    pub scheme: BaselineScheme,
}

impl BaselineConfig {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self.scheme {
            BaselineScheme::Ula if m < 2 => Err(Error::invalid("ULA needs M >= 2")),
            BaselineScheme::Greedy { candidates } if candidates < m => {
                Err(Error::invalid(format!("candidate grid of {candidates} points cannot host {m} antennas")))
            }
            BaselineScheme::Random { trials: 0, .. } => Err(Error::invalid("random placements need trials >= 1")),
            _ => Ok(()),
        }
    }
}

/// Uniform linear array.
pub fn ula_placement(m: usize) -> Result<Placement> {
    uniform_apf(m)
}

/// Greedy selection with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedySelection {
    pub placement: Placement,
    /// Complex multiplications spent on the selection itself.
    pub multiplications: u64,
}

fn candidate_grid(p_as: usize) -> Result<Vec<f64>> {
    match p_as {
        0 => Err(Error::invalid("candidate grid must be non-empty")),
        1 => Ok(vec![0.0]),
        n => Ok(uniform_apf(n)?.into_positions()),
    }
}

/// Forward greedy selection of `m` points from `p_as` uniform grid points.
///
/// Each step adds the candidate with the largest rate gain
/// `log(1 + (ρ/M)·aᴴB⁻¹a)`, where `B = I + (ρ/M)Σ_S a aᴴ` over the current
/// selection; `B⁻¹` is updated by Sherman–Morrison. Equal gains go to the
/// smaller position.
pub fn antenna_selection_greedy(
    tx: &TransmitArray,
    rx: &ReceiveArray,
    scenario: &ChannelScenario,
    m: usize,
    p_as: usize,
    rho: f64,
) -> Result<GreedySelection> {
    if m < 1 {
        return Err(Error::invalid("selection size must be positive"));
    }
    if p_as < m {
        return Err(Error::invalid(format!("candidate grid of {p_as} points cannot host {m} antennas")));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("SNR must be positive, got {rho}")));
    }
    let grid = candidate_grid(p_as)?;
    let a = grid_steering(&grid, tx, rx, scenario)?;
    let n = a.nrows() as u64;
    let scale = rho / m as f64;
    let mut b_inv = DMatrix::<Complex64>::identity(a.nrows(), a.nrows());
    let mut free = vec![true; grid.len()];
    let mut chosen = Vec::with_capacity(m);
    let mut mults = 0u64;
    for _ in 0..m {
        let mut best: Option<(usize, f64)> = None;
        for (j, _) in free.iter().enumerate().filter(|(_, f)| **f) {
            let col = a.column(j);
            let gain = (&b_inv * col).dotc(&col).re;
            mults += n * n + n;
            if best.map_or(true, |(_, g)| gain > g * (1.0 + 1e-12)) {
                best = Some((j, gain));
            }
        }
        let (j, gain) = best.expect("free candidates remain");
        let u = &b_inv * a.column(j);
        b_inv -= &u * u.adjoint() * Complex64::new(scale / (1.0 + scale * gain), 0.0);
        mults += 2 * n * n;
        free[j] = false;
        chosen.push(j);
    }
    chosen.sort_unstable();
    let placement = Placement::new(chosen.iter().map(|&j| grid[j]).collect())?;
    Ok(GreedySelection { placement, multiplications: mults })
}

/// Random placements with pinned endpoints and `M − 2` sorted interior
/// points uniform on `(−1, 1)`; trial `t` draws from stream `(seed, t)`.
pub fn random_placements(m: usize, trials: usize, seed: u64) -> Result<Vec<Placement>> {
    if m < 2 {
        return Err(Error::invalid("random placements need M >= 2"));
    }
    if trials < 1 {
        return Err(Error::invalid("random placements need trials >= 1"));
    }
    (0..trials).into_par_iter().map(|t| random_placement(m, seed, t as u64)).collect()
}

/// Trial `t` of [`random_placements`].
pub fn random_placement(m: usize, seed: u64, trial: u64) -> Result<Placement> {
    let mut rng = stream_rng(seed, DOMAIN_PLACEMENTS, trial);
    loop {
        let mut p = Vec::with_capacity(m);
        p.push(-1.0);
        p.extend((0..m - 2).map(|_| 2.0 * rng.sample::<f64, _>(Open01) - 1.0));
        p.push(1.0);
        p[1..m - 1].sort_by(f64::total_cmp);
        if p.windows(2).all(|w| w[1] > w[0]) {
            return Placement::new(p);
        }
    }
}
