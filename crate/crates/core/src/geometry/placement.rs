use crate::error::{Error, Result};

/// Ordered normalized antenna positions in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    positions: Vec<f64>,
    endpoint_pinned: bool,
}

impl Placement {
    /// Validates that positions are finite, inside `[−1, 1]` and strictly
    /// increasing. The placement is endpoint-pinned when it starts at −1 and
    /// ends at 1.
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::invalid("placement is empty"));
        }
        for (i, &p) in positions.iter().enumerate() {
            if !(-1.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("position {i} = {p} outside [-1, 1]")));
            }
        }
        if let Some(i) = positions.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "positions not strictly increasing at index {}: {} then {}",
                i,
                positions[i],
                positions[i + 1]
            )));
        }
        let endpoint_pinned = positions.len() >= 2 && positions[0] == -1.0 && positions[positions.len() - 1] == 1.0;
        Ok(Self { positions, endpoint_pinned })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn endpoint_pinned(&self) -> bool {
        self.endpoint_pinned
    }

    /// Smallest gap between neighbouring positions.
    pub fn min_spacing(&self) -> Option<f64> {
        self.positions.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }

    pub fn into_positions(self) -> Vec<f64> {
        self.positions
    }
}

/// Uniform linear array positions `p_m = (2m − M − 1)/(M − 1)`.
pub fn uniform_apf(m: usize) -> Result<Placement> {
    if m < 2 {
        return Err(Error::invalid(format!("uniform placement needs M >= 2, got {m}")));
    }
    let denom = (m - 1) as f64;
    let positions = (1..=m).map(|k| ((2 * k) as f64 - (m + 1) as f64) / denom).collect();
    Placement::new(positions)
}
