//! Achievable rates of discrete placements and of densities.

use std::f64::consts::LN_2;

use crate::channel::{gram_discrete, ChannelMatrix, GramMatrix};
use crate::error::{Error, Result};

/// A rate with the settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    /// Bits per channel use.
    pub rate: f64,
    /// Linear SNR.
    pub snr: f64,
    pub scheme: String,
    pub scenario: String,
}

impl RatePoint {
    pub fn new(rate: f64, snr: f64, scheme: impl Into<String>, scenario: impl Into<String>) -> Result<Self> {
        if !(rate >= 0.0) || !(snr > 0.0) {
            return Err(Error::invalid(format!("rate point needs rate >= 0 and snr > 0, got {rate}, {snr}")));
        }
        Ok(Self { rate, snr, scheme: scheme.into(), scenario: scenario.into() })
    }
}

fn check_snr(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("SNR must be positive, got {rho}")))
    }
}

/// `Σᵢ log2(1 + ρλᵢ)` over the eigenvalues of a Gram matrix.
fn log2_det_eye_plus(k: &GramMatrix, rho: f64) -> f64 {
    k.eigenvalues().iter().map(|&l| (rho * l.max(0.0)).ln_1p()).sum::<f64>() / LN_2
}

/// Rate of a channel under isotropic input: `log2 det(I + ρ·(1/M)HHᴴ)`.
///
/// ```
/// use adf_core::channel::ChannelMatrix;
/// use adf_core::rate::achievable_rate_discrete;
/// use nalgebra::DMatrix;
/// use num_complex::Complex64;
/// let h = ChannelMatrix::new(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))).unwrap();
/// let c = achievable_rate_discrete(&h, 10.0).unwrap();
/// assert!((c - 11f64.log2()).abs() < 1e-12);
/// ```
pub fn achievable_rate_discrete(h: &ChannelMatrix, rho: f64) -> Result<f64> {
    check_snr(rho)?;
    if h.entries().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("channel matrix has non-finite entries"));
    }
    Ok(log2_det_eye_plus(&gram_discrete(h), rho))
}

/// `log2 det(I + ρK)` for a density Gram matrix.
pub fn rate_functional(k: &GramMatrix, rho: f64) -> Result<f64> {
    check_snr(rho)?;
    let eig = k.eigenvalues();
    if let (Some(&lo), Some(&hi)) = (eig.first(), eig.last()) {
        if lo < -1e-10 * hi.max(0.0) && lo < -1e-300 {
            return Err(Error::invalid(format!("Gram matrix is not positive semidefinite (eigenvalue {lo:e})")));
        }
    }
    Ok(log2_det_eye_plus(k, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_gram() {
        // K = (1/M) H Hᴴ = I for H = 2·I₄ with M = 4
        let h = ChannelMatrix::new(DMatrix::identity(4, 4) * c(2.0, 0.0)).unwrap();
        assert!((achievable_rate_discrete(&h, 1.0).unwrap() - 4.0).abs() < 1e-12);
        let z = ChannelMatrix::new(DMatrix::zeros(3, 5)).unwrap();
        assert_eq!(achievable_rate_discrete(&z, 10.0).unwrap(), 0.0);
        assert!(achievable_rate_discrete(&z, 0.0).is_err());
    }

    #[test]
    fn functional_values() {
        let k0 = GramMatrix::new(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(rate_functional(&k0, 5.0).unwrap(), 0.0);
        let k = GramMatrix::new(DMatrix::identity(2, 2)).unwrap();
        assert!((rate_functional(&k, 3.0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_channel_rejected() {
        assert!(ChannelMatrix::new(DMatrix::from_element(2, 2, c(f64::NAN, 0.0))).is_err());
    }

    fn random_channel(entries: &[(f64, f64)], n: usize) -> ChannelMatrix {
        let m = entries.len() / n;
        ChannelMatrix::new(DMatrix::from_fn(n, m, |i, j| {
            let (a, b) = entries[i * m + j];
            c(a, b)
        }))
        .unwrap()
    }

    proptest! {
        #[test]
        fn eigen_rate_equals_log_det(entries in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 12), rho in 0.1f64..100.0) {
            let h = random_channel(&entries, 3);
            let k = gram_discrete(&h);
            let a = DMatrix::<Complex64>::identity(3, 3) + k.entries() * c(rho, 0.0);
            let det = a.determinant().re;
            prop_assert!((achievable_rate_discrete(&h, rho).unwrap() - det.log2()).abs() < 1e-9);
        }

        #[test]
        fn unitary_invariance(entries in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 8), t in 0.0f64..std::f64::consts::TAU) {
            let h = random_channel(&entries, 2);
            let k = gram_discrete(&h);
            let u = DMatrix::from_row_slice(2, 2, &[
                c(t.cos(), 0.0), c(0.0, t.sin()),
                c(0.0, t.sin()), c(t.cos(), 0.0),
            ]);
            let rotated = GramMatrix::new(&u * k.entries() * u.adjoint()).unwrap();
            prop_assert!((rate_functional(&k, 7.0).unwrap() - rate_functional(&rotated, 7.0).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn increasing_in_snr(entries in prop::collection::vec((0.1f64..2.0, -2.0f64..2.0), 8), rho in 0.1f64..50.0) {
            let h = random_channel(&entries, 2);
            prop_assert!(achievable_rate_discrete(&h, rho * 1.1).unwrap() > achievable_rate_discrete(&h, rho).unwrap());
        }

        #[test]
        fn row_phase_invariance(entries in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 12), t in 0.0f64..std::f64::consts::TAU) {
            let h = random_channel(&entries, 3);
            let mut rotated = h.entries().clone();
            for z in rotated.row_mut(1).iter_mut() {
                *z *= Complex64::from_polar(1.0, t);
            }
            let r = ChannelMatrix::new(rotated).unwrap();
            prop_assert!((achievable_rate_discrete(&h, 3.0).unwrap() - achievable_rate_discrete(&r, 3.0).unwrap()).abs() < 1e-10);
        }
    }
}
