//! RWA drift matrix, stability classification, RWA-validity margin, and the
//! bandwidth-to-copies estimate.

use crate::constants::RWA_MARGIN_THRESHOLD;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues3, Mat3};
use crate::model::{coupling, feedback_coupling, DeviceParams, FeedbackParams, Mode, Role};
use crate::C64;

/// Drift matrix of the RWA Langevin system in the mode basis
/// `(c_w, c_o^dag, b)`:
///
/// ```text
///        | -kappa_w      mu        -i G_w  |
///  A  =  |    0       -kappa_o     i G_o*  |
///        | -i G_w*    -i G_o      -gamma_M |
/// ```
///
/// The feedback coupling `mu` sits only in the `(c_w, c_o^dag)` entry and is
/// zero on the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    pub m: Mat3,
    pub omega_m: f64,
}

/// Result of the stability classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    /// All eigenvalues have negative real part.
    pub stable: bool,
    /// min over eigenvalues of -Re(lambda): the slowest decay rate [rad/s].
    /// Negative when unstable.
    pub min_decay: f64,
}

/// RWA-validity diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaValidity {
    pub valid: bool,
    /// max(|G_w|, |G_o|, |mu|) / omega_M.
    pub margin: f64,
}

/// Build the drift matrix. `fb` must be present exactly when the device is
/// the transmitter.
pub fn drift_matrix(device: &DeviceParams, fb: Option<&FeedbackParams>) -> Result<DriftMatrix> {
    device.validate()?;
    match (device.role, fb) {
        (Role::Transmitter, Some(fb)) => fb.validate()?,
        (Role::Receiver, None) => {}
        (Role::Transmitter, None) => {
            return Err(Error::InvalidParameter(
                "transmitter drift requires feedback parameters (use gain 0 for no loop)".into(),
            ))
        }
        (Role::Receiver, Some(_)) => {
            return Err(Error::InvalidParameter(
                "receiver drift takes no feedback parameters".into(),
            ))
        }
    }
    let g_w = coupling(device, Mode::Microwave);
    let g_o = coupling(device, Mode::Optical);
    let mu = fb
        .map(|fb| feedback_coupling(device, fb))
        .unwrap_or(C64::new(0.0, 0.0));
    let i = C64::i();
    let zero = C64::new(0.0, 0.0);
    let m: Mat3 = [
        [(-device.kappa_w).into(), mu, -i * g_w],
        [zero, (-device.kappa_o).into(), i * g_o.conj()],
        [-i * g_w.conj(), -i * g_o, (-device.gamma_m).into()],
    ];
    Ok(DriftMatrix {
        m,
        omega_m: device.omega_m,
    })
}

/// Classify stability from the drift eigenvalues.
pub fn stability(drift: &DriftMatrix) -> Stability {
    let eig = eigenvalues3(&drift.m);
    let max_re = eig.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    Stability {
        stable: max_re < 0.0,
        min_decay: -max_re,
    }
}

/// Eigenvalues of the drift, for callers that need the full spectrum.
pub fn drift_eigenvalues(drift: &DriftMatrix) -> [C64; 3] {
    eigenvalues3(&drift.m)
}

/// RWA validity: all interaction strengths must stay small against the
/// mechanical frequency (equal in magnitude to both detunings at resonance).
pub fn rwa_validity(
    device: &DeviceParams,
    fb: Option<&FeedbackParams>,
    threshold: Option<f64>,
) -> RwaValidity {
    let g_w = coupling(device, Mode::Microwave).norm();
    let g_o = coupling(device, Mode::Optical).norm();
    let mu = fb
        .map(|fb| feedback_coupling(device, fb).norm())
        .unwrap_or(0.0);
    let margin = g_w.max(g_o).max(mu) / device.omega_m;
    RwaValidity {
        valid: margin < threshold.unwrap_or(RWA_MARGIN_THRESHOLD),
        margin,
    }
}

/// Number of independent signal/idler copies collectable in `duration`
/// seconds: `M = floor(min_decay * duration / 2 pi)`.
///
/// The protocol bandwidth is identified with the slowest decay rate of the
/// drift; dividing by 2 pi converts the angular rate into a mode count per
/// unit time. The 2 pi is a convention, stated here once.
pub fn copies_for_time(min_decay: f64, duration: f64) -> Result<u64> {
    if !(min_decay > 0.0) {
        return Err(Error::Domain(format!(
            "copies_for_time needs min_decay > 0, got {min_decay}"
        )));
    }
    if !(duration > 0.0) {
        return Err(Error::Domain(format!(
            "copies_for_time needs duration > 0, got {duration}"
        )));
    }
    Ok((min_decay * duration / (2.0 * std::f64::consts::PI)).floor() as u64)
}
