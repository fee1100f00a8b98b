//! Parameter records, validation, and derived quantities.
//!
//! A device is specified by its mechanical/cavity rates, port-1 fractions,
//! bath temperature, cooperativities and driving phases. Couplings are stored
//! as cooperativities `Gamma = |G|^2/(gamma_M kappa)` plus phases, matching
//! the way such systems are usually quoted; the bare single-photon coupling
//! and intracavity photon number only ever enter through their product.
//!
//! Both cavities are driven at the RWA resonance `Delta_w = -Delta_o =
//! omega_M` (red microwave / blue optical sideband); detunings are not free
//! parameters.

use crate::constants::{HBAR, KB};
use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Which end of the illumination link a device implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    /// Generates the entangled signal/idler pair; may carry the feedback loop.
    Transmitter,
    /// Up-converts and phase-conjugates the returned signal; never has feedback.
    Receiver,
}

/// Convention translating a mechanical quality factor into the amplitude
/// damping rate `gamma_M` used by the Langevin drift (`-gamma_M b` with
/// `sqrt(2 gamma_M)` noise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QConvention {
    /// `gamma_M = omega_M / (2 Q)`: Q defined against the energy decay rate
    /// (FWHM of the energy spectrum). Default.
    EnergyDecay,
    /// `gamma_M = omega_M / Q`: Q defined against the amplitude rate itself.
    AmplitudeDecay,
}

impl QConvention {
    pub fn gamma_m(self, omega_m: f64, q: f64) -> f64 {
        match self {
            QConvention::EnergyDecay => omega_m / (2.0 * q),
            QConvention::AmplitudeDecay => omega_m / q,
        }
    }
}

/// All physical parameters of one electro-optomechanical device.
///
/// Rates are amplitude rates in rad/s. `r_w`, `r_o` are the port-1 fractions
/// `kappa^(1)/kappa` of the two-sided cavities, in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub role: Role,
    /// Mechanical angular frequency [rad/s].
    pub omega_m: f64,
    /// Mechanical amplitude damping rate [rad/s].
    pub gamma_m: f64,
    /// Microwave angular frequency [rad/s].
    pub omega_w: f64,
    /// Optical angular frequency [rad/s]; only used to justify a zero optical
    /// bath occupation.
    pub omega_o: f64,
    /// Microwave cavity amplitude decay rate [rad/s].
    pub kappa_w: f64,
    /// Optical cavity amplitude decay rate [rad/s].
    pub kappa_o: f64,
    /// Port-1 fraction of the microwave decay, kappa_w^(1)/kappa_w.
    pub r_w: f64,
    /// Port-1 fraction of the optical decay, kappa_o^(1)/kappa_o.
    pub r_o: f64,
    /// Bath temperature [K].
    pub temperature: f64,
    /// Optomechanical cooperativity |G_o|^2/(gamma_M kappa_o).
    pub coop_o: f64,
    /// Electromechanical cooperativity |G_w|^2/(gamma_M kappa_w).
    pub coop_w: f64,
    /// Optical driving phase [rad].
    pub phi_o: f64,
    /// Microwave driving phase [rad].
    pub phi_w: f64,
    /// Test override for the optical bath occupation. `None` pins it to zero,
    /// which is the physical value at optical frequencies.
    pub optical_bath_override: Option<f64>,
}

impl DeviceParams {
    /// Validate all invariants; call after construction or mutation.
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("omega_w", self.omega_w),
            ("omega_o", self.omega_o),
            ("kappa_w", self.kappa_w),
            ("kappa_o", self.kappa_o),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [("r_w", self.r_w), ("r_o", self.r_o)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1], got {v}"
                )));
            }
        }
        for (name, v) in [("coop_o", self.coop_o), ("coop_w", self.coop_w)] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        if self.temperature < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if let Some(n) = self.optical_bath_override {
            if n < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "optical bath occupation must be >= 0, got {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn kappa_w1(&self) -> f64 {
        self.r_w * self.kappa_w
    }
    pub fn kappa_w2(&self) -> f64 {
        (1.0 - self.r_w) * self.kappa_w
    }
    pub fn kappa_o1(&self) -> f64 {
        self.r_o * self.kappa_o
    }
    pub fn kappa_o2(&self) -> f64 {
        (1.0 - self.r_o) * self.kappa_o
    }

    /// Thermal occupation of the microwave bath.
    pub fn n_w_thermal(&self) -> f64 {
        thermal_occupation(self.omega_w, self.temperature).expect("validated omega_w > 0")
    }

    /// Thermal occupation of the mechanical bath.
    pub fn n_m_thermal(&self) -> f64 {
        thermal_occupation(self.omega_m, self.temperature).expect("validated omega_m > 0")
    }

    /// Occupation of the optical bath: pinned to zero unless overridden.
    pub fn n_o_thermal(&self) -> f64 {
        self.optical_bath_override.unwrap_or(0.0)
    }
}

/// Cavity branch selector for [`coupling`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Microwave,
    Optical,
}

/// Feedback-loop parameters of the transmitter.
///
/// `phi` is the effective feedback phase: the homodyne phase minus the
/// detuning-times-delay contribution, already folded together. The loop
/// response is assumed broadband so the delay enters only through `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackParams {
    /// Dimensionless feedback gain.
    pub gain: f64,
    /// Effective feedback phase [rad], reduced to (-pi, pi].
    pub phi: f64,
    /// Homodyne detection efficiency in [0, 1].
    pub eta: f64,
}

impl FeedbackParams {
    pub fn new(gain: f64, phi: f64, eta: f64) -> Result<Self> {
        let fb = FeedbackParams {
            gain,
            phi: reduce_phase(phi),
            eta,
        };
        fb.validate()?;
        Ok(fb)
    }

    /// Loop disabled: zero gain.
    pub fn off() -> Self {
        FeedbackParams {
            gain: 0.0,
            phi: 0.0,
            eta: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in [0, 1], got {}",
                self.eta
            )));
        }
        if !self.gain.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidParameter(
                "feedback gain and phase must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Reduce an angle to (-pi, pi].
pub fn reduce_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * std::f64::consts::PI);
    if p > std::f64::consts::PI {
        p -= 2.0 * std::f64::consts::PI;
    }
    p
}

/// Background-photon specification at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NbMode {
    /// Finite mean background photon number N_B.
    Finite(f64),
    /// Symbolic large-N_B limit: SNRs are reported as N_B-independent
    /// prefactors (SNR * N_B) and the ratio F drops N_B exactly.
    Large,
}

/// Target-detection scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetScenario {
    /// Target reflectivity, in [0, 1).
    pub reflectivity: f64,
    pub background: NbMode,
    /// Number of independent signal/idler copies M >= 1.
    pub copies: u64,
}

impl TargetScenario {
    pub fn new(reflectivity: f64, background: NbMode, copies: u64) -> Result<Self> {
        let s = TargetScenario {
            reflectivity,
            background,
            copies,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.reflectivity) {
            return Err(Error::InvalidParameter(format!(
                "reflectivity must lie in [0, 1), got {}",
                self.reflectivity
            )));
        }
        if let NbMode::Finite(nb) = self.background {
            if nb < 0.0 || !nb.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "background photon number must be >= 0, got {nb}"
                )));
            }
        }
        if self.copies < 1 {
            return Err(Error::InvalidParameter("copies must be >= 1".into()));
        }
        Ok(())
    }
}

/// Bose-Einstein occupation `1/(exp(hbar omega / kB T) - 1)`.
///
/// Returns 0 at `T = 0`; errors for non-positive `omega`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "thermal occupation needs omega > 0, got {omega}"
        )));
    }
    if temperature < 0.0 {
        return Err(Error::Domain(format!(
            "thermal occupation needs T >= 0, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega / (KB * temperature);
    Ok(1.0 / libm::expm1(x))
}

/// Effective linearized coupling `G = sqrt(Gamma gamma_M kappa) e^{i phi}`.
pub fn coupling(device: &DeviceParams, mode: Mode) -> C64 {
    let (coop, kappa, phi) = match mode {
        Mode::Microwave => (device.coop_w, device.kappa_w, device.phi_w),
        Mode::Optical => (device.coop_o, device.kappa_o, device.phi_o),
    };
    let mag = (coop * device.gamma_m * kappa).sqrt();
    C64::from_polar(mag, phi)
}

/// Feedback coupling `mu` of the RWA drift: `mu_T = g_fb sqrt(2 eta
/// kappa_o^(2) kappa_w^(2)) e^{i phi}`, zero on the receiver.
pub fn feedback_coupling(device: &DeviceParams, fb: &FeedbackParams) -> C64 {
    if device.role == Role::Receiver {
        return C64::new(0.0, 0.0);
    }
    let mag = fb.gain * (2.0 * fb.eta * device.kappa_o2() * device.kappa_w2()).sqrt();
    C64::from_polar(mag, fb.phi)
}

/// Feedback-modified occupation of the transmitter microwave input:
/// `n_fb = n_th + g_fb^2 kappa_w^(2) / (2 kappa_w)`.
pub fn feedback_thermal_occupation(device: &DeviceParams, fb: &FeedbackParams) -> Result<f64> {
    if device.role != Role::Transmitter {
        return Err(Error::InvalidParameter(
            "feedback-modified occupation is defined for the transmitter only".into(),
        ));
    }
    fb.validate()?;
    Ok(device.n_w_thermal() + fb.gain * fb.gain * device.kappa_w2() / (2.0 * device.kappa_w))
}

/// Set the receiver driving-phase sum so that `B_R(-omega) m_T*(omega)` is
/// real and non-negative, which maximizes the detection SNR at fixed moduli.
///
/// `B_R` is proportional to `G_{o,R} G_{w,R}`, with a remaining factor that
/// depends only on coupling moduli, so only the phase sum `phi_o + phi_w` is
/// constrained; the adjustment is applied entirely to `phi_w` with `phi_o`
/// reset to zero. Returns the adjusted receiver.
pub fn receiver_phase_matching(
    m_t: C64,
    receiver: &DeviceParams,
    omega: f64,
) -> Result<DeviceParams> {
    if receiver.role != Role::Receiver {
        return Err(Error::InvalidParameter(
            "phase matching adjusts the receiver device".into(),
        ));
    }
    if m_t.norm() == 0.0 {
        return Err(Error::Degenerate(
            "phase matching undefined for m_T = 0".into(),
        ));
    }
    if receiver.coop_o == 0.0 || receiver.coop_w == 0.0 {
        return Err(Error::Degenerate(
            "phase matching undefined for B_R = 0 (vanishing receiver coupling)".into(),
        ));
    }
    // K_R = B_R / (G_oR G_wR) only depends on coupling moduli; evaluate it on
    // a zero-phase copy at -omega.
    let mut probe = receiver.clone();
    probe.phi_o = 0.0;
    probe.phi_w = 0.0;
    let coeffs = crate::transfer::coefficients(&probe, None, -omega)?;
    if coeffs.b.norm() == 0.0 {
        return Err(Error::Degenerate(
            "phase matching undefined for B_R = 0".into(),
        ));
    }
    let arg_k = coeffs.b.arg();
    let mut adjusted = receiver.clone();
    adjusted.phi_o = 0.0;
    adjusted.phi_w = reduce_phase(m_t.arg() - arg_k);
    Ok(adjusted)
}
