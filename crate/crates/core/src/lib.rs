//! Gaussian-state simulator and optimizer for a microwave quantum-illumination
//! link built from two electro-optomechanical (EOM) transducers.
//!
//! Each device couples a mechanical resonator to a microwave and an optical
//! cavity mode, driven on the red (microwave) and blue (optical) sidebands so
//! that, in the rotating-wave approximation, the microwave/optical outputs of
//! the transmitter form a two-mode-squeezed signal/idler pair. A homodyne
//! feedback loop from the second optical port onto the second microwave drive
//! of the transmitter recovers correlations otherwise lost through the unused
//! cavity ports. The crate evaluates the closed-form frequency-domain output
//! coefficients of both devices, the signal/idler spectral moments, the
//! quantum and classical detection signal-to-noise ratios of the
//! phase-conjugate receiver, their ratio `F`, and the two-mode logarithmic
//! negativity, and maximizes `F` (or the entanglement) over feedback and
//! coupling parameters under stability constraints.
//!
//! Module map:
//! - [`model`]: parameter records, validation, derived quantities.
//! - [`dynamics`]: RWA drift matrix, stability, RWA-validity margin.
//! - [`transfer`]: closed-form output coefficients and a numeric oracle.
//! - [`spectra`]: input-noise covariance assembly and output moments.
//! - [`illumination`]: detection statistics, SNRs, the ratio `F`.
//! - [`entanglement`]: logarithmic negativity of the signal/idler pair.
//! - [`optimize`]: grid + simplex maximization with stability constraints.
//! - [`config`]: TOML run-configuration schema.
//! - [`sweep`]: deterministic grid sweeps with CSV output.
//! - [`presets`]: parameter presets reproducing the reference landscapes.

pub mod config;
pub mod constants;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod illumination;
pub mod linalg;
pub mod model;
pub mod optimize;
pub mod presets;
pub mod spectra;
pub mod sweep;
pub mod transfer;

pub use error::{Error, Result};
pub use model::{DeviceParams, FeedbackParams, NbMode, Role, TargetScenario};
pub use spectra::{CrossTerms, SpectralMoments};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
