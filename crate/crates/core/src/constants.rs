//! Physical constants (CODATA 2018 exact values).

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant [J/K].
pub const KB: f64 = 1.380_649e-23;

/// Default RWA-validity threshold on max(|G_w|, |G_o|, |mu|)/omega_M.
pub const RWA_MARGIN_THRESHOLD: f64 = 0.1;
