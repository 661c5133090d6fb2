//! Optically induced self-energies of the phonon and the magnon, and the
//! cavity-mediated magnon/phonon couplings.
//!
//! All four quantities are built from the TE-cavity susceptibility `χ_b`
//! evaluated in the TE pump frame, so they depend on the TM drive only
//! through `G_a` and on the TE drive through both `G_b` and `χ_b`.

use alloc::vec::Vec;

use crate::grid::validate_axis;
use crate::model::{couplings, norm_sqr};
use crate::{Result, SystemConfig, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Phonon self-energy `Σ_rr[ω] = −i|G_b|²(χ_b[ω] − χ_b*[−ω])`.
pub fn sigma_rr(omega: f64, config: &SystemConfig) -> C64 {
    let g = couplings(config);
    let bracket = config.te_susceptibility(omega) - config.te_susceptibility(-omega).conj();
    -I * norm_sqr(g.g_b) * bracket
}

/// Magnon self-energy: `−i G_a² χ_b[ω]` (paper-literal) or `−i |G_a|² χ_b[ω]`
/// (Hermitian-consistent).
pub fn sigma_mm(omega: f64, config: &SystemConfig) -> C64 {
    let g = couplings(config);
    let product = g.g_a * config.magnon_photon_coefficient(g.g_a);
    -I * product * config.te_susceptibility(omega)
}

/// Phonon-to-magnon mediated coupling `Σ_mr[ω] = −i G_a G_b χ_b[ω]`.
pub fn sigma_mr(omega: f64, config: &SystemConfig) -> C64 {
    let g = couplings(config);
    -I * g.g_a * g.g_b * config.te_susceptibility(omega)
}

/// Magnon-to-phonon mediated coupling `Σ_rm[ω] = −i G_a G_b* χ_b[ω]`.
pub fn sigma_rm(omega: f64, config: &SystemConfig) -> C64 {
    let g = couplings(config);
    -I * g.g_a * g.g_b.conj() * config.te_susceptibility(omega)
}

/// Which self-energy a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelfEnergyKind {
    /// Phonon self-energy, `Σ_rr`.
    Rr,
    /// Magnon self-energy, `Σ_mm`.
    Mm,
    /// Phonon → magnon coupling, `Σ_mr`.
    Mr,
    /// Magnon → phonon coupling, `Σ_rm`.
    Rm,
}

impl SelfEnergyKind {
    pub const ALL: [SelfEnergyKind; 4] = [
        SelfEnergyKind::Rr,
        SelfEnergyKind::Mm,
        SelfEnergyKind::Mr,
        SelfEnergyKind::Rm,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SelfEnergyKind::Rr => "rr",
            SelfEnergyKind::Mm => "mm",
            SelfEnergyKind::Mr => "mr",
            SelfEnergyKind::Rm => "rm",
        }
    }

    pub fn evaluate(self, omega: f64, config: &SystemConfig) -> C64 {
        match self {
            SelfEnergyKind::Rr => sigma_rr(omega, config),
            SelfEnergyKind::Mm => sigma_mm(omega, config),
            SelfEnergyKind::Mr => sigma_mr(omega, config),
            SelfEnergyKind::Rm => sigma_rm(omega, config),
        }
    }

    /// The mode's own resonance: `ω_r` for the phonon self-energy, `ω_m`
    /// otherwise.
    pub fn natural_frequency(self, config: &SystemConfig) -> f64 {
        match self {
            SelfEnergyKind::Rr => config.phonon.omega,
            _ => config.magnon.omega,
        }
    }
}

/// One cell of a self-energy sweep. Frequency and damping shifts are read
/// straight off `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfEnergyPoint {
    pub delta_tm: f64,
    pub delta_te: f64,
    pub sigma: C64,
}

impl SelfEnergyPoint {
    pub fn freq_shift(&self) -> f64 {
        self.sigma.re
    }

    pub fn damping_shift(&self) -> f64 {
        self.sigma.im
    }
}

/// Evaluates one sweep cell. `eval_frequency` overrides the mode's own
/// resonance.
pub fn self_energy_at(
    config: &SystemConfig,
    kind: SelfEnergyKind,
    delta_tm: f64,
    delta_te: f64,
    eval_frequency: Option<f64>,
) -> SelfEnergyPoint {
    let cell = config.with_tm_detuning(delta_tm).with_te_detuning(delta_te);
    let omega = eval_frequency.unwrap_or_else(|| kind.natural_frequency(&cell));
    SelfEnergyPoint {
        delta_tm,
        delta_te,
        sigma: kind.evaluate(omega, &cell),
    }
}

/// Full 2-D sweep, TM detuning outer and TE detuning inner.
pub fn sweep_self_energy(
    config: &SystemConfig,
    tm_detunings: &[f64],
    te_detunings: &[f64],
    kind: SelfEnergyKind,
    eval_frequency: Option<f64>,
) -> Result<Vec<SelfEnergyPoint>> {
    config.validate()?;
    validate_axis(tm_detunings, "tm_detuning")?;
    validate_axis(te_detunings, "te_detuning")?;
    let mut out = Vec::with_capacity(tm_detunings.len() * te_detunings.len());
    for &dm in tm_detunings {
        for &de in te_detunings {
            out.push(self_energy_at(config, kind, dm, de, eval_frequency));
        }
    }
    Ok(out)
}

/// Monochromatic sweep: both pumps share each detuning in `detunings`.
pub fn sweep_self_energy_tied(
    config: &SystemConfig,
    detunings: &[f64],
    kind: SelfEnergyKind,
    eval_frequency: Option<f64>,
) -> Result<Vec<SelfEnergyPoint>> {
    config.validate()?;
    validate_axis(detunings, "detuning")?;
    Ok(detunings
        .iter()
        .map(|&d| self_energy_at(config, kind, d, d, eval_frequency))
        .collect())
}
