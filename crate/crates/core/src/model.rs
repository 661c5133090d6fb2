//! Physical parameters, susceptibilities and pump-enhanced couplings.
//!
//! Every frequency, detuning, damping and coupling rate is stored in the same
//! rate unit. Detunings follow the pump-minus-mode convention, so a
//! red-detuned pump has a negative detuning.

use crate::{Error, Result, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// Which degree of freedom an [`OscillatorMode`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    TmPhoton,
    TePhoton,
    Magnon,
    Phonon,
}

impl ModeKind {
    pub fn name(self) -> &'static str {
        match self {
            ModeKind::TmPhoton => "TM photon",
            ModeKind::TePhoton => "TE photon",
            ModeKind::Magnon => "magnon",
            ModeKind::Phonon => "phonon",
        }
    }
}

/// One damped resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMode {
    pub kind: ModeKind,
    /// Resonance frequency.
    pub omega: f64,
    /// Total damping rate.
    pub gamma: f64,
    /// External (input-coupler) part of the damping.
    pub gamma_ext: f64,
}

impl OscillatorMode {
    pub fn new(kind: ModeKind, omega: f64, gamma: f64, gamma_ext: f64) -> Result<Self> {
        let mode = OscillatorMode {
            kind,
            omega,
            gamma,
            gamma_ext,
        };
        mode.validate()?;
        Ok(mode)
    }

    /// Mode whose external coupling is half the total damping.
    pub fn critically_coupled(kind: ModeKind, omega: f64, gamma: f64) -> Result<Self> {
        Self::new(kind, omega, gamma, 0.5 * gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() {
            return Err(Error::InvalidParameter {
                field: "OscillatorMode.omega",
                reason: "must be finite",
                value: self.omega,
            });
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter {
                field: "OscillatorMode.gamma",
                reason: "must be finite and > 0",
                value: self.gamma,
            });
        }
        if !(self.gamma_ext >= 0.0 && self.gamma_ext <= self.gamma) {
            return Err(Error::InvalidParameter {
                field: "OscillatorMode.gamma_ext",
                reason: "must satisfy 0 <= gamma_ext <= gamma",
                value: self.gamma_ext,
            });
        }
        Ok(())
    }

    /// Susceptibility of this mode in its own (non-rotating) frame.
    pub fn susceptibility(&self, omega: f64) -> C64 {
        chi(self.gamma, self.omega, omega)
    }
}

/// A pump tone on one of the optical modes.
///
/// `effective_strength` is the product of input amplitude and the relevant
/// single-photon coupling (`a_in g_m` for TM, `b_in g_b` for TE); only that
/// product enters the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpDrive {
    pub target: ModeKind,
    /// Pump frequency minus mode frequency.
    pub detuning: f64,
    pub effective_strength: f64,
}

impl PumpDrive {
    pub fn new(target: ModeKind, detuning: f64, effective_strength: f64) -> Result<Self> {
        let drive = PumpDrive {
            target,
            detuning,
            effective_strength,
        };
        drive.validate()?;
        Ok(drive)
    }

    /// Builds a drive from the input amplitude and coupling separately.
    pub fn from_input(target: ModeKind, detuning: f64, input_amplitude: f64, coupling: f64) -> Result<Self> {
        Self::new(target, detuning, input_amplitude * coupling)
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.target, ModeKind::TmPhoton | ModeKind::TePhoton) {
            return Err(Error::WrongMode {
                expected: "TM or TE photon",
                found: self.target.name(),
            });
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidParameter {
                field: "PumpDrive.detuning",
                reason: "must be finite",
                value: self.detuning,
            });
        }
        if !(self.effective_strength >= 0.0) || !self.effective_strength.is_finite() {
            return Err(Error::InvalidParameter {
                field: "PumpDrive.effective_strength",
                reason: "must be finite and >= 0",
                value: self.effective_strength,
            });
        }
        Ok(())
    }
}

/// Whether the magnon-photon coupling keeps the conjugate the Hamiltonian
/// implies.
///
/// `PaperLiteral` uses `G_a` in the magnon equation (so the magnon self-energy
/// carries `G_a²`); `HermitianConsistent` uses `G_a*` there (giving `|G_a|²`).
/// The two agree whenever `G_a` is real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConjugationConvention {
    #[default]
    PaperLiteral,
    HermitianConsistent,
}

/// Frequency at which the self-energy matrix is frozen for the reduced
/// two-mode Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaEvalFrequency {
    #[default]
    AtOmegaM,
    AtOmegaR,
    AtMidpoint,
}

/// Full parameter bundle. Each mode slot must hold a mode of the matching
/// kind; call [`SystemConfig::validate`] after editing fields by hand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub tm_photon: OscillatorMode,
    pub te_photon: OscillatorMode,
    pub magnon: OscillatorMode,
    pub phonon: OscillatorMode,
    pub tm_drive: PumpDrive,
    pub te_drive: PumpDrive,
    pub conjugation: ConjugationConvention,
    pub sigma_eval: SigmaEvalFrequency,
}

impl SystemConfig {
    /// Every damping equal to `gamma`, both optical modes critically coupled,
    /// equal effective drive on both pumps and zero detunings.
    pub fn symmetric(gamma: f64, omega_m: f64, omega_r: f64, strength: f64) -> Result<Self> {
        let config = SystemConfig {
            tm_photon: OscillatorMode::critically_coupled(ModeKind::TmPhoton, 0.0, gamma)?,
            te_photon: OscillatorMode::critically_coupled(ModeKind::TePhoton, 0.0, gamma)?,
            magnon: OscillatorMode::new(ModeKind::Magnon, omega_m, gamma, 0.0)?,
            phonon: OscillatorMode::new(ModeKind::Phonon, omega_r, gamma, 0.0)?,
            tm_drive: PumpDrive::new(ModeKind::TmPhoton, 0.0, strength)?,
            te_drive: PumpDrive::new(ModeKind::TePhoton, 0.0, strength)?,
            conjugation: ConjugationConvention::default(),
            sigma_eval: SigmaEvalFrequency::default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let slots = [
            (&self.tm_photon, ModeKind::TmPhoton),
            (&self.te_photon, ModeKind::TePhoton),
            (&self.magnon, ModeKind::Magnon),
            (&self.phonon, ModeKind::Phonon),
        ];
        for (mode, kind) in slots {
            if mode.kind != kind {
                return Err(Error::WrongMode {
                    expected: kind.name(),
                    found: mode.kind.name(),
                });
            }
            mode.validate()?;
        }
        for (drive, kind) in [
            (&self.tm_drive, ModeKind::TmPhoton),
            (&self.te_drive, ModeKind::TePhoton),
        ] {
            drive.validate()?;
            if drive.target != kind {
                return Err(Error::WrongMode {
                    expected: kind.name(),
                    found: drive.target.name(),
                });
            }
        }
        Ok(())
    }

    /// Same config with both effective drive strengths set to `strength`.
    pub fn with_drive_strength(mut self, strength: f64) -> Self {
        self.tm_drive.effective_strength = strength;
        self.te_drive.effective_strength = strength;
        self
    }

    pub fn with_te_detuning(mut self, detuning: f64) -> Self {
        self.te_drive.detuning = detuning;
        self
    }

    pub fn with_tm_detuning(mut self, detuning: f64) -> Self {
        self.tm_drive.detuning = detuning;
        self
    }

    /// Both drives scaled by `factor`.
    pub fn scale_drives(mut self, factor: f64) -> Self {
        self.tm_drive.effective_strength *= factor;
        self.te_drive.effective_strength *= factor;
        self
    }

    /// TE-cavity susceptibility in the frame rotating at the TE pump:
    /// `1 / (κ_b/2 − i(ω + Δ_b))`.
    pub fn te_susceptibility(&self, omega: f64) -> C64 {
        chi(self.te_photon.gamma, -self.te_drive.detuning, omega)
    }

    /// Frequency at which the reduced Hamiltonian freezes the self-energy.
    pub fn sigma_frequency(&self) -> f64 {
        match self.sigma_eval {
            SigmaEvalFrequency::AtOmegaM => self.magnon.omega,
            SigmaEvalFrequency::AtOmegaR => self.phonon.omega,
            SigmaEvalFrequency::AtMidpoint => 0.5 * (self.magnon.omega + self.phonon.omega),
        }
    }

    /// Coefficient of `b[ω]` in the magnon equation: `G_a` or `G_a*`.
    pub(crate) fn magnon_photon_coefficient(&self, g_a: C64) -> C64 {
        match self.conjugation {
            ConjugationConvention::PaperLiteral => g_a,
            ConjugationConvention::HermitianConsistent => g_a.conj(),
        }
    }
}

/// Pump-enhanced linear couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoupling {
    /// TE photon - magnon coupling, enhanced by the TM pump.
    pub g_a: C64,
    /// TE photon - phonon coupling, enhanced by the TE pump.
    pub g_b: C64,
}

/// `1 / (γ/2 − i(ω − ω_res))` without argument checks.
#[inline]
pub(crate) fn chi(gamma: f64, omega_res: f64, omega: f64) -> C64 {
    C64::new(0.5 * gamma, -(omega - omega_res)).inv()
}

/// Linear response of a damped mode: `1 / (γ/2 − i(ω − ω_res))`.
pub fn susceptibility(gamma: f64, omega_res: f64, omega: f64) -> Result<C64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            field: "OscillatorMode.gamma",
            reason: "must be finite and > 0",
            value: gamma,
        });
    }
    Ok(chi(gamma, omega_res, omega))
}

/// Steady intracavity amplitude of a pumped optical mode, already multiplied
/// by the single-photon coupling folded into `effective_strength`:
/// `s √(2κ_ext) / (−iΔ + κ)`.
pub fn steady_amplitude(drive: &PumpDrive, mode: &OscillatorMode) -> Result<C64> {
    drive.validate()?;
    mode.validate()?;
    if drive.target != mode.kind {
        return Err(Error::WrongMode {
            expected: drive.target.name(),
            found: mode.kind.name(),
        });
    }
    Ok(amplitude(drive, mode))
}

/// [`steady_amplitude`] restricted to the TM mode.
pub fn steady_tm_amplitude(drive: &PumpDrive, mode: &OscillatorMode) -> Result<C64> {
    if mode.kind != ModeKind::TmPhoton {
        return Err(Error::WrongMode {
            expected: ModeKind::TmPhoton.name(),
            found: mode.kind.name(),
        });
    }
    steady_amplitude(drive, mode)
}

#[inline]
fn amplitude(drive: &PumpDrive, mode: &OscillatorMode) -> C64 {
    let numerator = drive.effective_strength * (2.0 * mode.gamma_ext).sqrt();
    C64::new(mode.gamma, -drive.detuning).inv() * numerator
}

/// `G_a` and `G_b` for a configuration.
pub fn effective_couplings(config: &SystemConfig) -> Result<EffectiveCoupling> {
    config.validate()?;
    Ok(couplings(config))
}

/// [`effective_couplings`] for a config already known to be valid.
#[inline]
pub(crate) fn couplings(config: &SystemConfig) -> EffectiveCoupling {
    EffectiveCoupling {
        g_a: amplitude(&config.tm_drive, &config.tm_photon),
        g_b: amplitude(&config.te_drive, &config.te_photon),
    }
}

/// |z|² without the square root.
#[inline]
pub(crate) fn norm_sqr(z: C64) -> f64 {
    z.re * z.re + z.im * z.im
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig5_like() -> SystemConfig {
        let mut c = SystemConfig::symmetric(2e7, 1e9 - 1.6e7, 1e9 + 1.6e7, 0.87e12).unwrap();
        c.tm_drive.detuning = -3e6;
        c
    }

    #[test]
    fn susceptibility_trivial_values() {
        assert_eq!(susceptibility(2.0, 0.0, 0.0).unwrap(), C64::new(1.0, 0.0));
        let w0 = 1.234e9;
        let v = susceptibility(2e7, w0, w0).unwrap();
        assert_relative_eq!(v.re, 1e-7, max_relative = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn susceptibility_rejects_non_positive_damping() {
        for g in [0.0, -1.0, f64::NAN] {
            match susceptibility(g, 0.0, 1.0) {
                Err(Error::InvalidParameter { field, .. }) => {
                    assert_eq!(field, "OscillatorMode.gamma")
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn half_maximum_sits_at_half_linewidth() {
        // brute-force scan of |chi|^2 around resonance
        let (gamma, w0) = (3.0, 10.0);
        let peak = susceptibility(gamma, w0, w0).unwrap().norm_sqr();
        let n = 2_000_001;
        let span = 4.0 * gamma;
        let mut last_above = 0.0;
        for i in 0..n {
            let dw = span * i as f64 / (n - 1) as f64;
            if susceptibility(gamma, w0, w0 + dw).unwrap().norm_sqr() >= 0.5 * peak {
                last_above = dw;
            }
        }
        assert!((last_above - gamma / 2.0).abs() <= span / (n - 1) as f64);
    }

    #[test]
    fn conjugation_identity() {
        for &(g, wr, w) in &[(1.0, 0.3, -2.0), (2e7, 1e9, 1.01e9), (0.1, -5.0, 7.0)] {
            let c = susceptibility(g, wr, w).unwrap().conj();
            let expected = C64::new(g / 2.0, w - wr).inv();
            assert_eq!(c, expected);
        }
    }

    #[test]
    fn critical_coupling_zero_detuning() {
        let mode = OscillatorMode::critically_coupled(ModeKind::TmPhoton, 0.0, 2e7).unwrap();
        let drive = PumpDrive::new(ModeKind::TmPhoton, 0.0, 3.0).unwrap();
        let a = steady_tm_amplitude(&drive, &mode).unwrap();
        assert_relative_eq!(a.re, 3.0 / 2e7.sqrt(), max_relative = 1e-14);
        assert_eq!(a.im, 0.0);
    }

    #[test]
    fn tm_amplitude_vanishes_far_detuned() {
        let mode = OscillatorMode::critically_coupled(ModeKind::TmPhoton, 0.0, 2e7).unwrap();
        let near = PumpDrive::new(ModeKind::TmPhoton, 0.0, 1.0).unwrap();
        let far = PumpDrive::new(ModeKind::TmPhoton, 1e15, 1.0).unwrap();
        let a0 = steady_tm_amplitude(&near, &mode).unwrap().norm();
        let a1 = steady_tm_amplitude(&far, &mode).unwrap().norm();
        assert!(a1 < 1e-7 * a0);
    }

    #[test]
    fn tm_amplitude_matches_independent_evaluation() {
        // G_a = a_in g_m sqrt(2 k1) / (-i D + k), evaluated through real arithmetic
        let (s, k, k1, d) = (1e12_f64, 2e7_f64, 1e7_f64, 0.0_f64);
        let mag = s * (2.0 * k1).sqrt() / (k * k + d * d).sqrt();
        let mode = OscillatorMode::new(ModeKind::TmPhoton, 0.0, k, k1).unwrap();
        let drive = PumpDrive::from_input(ModeKind::TmPhoton, d, 1e10, 100.0).unwrap();
        let a = steady_tm_amplitude(&drive, &mode).unwrap();
        assert_relative_eq!(a.norm(), mag, max_relative = 1e-14);
        assert_relative_eq!(a.re, 1e12 * 2e7_f64.sqrt() / 2e7, max_relative = 1e-14);
    }

    #[test]
    fn tm_amplitude_rejects_other_modes() {
        let te = OscillatorMode::critically_coupled(ModeKind::TePhoton, 0.0, 1.0).unwrap();
        let drive = PumpDrive::new(ModeKind::TmPhoton, 0.0, 1.0).unwrap();
        assert!(matches!(steady_tm_amplitude(&drive, &te), Err(Error::WrongMode { .. })));
    }

    #[test]
    fn couplings_follow_drives() {
        let c = fig5_like().with_drive_strength(0.0);
        let g = effective_couplings(&c).unwrap();
        assert_eq!(g.g_a, C64::new(0.0, 0.0));
        assert_eq!(g.g_b, C64::new(0.0, 0.0));

        let c = fig5_like().with_te_detuning(0.0);
        let g = effective_couplings(&c).unwrap();
        assert_eq!(g.g_b.im, 0.0);
        assert!(g.g_b.re > 0.0);

        let plus = effective_couplings(&fig5_like().with_te_detuning(4e6)).unwrap();
        let minus = effective_couplings(&fig5_like().with_te_detuning(-4e6)).unwrap();
        assert_relative_eq!(plus.g_b.norm(), minus.g_b.norm(), max_relative = 1e-15);
        assert_relative_eq!(plus.g_b.arg(), -minus.g_b.arg(), max_relative = 1e-15);
    }

    #[test]
    fn couplings_consistent_with_steady_amplitudes() {
        let c = fig5_like();
        let g = effective_couplings(&c).unwrap();
        assert_eq!(g.g_a, steady_tm_amplitude(&c.tm_drive, &c.tm_photon).unwrap());
        assert_eq!(g.g_b, steady_amplitude(&c.te_drive, &c.te_photon).unwrap());
    }

    #[test]
    fn doubling_the_drive_doubles_the_coupling() {
        let c = fig5_like();
        let g1 = effective_couplings(&c).unwrap();
        let g2 = effective_couplings(&c.scale_drives(2.0)).unwrap();
        assert_eq!(g2.g_a, g1.g_a * 2.0);
        assert_eq!(g2.g_b, g1.g_b * 2.0);
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = fig5_like();
        c.magnon.gamma = -1.0;
        match c.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "OscillatorMode.gamma"),
            other => panic!("unexpected {other:?}"),
        }
        let mut c = fig5_like();
        c.te_photon.gamma_ext = 3e7;
        assert!(matches!(
            c.validate(),
            Err(Error::InvalidParameter {
                field: "OscillatorMode.gamma_ext",
                ..
            })
        ));
        let mut c = fig5_like();
        c.magnon.kind = ModeKind::Phonon;
        assert!(matches!(c.validate(), Err(Error::WrongMode { .. })));
        let mut c = fig5_like();
        c.te_drive.effective_strength = -2.0;
        assert!(c.validate().is_err());
    }
}
