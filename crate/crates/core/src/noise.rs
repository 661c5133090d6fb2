//! TE output field under thermal drive of the magnon and the phonon.
//!
//! The frequency-domain Langevin equations couple six amplitudes,
//! `b[ω], b*[−ω], r[ω], r*[−ω], m[ω], m*[−ω]`, with `z = r[ω] + r*[−ω]`:
//!
//! ```text
//! χ_b⁻¹[ω] b[ω]  = −i G_b z[ω] − i G_a m[ω]
//! χ_r⁻¹[ω] r[ω]  = −i (G_b* b[ω] + G_b b*[−ω]) + √γ_r η_r[ω]
//! χ_m⁻¹[ω] m[ω]  = −i c b[ω] + √γ_m η_m[ω]          (c = G_a or G_a*)
//! ```
//!
//! plus the conjugates of each line reflected to `−ω`. The direct 6×6 solve
//! in [`linear_system_response`] is the reference path. The eliminated form
//! in [`closed_form_response`] (the `X`, `Y`, `Z` factors) is a cross-check
//! and also reproduces the historical printed formula for comparison.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::grid::validate_axis;
use crate::linalg::{invert, norm_1};
use crate::model::couplings;
use crate::{Error, Result, SystemConfig, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Condition numbers above this are reported as [`Error::NearSingular`].
pub const MAX_CONDITION: f64 = 1.0e14;
/// Relative floor on the closed-form denominator `1 − X Y X̃ Ỹ`.
pub const MIN_DENOMINATOR: f64 = 1.0e-12;

/// A unit thermal drive entering one row of the linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseChannel {
    /// `η_r[ω]`, driving `r[ω]`.
    PhononPositive,
    /// `η_r*[−ω]`, driving `r*[−ω]`.
    PhononNegative,
    /// `η_m[ω]`, driving `m[ω]`.
    MagnonPositive,
    /// `η_m*[−ω]`, driving `m*[−ω]`.
    MagnonNegative,
}

impl NoiseChannel {
    pub const ALL: [NoiseChannel; 4] = [
        NoiseChannel::PhononPositive,
        NoiseChannel::PhononNegative,
        NoiseChannel::MagnonPositive,
        NoiseChannel::MagnonNegative,
    ];

    fn index(self) -> usize {
        self as usize
    }

    /// Row of the 6×6 system the channel drives.
    fn row(self) -> usize {
        match self {
            NoiseChannel::PhononPositive => 2,
            NoiseChannel::PhononNegative => 3,
            NoiseChannel::MagnonPositive => 4,
            NoiseChannel::MagnonNegative => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NoiseChannel::PhononPositive => "eta_r+",
            NoiseChannel::PhononNegative => "eta_r-",
            NoiseChannel::MagnonPositive => "eta_m+",
            NoiseChannel::MagnonNegative => "eta_m-",
        }
    }
}

/// Set of enabled noise channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelSet(u8);

impl ChannelSet {
    pub const fn empty() -> Self {
        ChannelSet(0)
    }

    /// All four channels.
    pub const fn all() -> Self {
        ChannelSet(0b1111)
    }

    /// Only the positive-frequency drives that appear in the printed `Z[ω]`.
    pub const fn positive_only() -> Self {
        ChannelSet(0b0101)
    }

    pub fn only(channel: NoiseChannel) -> Self {
        ChannelSet(1 << channel.index())
    }

    pub fn with(self, channel: NoiseChannel) -> Self {
        ChannelSet(self.0 | (1 << channel.index()))
    }

    pub fn contains(self, channel: NoiseChannel) -> bool {
        self.0 & (1 << channel.index()) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = NoiseChannel> {
        NoiseChannel::ALL.into_iter().filter(move |c| self.contains(*c))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl Default for ChannelSet {
    fn default() -> Self {
        ChannelSet::all()
    }
}

/// Thermal drive description: a flat noise level shared by all channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub unit_psd: f64,
    pub channels: ChannelSet,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            unit_psd: 1.0,
            channels: ChannelSet::all(),
        }
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.unit_psd >= 0.0) || !self.unit_psd.is_finite() {
            return Err(Error::InvalidParameter {
                field: "NoiseParams.unit_psd",
                reason: "must be finite and >= 0",
                value: self.unit_psd,
            });
        }
        Ok(())
    }
}

/// Complex amplitude induced in `b[ω]` by a unit drive on each channel
/// (the `√γ` input factor included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients {
    values: [C64; 4],
    channels: ChannelSet,
}

impl TransferCoefficients {
    pub fn get(&self, channel: NoiseChannel) -> Option<C64> {
        self.channels.contains(channel).then(|| self.values[channel.index()])
    }

    pub fn channels(&self) -> ChannelSet {
        self.channels
    }

    pub fn iter(&self) -> impl Iterator<Item = (NoiseChannel, C64)> + '_ {
        self.channels.iter().map(|c| (c, self.values[c.index()]))
    }

    /// Incoherent sum `Σ |t_c|²` over the enabled channels.
    pub fn power(&self) -> f64 {
        self.iter().map(|(_, t)| t.norm_sqr()).sum()
    }
}

/// Row-major 6×6 system matrix in the order
/// `b[ω], b*[−ω], r[ω], r*[−ω], m[ω], m*[−ω]`.
fn system_matrix(omega: f64, config: &SystemConfig) -> [[C64; 6]; 6] {
    let g = couplings(config);
    let (ga, gb) = (g.g_a, g.g_b);
    let c = config.magnon_photon_coefficient(ga);
    let chi_b_inv = |w: f64| config.te_susceptibility(w).inv();
    let chi_r_inv = |w: f64| config.phonon.susceptibility(w).inv();
    let chi_m_inv = |w: f64| config.magnon.susceptibility(w).inv();

    let mut a = [[C64::zero(); 6]; 6];
    a[0][0] = chi_b_inv(omega);
    a[0][2] = I * gb;
    a[0][3] = I * gb;
    a[0][4] = I * ga;

    a[1][1] = chi_b_inv(-omega).conj();
    a[1][2] = -I * gb.conj();
    a[1][3] = -I * gb.conj();
    a[1][5] = -I * ga.conj();

    a[2][2] = chi_r_inv(omega);
    a[2][0] = I * gb.conj();
    a[2][1] = I * gb;

    a[3][3] = chi_r_inv(-omega).conj();
    a[3][0] = -I * gb.conj();
    a[3][1] = -I * gb;

    a[4][4] = chi_m_inv(omega);
    a[4][0] = I * c;

    a[5][5] = chi_m_inv(-omega).conj();
    a[5][1] = -I * c.conj();
    a
}

fn input_factor(channel: NoiseChannel, config: &SystemConfig) -> f64 {
    match channel {
        NoiseChannel::PhononPositive | NoiseChannel::PhononNegative => config.phonon.gamma.sqrt(),
        NoiseChannel::MagnonPositive | NoiseChannel::MagnonNegative => config.magnon.gamma.sqrt(),
    }
}

fn solve_inverse(omega: f64, config: &SystemConfig) -> Result<[[C64; 6]; 6]> {
    let a = system_matrix(omega, config);
    let inv = invert(&a).ok_or(Error::NearSingular {
        omega,
        condition: f64::INFINITY,
    })?;
    let condition = norm_1(&a) * norm_1(&inv);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::NearSingular { omega, condition });
    }
    Ok(inv)
}

/// Transfer coefficients from the direct 6×6 solve for the channels enabled
/// in `noise`. Coefficients do not depend on `noise.unit_psd`.
pub fn linear_system_response(omega: f64, config: &SystemConfig, noise: &NoiseParams) -> Result<TransferCoefficients> {
    let inv = solve_inverse(omega, config)?;
    let mut values = [C64::zero(); 4];
    for ch in noise.channels.iter() {
        values[ch.index()] = inv[0][ch.row()] * input_factor(ch, config);
    }
    Ok(TransferCoefficients {
        values,
        channels: noise.channels,
    })
}

/// `b[ω]` for arbitrary complex noise amplitudes, ordered as
/// [`NoiseChannel::ALL`].
pub fn response_to_sources(omega: f64, config: &SystemConfig, amplitudes: &[C64; 4]) -> Result<C64> {
    let inv = solve_inverse(omega, config)?;
    Ok(NoiseChannel::ALL
        .iter()
        .zip(amplitudes)
        .map(|(ch, a)| inv[0][ch.row()] * input_factor(*ch, config) * a)
        .sum())
}

/// Which eliminated expression [`closed_form_response`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedForm {
    /// `b = (X Z − X Y X̃ Z̃) / (1 − X Y X̃ Ỹ)` where a tilde marks the
    /// conjugate reflected to `−ω`. Exact elimination of the 6×6 system.
    #[default]
    Exact,
    /// `b = (X Y X̃ + X) Z / (1 − X Y X̃ Ỹ)` with the printed `Z[ω]`: the
    /// phonon noise enters as one drive shared by `r` and `r*`, the reflected
    /// magnon drive is absent. Kept for comparison only.
    AsPrinted,
}

/// Intermediate factors of the eliminated TE response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormFactors {
    pub x: C64,
    pub y: C64,
    /// `X*[−ω]`.
    pub x_reflected: C64,
    /// `Y*[−ω]`.
    pub y_reflected: C64,
    /// `1 − X Y X*[−ω] Y*[−ω]`.
    pub denominator: C64,
}

/// `X[ω]` and `Y[ω]`; the reflected pair is obtained by calling at `−ω` and
/// conjugating.
fn x_y(omega: f64, config: &SystemConfig) -> (C64, C64) {
    let g = couplings(config);
    let c = config.magnon_photon_coefficient(g.g_a);
    let chi_r = config.phonon.susceptibility(omega);
    let chi_r_reflected = config.phonon.susceptibility(-omega).conj();
    let chi_m = config.magnon.susceptibility(omega);
    let spring = chi_r - chi_r_reflected;
    let x_inv = config.te_susceptibility(omega).inv() + g.g_b.conj() * g.g_b * spring + g.g_a * c * chi_m;
    (x_inv.inv(), g.g_b * g.g_b * spring)
}

pub fn closed_form_factors(omega: f64, config: &SystemConfig) -> ClosedFormFactors {
    let (x, y) = x_y(omega, config);
    let (xm, ym) = x_y(-omega, config);
    let (x_reflected, y_reflected) = (xm.conj(), ym.conj());
    ClosedFormFactors {
        x,
        y,
        x_reflected,
        y_reflected,
        denominator: C64::new(1.0, 0.0) - x * y * x_reflected * y_reflected,
    }
}

/// Per-channel TE response from the eliminated formula. All four channels
/// are reported; under [`ClosedForm::AsPrinted`] the reflected magnon channel
/// is identically zero.
pub fn closed_form_response(omega: f64, config: &SystemConfig, form: ClosedForm) -> Result<TransferCoefficients> {
    let f = closed_form_factors(omega, config);
    let scale = 1.0 + (f.x * f.y * f.x_reflected * f.y_reflected).norm();
    if !(f.denominator.norm() > MIN_DENOMINATOR * scale) {
        return Err(Error::SmallDenominator {
            omega,
            magnitude: f.denominator.norm(),
        });
    }

    let g = couplings(config);
    let sr = config.phonon.gamma.sqrt();
    let sm = config.magnon.gamma.sqrt();
    let chi_r = config.phonon.susceptibility(omega);
    let chi_r_reflected = config.phonon.susceptibility(-omega).conj();
    let chi_m = config.magnon.susceptibility(omega);
    let chi_m_reflected = config.magnon.susceptibility(-omega).conj();
    // Z: source of the b[ω] row after eliminating r and m.
    // Z̃: source of the b*[−ω] row.
    let z = [
        -I * g.g_b * sr * chi_r,
        -I * g.g_b * sr * chi_r_reflected,
        -I * g.g_a * sm * chi_m,
        C64::zero(),
    ];
    let values = match form {
        ClosedForm::Exact => {
            let z_reflected = [
                I * g.g_b.conj() * sr * chi_r,
                I * g.g_b.conj() * sr * chi_r_reflected,
                C64::zero(),
                I * g.g_a.conj() * sm * chi_m_reflected,
            ];
            let mut v = [C64::zero(); 4];
            for k in 0..4 {
                v[k] = (f.x * z[k] - f.x * f.y * f.x_reflected * z_reflected[k]) / f.denominator;
            }
            v
        }
        ClosedForm::AsPrinted => {
            let gain = (f.x * f.y * f.x_reflected + f.x) / f.denominator;
            [gain * z[0], gain * z[1], gain * z[2], C64::zero()]
        }
    };
    Ok(TransferCoefficients {
        values,
        channels: ChannelSet::all(),
    })
}

/// Output PSD at `omega`: `unit_psd · Σ_c |t_c|²` over enabled channels,
/// with no cross terms between channels.
pub fn psd(omega: f64, config: &SystemConfig, noise: &NoiseParams) -> Result<f64> {
    noise.validate()?;
    let t = linear_system_response(omega, config, noise)?;
    Ok(noise.unit_psd * t.power())
}

/// Which pump detuning a spectrum map sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweptDrive {
    Te,
    Tm,
}

impl SweptDrive {
    pub fn apply(self, config: &SystemConfig, detuning: f64) -> SystemConfig {
        match self {
            SweptDrive::Te => config.with_te_detuning(detuning),
            SweptDrive::Tm => config.with_tm_detuning(detuning),
        }
    }
}

/// One cell of a spectrum map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub detuning: f64,
    pub psd: f64,
}

pub fn psd_at(
    config: &SystemConfig,
    omega: f64,
    detuning: f64,
    swept: SweptDrive,
    noise: &NoiseParams,
) -> Result<SpectrumPoint> {
    let cell = swept.apply(config, detuning);
    Ok(SpectrumPoint {
        omega,
        detuning,
        psd: psd(omega, &cell, noise)?,
    })
}

/// PSD over (detuning × measurement frequency), detuning outer.
pub fn psd_map(
    config: &SystemConfig,
    omegas: &[f64],
    detunings: &[f64],
    swept: SweptDrive,
    noise: &NoiseParams,
) -> Result<Vec<SpectrumPoint>> {
    config.validate()?;
    noise.validate()?;
    validate_axis(omegas, "omega")?;
    validate_axis(detunings, "detuning")?;
    let mut out = Vec::with_capacity(omegas.len() * detunings.len());
    for &d in detunings {
        for &w in omegas {
            out.push(psd_at(config, w, d, swept, noise)?);
        }
    }
    Ok(out)
}
