//! Run configuration: a TOML document layered as preset, then config file,
//! then `--set` overrides. Unknown keys are rejected at every layer.

use std::path::Path;

use magphon_core::encircle::{Direction, EvolveOptions, LoopSpec};
use magphon_core::grid::linspace;
use magphon_core::noise::{ChannelSet, NoiseParams, SweptDrive};
use magphon_core::self_energy::SelfEnergyKind;
use magphon_core::spectral::{ParameterPlane, Region};
use magphon_core::{ConjugationConvention, ModeKind, OscillatorMode, PumpDrive, SigmaEvalFrequency, SystemConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Free-text label of the unit system, echoed into every output header.
    pub units: String,
    pub modes: Modes,
    pub drives: Drives,
    pub model: ModelOptions,
    pub self_energy: SelfEnergySection,
    pub spectrum: SpectrumSection,
    pub plane: PlaneSection,
    pub encircle: EncircleSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub omega: f64,
    pub gamma: f64,
    pub gamma_ext: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Modes {
    pub tm_photon: Mode,
    pub te_photon: Mode,
    pub magnon: Mode,
    pub phonon: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drive {
    pub detuning: f64,
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drives {
    pub tm: Drive,
    pub te: Drive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugation {
    PaperLiteral,
    HermitianConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaEval {
    OmegaM,
    OmegaR,
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelOptions {
    pub conjugation: Conjugation,
    pub sigma_eval: SigmaEval,
}

/// Evenly spaced axis, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub const fn new(start: f64, stop: f64, points: usize) -> Self {
        Axis { start, stop, points }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }

    fn check(&self, name: &str) -> Result<(), CliError> {
        let ok = self.start.is_finite()
            && self.stop.is_finite()
            && self.points >= 1
            && (self.points == 1 || self.start != self.stop);
        if ok {
            Ok(())
        } else {
            Err(CliError::Invalid(format!(
                "{name}: axis needs finite ends, at least one point and distinct ends when points > 1"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Rr,
    Mm,
    Mr,
    Rm,
}

impl Kind {
    pub fn core(self) -> SelfEnergyKind {
        match self {
            Kind::Rr => SelfEnergyKind::Rr,
            Kind::Mm => SelfEnergyKind::Mm,
            Kind::Mr => SelfEnergyKind::Mr,
            Kind::Rm => SelfEnergyKind::Rm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfEnergySection {
    pub kinds: Vec<Kind>,
    pub tm_detuning: Axis,
    pub te_detuning: Axis,
    /// Both pumps share the TM axis value; the TE axis is ignored.
    pub tied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_frequency: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Swept {
    Te,
    Tm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channels {
    /// All four thermal drives.
    All,
    /// Only the positive-frequency phonon and magnon drives.
    PositiveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub omega: Axis,
    pub detuning: Axis,
    pub swept: Swept,
    pub unit_psd: f64,
    pub channels: Channels,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSection {
    pub p_in: Axis,
    pub delta: Axis,
    /// TM detuning follows the swept TE detuning.
    pub tie_detunings: bool,
    /// Absolute eigenvalue gap below which a surface cell is flagged.
    pub gap_tolerance: f64,
    /// Subtracted from the real parts written to the surface CSV.
    pub re_offset: f64,
    pub seeds_per_axis: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rotation {
    Cw,
    Ccw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialMode {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncircleSection {
    pub center_p: f64,
    pub center_delta: f64,
    pub radius_units: f64,
    pub period: f64,
    pub samples: usize,
    pub direction: Rotation,
    pub start_phase: f64,
    /// Start-phase offset of the opposite-direction partner loop.
    pub partner_phase_offset: f64,
    pub initial_mode: InitialMode,
    pub rtol: f64,
    pub atol: f64,
    pub slope_threshold: f64,
}

impl Mode {
    fn build(&self, kind: ModeKind) -> Result<OscillatorMode, CliError> {
        Ok(OscillatorMode::new(kind, self.omega, self.gamma, self.gamma_ext)?)
    }
}

impl RunConfig {
    pub fn system(&self) -> Result<SystemConfig, CliError> {
        let config = SystemConfig {
            tm_photon: self.modes.tm_photon.build(ModeKind::TmPhoton)?,
            te_photon: self.modes.te_photon.build(ModeKind::TePhoton)?,
            magnon: self.modes.magnon.build(ModeKind::Magnon)?,
            phonon: self.modes.phonon.build(ModeKind::Phonon)?,
            tm_drive: PumpDrive::new(ModeKind::TmPhoton, self.drives.tm.detuning, self.drives.tm.strength)?,
            te_drive: PumpDrive::new(ModeKind::TePhoton, self.drives.te.detuning, self.drives.te.strength)?,
            conjugation: match self.model.conjugation {
                Conjugation::PaperLiteral => ConjugationConvention::PaperLiteral,
                Conjugation::HermitianConsistent => ConjugationConvention::HermitianConsistent,
            },
            sigma_eval: match self.model.sigma_eval {
                SigmaEval::OmegaM => SigmaEvalFrequency::AtOmegaM,
                SigmaEval::OmegaR => SigmaEvalFrequency::AtOmegaR,
                SigmaEval::Midpoint => SigmaEvalFrequency::AtMidpoint,
            },
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks everything that is not covered by the core validators.
    pub fn validate(&self) -> Result<(), CliError> {
        self.system()?;
        let s = &self.self_energy;
        if s.kinds.is_empty() {
            return Err(CliError::Invalid("self_energy.kinds: list is empty".into()));
        }
        s.tm_detuning.check("self_energy.tm_detuning")?;
        s.te_detuning.check("self_energy.te_detuning")?;
        if let Some(w) = s.eval_frequency {
            finite("self_energy.eval_frequency", w)?;
        }
        self.spectrum.omega.check("spectrum.omega")?;
        self.spectrum.detuning.check("spectrum.detuning")?;
        self.noise()?.validate()?;
        let p = &self.plane;
        p.p_in.check("plane.p_in")?;
        p.delta.check("plane.delta")?;
        if p.p_in.points < 2 || p.delta.points < 2 {
            return Err(CliError::Invalid("plane: both axes need at least two points".into()));
        }
        if !(p.gap_tolerance >= 0.0) {
            return Err(CliError::Invalid("plane.gap_tolerance: must be >= 0".into()));
        }
        finite("plane.re_offset", p.re_offset)?;
        let e = &self.encircle;
        self.loop_spec().validate()?;
        finite("encircle.partner_phase_offset", e.partner_phase_offset)?;
        if !(e.rtol > 0.0 && e.atol >= 0.0) {
            return Err(CliError::Invalid(
                "encircle.rtol/atol: rtol must be > 0 and atol >= 0".into(),
            ));
        }
        if !(e.slope_threshold > 0.0) {
            return Err(CliError::Invalid("encircle.slope_threshold: must be > 0".into()));
        }
        Ok(())
    }

    pub fn noise(&self) -> Result<NoiseParams, CliError> {
        let noise = NoiseParams {
            unit_psd: self.spectrum.unit_psd,
            channels: match self.spectrum.channels {
                Channels::All => ChannelSet::all(),
                Channels::PositiveOnly => ChannelSet::positive_only(),
            },
        };
        noise.validate()?;
        Ok(noise)
    }

    pub fn swept(&self) -> SweptDrive {
        match self.spectrum.swept {
            Swept::Te => SweptDrive::Te,
            Swept::Tm => SweptDrive::Tm,
        }
    }

    pub fn parameter_plane(&self) -> Result<ParameterPlane, CliError> {
        let base = self.system()?;
        Ok(ParameterPlane {
            base,
            tie_detunings: self.plane.tie_detunings,
        })
    }

    pub fn region(&self) -> Region {
        let (p0, p1) = ordered(self.plane.p_in.start, self.plane.p_in.stop);
        let (d0, d1) = ordered(self.plane.delta.start, self.plane.delta.stop);
        Region {
            p_min: p0,
            p_max: p1,
            delta_min: d0,
            delta_max: d1,
        }
    }

    pub fn loop_spec(&self) -> LoopSpec {
        let e = &self.encircle;
        LoopSpec {
            center_p: e.center_p,
            center_delta: e.center_delta,
            radius_units: e.radius_units,
            direction: match e.direction {
                Rotation::Cw => Direction::Clockwise,
                Rotation::Ccw => Direction::CounterClockwise,
            },
            period: e.period,
            start_phase: e.start_phase,
            samples: e.samples,
        }
    }

    /// The opposite-direction loop used for the chirality comparison.
    pub fn partner_loop_spec(&self) -> LoopSpec {
        let primary = self.loop_spec();
        LoopSpec {
            direction: primary.direction.reversed(),
            start_phase: primary.start_phase + self.encircle.partner_phase_offset,
            ..primary
        }
    }

    pub fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            rtol: self.encircle.rtol,
            atol: self.encircle.atol,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config always serializes")
    }

    /// `sha256:` digest of the resolved configuration.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        format!("sha256:{hex}")
    }
}

fn finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{name}: must be finite")))
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Recursively merges `patch` into `base`; tables merge key by key, any
/// other value replaces.
fn merge(base: &mut toml::Value, patch: toml::Value) {
    match (base, patch) {
        (toml::Value::Table(b), toml::Value::Table(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Parses the right-hand side of `--set`: any TOML value, otherwise a bare
/// string.
fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key just written"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn apply_override(doc: &mut toml::Value, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Override(assignment.into(), "expected key=value".into()))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::Override(assignment.into(), "empty key segment".into()));
    }
    let mut patch = parse_value(raw.trim());
    for part in key.rsplit('.') {
        let mut t = toml::Table::new();
        t.insert(part.to_string(), patch);
        patch = toml::Value::Table(t);
    }
    merge(doc, patch);
    Ok(())
}

/// Layers an optional config file and `--set` overrides on top of `base`.
pub fn resolve(base: &RunConfig, file: Option<&Path>, overrides: &[String]) -> Result<RunConfig, CliError> {
    let mut doc = toml::Value::try_from(base).expect("run config always serializes");
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.display().to_string(),
            source,
        })?;
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Parse(format!("{}: {e}", path.display())))?;
        merge(&mut doc, toml::Value::Table(table));
    }
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let resolved: RunConfig = doc
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    resolved.validate()?;
    Ok(resolved)
}
