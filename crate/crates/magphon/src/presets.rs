//! Named parameter sets. Every preset carries the source sentences its
//! numbers were taken from.

use std::f64::consts::PI;

use magphon_core::encircle::{DESK_PERIOD, SLOPE_THRESHOLD};

use crate::config::*;
use crate::Command;

/// One number of a preset together with the sentence it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Citation {
    /// Dotted path into the resolved configuration.
    pub key: &'static str,
    pub value: f64,
    pub quote: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    /// Command the preset is meant for.
    pub command: Command,
    pub summary: &'static str,
    pub citations: &'static [Citation],
    build: fn() -> RunConfig,
}

impl Preset {
    pub fn config(&self) -> RunConfig {
        (self.build)()
    }
}

pub const DIMENSIONLESS_UNITS: &str = "rates in units of gamma";
pub const RATE_UNITS: &str = "rates in s^-1 without 2pi factors; time in s";

const fn mode(omega: f64, gamma: f64, gamma_ext: f64) -> Mode {
    Mode {
        omega,
        gamma,
        gamma_ext,
    }
}

/// All dampings `gamma`, both cavities critically coupled, equal drives.
fn base(units: &str, gamma: f64, omega_m: f64, omega_r: f64, strength: f64) -> RunConfig {
    RunConfig {
        units: units.to_string(),
        modes: Modes {
            tm_photon: mode(0.0, gamma, 0.5 * gamma),
            te_photon: mode(0.0, gamma, 0.5 * gamma),
            magnon: mode(omega_m, gamma, 0.0),
            phonon: mode(omega_r, gamma, 0.0),
        },
        drives: Drives {
            tm: Drive {
                detuning: 0.0,
                strength,
            },
            te: Drive {
                detuning: 0.0,
                strength,
            },
        },
        model: ModelOptions {
            conjugation: Conjugation::PaperLiteral,
            sigma_eval: SigmaEval::OmegaM,
        },
        self_energy: SelfEnergySection {
            kinds: vec![Kind::Rr, Kind::Mm, Kind::Mr, Kind::Rm],
            tm_detuning: Axis::new(-5.0 * gamma, 5.0 * gamma, 101),
            te_detuning: Axis::new(-5.0 * gamma, 5.0 * gamma, 101),
            tied: false,
            eval_frequency: None,
        },
        spectrum: SpectrumSection {
            omega: Axis::new(0.75e9, 1.25e9, 300),
            detuning: Axis::new(-3e7, 3e7, 200),
            swept: Swept::Te,
            unit_psd: 1.0,
            channels: Channels::All,
        },
        plane: PlaneSection {
            p_in: Axis::new(0.1e12, 2.0e12, 191),
            delta: Axis::new(-6e7, 6e7, 241),
            tie_detunings: false,
            gap_tolerance: 4e6,
            re_offset: 1e9,
            seeds_per_axis: 24,
        },
        encircle: EncircleSection {
            center_p: 0.87e12,
            center_delta: -5.5e6,
            radius_units: 1.0,
            period: DESK_PERIOD,
            samples: 1001,
            direction: Rotation::Ccw,
            start_phase: 0.0,
            partner_phase_offset: PI,
            initial_mode: InitialMode::A,
            rtol: 1e-8,
            atol: 1e-12,
            slope_threshold: SLOPE_THRESHOLD,
        },
    }
}

// --- dimensionless self-energy maps ---

const DIMENSIONLESS: &[Citation] = &[
    Citation {
        key: "modes.magnon.gamma",
        value: 1.0,
        quote: "we have the relation $\\gamma_{m}=\\gamma_{r}=\\kappa_{a}=\\kappa_{b}=\\gamma$",
    },
    Citation {
        key: "modes.te_photon.gamma_ext",
        value: 0.5,
        quote: "under the critical coupling condition as $\\kappa_{i,1}=\\kappa_{i}/2 (i=a,b)$",
    },
    Citation {
        key: "modes.phonon.omega",
        value: 0.4,
        quote: "Here we set $\\omega_{r}=0.4\\gamma$",
    },
    Citation {
        key: "modes.magnon.omega",
        value: 0.4,
        quote: "the magnon  resonant with the phonon ($\\omega_{r}=\\omega_{m}$)",
    },
    Citation {
        key: "drives.te.strength",
        value: 1.0,
        quote: "we take $a_{in}g_{m}=b_{in}g_{b}$ to ensure $G_a$ is comparable with $ G_b$",
    },
];

fn dimensionless(kinds: Vec<Kind>, tied: bool) -> RunConfig {
    let mut c = base(DIMENSIONLESS_UNITS, 1.0, 0.4, 0.4, 1.0);
    c.self_energy.kinds = kinds;
    c.self_energy.tied = tied;
    if tied {
        c.self_energy.tm_detuning = Axis::new(-5.0, 5.0, 201);
    }
    c
}

fn fig2a() -> RunConfig {
    dimensionless(vec![Kind::Rr], true)
}

fn fig2b() -> RunConfig {
    dimensionless(vec![Kind::Mm], true)
}

fn fig2cd() -> RunConfig {
    dimensionless(vec![Kind::Mm], false)
}

fn fig3() -> RunConfig {
    dimensionless(vec![Kind::Mr, Kind::Rm], false)
}

// --- heterodyne spectra ---

const KAPPA_QUOTE: &str =
    "the damping rate of this system are set as $\\kappa_{a}=\\kappa_{b}=\\kappa_{m}=\\kappa_{r}=20$MHz";
const SPECTRUM_MODES: [Citation; 4] = [
    Citation {
        key: "modes.te_photon.gamma",
        value: 2e7,
        quote: KAPPA_QUOTE,
    },
    Citation {
        key: "modes.phonon.gamma",
        value: 2e7,
        quote: KAPPA_QUOTE,
    },
    Citation {
        key: "modes.magnon.omega",
        value: 0.85e9,
        quote: "$\\omega_{m}=1Gz-150$MHz",
    },
    Citation {
        key: "modes.phonon.omega",
        value: 1.15e9,
        quote: "$\\omega_{r}=1$Gz$+150$MHz",
    },
];
const WEAK: Citation = Citation {
    key: "drives.te.strength",
    value: 0.6e12,
    quote: "the low effective input power $a_{in}g_{m}=b_{in}g_{r}=0.6$ THz",
};
const STRONG: Citation = Citation {
    key: "drives.te.strength",
    value: 3.6e12,
    quote: "this power is $a_{in}g_{m}=b_{in}g_{r}=3.6$ THz",
};

macro_rules! spectrum_citations {
    ($drive:expr, $fixed:expr) => {
        &[
            SPECTRUM_MODES[0],
            SPECTRUM_MODES[1],
            SPECTRUM_MODES[2],
            SPECTRUM_MODES[3],
            $drive,
            $fixed,
        ]
    };
}

const TM_ZERO: Citation = Citation {
    key: "drives.tm.detuning",
    value: 0.0,
    quote: "The TM detune is set as $\\Delta_{m}=0Hz$",
};
const TM_SHIFTED: Citation = Citation {
    key: "drives.tm.detuning",
    value: -3e6,
    quote: "while in (c)$\\Delta_{m}=-3MHz$",
};
const TE_ZERO: Citation = Citation {
    key: "drives.te.detuning",
    value: 0.0,
    quote: "The TE detune is set as $\\Delta_{m}=0Hz$",
};
const TE_SHIFTED: Citation = Citation {
    key: "drives.te.detuning",
    value: -3e6,
    quote: "while in (f)$\\Delta_{m}=-3MHz$",
};

fn spectrum(strength: f64, swept: Swept, fixed_detuning: f64) -> RunConfig {
    let mut c = base(RATE_UNITS, 2e7, 1e9 - 1.5e8, 1e9 + 1.5e8, strength);
    c.spectrum.swept = swept;
    match swept {
        Swept::Te => c.drives.tm.detuning = fixed_detuning,
        Swept::Tm => c.drives.te.detuning = fixed_detuning,
    }
    c
}

fn fig4a() -> RunConfig {
    spectrum(0.6e12, Swept::Te, 0.0)
}
fn fig4b() -> RunConfig {
    spectrum(3.6e12, Swept::Te, 0.0)
}
fn fig4c() -> RunConfig {
    spectrum(3.6e12, Swept::Te, -3e6)
}
fn fig4d() -> RunConfig {
    spectrum(0.6e12, Swept::Tm, 0.0)
}
fn fig4e() -> RunConfig {
    spectrum(3.6e12, Swept::Tm, 0.0)
}
fn fig4f() -> RunConfig {
    spectrum(3.6e12, Swept::Tm, -3e6)
}

// --- eigenvalue surfaces and encircling ---

const DISSIPATION_QUOTE: &str = "Here the cavity, magnon and phonon  dissipation is $20MHz$";
const PLANE_CITATIONS: &[Citation] = &[
    Citation {
        key: "modes.te_photon.gamma",
        value: 2e7,
        quote: DISSIPATION_QUOTE,
    },
    Citation {
        key: "modes.magnon.gamma",
        value: 2e7,
        quote: DISSIPATION_QUOTE,
    },
    Citation {
        key: "modes.phonon.gamma",
        value: 2e7,
        quote: DISSIPATION_QUOTE,
    },
    Citation {
        key: "modes.magnon.omega",
        value: 0.984e9,
        quote: "The magnon has the frequency of $1GHz-16MHz$",
    },
    Citation {
        key: "modes.phonon.omega",
        value: 1.016e9,
        quote: "while it is $1GHz+16MHz$ for the phonon",
    },
    Citation {
        key: "drives.tm.detuning",
        value: -3e6,
        quote: "The TM mode detune is set as $-3MHz$",
    },
];

fn plane_base() -> RunConfig {
    let mut c = base(RATE_UNITS, 2e7, 1e9 - 1.6e7, 1e9 + 1.6e7, 0.87e12);
    c.drives.tm.detuning = -3e6;
    c
}

fn fig5() -> RunConfig {
    plane_base()
}

macro_rules! loop_citations {
    ($delta:expr, $dquote:expr) => {
        &[
            PLANE_CITATIONS[0],
            PLANE_CITATIONS[1],
            PLANE_CITATIONS[2],
            PLANE_CITATIONS[3],
            PLANE_CITATIONS[4],
            PLANE_CITATIONS[5],
            Citation {
                key: "encircle.center_p",
                value: 0.87e12,
                quote: "the effective input power encircling center $P_{in}=a_{in}g_{m}=b_{in}g_{r}=0.87$THz",
            },
            Citation {
                key: "encircle.center_delta",
                value: $delta,
                quote: $dquote,
            },
            Citation {
                key: "encircle.radius_units",
                value: 1.0,
                quote: "The encircling radius is 1 unit",
            },
        ]
    };
}

const OUTSIDE_QUOTE: &str = "the encircling center in $\\Delta$-axes $\\Delta=-5.5$MHz for figure (a) and (b)";
const ENCLOSING_QUOTE: &str = "while it is $-4.5$MHz for (c) and (d)";

fn encircling(center_delta: f64, direction: Rotation) -> RunConfig {
    let mut c = plane_base();
    c.encircle.center_delta = center_delta;
    c.encircle.direction = direction;
    c.encircle.start_phase = match direction {
        Rotation::Ccw => 0.0,
        Rotation::Cw => PI,
    };
    c
}

fn fig6a() -> RunConfig {
    encircling(-5.5e6, Rotation::Ccw)
}
fn fig6b() -> RunConfig {
    encircling(-5.5e6, Rotation::Cw)
}
fn fig6c() -> RunConfig {
    encircling(-4.5e6, Rotation::Ccw)
}
fn fig6d() -> RunConfig {
    encircling(-4.5e6, Rotation::Cw)
}

pub const REGISTRY: &[Preset] = &[
    Preset {
        name: "fig2a",
        command: Command::SelfEnergy,
        summary: "phonon self-energy, both pumps at the same detuning",
        citations: DIMENSIONLESS,
        build: fig2a,
    },
    Preset {
        name: "fig2b",
        command: Command::SelfEnergy,
        summary: "magnon self-energy, both pumps at the same detuning",
        citations: DIMENSIONLESS,
        build: fig2b,
    },
    Preset {
        name: "fig2c",
        command: Command::SelfEnergy,
        summary: "magnon frequency shift over TM x TE detuning (re_sigma column)",
        citations: DIMENSIONLESS,
        build: fig2cd,
    },
    Preset {
        name: "fig2d",
        command: Command::SelfEnergy,
        summary: "magnon damping shift over TM x TE detuning (im_sigma column)",
        citations: DIMENSIONLESS,
        build: fig2cd,
    },
    Preset {
        name: "fig3",
        command: Command::SelfEnergy,
        summary: "mediated magnon-phonon couplings over TM x TE detuning",
        citations: DIMENSIONLESS,
        build: fig3,
    },
    Preset {
        name: "fig4a",
        command: Command::Spectrum,
        summary: "PSD vs TE detuning, weak drive, TM on resonance",
        citations: spectrum_citations!(WEAK, TM_ZERO),
        build: fig4a,
    },
    Preset {
        name: "fig4b",
        command: Command::Spectrum,
        summary: "PSD vs TE detuning, strong drive, TM on resonance",
        citations: spectrum_citations!(STRONG, TM_ZERO),
        build: fig4b,
    },
    Preset {
        name: "fig4c",
        command: Command::Spectrum,
        summary: "PSD vs TE detuning, strong drive, TM at -3 MHz",
        citations: spectrum_citations!(STRONG, TM_SHIFTED),
        build: fig4c,
    },
    Preset {
        name: "fig4d",
        command: Command::Spectrum,
        summary: "PSD vs TM detuning, weak drive, TE on resonance",
        citations: spectrum_citations!(WEAK, TE_ZERO),
        build: fig4d,
    },
    Preset {
        name: "fig4e",
        command: Command::Spectrum,
        summary: "PSD vs TM detuning, strong drive, TE on resonance",
        citations: spectrum_citations!(STRONG, TE_ZERO),
        build: fig4e,
    },
    Preset {
        name: "fig4f",
        command: Command::Spectrum,
        summary: "PSD vs TM detuning, strong drive, TE at -3 MHz",
        citations: spectrum_citations!(STRONG, TE_SHIFTED),
        build: fig4f,
    },
    Preset {
        name: "fig5",
        command: Command::Surface,
        summary: "supermode eigenvalue surfaces over drive x TE detuning",
        citations: PLANE_CITATIONS,
        build: fig5,
    },
    Preset {
        name: "fig6a",
        command: Command::Encircle,
        summary: "EP-free loop, counter-clockwise",
        citations: loop_citations!(-5.5e6, OUTSIDE_QUOTE),
        build: fig6a,
    },
    Preset {
        name: "fig6b",
        command: Command::Encircle,
        summary: "EP-free loop, clockwise, half-turn start offset",
        citations: loop_citations!(-5.5e6, OUTSIDE_QUOTE),
        build: fig6b,
    },
    Preset {
        name: "fig6c",
        command: Command::Encircle,
        summary: "loop around the EP, counter-clockwise",
        citations: loop_citations!(-4.5e6, ENCLOSING_QUOTE),
        build: fig6c,
    },
    Preset {
        name: "fig6d",
        command: Command::Encircle,
        summary: "loop around the EP, clockwise, half-turn start offset",
        citations: loop_citations!(-4.5e6, ENCLOSING_QUOTE),
        build: fig6d,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    REGISTRY.iter().find(|p| p.name == name)
}

/// Configuration used when no preset is given.
pub fn default_config() -> RunConfig {
    fig5()
}

/// Looks up a dotted key in the serialized configuration.
pub fn lookup(config: &RunConfig, key: &str) -> Option<f64> {
    let doc = toml::Value::try_from(config).ok()?;
    let mut v = &doc;
    for part in key.split('.') {
        v = v.get(part)?;
    }
    match v {
        toml::Value::Float(f) => Some(*f),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}
