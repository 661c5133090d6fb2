//! Command execution. Grid cells are evaluated on a rayon pool and gathered
//! in grid order, so the worker count never changes the output bytes.

use std::path::PathBuf;

use magphon_core::encircle::{chirality_report, evolve, initial_basis, Direction, Trajectory};
use magphon_core::noise::psd_at;
use magphon_core::self_energy::{self_energy_at, SelfEnergyPoint};
use magphon_core::spectral::{
    circle_path, eigenvalues_at, find_exceptional_points, monodromy_swaps, track_surface, EpSearch, ParameterPlane,
    Region,
};
use magphon_core::{effective_couplings, C64, DETUNING_UNIT, DRIVE_UNIT};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{InitialMode, RunConfig};
use crate::error::CliError;
use crate::output::{json_document, Metadata, Table, Writer};
use crate::{Command, Formats};

/// A fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: Command,
    pub preset: Option<String>,
    pub config: RunConfig,
    pub out: PathBuf,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub formats: Formats,
}

/// Runs `spec` and returns the files written, in write order.
pub fn run(spec: &RunSpec) -> Result<Vec<PathBuf>, CliError> {
    spec.config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| CliError::Invalid(format!("jobs: {e}")))?;
    let meta = Metadata {
        command: spec.command.name(),
        preset: spec.preset.clone(),
        config_hash: spec.config.hash(),
        units: spec.config.units.clone(),
    };
    let mut w = Writer::new(&spec.out);
    let ctx = Ctx {
        cfg: &spec.config,
        meta: &meta,
        formats: spec.formats,
    };
    pool.install(|| match spec.command {
        Command::SelfEnergy => ctx.self_energy(&mut w),
        Command::Coupling => ctx.coupling(&mut w),
        Command::Spectrum => ctx.spectrum(&mut w),
        Command::Surface => ctx.surface(&mut w),
        Command::FindEp => ctx.find_ep(&mut w),
        Command::Encircle => ctx.encircle(&mut w),
    })?;
    w.finish()
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    meta: &'a Metadata,
    formats: Formats,
}

fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn first_error<T>(cells: Vec<Result<T, magphon_core::Error>>) -> Result<Vec<T>, CliError> {
    cells.into_iter().map(|c| c.map_err(CliError::from)).collect()
}

impl Ctx<'_> {
    fn self_energy(&self, w: &mut Writer) -> Result<(), CliError> {
        let system = self.cfg.system()?;
        let s = &self.cfg.self_energy;
        let cells: Vec<(f64, f64)> = if s.tied {
            s.tm_detuning.values().into_iter().map(|d| (d, d)).collect()
        } else {
            let te = s.te_detuning.values();
            s.tm_detuning
                .values()
                .into_iter()
                .flat_map(|dm| te.iter().map(move |&de| (dm, de)))
                .collect()
        };
        let mut report = serde_json::Map::new();
        for &kind in &s.kinds {
            let points: Vec<SelfEnergyPoint> = cells
                .par_iter()
                .map(|&(dm, de)| self_energy_at(&system, kind.core(), dm, de, s.eval_frequency))
                .collect();
            let label = kind.core().label();
            if self.formats.csv {
                let mut t = Table::new(&["delta_tm", "delta_te", "re_sigma", "im_sigma"]);
                for p in &points {
                    t.row(&[p.delta_tm, p.delta_te, p.sigma.re, p.sigma.im]);
                }
                w.put(&format!("self_energy_{label}.csv"), &t.render(self.meta));
            }
            report.insert(
                label.into(),
                json!({
                    "delta_tm": points.iter().map(|p| p.delta_tm).collect::<Vec<_>>(),
                    "delta_te": points.iter().map(|p| p.delta_te).collect::<Vec<_>>(),
                    "re_sigma": points.iter().map(|p| p.sigma.re).collect::<Vec<_>>(),
                    "im_sigma": points.iter().map(|p| p.sigma.im).collect::<Vec<_>>(),
                }),
            );
        }
        if self.formats.json {
            w.put("self_energy.json", &json_document(self.meta, Value::Object(report)));
        }
        Ok(())
    }

    fn coupling(&self, w: &mut Writer) -> Result<(), CliError> {
        let system = self.cfg.system()?;
        let here = effective_couplings(&system)?;
        let detunings = self.cfg.self_energy.tm_detuning.values();
        let sweep: Vec<_> = detunings
            .par_iter()
            .map(|&d| effective_couplings(&system.with_tm_detuning(d).with_te_detuning(d)))
            .collect();
        let sweep = first_error(sweep)?;
        if self.formats.csv {
            let mut t = Table::new(&["detuning", "re_g_a", "im_g_a", "re_g_b", "im_g_b"]);
            for (d, g) in detunings.iter().zip(&sweep) {
                t.row(&[*d, g.g_a.re, g.g_a.im, g.g_b.re, g.g_b.im]);
            }
            w.put("coupling.csv", &t.render(self.meta));
        }
        if self.formats.json {
            let data = json!({
                "tm_detuning": system.tm_drive.detuning,
                "te_detuning": system.te_drive.detuning,
                "g_a": complex(here.g_a),
                "g_b": complex(here.g_b),
                "abs_g_a": here.g_a.norm(),
                "abs_g_b": here.g_b.norm(),
                "arg_g_a": here.g_a.arg(),
                "arg_g_b": here.g_b.arg(),
            });
            w.put("coupling.json", &json_document(self.meta, data));
        }
        Ok(())
    }

    fn spectrum(&self, w: &mut Writer) -> Result<(), CliError> {
        let system = self.cfg.system()?;
        let noise = self.cfg.noise()?;
        let swept = self.cfg.swept();
        let omegas = self.cfg.spectrum.omega.values();
        let detunings = self.cfg.spectrum.detuning.values();
        let rows: Vec<Result<Vec<f64>, magphon_core::Error>> = detunings
            .par_iter()
            .map(|&d| {
                omegas
                    .iter()
                    .map(|&om| psd_at(&system, om, d, swept, &noise).map(|p| p.psd))
                    .collect()
            })
            .collect();
        let rows = first_error(rows)?;
        if self.formats.csv {
            let mut t = Table::new(&["omega", "detuning", "psd"]);
            for (d, row) in detunings.iter().zip(&rows) {
                for (om, v) in omegas.iter().zip(row) {
                    t.row(&[*om, *d, *v]);
                }
            }
            w.put("spectrum.csv", &t.render(self.meta));
        }
        if self.formats.json {
            let data = json!({
                "swept": self.cfg.spectrum.swept,
                "omega": omegas,
                "detuning": detunings,
                "psd": rows,
            });
            w.put("spectrum.json", &json_document(self.meta, data));
        }
        Ok(())
    }

    fn search(&self, plane: &ParameterPlane) -> Result<EpSearch, CliError> {
        Ok(find_exceptional_points(
            plane,
            &self.cfg.region(),
            self.cfg.plane.seeds_per_axis,
        )?)
    }

    fn ep_json(&self, plane: &ParameterPlane, search: &EpSearch) -> Value {
        let points: Vec<Value> = search
            .points
            .iter()
            .map(|ep| {
                // half-unit loop around the point
                let swaps = monodromy_swaps(plane, &circle_path((ep.p_in, ep.delta), 0.5, 400));
                json!({
                    "p_in": ep.p_in,
                    "delta": ep.delta,
                    "lambda": complex(ep.lambda),
                    "residual": ep.residual,
                    "gap": ep.gap,
                    "relative_gap": ep.gap / ep.lambda.norm(),
                    "monodromy_swaps": swaps,
                })
            })
            .collect();
        let stalls: Vec<Value> = search
            .stalls
            .iter()
            .map(|s| json!({ "p_in": s.p_in, "delta": s.delta, "reason": format!("{:?}", s.reason) }))
            .collect();
        let r = self.cfg.region();
        json!({
            "region": {
                "p_min": r.p_min, "p_max": r.p_max,
                "delta_min": r.delta_min, "delta_max": r.delta_max,
            },
            "tie_detunings": self.cfg.plane.tie_detunings,
            "points": points,
            "stalls": stalls,
        })
    }

    fn surface(&self, w: &mut Writer) -> Result<(), CliError> {
        let plane = self.cfg.parameter_plane()?;
        let p_grid = self.cfg.plane.p_in.values();
        let d_grid = self.cfg.plane.delta.values();
        let raw: Vec<[C64; 2]> = p_grid
            .par_iter()
            .flat_map_iter(|&p| d_grid.iter().map(move |&d| (p, d)))
            .map(|(p, d)| eigenvalues_at(&plane, p, d))
            .collect();
        let surface = track_surface(&p_grid, &d_grid, &raw, self.cfg.plane.gap_tolerance)?;
        let offset = self.cfg.plane.re_offset;
        if self.formats.csv {
            let mut t = Table::new(&[
                "p_in",
                "delta",
                "re_lambda_1",
                "im_lambda_1",
                "re_lambda_2",
                "im_lambda_2",
                "near_ep_flag",
            ]);
            for c in &surface.cells {
                t.row_flagged(
                    &[
                        c.p_in,
                        c.delta,
                        c.lambda[0].re - offset,
                        c.lambda[0].im,
                        c.lambda[1].re - offset,
                        c.lambda[1].im,
                    ],
                    c.near_ep,
                );
            }
            w.put("surface.csv", &t.render(self.meta));
        }
        let search = self.search(&plane)?;
        w.put("ep_list.json", &json_document(self.meta, self.ep_json(&plane, &search)));
        Ok(())
    }

    fn find_ep(&self, w: &mut Writer) -> Result<(), CliError> {
        let plane = self.cfg.parameter_plane()?;
        let search = self.search(&plane)?;
        if self.formats.csv {
            let mut t = Table::new(&["p_in", "delta", "re_lambda", "im_lambda", "residual", "gap"]);
            for ep in &search.points {
                t.row(&[ep.p_in, ep.delta, ep.lambda.re, ep.lambda.im, ep.residual, ep.gap]);
            }
            w.put("ep_list.csv", &t.render(self.meta));
        }
        w.put("ep_list.json", &json_document(self.meta, self.ep_json(&plane, &search)));
        Ok(())
    }

    fn encircle(&self, w: &mut Writer) -> Result<(), CliError> {
        let plane = self.cfg.parameter_plane()?;
        let primary = self.cfg.loop_spec();
        let partner = self.cfg.partner_loop_spec();
        let options = self.cfg.evolve_options();
        let initial = self.cfg.encircle.initial_mode;
        let trace = |spec| -> Result<Trajectory, CliError> {
            let basis = initial_basis(spec, &plane)?;
            let s0 = match initial {
                InitialMode::A => basis.v_a,
                InitialMode::B => basis.v_b,
            };
            Ok(evolve(spec, &plane, s0, &options)?)
        };
        let (a, b) = rayon::join(|| trace(&primary), || trace(&partner));
        let (a, b) = (a?, b?);
        let (cw, ccw, cw_spec, ccw_spec) = match primary.direction {
            Direction::Clockwise => (a, b, primary, partner),
            Direction::CounterClockwise => (b, a, partner, primary),
        };
        if self.formats.csv {
            for (tr, dir) in [(&ccw, Direction::CounterClockwise), (&cw, Direction::Clockwise)] {
                let mut t = Table::new(&["t", "theta", "p_in", "delta", "f_a", "f_b", "log_norm"]);
                for k in 0..tr.len() {
                    t.row(&[
                        tr.times[k],
                        tr.theta[k],
                        tr.p_in[k],
                        tr.delta[k],
                        tr.fractions[k].0,
                        tr.fractions[k].1,
                        tr.log_norm[k],
                    ]);
                }
                w.put(&format!("trajectory_{}.csv", dir.label()), &t.render(self.meta));
            }
        }
        let threshold = self.cfg.encircle.slope_threshold;
        let report = chirality_report(&cw, &ccw, threshold)?;
        let enclosed = self.enclosed_eps(&plane)?;
        let center = (self.cfg.encircle.center_p, self.cfg.encircle.center_delta);
        let radius = self.cfg.encircle.radius_units;
        let swaps = monodromy_swaps(&plane, &circle_path(center, radius, 720));
        let side = |tr: &Trajectory,
                    spec: &magphon_core::encircle::LoopSpec,
                    m: &magphon_core::encircle::OscillationMetrics| {
            let (fa, fb) = tr.final_fractions();
            json!({
                "start_phase": spec.start_phase,
                "final_f_a": fa,
                "final_f_b": fb,
                "final_log_norm": tr.log_norm[tr.len() - 1],
                "lambda_a": complex(tr.basis.lambda_a),
                "lambda_b": complex(tr.basis.lambda_b),
                "oscillation_amplitude": m.amplitude,
                "oscillation_duration": m.duration,
                "accepted_steps": tr.accepted_steps,
                "rejected_steps": tr.rejected_steps,
            })
        };
        let data = json!({
            "center_p": center.0,
            "center_delta": center.1,
            "radius_units": radius,
            "period": self.cfg.encircle.period,
            "initial_mode": initial,
            "slope_threshold": threshold,
            "enclosed_eps": enclosed,
            "monodromy_swaps": swaps,
            "final_fa_difference": report.final_fa_difference,
            "max_aligned_difference": report.max_aligned_difference,
            "cw": side(&cw, &cw_spec, &report.cw),
            "ccw": side(&ccw, &ccw_spec, &report.ccw),
        });
        w.put("chirality.json", &json_document(self.meta, data));
        Ok(())
    }

    /// EPs strictly inside the loop, searched in a box around it.
    fn enclosed_eps(&self, plane: &ParameterPlane) -> Result<Vec<Value>, CliError> {
        let e = &self.cfg.encircle;
        let half = 2.0 * e.radius_units;
        let region = Region {
            p_min: (e.center_p - half * DRIVE_UNIT).max(0.0),
            p_max: e.center_p + half * DRIVE_UNIT,
            delta_min: e.center_delta - half * DETUNING_UNIT,
            delta_max: e.center_delta + half * DETUNING_UNIT,
        };
        let search = find_exceptional_points(plane, &region, 16)?;
        Ok(search
            .points
            .iter()
            .filter(|ep| {
                let x = (ep.p_in - e.center_p) / DRIVE_UNIT;
                let y = (ep.delta - e.center_delta) / DETUNING_UNIT;
                x.hypot(y) < e.radius_units
            })
            .map(|ep| json!({ "p_in": ep.p_in, "delta": ep.delta, "lambda": complex(ep.lambda) }))
            .collect())
    }
}
