use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn magphon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magphon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not json: {text}"))
}

#[test]
fn surface_preset_writes_surface_and_ep_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = magphon(&["surface", "--preset", "fig5", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = data_lines(&dir.path().join("surface.csv"));
    assert_eq!(
        rows[0],
        "p_in,delta,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,near_ep_flag"
    );
    assert_eq!(rows.len(), 1 + 191 * 241);
    assert!(rows[1..].iter().all(|r| r.ends_with(",0") || r.ends_with(",1")));

    let eps: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ep_list.json")).unwrap()).unwrap();
    assert_eq!(eps["metadata"]["preset"], "fig5");
    let points = eps["data"]["points"].as_array().unwrap();
    assert!(!points.is_empty());
    for p in points {
        assert!(p["residual"].is_number() && p["relative_gap"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn every_file_carries_the_provenance_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = magphon(&["self-energy", "--preset", "fig3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let listed: Vec<&str> = std::str::from_utf8(&out.stdout).unwrap().lines().collect();
    assert_eq!(listed.len(), 3);
    for name in ["self_energy_mr.csv", "self_energy_rm.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("# tool: magphon "));
        assert!(text.contains("# preset: fig3\n"));
        assert!(text.contains("# config_hash: sha256:"));
        assert!(text.contains("# units: rates in units of gamma\n"));
        assert_eq!(
            data_lines(&dir.path().join(name))[0],
            "delta_tm,delta_te,re_sigma,im_sigma"
        );
    }
}

#[test]
fn encircle_presets_write_trajectories_and_report() {
    for preset in ["fig6c", "fig6d"] {
        let dir = tempfile::tempdir().unwrap();
        let out = magphon(&["encircle", "--preset", preset, "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        for dir_label in ["cw", "ccw"] {
            let rows = data_lines(&dir.path().join(format!("trajectory_{dir_label}.csv")));
            assert_eq!(rows[0], "t,theta,p_in,delta,f_a,f_b,log_norm");
            assert_eq!(rows.len(), 1 + 1001);
        }
        let report: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("chirality.json")).unwrap()).unwrap();
        let data = &report["data"];
        for key in ["final_fa_difference", "max_aligned_difference"] {
            assert!(data[key].is_number(), "{key}");
        }
        assert!(data["cw"]["oscillation_duration"].is_number());
    }
}

#[test]
fn negative_gamma_is_a_config_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = magphon(&[
        "surface",
        "--preset",
        "fig5",
        "--set",
        "modes.magnon.gamma=-1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rec = error_record(&out);
    assert_eq!(rec["error"]["kind"], "config");
    assert_eq!(rec["error"]["exit_code"], 2);
    assert_eq!(rec["error"]["field"], "OscillatorMode.gamma");
    assert!(rec["error"]["message"]
        .as_str()
        .unwrap()
        .contains("OscillatorMode.gamma"));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn unknown_keys_and_presets_are_rejected() {
    let out = magphon(&["coupling", "--set", "modes.magnon.q_factor=3", "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("q_factor"));

    let out = magphon(&["coupling", "--preset", "fig9", "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("fig9"));
}

#[test]
fn config_file_parse_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[modes.magnon]\ngamma = 1e7\nomega = = 3\n").unwrap();
    let out = magphon(&["coupling", "--config", path.to_str().unwrap(), "--dry-run"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = error_record(&out)["error"]["message"].as_str().unwrap().to_string();
    assert!(msg.contains("line 3"), "{msg}");
}

#[test]
fn config_file_layers_over_the_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "[drives.te]\ndetuning = -2e6\n").unwrap();
    let out = magphon(&[
        "coupling",
        "--preset",
        "fig5",
        "--config",
        path.to_str().unwrap(),
        "--dry-run",
    ]);
    assert!(out.status.success());
    let resolved: toml::Table = std::str::from_utf8(&out.stdout).unwrap().parse().unwrap();
    assert_eq!(resolved["drives"]["te"]["detuning"].as_float(), Some(-2e6));
    assert_eq!(resolved["drives"]["tm"]["detuning"].as_float(), Some(-3e6));
}

#[test]
fn numeric_failure_exits_with_three() {
    // a loop centred on an EP starts on a degenerate eigenbasis
    let dir = tempfile::tempdir().unwrap();
    let out = magphon(&[
        "find-ep",
        "--preset",
        "fig5",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let eps: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ep_list.json")).unwrap()).unwrap();
    let ep = &eps["data"]["points"][0];
    let (p, d) = (ep["p_in"].as_f64().unwrap(), ep["delta"].as_f64().unwrap());
    let out = magphon(&[
        "encircle",
        "--preset",
        "fig6a",
        "--set",
        &format!("encircle.center_p={:e}", p - 1e11),
        "--set",
        &format!("encircle.center_delta={d:e}"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(error_record(&out)["error"]["kind"], "numeric");
    assert!(!dir.path().join("trajectory_ccw.csv").exists());
}

#[test]
fn presets_subcommand_lists_the_registry() {
    let out = magphon(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f", "fig5",
        "fig6a", "fig6b", "fig6c", "fig6d",
    ] {
        assert!(
            text.lines().any(|l| l.split_whitespace().next() == Some(name)),
            "{name}"
        );
    }
}
