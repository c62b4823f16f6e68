mod common;

use std::process::Command;

use common::*;
use h2export_cli::cluster::cmd_cluster;
use h2export_cli::config::LoadedConfig;
use h2export_cli::manifest::{RunManifest, ScenarioStatus};
use h2export_cli::report::cmd_report;
use h2export_cli::run::cmd_run;
use h2export_cli::CliError;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_h2export"));
    c.env_remove("H2EXPORT_WORKSPACE").env_remove("H2EXPORT_JOBS");
    c
}

#[test]
fn cluster_cache_is_reproducible() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), |_| {});
    let cfg = LoadedConfig::load(&path).unwrap();
    let groups = cmd_cluster(&cfg).unwrap();
    assert_eq!(groups.len(), 3);
    let first = std::fs::read(cfg.cache_path("DESK")).unwrap();
    cmd_cluster(&cfg).unwrap();
    assert_eq!(first, std::fs::read(cfg.cache_path("DESK")).unwrap());
}

#[test]
fn capacity_factor_above_one_is_a_config_error() {
    let ws = desk_workspace();
    let cf = ws.path().join("capacity_factors.csv");
    let text = std::fs::read_to_string(&cf).unwrap().replacen("\n0,0.0000,", "\n0,1.2000,", 1);
    std::fs::write(&cf, text).unwrap();
    let path = write_config(ws.path(), |_| {});
    let err = cmd_cluster(&LoadedConfig::load(&path).unwrap()).unwrap_err();
    assert!(matches!(err, CliError::Config(_)), "{err}");

    let out = bin().args(["cluster", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_fraction_above_cap_is_rejected() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), |c| c["export_fractions"] = serde_json::json!([0.5, 0.96]));
    let err = LoadedConfig::load(&path).unwrap_err();
    assert!(matches!(err, CliError::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), |c| c["horizon"] = 48.into());
    assert!(matches!(LoadedConfig::load(&path), Err(CliError::Config(_))));
}

#[test]
fn run_without_cache_asks_for_clustering() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), small);
    let err = cmd_run(&LoadedConfig::load(&path).unwrap(), 1).unwrap_err();
    match err {
        CliError::Config(m) => assert!(m.contains("h2export cluster"), "{m}"),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn restart_skips_unchanged_scenarios() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), small);
    let cfg = LoadedConfig::load(&path).unwrap();
    cmd_cluster(&cfg).unwrap();

    let first = cmd_run(&cfg, 1).unwrap();
    assert_eq!((first.solved, first.skipped), (1, 0));
    let summary = ws.path().join("out/results/scenarios/DESK_2050_f01/summary.json");
    let stamp = std::fs::metadata(&summary).unwrap().modified().unwrap();

    let again = cmd_run(&cfg, 1).unwrap();
    assert_eq!((again.solved, again.skipped), (0, 1));
    assert_eq!(std::fs::metadata(&summary).unwrap().modified().unwrap(), stamp);
    assert_eq!(first.manifest.scenarios, again.manifest.scenarios);

    // a changed parameter invalidates the cached result
    let path = write_config(ws.path(), |c| {
        small(c);
        c["overrides"] = serde_json::json!({ "capex_pv": 1.1 });
    });
    let changed = cmd_run(&LoadedConfig::load(&path).unwrap(), 1).unwrap();
    assert_eq!((changed.solved, changed.skipped), (1, 0));

    // a scenario whose artifacts vanished is recomputed
    std::fs::remove_file(&summary).unwrap();
    let repaired = cmd_run(&LoadedConfig::load(&path).unwrap(), 1).unwrap();
    assert_eq!(repaired.solved, 1);
    let manifest = RunManifest::read(&ws.path().join("out/results")).unwrap().unwrap();
    assert_eq!(manifest.scenarios.len(), 1);
    assert_eq!(manifest.scenarios[0].status, ScenarioStatus::Optimal);
}

#[test]
fn report_on_empty_directory_lists_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let err = cmd_report(dir.path(), &dir.path().join("report")).unwrap_err();
    match &err {
        CliError::Config(m) => assert!(m.contains("manifest.json") && m.contains("summary.json"), "{m}"),
        e => panic!("unexpected {e}"),
    }
    let out = bin().args(["report", "--results"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest.json"));
}

#[test]
fn all_infeasible_exits_with_three() {
    let ws = desk_workspace();
    // without wires the liquefier at the harbor has no power supply
    let path = write_config(ws.path(), |c| {
        small(c);
        c["options"] = serde_json::json!({ "electric_grid": false });
    });
    let st = bin().args(["cluster", "--config"]).arg(&path).output().unwrap();
    assert!(st.status.success());
    let out = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = RunManifest::read(&ws.path().join("out/results")).unwrap().unwrap();
    assert_eq!(manifest.scenarios[0].status, ScenarioStatus::Infeasible);
    assert!(manifest.scenarios[0].message.as_deref().unwrap().contains("max export"));
}

#[test]
fn cli_end_to_end_with_decomposition_sums() {
    let ws = desk_workspace();
    let path = write_config(ws.path(), small);
    for args in [&["cluster"][..], &["run", "--jobs", "2"], &["sensitivity", "--jobs", "2"]] {
        let out = bin().args(args).arg("--config").arg(&path).output().unwrap();
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let results = ws.path().join("out/results");
    let out = bin().args(["report", "--results"]).arg(&results).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report = results.join("report");
    let (header, rows) = read_csv(&report.join("decomposition.csv"));
    let sum_col = header.iter().position(|h| h == "component_sum").unwrap();
    let cost_col = header.iter().position(|h| h == "cost_eur_per_kg").unwrap();
    assert_eq!(rows.len(), 1);
    for r in &rows {
        let s: f64 = r[sum_col].parse().unwrap();
        let c: f64 = r[cost_col].parse().unwrap();
        assert!(((s - c) / c).abs() < 1e-9, "{s} vs {c}");
    }
    for f in ["curves.csv", "groups.csv", "water.csv", "sensitivity.csv", "sensitivity_impact.csv", "plot.json"] {
        assert!(report.join(f).exists(), "{f}");
    }
    let (_, sens) = read_csv(&report.join("sensitivity.csv"));
    assert_eq!(sens.len(), 9);
    assert!(report.join("geometry/DESK_2050_f01_parks.csv").exists());
    let ops = results.join("scenarios/DESK_2050_f01/operations.csv.gz");
    assert!(std::fs::metadata(ops).unwrap().len() > 0);
}
