use std::path::{Path, PathBuf};

use assert_cmd::Command;
use drayplan::scenario::read_report;
use drayplan::Instance;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn drayplan(out: &Path) -> Command {
    let mut c = Command::cargo_bin("drayplan").unwrap();
    c.arg("--out").arg(out);
    c
}

fn generated(dir: &Path, seed: u64) -> PathBuf {
    drayplan(dir)
        .args(["generate", "--trucks", "2", "--stations", "2", "--steps", "8", "--seed"])
        .arg(seed.to_string())
        .assert()
        .success();
    dir.join("instance.json")
}

#[test]
fn generate_is_seeded_and_validates() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let pa = generated(a.path(), 4);
    let pb = generated(b.path(), 4);
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    let out = drayplan(a.path()).arg("validate").arg(&pa).assert().success();
    assert!(String::from_utf8_lossy(&out.get_output().stdout).starts_with("ok: 2 trucks"));
}

#[test]
fn validate_lists_issues_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = generated(dir.path(), 1);
    let mut inst = Instance::load(&path).unwrap();
    inst.trucks[0].stop_fraction[3] = 1.2;
    // Write without the loader's validation.
    std::fs::write(&path, inst.to_json()).unwrap();
    let out = drayplan(dir.path()).arg("validate").arg(&path).assert().code(1);
    let text = String::from_utf8_lossy(&out.get_output().stdout).into_owned();
    assert!(text.contains("stop_fraction[3]"), "{text}");
}

#[test]
fn mode2_writes_report_and_report_verb_reads_it() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/depot_heavy.json");
    drayplan(dir.path()).arg("mode2").arg(&inst).args(["--target", "1"]).assert().success();
    for f in ["plan.json", "load_profile.csv", "battery_hist.csv", "utilization.csv", "costs.csv", "summary.txt", "solution.sol"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let report = read_report(&dir.path().join("plan.json")).unwrap();
    assert_eq!(report.mode, 2);
    assert!(!report.electrified.is_empty());
    let out = drayplan(dir.path()).arg("report").arg(dir.path()).assert().success();
    let text = String::from_utf8_lossy(&out.get_output().stdout).into_owned();
    assert_eq!(text, std::fs::read_to_string(dir.path().join("summary.txt")).unwrap());
}

#[test]
fn infeasible_target_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/depot_heavy.json");
    drayplan(dir.path()).arg("mode2").arg(&inst).args(["--target", "99"]).assert().code(2);
    let report = read_report(&dir.path().join("plan.json")).unwrap();
    assert_eq!(report.status, "infeasible");
    assert!(report.mode1_max.is_some());
}

#[test]
fn node_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("limits.toml");
    std::fs::write(&cfg, "[solver]\nnode_limit = 1\n").unwrap();
    drayplan(dir.path())
        .arg("--config")
        .arg(&cfg)
        .arg("mode2")
        .arg(fixture("instances/small_port.json"))
        .args(["--target", "4"])
        .assert()
        .code(3);
}

#[test]
fn mode1_sweep_writes_one_directory_per_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let out = drayplan(dir.path())
        .arg("mode1")
        .arg(fixture("instances/depot_heavy.json"))
        .args(["--fraction", "1.0", "0.2", "0.5"])
        .assert()
        .success();
    let text = String::from_utf8_lossy(&out.get_output().stdout).into_owned();
    assert!(text.contains("fraction 0.2: 0 trucks"), "{text}");
    assert!(text.contains("fraction 1: 3 trucks"), "{text}");
    let r = read_report(&dir.path().join("fraction-0.5/plan.json")).unwrap();
    assert_eq!(r.capacity_fraction, Some(0.5));
    assert_eq!(r.electrified.len(), 1);
}

#[test]
fn mode3_budget_zero_keeps_diesel() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("instances/tight_grid.json");
    drayplan(dir.path()).arg("mode3").arg(&path).args(["--budget", "0"]).assert().success();
    let r = read_report(&dir.path().join("plan.json")).unwrap();
    assert!(r.electrified.is_empty());
    let inst = Instance::load(&path).unwrap();
    assert_eq!(r.ghg_kg_per_day, inst.total_diesel_emission());
}

#[test]
fn build_then_check_external_solution() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/tight_grid.json");
    drayplan(dir.path()).arg("build").arg(&inst).args(["--mode", "2", "--target", "2"]).assert().success();
    let mps = std::fs::read_to_string(dir.path().join("model.mps")).unwrap();
    assert!(mps.starts_with("NAME"));
    assert!(dir.path().join("model.names.json").exists());

    // Our own solution, renamed to the exported column names, goes back in.
    let solved = dir.path().join("solved");
    drayplan(&solved).arg("solve").arg(&inst).args(["--mode", "2", "--target", "2"]).assert().success();
    let map = drayplan::milp::names::NameMap::read(&dir.path().join("model.names.json")).unwrap();
    let reverse: std::collections::HashMap<&str, &str> =
        map.columns.iter().map(|(w, o)| (o.as_str(), w.as_str())).collect();
    let sol: String = std::fs::read_to_string(solved.join("solution.sol"))
        .unwrap()
        .lines()
        .map(|l| match l.split_once(' ') {
            Some((name, v)) if !l.starts_with('#') => format!("{} {v}\n", reverse[name]),
            _ => format!("{l}\n"),
        })
        .collect();
    let sol_path = dir.path().join("external.sol");
    std::fs::write(&sol_path, sol).unwrap();
    let checked = dir.path().join("checked");
    drayplan(&checked)
        .arg("solve")
        .arg(&inst)
        .args(["--mode", "2", "--target", "2", "--solution"])
        .arg(&sol_path)
        .assert()
        .success();
    let a = read_report(&solved.join("plan.json")).unwrap();
    let b = read_report(&checked.join("plan.json")).unwrap();
    assert_eq!(a.electrified, b.electrified);
    assert!((a.costs.total - b.costs.total).abs() < 1e-6 * a.costs.total);
}

#[test]
fn frozen_highs_solution_is_accepted_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    // The instance the frozen solution was computed for.
    let inst = fixture("highs_plan.instance.json");
    let sol = std::fs::read_to_string(fixture("highs_plan.sol")).unwrap();
    let good = dir.path().join("highs.sol");
    std::fs::write(&good, &sol).unwrap();
    drayplan(&dir.path().join("ok"))
        .arg("solve")
        .arg(&inst)
        .args(["--mode", "2", "--target", "1", "--solution"])
        .arg(&good)
        .assert()
        .success();
    let bad = dir.path().join("bad.sol");
    std::fs::write(&bad, sol.replace("C0000000 1.0", "C0000000 0.5")).unwrap();
    let out = drayplan(&dir.path().join("bad"))
        .arg("solve")
        .arg(&inst)
        .args(["--mode", "2", "--target", "1", "--solution"])
        .arg(&bad)
        .assert()
        .code(1);
    assert!(String::from_utf8_lossy(&out.get_output().stderr).contains("violated"));
}

#[test]
fn config_overrides_costs_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/depot_heavy.json");
    let base = dir.path().join("base");
    drayplan(&base).arg("mode2").arg(&inst).args(["--target", "1"]).assert().success();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[costs]\nformula_cap = true\n[costs.annual]\nveh = 50000\n[grid]\ncarbon_intensity = 0.0\n").unwrap();
    let over = dir.path().join("over");
    drayplan(&over).arg("--config").arg(&cfg).arg("mode2").arg(&inst).args(["--target", "1"]).assert().success();
    let (a, b) = (read_report(&base.join("plan.json")).unwrap(), read_report(&over.join("plan.json")).unwrap());
    assert!(b.costs.truck > a.costs.truck);
    assert!(b.costs.charging > a.costs.charging);

    std::fs::write(&cfg, "[grid]\nwrong = 1\n").unwrap();
    drayplan(&over).arg("--config").arg(&cfg).arg("mode2").arg(&inst).args(["--target", "1"]).assert().code(1);
}

#[test]
fn yearly_targets_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let years = dir.path().join("years.csv");
    std::fs::write(&years, "year,target\n2026,1\n2028,2\n2030,3\n").unwrap();
    drayplan(dir.path())
        .arg("mode2")
        .arg(fixture("instances/depot_heavy.json"))
        .arg("--years")
        .arg(&years)
        .assert()
        .success();
    let mut prev = 0;
    for y in ["2026", "2028", "2030"] {
        let r = read_report(&dir.path().join(y).join("plan.json")).unwrap();
        assert!(r.electrified.len() >= prev);
        prev = r.electrified.len();
    }
    std::fs::write(&years, "year,target\n2030,1\n2026,2\n").unwrap();
    drayplan(dir.path())
        .arg("mode2")
        .arg(fixture("instances/depot_heavy.json"))
        .arg("--years")
        .arg(&years)
        .assert()
        .code(1);
}

#[test]
fn tiers_and_paper_literal_flags_change_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/tight_grid.json");
    let tiers = dir.path().join("tiers.json");
    std::fs::write(&tiers, r#"{"tiers":[{"kw":150,"cost":3000},{"kw":1000,"cost":9000}]}"#).unwrap();
    let plain = dir.path().join("plain");
    let tiered = dir.path().join("tiered");
    drayplan(&plain).arg("build").arg(&inst).args(["--mode", "1"]).assert().success();
    drayplan(&tiered).arg("--tiers").arg(&tiers).arg("build").arg(&inst).args(["--mode", "1"]).assert().success();
    let (a, b) = (
        std::fs::read_to_string(plain.join("model.mps")).unwrap(),
        std::fs::read_to_string(tiered.join("model.mps")).unwrap(),
    );
    assert!(b.lines().count() > a.lines().count());

    let literal = dir.path().join("literal");
    drayplan(&literal).arg("--paper-literal").arg("build").arg(&inst).args(["--mode", "1"]).assert().success();
    assert_ne!(a, std::fs::read_to_string(literal.join("model.mps")).unwrap());
}

#[test]
fn bad_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/tight_grid.json");
    drayplan(dir.path()).arg("mode2").arg(&inst).assert().failure();
    drayplan(dir.path()).arg("build").arg(&inst).args(["--mode", "2"]).assert().code(1);
    drayplan(dir.path()).arg("build").arg(&inst).args(["--mode", "2", "--target", "1", "--fraction", "0.5"]).assert().code(1);
    drayplan(dir.path()).arg("mode1").arg(&inst).args(["--fraction", "1.5"]).assert().code(1);
    drayplan(dir.path()).arg("validate").arg(dir.path().join("missing.json")).assert().code(1);
}

#[test]
fn ingest_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.csv");
    let mut rows = String::from("truck_id,timestamp,lon,lat\n");
    // Parked at the port until 06:00, drive out, parked at a truck stop 09:00-12:00, drive home.
    let stop = (-118.20, 33.80);
    let port = (-118.25, 33.75);
    for (h, (lon, lat)) in [(0, port), (3, port), (6, port), (7, (-118.22, 33.78)), (9, stop), (10, stop), (12, stop), (14, port), (24, port)] {
        let ts = if h == 24 { "2024-03-06T00:00:00-08:00".to_string() } else { format!("2024-03-05T{h:02}:00:00-08:00") };
        rows.push_str(&format!("T1,{ts},{lon},{lat}\n"));
    }
    std::fs::write(&traces, rows).unwrap();
    let sites = dir.path().join("sites.csv");
    std::fs::write(&sites, format!("id,kind,lon,lat\nts-1,truck-stop,{},{}\n", stop.0, stop.1)).unwrap();
    let subs = dir.path().join("subs.csv");
    std::fs::write(&subs, "id,lon,lat,capacity_kw\nsub-a,-118.21,33.80,5000\n").unwrap();
    let out = drayplan(dir.path())
        .arg("ingest")
        .arg("--traces")
        .arg(&traces)
        .arg("--sites")
        .arg(&sites)
        .arg("--substations")
        .arg(&subs)
        .args(["--steps", "24"])
        .assert()
        .success();
    let text = String::from_utf8_lossy(&out.get_output().stdout).into_owned();
    assert!(text.contains("1 trucks"), "{text}");
    let inst = Instance::load(&dir.path().join("instance.json")).unwrap();
    assert_eq!(inst.grid.step_count, 24);
    assert!(inst.stations.iter().any(|s| s.id == "ts-1"));
    drayplan(dir.path()).arg("validate").arg(dir.path().join("instance.json")).assert().success();
}
