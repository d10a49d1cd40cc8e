use std::fs;
use std::path::Path;
use std::process::{Command as Process, Output};

use gls_core::{GlSpaceF64, PsiSpecF64, SimpleFunctionF64};
use gls_harness::{reevaluate, run_campaign, CampaignConfig, Command};

fn gls(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_gls")).args(args).output().expect("binary runs")
}

fn read_pair(dir: &Path, stem: &str) -> (SimpleFunctionF64, SimpleFunctionF64) {
    let read = |suffix: &str| {
        let text = fs::read_to_string(dir.join(format!("{stem}_{suffix}.txt"))).unwrap();
        SimpleFunctionF64::parse(&text).unwrap()
    };
    (read("x"), read("y"))
}

fn summary_field(dir: &Path, key: &str) -> String {
    let text = fs::read_to_string(dir.join("summary.csv")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")).map(str::to_string))
        .unwrap_or_else(|| panic!("no `{key}` in summary"))
}

#[test]
fn passing_campaign_exits_zero() {
    let out = gls(&["verify-triangle", "--p", "1.5,3", "--trials", "200"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.starts_with("# gls report\n"));
    assert!(body.contains("\np,trial,atoms,norm_x,norm_y,diff_norm,sum_norm,delta,slack,violation\n"));
    assert_eq!(body.lines().filter(|l| !l.starts_with('#')).count(), 401);
}

#[test]
fn degenerate_pair_reduces_to_plain_triangle_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = gls(&["verify-thm21", "--trials", "1", "--degenerate", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let (x, y) = read_pair(dir.path(), "worst");
    assert_eq!(x, y);
    let space = GlSpaceF64::new(PsiSpecF64::constant(1.2, 2.0, 1.0).unwrap());
    let slack: f64 = summary_field(dir.path(), "min_slack").parse().unwrap();
    assert!((slack - (2.0 - space.norm(&x.scale(2.0)).value)).abs() < 1e-12);
    assert!(slack >= 0.0);
}

#[test]
fn errors_exit_two_with_diagnostic() {
    for args in [
        vec!["verify-everything"],
        vec!["norm", "--f", "/nonexistent/function.txt"],
        vec!["verify-thm21", "--a", "2", "--b", "1"],
        vec!["verify-thm21", "--psi", "spline:k=3"],
        vec!["verify-triangle", "--trials", "0"],
    ] {
        let out = gls(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8(out.stderr).unwrap().starts_with("gls: "), "{args:?}");
    }
}

#[test]
fn reporting_mode_never_fails_exit_status() {
    let out = gls(&["verify-examples", "--a", "2.5", "--b", "4", "--trials", "50"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("mode,reporting"));
    let out = gls(&["sweep-moc", "--p", "3", "--eps-grid", "0:2:5", "--trials", "50"]);
    assert!(out.status.success());
}

#[test]
fn norm_command_reads_function_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "# two levels\n0.5 2\n0.5 0\n").unwrap();
    let out = gls(&["norm", "--f", path.to_str().unwrap(), "--a", "1", "--b", "2"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let row = body.lines().find(|l| l.starts_with("gls_norm,")).unwrap();
    let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn report_matches_golden_file() {
    let out = gls(&["verify-triangle", "--p", "2", "--trials", "20", "--seed", "7", "--atoms-max", "6"]);
    assert!(out.status.success());
    let golden = include_str!("golden/verify_triangle_seed7.csv");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn rerun_is_byte_identical() {
    let args = ["verify-thm31", "--psi", "power_root:m=2", "--trials", "100", "--seed", "9"];
    assert_eq!(gls(&args).stdout, gls(&args).stdout);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let mut with_out = args.to_vec();
        with_out.extend(["--out", dir.path().to_str().unwrap()]);
        assert!(gls(&with_out).status.success());
    }
    let read = |d: &tempfile::TempDir, f: &str| fs::read(d.path().join(f)).unwrap();
    assert_eq!(read(&a, "trials.csv"), read(&b, "trials.csv"));
    assert_eq!(read(&a, "worst_x.txt"), read(&b, "worst_x.txt"));
}

#[test]
fn worst_pairs_round_trip() {
    for (command, psi) in [
        (Command::VerifyTriangle, None),
        (Command::VerifyThm21, Some("endpoint:beta1=0.5,beta2=0.5")),
        (Command::VerifyThm31, Some("power_root:m=3")),
        (Command::VerifyExamples, None),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let config = CampaignConfig {
            command,
            trials: 300,
            seed: 17,
            p: vec![1.25],
            psi: psi.map(str::to_string),
            out: Some(dir.path().to_path_buf()),
            ..CampaignConfig::default()
        };
        run_campaign(&config).unwrap().write_to(dir.path()).unwrap();
        let (x, y) = read_pair(dir.path(), "worst");
        let recorded: f64 = summary_field(dir.path(), "min_slack").parse().unwrap();
        let again = reevaluate(&config, None, &x, &y).unwrap();
        assert!((again - recorded).abs() <= 1e-12, "{command}: {again} vs {recorded}");
    }
}

#[test]
fn sweep_minimizers_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = CampaignConfig {
        command: Command::SweepSubgaussian,
        trials: 300,
        seed: 7,
        atoms_max: 8,
        eps: vec![1.0],
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config).unwrap();
    report.write_to(dir.path()).unwrap();
    let space = GlSpaceF64::new(PsiSpecF64::power_root(1.0, f64::INFINITY, 2.0).unwrap());
    for row in &report.rows {
        let k = &row[0];
        let estimate: f64 = row[2].parse().unwrap();
        let (x, y) = read_pair(dir.path(), &format!("min_k{k}_e0"));
        let again = 1.0 - space.norm(&x.add(&y).unwrap()).value / 2.0;
        assert!((again - estimate).abs() <= 1e-12, "k = {k}: {again} vs {estimate}");
        assert!(space.norm(&x.sub(&y).unwrap()).value >= 1.0 - 1e-12);
    }
}

#[test]
fn sweep_endpoints() {
    let config = CampaignConfig {
        command: Command::SweepSubgaussian,
        trials: 100,
        seed: 3,
        atoms_max: 4,
        eps: vec![0.0, 2.0],
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config).unwrap();
    for row in &report.rows {
        let estimate: f64 = row[2].parse().unwrap();
        match row[1].as_str() {
            "0.0000000000000000e0" => assert!(estimate.abs() <= 1e-12),
            _ => assert!(estimate <= 1.0 + 1e-12),
        }
    }
}
