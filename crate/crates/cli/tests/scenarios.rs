// Copyright 2026 The qdbell Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::process::Command;

use qdbell_cli::{parse_args, run, CliError, Table};

fn table(args: &[&str]) -> Table {
    let cfg = parse_args(std::iter::once("qdbell").chain(args.iter().copied()), None).unwrap();
    run(&cfg).unwrap()
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap()
}

fn qdbell(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qdbell")).args(args).output().unwrap()
}

#[test]
fn dressed_rabi_splitting_at_resonance() {
    let t = table(&["dressed", "--omega", "1", "--a", "1", "--w", "0.1", "--nmax", "4", "--units", "omega"]);
    let omega = col(&t, "Omega");
    assert!((omega[0] - 4.0).abs() < 1e-14);
    for (n, w) in omega.iter().enumerate() {
        assert!((w - 4.0 * ((n + 1) as f64).sqrt()).abs() < 1e-13);
    }
    let n = col(&t, "n");
    assert!(n.windows(2).all(|w| w[1] == w[0] + 1.0));
    assert_eq!(n.len(), 4);
}

#[test]
fn dressed_undriven_has_zero_angle() {
    let t = table(&["dressed", "--a", "0", "--energies", "explicit", "--e0", "1e14", "--e1", "2e14", "--e2", "1e14"]);
    assert!(col(&t, "theta").iter().all(|&x| x == 0.0));
}

#[test]
fn rabi_starts_empty_and_has_steps_plus_one_rows() {
    let t = table(&["rabi", "--steps", "300", "--tmax", "2e-13"]);
    let p1 = col(&t, "P1");
    assert_eq!(p1.len(), 301);
    assert_eq!(p1[0], 0.0);
    assert!(t.warnings.is_empty());
}

#[test]
fn rabi_truncation_warning() {
    let t = table(&["rabi", "--nmax", "20", "--steps", "10"]);
    assert_eq!(t.warnings.len(), 1);
}

#[test]
fn bell_ratio_starts_at_one_and_vanishes_at_half_period() {
    let t = table(&[
        "bell",
        "--omega",
        "1",
        "--a",
        "0.5",
        "--n",
        "0",
        "--units",
        "omega",
        "--tmax",
        "3.141592653589793",
        "--steps",
        "4",
    ]);
    let omega = 4.0 * 0.5;
    let ratio = col(&t, "ratio");
    assert!((ratio[0] - 1.0).abs() < 1e-15);
    // t = π/Ω is the second grid point
    let times = col(&t, "t");
    assert!((times[2] - PI / omega).abs() < 1e-15);
    assert!(ratio[2].abs() < 1e-15);
    assert!(col(&t, "P_minus").iter().all(|p| (p - 0.5).abs() < 1e-12));
}

#[test]
fn pulse_single_record() {
    let t = table(&["pulse", "--n", "3"]);
    assert_eq!(t.rows.len(), 1);
    assert!(col(&t, "residual_P_plus")[0] <= 1e-12);
    assert!(col(&t, "paper_condition_residual")[0].abs() <= 1e-9);
}

#[test]
fn decohere_without_dephasing_keeps_bell_floor() {
    let t = table(&["decohere", "--gamma", "0", "--steps", "40"]);
    assert!(col(&t, "P_minus").iter().all(|p| (p - 0.5).abs() < 1e-9));
    assert!(col(&t, "trace_err").iter().all(|&e| e <= 1e-9));
}

#[test]
fn decohere_first_order_agreement() {
    let t = table(&["decohere"]);
    assert!(col(&t, "trace_err").iter().all(|&e| e <= 1e-9));
    let cfg = &t.settings;
    let g = cfg.gamma.unwrap();
    assert_eq!(g, 1e-3 * cfg.a);
    let x: Vec<f64> = col(&t, "t").iter().map(|s| s * g).collect();
    let gap: Vec<f64> = col(&t, "P_minus").iter().zip(col(&t, "P_minus_perturbative")).map(|(a, b)| (a - b).abs()).collect();
    // Early on the first-order series is accurate to 1e-4.
    for (xi, d) in x.iter().zip(&gap) {
        if *xi <= 0.01 {
            assert!(*d <= 1e-4, "{xi}: {d}");
        }
    }
    // Later the gap follows the second-order remainder of 1/3 + e^{-3Γt}/6.
    let last = *x.last().unwrap();
    let remainder = ((-3.0 * last).exp() - 1.0 + 3.0 * last) / 6.0;
    assert!((gap.last().unwrap() / remainder - 1.0).abs() < 0.1);
}

#[test]
fn units_change_time_axis_only() {
    let abs = table(&["bell", "--steps", "10"]);
    let om = table(&["bell", "--steps", "10", "--units", "omega", "--tmax", &format!("{:e}", abs.settings.tmax.unwrap() * 1e15)]);
    for (a, b) in col(&abs, "t").iter().zip(col(&om, "t")) {
        assert!((a * 1e15 - b).abs() <= 1e-12 * b.abs().max(1.0));
    }
    assert_eq!(col(&abs, "P_plus"), col(&om, "P_plus"));
}

#[test]
fn csv_layout() {
    let csv = table(&["pulse"]).to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "T,residual_P_plus,paper_condition_residual");
    assert!(lines[1].starts_with("# scenario = pulse"));
    let data = lines.last().unwrap();
    for cell in data.split(',') {
        let (mantissa, _) = cell.split_once('e').unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18);
    }
    assert!(!csv.contains('\r'));
}

#[test]
fn resolved_settings_rerun_identically() {
    let first = table(&["rabi", "--steps", "50"]);
    let header = first.to_csv();
    let settings: String = header.lines().filter_map(|l| l.strip_prefix("# ")).map(|l| format!("{l}\n")).collect();
    let cfg = parse_args(["qdbell"], Some(&settings)).unwrap();
    assert_eq!(run(&cfg).unwrap().to_csv(), header);
}

#[test]
fn exit_codes() {
    assert_eq!(qdbell(&["juggle"]).status.code(), Some(2));
    assert_eq!(qdbell(&["bell", "--steps", "many"]).status.code(), Some(2));
    assert_eq!(qdbell(&["bell", "--config", "/nonexistent/qdbell.cfg"]).status.code(), Some(2));
    assert_eq!(qdbell(&["rabi", "--a", "-3"]).status.code(), Some(2));
    assert_eq!(qdbell(&["bell", "--energies", "bandgap", "--e", "1e13"]).status.code(), Some(2));
    assert_eq!(qdbell(&["pulse", "--tmax", "1e-16"]).status.code(), Some(2));
    let ok = qdbell(&["dressed", "--nmax", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 3);
    assert_eq!(CliError::Model(qdbell_core::Error::StepUnderflow { t: 1.0 }).exit_code(), 1);
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("qdbell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("c.cfg");
    let out = dir.join("o.csv");
    std::fs::write(&cfg, "scenario = dressed\nnmax = 2\na = 1e13\n").unwrap();
    let r = qdbell(&["--config", cfg.to_str().unwrap(), "--a", "2e13", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# a = 2e13\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
