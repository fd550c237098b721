use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const PI_4: f64 = std::f64::consts::FRAC_PI_4;

fn qlga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlga"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.display().to_string()
}

fn type1_box(n: usize, rho: f64, theta: f64) -> String {
    format!(
        r#"{{"size": {n}, "boundaries": {{"left": {{"kind": "typeI", "upsilon": 0}}, "right": {{"kind": "typeI", "upsilon": 0}}}},
            "segments": [{{"from": 0, "to": {}, "rho": {rho}, "theta": {theta}}}]}}"#,
        n - 1
    )
}

fn mass_step() -> String {
    format!(
        r#"{{"size": 64, "boundaries": {{"left": {{"kind": "typeI", "upsilon": 0}}, "right": {{"kind": "typeI", "upsilon": 0}}}},
            "segments": [{{"from": 0, "to": 31, "rho": 0, "theta": {t}}}, {{"from": 32, "to": 63, "rho": {t}, "theta": {t}}}],
            "junctions": [{{"kind": "typeI", "site": 31}}]}}"#,
        t = PI_4
    )
}

#[test]
fn validate_accepts_a_mass_step() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "step.json", &mass_step());
    let o = qlga(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("physical residual"));
}

#[test]
fn validate_names_the_offending_site() {
    let d = TempDir::new().unwrap();
    let json = format!(
        r#"{{"size": 64, "boundaries": {{"left": {{"kind": "typeI", "upsilon": 0}}, "right": {{"kind": "typeI", "upsilon": 0}}}},
            "segments": [{{"from": 0, "to": 31, "rho": 0, "theta": {}}}, {{"from": 32, "to": 63, "rho": 0, "theta": {}}}],
            "junctions": [{{"kind": "typeI", "site": 31}}]}}"#,
        PI_4,
        std::f64::consts::FRAC_PI_3
    );
    let cfg = write_config(d.path(), "jump.json", &json);
    let o = qlga(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("31"), "{}", stderr(&o));
}

#[test]
fn validate_reports_corners_for_type2() {
    let d = TempDir::new().unwrap();
    let json = r#"{"size": 8, "boundaries": {"left": {"kind": "typeII", "zeta": 0}, "right": {"kind": "typeII", "zeta": 0}},
        "segments": [{"from": 0, "to": 7, "rho": 0.3, "theta": 0.5}]}"#;
    let cfg = write_config(d.path(), "t2.json", json);
    let o = qlga(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("corner"));
}

#[test]
fn malformed_inputs_exit_with_one() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "bad.json", "{ not json");
    assert_eq!(qlga(&["validate", "--config", &cfg]).status.code(), Some(1));
    let missing = d.path().join("absent.json").display().to_string();
    assert_eq!(
        qlga(&["validate", "--config", &missing]).status.code(),
        Some(1)
    );
    let good = write_config(d.path(), "box.json", &type1_box(16, 0.0, PI_4));
    let out = d.path().join("o").display().to_string();
    let o = qlga(&[
        "evolve", "--config", &good, "--out", &out, "--packet", "1,2", "--steps", "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = qlga(&[
        "sweep", "--config", &good, "--out", &out, "--param", "zeta", "--grid", "0:1:2",
    ]);
    assert_eq!(o.status.code(), Some(1), "zeta is not a Type I parameter");
}

#[test]
fn roots_lists_fifteen_wavenumbers() {
    let o = qlga(&["roots", "--N", "16", "--theta", "0.7853981633974483"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("index,k,omega"));
    assert_eq!(lines.count(), 15);
}

#[test]
fn dispersion_at_zero_is_the_mass_gap() {
    let o = qlga(&[
        "dispersion",
        "--rho",
        "0.3",
        "--theta",
        "1.1",
        "--kmin",
        "0",
        "--kmax",
        "1",
        "--n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let first: Vec<f64> = s
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 0.8).abs() < 1e-12, "{}", first[1]);
}

#[test]
fn reflection_at_the_worked_point() {
    let o = qlga(&[
        "reflection",
        "--type",
        "I",
        "--k",
        "1.5707963267948966",
        "--rho",
        "0",
        "--theta",
        "0.7853981633974483",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let line = s.lines().next().unwrap();
    assert!(line.starts_with("A = 1.7071067811865"), "{line}");
    assert!(line.contains("+1.7071067811865"), "{line}");
}

#[test]
fn zero_step_evolution_records_the_initial_packet() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "box.json", &type1_box(32, 0.0, PI_4));
    let out = d.path().join("run");
    let o = qlga(&[
        "evolve",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--packet",
        "1.0,16,8,1",
        "--steps",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 32);
    let total: f64 = rows
        .iter()
        .map(|r| r.split(',').nth(4).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r.starts_with("0,")));
}

#[test]
fn heatmap_matches_the_csv() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "step.json", &mass_step());
    let out = d.path().join("run");
    let clip = 0.05;
    let o = qlga(&[
        "evolve",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--packet",
        "0.7853981633974483,16,16,1",
        "--steps",
        "40",
        "--stride",
        "4",
        "--heatmap",
        "--clip",
        "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let pgm = fs::read(out.join("heatmap.pgm")).unwrap();
    assert!(fs::read_to_string(out.join("heatmap.txt"))
        .unwrap()
        .contains("clip: 5.0000000000000003e-2"));

    // header: P5\n<cols> <rows>\n255\n
    let mut fields = 0;
    let mut at = 0;
    let mut last_ws = true;
    while fields < 4 {
        let ws = pgm[at].is_ascii_whitespace();
        if !ws && last_ws {
            fields += 1;
        }
        last_ws = ws;
        at += 1;
    }
    while !pgm[at - 1].is_ascii_whitespace() {
        at += 1;
    }
    let header = String::from_utf8_lossy(&pgm[..at]).into_owned();
    let dims: Vec<usize> = header
        .split_whitespace()
        .skip(1)
        .take(2)
        .map(|v| v.parse().unwrap())
        .collect();
    let (cols, rows) = (dims[0], dims[1]);
    assert_eq!(cols, 64);
    assert_eq!(rows, 11);
    let pixels = &pgm[at..];
    assert_eq!(pixels.len(), cols * rows);

    for (i, line) in csv.lines().skip(1).enumerate() {
        let p: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        let expect = (255.0 * p.min(clip) / clip).round() as u8;
        assert_eq!(pixels[i], expect, "row {line}");
    }
}

#[test]
fn single_point_sweep_equals_spectrum() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "box.json", &type1_box(12, 0.2, 0.6));
    let spec = d.path().join("spec");
    let sweep = d.path().join("sweep");
    let o = qlga(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = qlga(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        sweep.to_str().unwrap(),
        "--param",
        "upsilon",
        "--grid",
        "0:1:1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = fs::read_to_string(spec.join("spectrum.csv")).unwrap();
    let b = fs::read_to_string(sweep.join("sweep.csv")).unwrap();
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .skip(1)
            .map(|l| l.split_once(',').unwrap().1.to_string())
            .collect()
    };
    assert_eq!(a.lines().count(), 25);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "step.json", &mass_step());
    let mut seen = Vec::new();
    for run in ["a", "b"] {
        let out = d.path().join(run);
        let o = qlga(&[
            "--seedless",
            "evolve",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--packet",
            "0.7853981633974483,16,16,1",
            "--steps",
            "20",
            "--heatmap",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let files: Vec<Vec<u8>> = [
            "trajectory.csv",
            "heatmap.pgm",
            "heatmap.txt",
            "manifest.json",
        ]
        .iter()
        .map(|f| fs::read(out.join(f)).unwrap())
        .collect();
        seen.push(files);
    }
    assert_eq!(seen[0][..3], seen[1][..3]);
    let manifest = String::from_utf8(seen[0][3].clone()).unwrap();
    assert!(manifest.contains("sha256"));
    assert!(manifest.contains("trajectory.csv"));
}
