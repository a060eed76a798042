use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swe::output::{read_csv, CSV_HEADER};

fn swe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swe")).args(args).output().expect("spawn swe")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn short_lake_run(out: &Path) -> Output {
    swe(&[
        "run",
        "--config",
        &config("lake_at_rest_wet.cfg"),
        "--nx",
        "25",
        "--ny",
        "25",
        "--tf",
        "0.02",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn lake_run_writes_fields_and_keeps_rest() {
    let out = scratch("lake_run");
    let o = short_lake_run(&out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("run.log").exists() && out.join("summary.txt").exists());
    let mut shots: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    shots.sort();
    assert!(shots.len() >= 2);
    let text = fs::read_to_string(shots.last().unwrap()).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let rows = read_csv(shots.last().unwrap()).unwrap();
    assert_eq!(rows.len(), 625);
    for r in rows {
        assert!((r[6] - 1.0).abs() < 1e-12, "eta {}", r[6]);
        assert!(r[3].abs() < 1e-12 && r[4].abs() < 1e-12);
    }
}

#[test]
fn identical_runs_write_identical_files() {
    let (a, b) = (scratch("det_a"), scratch("det_b"));
    assert!(short_lake_run(&a).status.success());
    assert!(short_lake_run(&b).status.success());
    for f in ["snapshot_00000.csv", "snapshot_00001.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn vtk_writer_emits_cell_data() {
    let out = scratch("vtk_run");
    let o = swe(&[
        "run",
        "--config",
        &config("vortex.cfg"),
        "--nx",
        "10",
        "--ny",
        "10",
        "--tf",
        "0.005",
        "--writer",
        "vtk",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("snapshot_00001.vtk")).unwrap();
    assert!(text.contains("DIMENSIONS 11 11 2"));
    assert!(text.contains("CELL_DATA 100"));
    for name in ["h", "qx", "qy", "b", "eta"] {
        assert!(text.contains(&format!("SCALARS {name} double 1")));
    }
    assert!(!out.join("snapshot_00001.csv").exists());
}

#[test]
fn gen_weno_prints_boundary_weights() {
    let o = swe(&["gen-weno", "--r", "3", "--points", "interfaces"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for (row, d) in rows.iter().zip([[0.1, 0.6, 0.3], [0.3, 0.6, 0.1]]) {
        assert_eq!(row.len(), 18);
        for (x, y) in row[15..].iter().zip(d) {
            assert!((x - y).abs() < 1e-12, "{text}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(swe(&[]).status.code(), Some(1));
    assert_eq!(swe(&["run"]).status.code(), Some(1));
    assert_eq!(swe(&["--help"]).status.code(), Some(0));
    assert_eq!(swe(&["run", "--config", &config("vortex.cfg"), "--wb", "maybe"]).status.code(), Some(1));
    assert_eq!(swe(&["run", "--config", &config("vortex.cfg"), "--cfl", "-1"]).status.code(), Some(1));
    assert_eq!(swe(&["convergence", "--config", &config("vortex.cfg"), "--meshes", "25,x"]).status.code(), Some(1));
    assert_eq!(swe(&["convergence", "--config", &config("island_flood.cfg")]).status.code(), Some(1));
    assert_eq!(swe(&["gen-weno", "--points", "nowhere"]).status.code(), Some(1));

    let bad = scratch("bad_cfg");
    fs::create_dir_all(&bad).unwrap();
    let cfg = bad.join("bad.cfg");
    fs::write(&cfg, "scenario = vortex\ncolour = blue\n").unwrap();
    assert_eq!(swe(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    fs::write(&cfg, "scenario = atlantis\n").unwrap();
    assert_eq!(swe(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));

    // output directory that cannot be created
    let o = swe(&["run", "--config", &config("vortex.cfg"), "--nx", "5", "--ny", "5", "--out", "/dev/null/sub"]);
    assert_eq!(o.status.code(), Some(2));
}
