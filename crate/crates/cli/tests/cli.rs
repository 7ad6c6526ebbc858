use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use filippov_cli::table::read_grid;
use filippov_core::scan::{compute_basins, scan_sp_plane};
use filippov_core::{BasinLabel, ModelParams, RegionCode, SimOptions};

fn filippov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filippov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes_follow_error_class() {
    assert_eq!(
        filippov(&["--preset", "A1", "equilibria"]).status.code(),
        Some(0)
    );
    assert_eq!(
        filippov(&["--preset", "A9", "equilibria"]).status.code(),
        Some(2)
    );
    assert_eq!(
        filippov(&["--preset", "A1", "--set", "m=2", "equilibria"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        filippov(&["--preset", "A1", "--svg", "equilibria"])
            .status
            .code(),
        Some(2)
    );

    // Overlapping detection balls make the attractor label ambiguous.
    let ambiguous = filippov(&[
        "--preset", "A2", "simulate", "--x0", "1", "--y0", "1", "--radius", "100",
    ]);
    assert_eq!(ambiguous.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&ambiguous.stderr).contains("detection radius"));

    let out = filippov(&[
        "--preset",
        "A1",
        "--out",
        "/nonexistent-dir/x.csv",
        "equilibria",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.csv"));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(
        filippov(&["--params", path_arg(&missing), "equilibria"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn preset_with_threshold_override() {
    let base = stdout(&filippov(&["--preset", "A1", "sliding"]));
    let moved = stdout(&filippov(&["--preset", "A1", "--set", "S=0.7", "sliding"]));
    let row = |csv: &str| {
        csv.lines()
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(row(&base), "0.25");
    assert_eq!(row(&moved), "0.7");

    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    let json =
        serde_json::to_string(&ModelParams::preset_a1().with_threshold(0.7).unwrap()).unwrap();
    fs::write(&params, json).unwrap();
    assert_eq!(
        stdout(&filippov(&["--params", path_arg(&params), "sliding"])),
        moved
    );
}

#[test]
fn no_collision_gives_header_only_csv() {
    let out = filippov(&["--preset", "A1", "bifurcations", "--s-range", "0.5,1.5"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "S,mode,x,y,observed,eig1_re,eig1_im,eig2_re,eig2_im\n"
    );
}

#[test]
fn region_grid_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sp.csv");
    let out = filippov(&[
        "--preset",
        "A1",
        "--out",
        path_arg(&csv),
        "scan-sp",
        "--s-range",
        "0.05,1.5",
        "--p-range",
        "0.05,0.9",
        "--resolution",
        "17x13",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    assert_eq!(text.lines().count(), 1 + 17 * 13);

    let back = read_grid::<RegionCode>(&csv).unwrap();
    let direct = scan_sp_plane(
        &ModelParams::preset_a1(),
        (0.05, 1.5),
        (0.05, 0.9),
        (17, 13),
    )
    .unwrap();
    assert_eq!(back, direct);
}

#[test]
fn basin_grid_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("basins.csv");
    let out = filippov(&[
        "--preset",
        "A2",
        "--set",
        "S=4",
        "--out",
        path_arg(&csv),
        "basins",
        "--resolution",
        "6x5",
        "--t-end",
        "300",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let back = read_grid::<BasinLabel>(&csv).unwrap();
    let p = ModelParams::preset_a2().with_threshold(4.0).unwrap();
    let opts = SimOptions {
        t_end: 300.0,
        ..SimOptions::default()
    };
    let direct = compute_basins(&p, (0.0, 9.0), (0.0, 8.4), (6, 5), &opts).unwrap();
    assert_eq!(back, direct);
}

#[test]
fn svg_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let out = filippov(&[
            "--preset",
            "A1",
            "--out",
            path_arg(&csv),
            "--svg",
            "scan-sp",
            "--resolution",
            "20x15",
        ]);
        assert!(out.status.success());
        fs::read(csv.with_extension("svg")).unwrap()
    };
    let a = run("a");
    assert!(a.starts_with(b"<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(String::from_utf8_lossy(&a).contains("<style>"));
    assert_eq!(a, run("b"));
}

#[test]
fn a1_phase_portrait_draws_red_sliding_segment() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = filippov(&[
        "--preset",
        "A1",
        "--out",
        path_arg(&csv),
        "--svg",
        "simulate",
        "--x0",
        "0.2",
        "--y0",
        "1.0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = fs::read_to_string(csv.with_extension("svg")).unwrap();
    let segment = svg
        .lines()
        .find(|l| l.starts_with("<polyline") && l.contains("stroke=\"#d7191c\""))
        .expect("red sliding segment");
    // Vertical: every vertex shares the x = S screen coordinate.
    let points = segment
        .split("points=\"")
        .nth(1)
        .unwrap()
        .split('"')
        .next()
        .unwrap();
    let xs: Vec<&str> = points
        .split(' ')
        .map(|p| p.split(',').next().unwrap())
        .collect();
    assert_eq!(xs.len(), 2);
    assert_eq!(xs[0], xs[1]);
    assert!(svg.contains("sliding segment"));

    let traj = fs::read_to_string(&csv).unwrap();
    assert!(traj.starts_with("t,x,y,regime\n"));
    assert!(traj.lines().any(|l| l.ends_with(",sliding")));
}

#[test]
fn seeded_runs_repeat() {
    let a = filippov(&["--seed", "11", "simulate"]);
    let b = filippov(&["--seed", "11", "simulate"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(filippov(&["--preset", "A1", "simulate"]).status.code() == Some(2));
}
