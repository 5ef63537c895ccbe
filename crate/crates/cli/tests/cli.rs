use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn tnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, value.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> Value {
    json!({ "rows": rows, "cols": cols, "data": data.iter().map(|x| [*x, 0.0]).collect::<Vec<_>>() })
}

fn entries(m: &Value) -> Vec<f64> {
    m["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[0].as_f64().unwrap())
        .collect()
}

#[test]
fn twist_reproduces_the_introductory_example() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (2f64.sqrt(), 3f64.sqrt());
    let input = real_matrix(
        3,
        3,
        &[
            b / 2.0,
            -1.0 / (2.0 * a),
            1.0 / (2.0 * a),
            b / 4.0,
            1.0 / (4.0 * a),
            -5.0 / (4.0 * a),
            0.25,
            3.0 * b / (4.0 * a),
            b / (4.0 * a),
        ],
    );
    let want = [
        b / 2.0,
        -b / 4.0,
        0.25,
        1.0 / (2.0 * a),
        1.0 / (4.0 * a),
        -3.0 * b / (4.0 * a),
        1.0 / (2.0 * a),
        5.0 / (4.0 * a),
        b / (4.0 * a),
    ];
    let path = write(&dir, "intro.json", &input);
    let out = stdout_json(&tnn(&["twist", "--n", "3", "--in", s(&path)]));
    for (x, y) in entries(&out).iter().zip(want) {
        assert!((x - y).abs() < 1e-8);
    }
    let wrong_n = tnn(&["twist", "--n", "4", "--in", s(&path)]);
    assert_eq!(wrong_n.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&wrong_n.stderr).contains("field n"));
}

#[test]
fn flow_at_time_zero_echoes_the_input() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"L":{"cols":2,"data":[[0.0,0.0],[0.0,0.6],[0.0,0.6],[0.0,0.8]],"rows":2},"lambda":[1.0,-1.0]}"#;
    let text = text.replace(
        "[0.0,0.0],[0.0,0.6],[0.0,0.6],[0.0,0.8]",
        "[0.0,0.8],[0.0,0.6],[0.0,0.6],[0.0,-0.8]",
    );
    let path = dir.path().join("p.json");
    std::fs::write(&path, &text).unwrap();
    for metric in ["kahler", "normal", "induced"] {
        let out = tnn(&[
            "flow",
            "--metric",
            metric,
            "--lambda",
            "1,-1",
            "--t1",
            "0",
            "--in",
            s(&path),
        ]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{text}\n"));
    }
}

#[test]
fn toda_cross_check_passes_on_a_jacobi_seed() {
    let dir = TempDir::new().unwrap();
    let seed = write(
        &dir,
        "moser.json",
        &json!({ "lambda": [1.5, 0.2, -0.7, -1.0], "x": [1.0, 0.5, 2.0, 1.0] }),
    );
    let jac = tnn(&["jacobi", "from-moser", s(&seed)]);
    let seed_l = dir.path().join("seed.json");
    std::fs::write(&seed_l, &jac.stdout).unwrap();
    let out = stdout_json(&tnn(&[
        "toda",
        "--ode",
        "--symes",
        "--cross-check",
        s(&seed_l),
        "--t1",
        "5",
        "--samples",
        "20",
    ]));
    assert!(out["max_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(out["status"], "pass");
    let twist = stdout_json(&tnn(&[
        "toda",
        "--twist-check",
        s(&seed_l),
        "--t0",
        "-1",
        "--t1",
        "2",
        "--samples",
        "6",
    ]));
    assert!(twist["max_residual"].as_f64().unwrap() < 1e-7);
}

#[test]
fn jacobi_moser_roundtrip_through_files() {
    let dir = TempDir::new().unwrap();
    let seed = write(
        &dir,
        "moser.json",
        &json!({ "lambda": [1.0, 0.0, -1.0], "x": [1.0, 1.0, 1.0] }),
    );
    let l = tnn(&["jacobi", "from-moser", s(&seed)]);
    let lpath = dir.path().join("l.json");
    std::fs::write(&lpath, &l.stdout).unwrap();
    let back = stdout_json(&tnn(&["jacobi", "to-moser", s(&lpath)]));
    let r = 1.0 / 3f64.sqrt();
    for (x, y) in back["x"].as_array().unwrap().iter().zip([r, r, r]) {
        assert!((x.as_f64().unwrap() - y).abs() < 1e-10);
    }
    let verdict = tnn(&["positivity", "--kind", "jacobi", s(&lpath)]);
    assert_eq!(stdout_json(&verdict)["status"], "positive");
}

#[test]
fn outside_verdict_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "m.json", &real_matrix(2, 2, &[1.0, 2.0, 3.0, 1.0]));
    let out = tnn(&["positivity", "--kind", "tp", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "outside");
    assert_eq!(v["witness"]["value"], -5.0);
}

#[test]
fn input_errors_exit_with_two_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (json!({ "rows": 2, "data": [] }), "cols"),
        (
            json!({ "rows": 2, "cols": 2, "data": [[1.0, 0.0]] }),
            "data",
        ),
        (
            json!({ "n": 3, "K": [1], "rep": real_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]) }),
            "rep",
        ),
        (json!({ "lambda": [1.0], "x": [1.0, 2.0] }), "x"),
    ];
    for (i, (value, field)) in cases.iter().enumerate() {
        let path = write(&dir, &format!("bad{i}.json"), value);
        let out = tnn(&["positivity", s(&path)]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "case {i}: {err}");
    }
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(tnn(&["cell", s(&garbage)]).status.code(), Some(2));
    assert_eq!(tnn(&["flow", "--lambda", "1,2"]).status.code(), Some(2));
    assert_eq!(tnn(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let args = [
        "flow",
        "--metric",
        "normal",
        "--lambda",
        "2,1,-1",
        "--samples",
        "4",
        "--seed",
        "7",
    ];
    let a = tnn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, tnn(&args).stdout);
    assert_ne!(
        a.stdout,
        tnn(&[&args[..8], &["--seed", "8"]].concat()).stdout
    );

    let z = tnn(&["ampli", "build-Z", "--quadrilateral", "1,2,0.5"]);
    let zpath = dir.path().join("z.json");
    std::fs::write(&zpath, &z.stdout).unwrap();
    let s1 = tnn(&[
        "ampli",
        "sample",
        "--Z",
        s(&zpath),
        "--count",
        "5",
        "--check-hull",
        "--seed",
        "3",
    ]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(
        s1.stdout,
        tnn(&[
            "ampli",
            "sample",
            "--Z",
            s(&zpath),
            "--count",
            "5",
            "--check-hull",
            "--seed",
            "3"
        ])
        .stdout
    );
    let v: Value = serde_json::from_slice(&s1.stdout).unwrap();
    assert!(v["in_hull"].as_array().unwrap().iter().all(|b| b == true));
}

#[test]
fn trajectory_csv_layout() {
    let out = tnn(&["flow", "--lambda", "1,0", "--samples", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(
        lines[0],
        "t,L_re[0][0],L_re[0][1],L_re[1][0],L_re[1][1],L_im[0][0],L_im[0][1],L_im[1][0],L_im[1][1]"
    );
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 9));
    let last: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
}

#[test]
fn ampli_pipeline() {
    let dir = TempDir::new().unwrap();
    let moser = write(
        &dir,
        "moser.json",
        &json!({ "lambda": [1.0, 0.0, -1.0], "x": [1.0, 1.0, 1.0] }),
    );
    let z = stdout_json(&tnn(&[
        "ampli",
        "build-Z",
        s(&moser),
        "--k",
        "1",
        "--m",
        "1",
    ]));
    assert_eq!(
        (z["n"].as_u64(), z["k"].as_u64(), z["m"].as_u64()),
        (Some(3), Some(1), Some(1))
    );
    let zpath = write(&dir, "z.json", &z);
    let v = write(&dir, "v.json", &real_matrix(3, 1, &[1.0, 1.0, 1.0]));
    let image = stdout_json(&tnn(&["ampli", "zmap", "--Z", s(&zpath), s(&v)]));
    assert_eq!(image["rows"], 2);
    let drive_l = tnn(&["jacobi", "from-moser", s(&moser)]);
    let l: Value = serde_json::from_slice(&drive_l.stdout).unwrap();
    let neg: Vec<[f64; 2]> = l["L"]["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| [-p[0].as_f64().unwrap(), -p[1].as_f64().unwrap()])
        .collect();
    let npath = write(
        &dir,
        "n.json",
        &json!({ "rows": 3, "cols": 3, "data": neg }),
    );
    let m = stdout_json(&tnn(&[
        "ampli",
        "project-N",
        "--Z",
        s(&zpath),
        "--N",
        s(&npath),
    ]));
    assert_eq!((m["rows"].as_u64(), m["cols"].as_u64()), (Some(2), Some(2)));
    let not_invariant = write(
        &dir,
        "n2.json",
        &json!({ "rows": 3, "cols": 3, "data": [[0,0],[1,0],[0,0],[-1,0],[0,0],[0,0],[0,0],[0,0],[0,0]] }),
    );
    assert_eq!(
        tnn(&[
            "ampli",
            "project-N",
            "--Z",
            s(&zpath),
            "--N",
            s(&not_invariant)
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn cell_and_involutions() {
    let dir = TempDir::new().unwrap();
    let c = (0.3f64).cos();
    let sn = (0.3f64).sin();
    let g = write(&dir, "g.json", &real_matrix(2, 2, &[c, -sn, sn, c]));
    assert_eq!(
        stdout_json(&tnn(&["cell", s(&g)])),
        json!({ "v": "12", "w": "21" })
    );
    let rho = stdout_json(&tnn(&["twist", "--map", "rho", s(&g)]));
    let rev = stdout_json(&tnn(&["twist", "--map", "rev", s(&g)]));
    assert_eq!(rho["rows"], 2);
    assert_eq!(rev["rows"], 2);
    let iota = stdout_json(&tnn(&["twist", "--map", "iota", s(&g)]));
    for (x, y) in entries(&iota).iter().zip([c, -sn, sn, c]) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn verify_passes() {
    let out = tnn(&["verify", "--cases", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}
