use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minimal-tori"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn period_reports_both_methods() {
    let out = run(&["period", "--e", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    let d = v["quadrature"]["delta_phi2"].as_f64().unwrap();
    assert!((d - 2f64.sqrt() * std::f64::consts::PI).abs() < 1e-12);
    assert!(v.get("elliptic").is_none());

    let v = json(&run(&["period", "--E", "0.3"]));
    let q = v["quadrature"]["delta_phi2"].as_f64().unwrap();
    let e = v["elliptic"]["delta_phi2"].as_f64().unwrap();
    assert!((q - e).abs() < 1e-8);
}

#[test]
fn parameter_errors_exit_2() {
    assert_eq!(run(&["mesh", "--E", "0.7"]).status.code(), Some(2));
    assert_eq!(
        run(&["period", "--E", "0.3", "--e", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["search", "--p", "2", "--q", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["isometry", "--k", "2", "--l", "1", "--e", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["mesh", "--e", "1", "--grid", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["mesh", "--e", "1", "--format", "ply"]).status.code(),
        Some(2)
    );
}

#[test]
fn tolerance_failure_exits_3() {
    // e = 2 does not have period 4π/3
    let out = run(&["verify", "--e", "2", "--closure", "4/3", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_then_verify_closed_torus() {
    let out = run(&["search", "--p", "4", "--q", "3"]);
    assert!(out.status.success());
    let e = json(&out)["e"].as_f64().unwrap();
    let e_arg = format!("{e:.17e}");
    let out = run(&["verify", "--e", &e_arg, "--closure", "4/3", "--grid", "24"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["domain"], "closed");
    assert_eq!(v["closure"]["closes"], true);
    for key in [
        "max_minimality_residual",
        "max_energy_residual",
        "gaussian_R_max_abs",
    ] {
        assert!(v[key].as_f64().unwrap().is_finite(), "{key}");
    }
}

#[test]
fn mesh_obj_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    let b = dir.path().join("b.obj");
    for p in [&a, &b] {
        let out = run(&[
            "mesh",
            "--k",
            "2",
            "--l",
            "1",
            "--E",
            "0.25",
            "--grid",
            "12x10",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 120);
    // open strip: no wrap in the second direction
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12 * 9);
    assert!(text
        .lines()
        .all(|l| l.starts_with("v ") || l.starts_with("f ")));
}

#[test]
fn embed_writes_csv() {
    let out = run(&["embed", "--k", "1", "--l", "1", "--e", "1", "--grid", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phi1,phi2,theta,x1,x2,x3,x4"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn isometry_json() {
    let out = run(&["isometry", "--k", "1", "--l", "1", "--e", "5"]);
    assert!(out.status.success());
    assert!(json(&out)["max_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn pole_on_surface_is_rejected() {
    // (√½, 0, √½, 0) lies on the Clifford torus
    let h = 0.5f64.sqrt().to_string();
    let pole = format!("{h},0,{h},0");
    let out = run(&[
        "mesh", "--k", "1", "--l", "1", "--e", "0", "--grid", "4", "--pole", &pole,
    ]);
    assert_eq!(out.status.code(), Some(2));
}
