use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_helix-spectra"));
    c.env_remove("HELIX_SPECTRA_THREADS");
    c
}

fn run(args: &[&str], out: &Path) -> (i32, String) {
    let o = bin().args(args).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn recipe(name: &str) -> String {
    format!("{}/recipes/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn potential_recipe_profiles_and_minima() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["potential", "--config", &recipe("fig2a")], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("potential_m1_1_m2_1.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "rho,veff_m0,veff_m1,veff_m2,veff_m3,veff_m4");
    assert_eq!(csv.lines().count(), 12002);
    assert!(!csv.contains('\r'));
    let minima = std::fs::read_to_string(dir.path().join("minima.csv")).unwrap();
    let m0 = minima.lines().nth(1).unwrap();
    assert!(m0.ends_with(",0,1,1,0.0000000000000000e0"), "{m0}");
    assert!(dir.path().join("minima.csv.meta.json").exists());
}

#[test]
fn output_is_deterministic_and_config_is_recorded() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--config", &recipe("fig8a")];
    assert_eq!(run(&args, a.path()).0, 0);
    let mut args_b = args.to_vec();
    args_b.extend(["--parallel", "3"]);
    assert_eq!(run(&args_b, b.path()).0, 0);
    let read = |d: &Path| std::fs::read(d.join("spectrum.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));

    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.path().join("spectrum.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["n"], 1);
    assert_eq!(meta["config"]["masses"][3][0], 4.0);
    assert_eq!(meta["rows"], 40);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["spectrum", "--config", &recipe("fig8a"), "--masses", "1:-2", "--m", "2", "--n", "0"], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains(",2,0,ground,,,,false,false,true,true"), "{}", rows[0]);
}

#[test]
fn usage_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["potential", "--m", ""],
        vec!["potential", "--masses", "0:1"],
        vec!["potential", "--masses", "1:0"],
        vec!["heun", "--z", "0.5,1"],
        vec!["potential", "--config", "/nonexistent.json"],
        vec!["frobnicate"],
    ] {
        let (code, _) = run(&args, dir.path());
        assert_eq!(code, 2, "{args:?}");
    }
    let (code, _) = run(&["verify", "--grid-N", "10"], dir.path());
    assert_eq!(code, 2);
    assert!(files(dir.path()).is_empty(), "{:?}", files(dir.path()));
}

#[test]
fn thread_env_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("HELIX_SPECTRA_THREADS", "many")
        .args(["heun", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .env("HELIX_SPECTRA_THREADS", "2")
        .args(["heun", "--parallel", "not-a-number"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn heun_table() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["heun", "--z", "0,-0.6,-5"], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("heun.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["0.0000000000000000e0", "1.0000000000000000e0", "series", ""]);
    assert_eq!(rows[1][2], "series");
    assert!(rows[1][3].parse::<f64>().unwrap() < 1e-8);

    // degree-0 polynomial: B_1 = 0 and C_2 = 0
    let (code, _) = run(&["heun", "--heun-params", "1,0,0,-1,0.5", "--z", "-5"], dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("heun.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",polynomial,"), "{csv}");
}

#[test]
fn verify_reports_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = run(&["verify", "--masses", "1:1", "--m", "0,2", "--n", "0"], dir.path());
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("1 checked, 1 passed, 0 failed, 1 skipped"), "{stdout}");
    let table = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert!(table.contains("skipped,constrained Omega <= 0"));

    let flags = ["--masses", "1:1,1:-2", "--m", "2,3"];
    let direct = dir.path().join("direct");
    let (code, expected) = run(&[&["verify"][..], &flags].concat(), &direct);
    assert_eq!(code, 0, "{expected}");
    assert!(expected.contains(" 0 failed"), "{expected}");
    assert_eq!(run(&[&["spectrum"][..], &flags].concat(), dir.path()).0, 0);
    let spectrum = dir.path().join("spectrum.csv");
    let second = dir.path().join("again");
    let (code, stdout) = run(&["verify", "--from", spectrum.to_str().unwrap()], &second);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(stdout, expected);
    assert_eq!(std::fs::read(second.join("verify.csv")).unwrap(), std::fs::read(direct.join("verify.csv")).unwrap());
}

#[test]
fn verify_with_no_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = run(&["verify", "--masses", "1:-2"], dir.path());
    assert_eq!(code, 0);
    assert!(stdout.starts_with("0 checked"), "{stdout}");
}

#[test]
fn verify_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = dir.path().join("spectrum.csv");
    std::fs::write(
        &spectrum,
        "m1,m2,m,n,branch,energy,frequency,x,x_real,frequency_positive,discriminant_real,nondegenerate_x\n\
         1,1,2,0,ground,0.9,0.34440078,2.23606797749979,true,true,true,true\n",
    )
    .unwrap();
    let (code, stdout) = run(&["verify", "--from", spectrum.to_str().unwrap()], &dir.path().join("v"));
    assert_eq!(code, 1);
    assert!(stdout.starts_with("1 checked, 0 passed, 1 failed"), "{stdout}");
}

#[test]
fn surface_drops_m1_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["surface3d", "--config", &recipe("fig3")], dir.path());
    assert_eq!(code, 0);
    let names = files(dir.path());
    assert!(names.contains(&"surface_m1_1_m2_1_m0.csv".to_string()));
    assert!(!names.iter().any(|n| n.ends_with("_m1.csv")));

    let one = dir.path().join("one");
    let cfg = dir.path().join("one.json");
    std::fs::write(&cfg, r#"{"surface": {"rho_points": 1, "z_points": 1, "rho_min": 0.5, "z_min": 0.0}}"#).unwrap();
    let (code, _) = run(&["surface3d", "--config", cfg.to_str().unwrap(), "--m", "1"], &one);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(one.join("surface_m1_1_m2_1_m1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn surface_slice_matches_potential() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["surface3d", "--m", "2"], dir.path()).0, 0);
    let cfg = dir.path().join("p.json");
    std::fs::write(&cfg, r#"{"potential": {"rho_min": -6, "rho_max": 6, "rho_step": 0.1}}"#).unwrap();
    assert_eq!(run(&["potential", "--config", cfg.to_str().unwrap(), "--m", "2"], dir.path()).0, 0);
    let pot = std::fs::read_to_string(dir.path().join("potential_m1_1_m2_1.csv")).unwrap();
    let surf = std::fs::read_to_string(dir.path().join("surface_m1_1_m2_1_m2.csv")).unwrap();
    let p: Vec<(f64, f64)> = pot
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (c[0], c[1])
        })
        .collect();
    for line in surf.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        if c[1] != 0.0 {
            continue;
        }
        let (_, v) = p.iter().find(|(r, _)| (r - c[0]).abs() < 1e-9).unwrap();
        assert!((v - c[4]).abs() <= 1e-12 * v.abs().max(1.0));
    }
}

#[test]
fn help_exits_0() {
    let o = bin().arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["potential", "surface3d", "spectrum", "verify", "heun"] {
        assert!(text.contains(sub));
    }
}
