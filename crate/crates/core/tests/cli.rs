use std::path::PathBuf;

use orbitport::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("orbitport").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitport-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn validate_e5() {
    let f = scratch("e5.portrait", "valence: 3\ndegrees: periodic [2]\nA0: 1/14 1/7 2/7\n");
    let (code, out, _) = run(&["portrait", "validate", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "valid, preperiod 1 period 1");
}

#[test]
fn invalid_portrait_exits_one() {
    // 0 and 1/2 collide under doubling
    let f = scratch("bad.portrait", "degrees: 2\nA0: 0 1/2\n");
    let (code, out, _) = run(&["portrait", "validate", f.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("invalid"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["--no-such-flag"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["catalog", "show", "nope"]).0, 2);
    let f = scratch("broken.portrait", "degrees: periodic [2\nA0: 1/7\n");
    assert_eq!(run(&["portrait", "validate", f.to_str().unwrap()]).0, 2);
    let c = scratch("bad.conf", "land_tol = -1\n");
    assert_eq!(run(&["--config", c.to_str().unwrap(), "catalog", "list"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn land_csv_from_sequence_file() {
    let f = scratch("cubic.seq", "bounds {3,1,1.5}\ngenerator periodic [[0,1.5,0,1]]\n");
    let (code, out, err) = run(&["ray", "land", f.to_str().unwrap(), "--angle", "0", "--angle", "1/2"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# config_hash="));
    assert_eq!(lines[1], "time,angle,re,im,converged,steps,h_final");
    for row in &lines[2..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 7);
        let (re, im): (f64, f64) = (cols[2].parse().unwrap(), cols[3].parse().unwrap());
        assert!(re.hypot(im) < 1e-6, "{row}");
        assert_eq!(cols[4], "true");
    }
}

#[test]
fn config_changes_hash() {
    let (_, a, _) = run(&["seq", "green", "cubic_fixed", "--z", "2"]);
    let c = scratch("seed.conf", "# different seed\nseed = 99\n");
    let (code, b, _) = run(&["--config", c.to_str().unwrap(), "seq", "green", "cubic_fixed", "--z", "2"]);
    assert_eq!(code, 0);
    let hash = |s: &str| s.lines().next().unwrap().to_string();
    assert_ne!(hash(&a), hash(&b));
    assert_eq!(a.lines().nth(1), b.lines().nth(1));
}

#[test]
fn render_is_reproducible() {
    let dir = scratch("x", "").parent().unwrap().to_path_buf();
    let p1 = dir.join("a.ppm");
    let p2 = dir.join("b.ppm");
    for p in [&p1, &p2] {
        let (code, _, err) = run(&["render", "semigroup", "--samples", "3", "--px", "24x16", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert!(a.starts_with(b"P6\n"));
    assert_eq!(a, b);
}

#[test]
fn accept_subset() {
    let (code, out, _) = run(&["accept", "--only", "1,2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(run(&["accept", "--only", "13"]).0, 2);
}

#[test]
fn lamination_groups() {
    let f = scratch("deg6.portrait", "degrees: preperiodic [6];[2]\nA0: 7/36 11/36\n");
    let (code, out, _) = run(&[
        "lamination",
        "groups",
        f.to_str().unwrap(),
        "--matching",
        "{7/36,11/36},{13/36,17/36},{19/36,5/36},{23/36,31/36},{25/36,29/36},{35/36,1/36}",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("degrees 3 2 1"));
}
