use std::fs;
use std::process::{Command, Output};

fn nnsamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnsamp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn approx_accepts_negative_coordinates() {
    let o = nnsamp(&["approx", "--kernel", "tanh", "--n", "20", "--x", "-0.5", "--y", "0", "--function", "g"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], ["tanh", "20", "g"]);
    let exact: f64 = row[6].parse().unwrap();
    assert!((exact + 0.880143).abs() < 1e-6);
}

#[test]
fn point_outside_square_fails() {
    let o = nnsamp(&["approx", "--n", "10", "--x", "1.5", "--y", "0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
}

#[test]
fn axioms_pass_for_both_kernels() {
    for k in ["logistic", "tanh"] {
        let o = nnsamp(&["axioms", "--kernel", k]);
        assert!(o.status.success());
        assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",true"));
    }
}

#[test]
fn unknown_kernel_is_rejected() {
    assert!(!nnsamp(&["axioms", "--kernel", "relu"]).status.success());
}

#[test]
fn norm_of_f_is_finite_and_discrete_dominates() {
    let value = |args: &[&str]| -> f64 {
        let o = nnsamp(args);
        assert!(o.status.success());
        stdout(&o).lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap()
    };
    let cont = value(&["norm", "--p", "2", "--q", "2", "--grid", "128"]);
    let disc = value(&["norm", "--p", "2", "--q", "2", "--discrete", "--mesh-n", "10"]);
    assert!(cont > 0.0 && disc >= cont);
}

#[test]
fn tau_rejects_oversized_delta() {
    assert!(!nnsamp(&["tau", "--r", "2", "--delta", "1.5"]).status.success());
    assert!(nnsamp(&["tau", "--r", "1", "--delta", "0.1", "--resolution", "8"]).status.success());
}

#[test]
fn config_file_overrides_and_bad_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.conf");
    fs::write(&good, "# small run\ngrid = 64\n").unwrap();
    let o = nnsamp(&["table1", "--ns", "5", "--kernels", "logistic", "--config", good.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# grid=64"));

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "grid = many\n").unwrap();
    let o = nnsamp(&["table1", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.conf"));

    let o = nnsamp(&["table1", "--config", dir.path().join("missing.conf").to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn ratios_refuse_exponents_outside_the_estimate() {
    assert!(!nnsamp(&["ratios", "--ns", "5", "--p", "2", "--q", "3"]).status.success());
}

#[test]
fn export_surface_writes_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = nnsamp(&["export-surface", "--n", "5", "--grid", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,value"));
    assert_eq!(text.lines().count(), 10);
    assert!(!nnsamp(&["export-surface", "--n", "5"]).status.success());
    let unwritable = dir.path().join("no/such/dir/s.csv");
    assert!(!nnsamp(&["export-surface", "--n", "5", "--out", unwritable.to_str().unwrap()]).status.success());
}
