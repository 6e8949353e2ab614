use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bch-resum")).args(args).env_remove("BCH_RESUM_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn coeffs_listing() {
    let o = bin(&["coeffs", "t", "10"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], "1/1");
    assert_eq!(lines[1], "0/1");
    assert_eq!(lines[2], "-1/3");
    assert_eq!(lines[10], "-1382/155925");
    let j: serde_json::Value = serde_json::from_str(&stdout(&bin(&["coeffs", "T", "4", "--json"]))).unwrap();
    assert_eq!(j["coeffs"][2], "1/3");
}

#[test]
fn perm_listing() {
    let o = bin(&["perm", "expand-p", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = bin(&["perm", "marching", "4", "2"]);
    assert_eq!(stdout(&o).lines().count(), 6);
    assert_eq!(bin(&["perm", "marching", "4", "5"]).status.code(), Some(2));
}

#[test]
fn eval_and_g() {
    let o = bin(&["eval", "h", "--args", "0.5"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5f64.cosh() / 0.5f64.sinh()).abs() < 1e-15);
    let o = bin(&["g", "eval", "--rep", "orig", "--args", "0.7,-0.3"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let c = |x: f64| x.cosh() / x.sinh();
    assert!((v - (0.7 * c(0.7) + 0.3 * c(-0.3)) / 0.4f64.sinh()).abs() < 1e-13);
    let o = bin(&["eval", "f", "--args", "0.5,-0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn verify_marching_report() {
    let o = bin(&["verify", "marching", "--n", "5", "--trials", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reps = j.as_array().unwrap();
    assert_eq!(reps.len(), 80);
    assert!(reps.iter().all(|r| r["pass"] == true && r["n"] == 5));
    let again = bin(&["verify", "marching", "--n", "5", "--trials", "20", "--seed", "7", "--jobs", "1"]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn failing_tolerance_exits_one() {
    let o = bin(&["verify", "52", "--n", "4", "--trials", "3", "--tol", "1e-300", "--csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("identity,n,trials,max_residual,pass"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin(&["run", "nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "nonsense", "--n", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["coeffs", "q", "3"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
}

#[test]
fn config_file_override() {
    let dir = std::env::temp_dir().join(format!("bch-resum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.conf");
    std::fs::write(&path, "version = 1\noutput = csv\ntrials = 2\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bch-resum"))
        .args(["verify", "jk", "--n", "3"])
        .env("BCH_RESUM_CONFIG", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("identity,n,trials"), "{text}");
    assert!(text.lines().nth(1).unwrap().contains(",2,"), "{text}");
    std::fs::write(&path, "output = csv\n").unwrap();
    let o = bin(&["--config", path.to_str().unwrap(), "verify", "jk", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_coeffs_and_bch_approx() {
    let o = bin(&["run", "coeffs", "--csv"]);
    assert!(o.status.success());
    let o = bin(&["bch", "approx", "--dim", "2", "--order", "2", "--eps", "0.1,0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("eps,order,error,slope"));
    assert_eq!(text.lines().count(), 5);
}
