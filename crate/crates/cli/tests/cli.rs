use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liftproj")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    row[header.iter().position(|h| *h == name).unwrap()].to_string()
}

#[test]
fn gap_at_full_level_is_one() {
    let o = run(&["gap", "--n", "10", "--k", "10", "--rho", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "gap").parse::<f64>().unwrap(), 1.0);
}

#[test]
fn cropped_rank_at_four() {
    let o = run(&["rank", "--family", "cropped", "--n", "4", "--rho", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "rank_lo"), "2");
    let m = run(&["rank", "--family", "cropped", "--n", "3", "--rho-millis", "178"]);
    assert_eq!(field(&stdout(&m), "rank_lo"), "2");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["rank", "--family", "cropped", "--n", "13", "--rho", "0.1"]).status.code(), Some(3));
    let bad = run(&["gap", "--n", "3", "--k", "5", "--rho", "0.5"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert_eq!(run(&["rank", "--family", "cropped", "--n", "4", "--rho", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["threshold", "--which", "q", "--n", "3", "--mode", "eigen"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_formats_agree() {
    let args = ["threshold", "--which", "q", "--n", "6", "--tol", "1e-9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let csv_value: f64 = field(&stdout(&a), "value").parse().unwrap();
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&run(&json_args))).unwrap();
    assert_eq!(j["value"].as_f64().unwrap(), csv_value);
}

#[test]
fn certificate_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.txt");
    let p = path.to_str().unwrap();
    let o = run(&["cert", "build", "--op", "sa-plus-top", "--n", "3", "--rho", "0.4", "--dump", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let ok = run(&["cert", "check", "--in", p, "--rho", "0.4"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first = lines.iter().position(|l| l.contains(',')).unwrap();
    let mut row: Vec<String> = lines[first].split(',').map(String::from).collect();
    row[0] = "0.9".into();
    lines[first] = row.join(",");
    std::fs::write(&path, lines.join("\n")).unwrap();
    let bad = run(&["cert", "check", "--in", p, "--rho", "0.4"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("SA+1,false"));
}

#[test]
fn figure_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig6.csv");
    let o = run(&["figure", "--which", "fig6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("n,k,rho,gap\n"));
    assert_eq!(csv.lines().count(), 45);
}

#[test]
fn identity_and_obstructions() {
    for which in ["mobius", "localizer", "decision-rule", "collapse"] {
        let o = run(&["identity-check", "--which", which, "--n", "4"]);
        assert_eq!(o.status.code(), Some(0), "{which}");
        assert_eq!(field(&stdout(&o), "passed"), "true");
    }
    let o = run(&["obstructions", "--n", "5", "--rho", "0.5", "--k", "1"]);
    assert!(stdout(&o).contains("1;2;3;4;5"));
}
