use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qregion").chain(args.iter().copied());
    let code = qregion::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field(report: &str, name: &str) -> String {
    report.lines().find_map(|l| l.strip_prefix(&format!("{name},"))).unwrap_or_else(|| panic!("no field {name} in {report}")).to_string()
}

fn num(report: &str, name: &str) -> f64 {
    field(report, name).parse().unwrap()
}

fn parse_rows(block: &str) -> Vec<Vec<f64>> {
    block.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn sweep_writes_region_and_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = run(&["sweep", "--channel", "depolarizing", "--eps", "0.5", "--betas", "101", "--out", p, "--restarts", "8"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let (sweep, ends) = text.split_once("\n\n").unwrap();
    assert!(sweep.starts_with("beta,R,Rprime\n"));
    assert!(ends.starts_with("lambda,R,Rprime\n"));
    let rows = parse_rows(sweep);
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r[1] >= 0.0 && r[2] >= 0.0));
    assert!((rows[0][1] - 0.188721876).abs() < 1e-6);
    assert!((rows[100][2] - 0.451205059).abs() < 1e-6);
    let ends = parse_rows(ends);
    assert_eq!(ends.len(), 2);
    assert_eq!((ends[0][0], ends[0][2]), (0.0, 0.0));
    assert!((ends[0][1] - 0.188721876).abs() < 1e-3);
    assert!((ends[1][2] - 0.451205059).abs() < 1e-3);

    let again = dir.path().join("again.csv");
    run(&["sweep", "--channel", "depolarizing", "--eps", "0.5", "--betas", "101", "--out", again.to_str().unwrap(), "--restarts", "8"]);
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn capacity_reports() {
    let (code, out, _) = run(&["capacity", "--channel", "depolarizing", "--eps", "0.5", "--which", "chi"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("field,value\n"));
    assert!((num(&out, "value") - 0.188722).abs() < 1e-3);
    assert_eq!(field(&out, "witness_letters"), "4");

    let (code, out, _) = run(&["capacity", "--channel", "identity", "--which", "ea", "--restarts", "8"]);
    assert_eq!(code, 0);
    assert!((num(&out, "value") - 2.0).abs() < 1e-4);
    assert!(num(&out, "witness_entanglement_entropy") > 0.99);

    let (code, out, _) = run(&["capacity", "--channel", "depolarizing", "--eps", "0.5", "--which", "coherent", "--restarts", "8"]);
    assert_eq!(code, 0);
    assert_eq!(num(&out, "value"), 0.0);
}

#[test]
fn simulate_report() {
    let (code, out, _) = run(&["simulate", "--n", "8", "--lambda", "0.5", "--trials", "1000", "--assisted", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "guaranteed_rate"), "0.5");
    assert_eq!(field(&out, "excess_rate"), "1");
    assert_eq!(field(&out, "err_guaranteed"), "0");
    assert_eq!(field(&out, "err_excess"), "0");
    let (_, again, _) = run(&["simulate", "--n", "8", "--lambda", "0.5", "--trials", "1000", "--assisted", "--seed", "7"]);
    assert_eq!(out, again);
}

#[test]
fn timediv_table() {
    let (code, out, _) = run(&["timediv", "--c", "1", "--cea", "2", "--lambdas", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "lambda,R,Rprime\n0,1,0\n0.5,0.5,1\n1,0,2\n");
}

#[test]
fn spec_file_commands() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let ensemble = write("basis.json", r#"{"kind":"basis","dim":2}"#);
    let (code, out, _) = run(&["region", "--channel", "identity", "--ensemble", &ensemble]);
    assert_eq!(code, 0);
    assert_eq!(out, "field,value\nR,1\nRprime,0\n");

    let (code, out, _) = run(&["broadcast", "--channel", "identity", "--channel2", "identity", "--ensemble", &ensemble]);
    assert_eq!(code, 0);
    assert_eq!(out, "field,value\nr0,1\nr1,0\nr_sum,1\n");

    let channel = write("id.json", r#"{"kind":"identity","dim":2}"#);
    let ansatz = write("ansatz.json", r#"{"dims":[1,2,2],"amplitudes":[[1,0],[0,0],[0,0],[1,0]],"normalize":true}"#);
    let (code, out, _) = run(&["quantum-point", "--channel", &channel, "--ansatz", &ansatz]);
    assert_eq!(code, 0);
    assert_eq!(out, "field,value\nQ,0\nQprime,1\n");

    let (code, out, _) = run(&["region", "--channel", "depolarizing", "--eps", "0", "--ensemble", r#"{"kind":"superposition","beta":1}"#]);
    assert_eq!(code, 0);
    assert_eq!(out, "field,value\nR,0\nRprime,2\n");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["capacity", "--channel", "depolarizing"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["capacity", "--channel", "identity", "--which", "ea", "--block", "2"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["capacity", "--channel", "identity", "--block", "3"]);
    assert_eq!(code, 1);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("sweep"));

    let (code, _, err) = run(&["capacity", "--channel", r#"{"kind":"kraus","kraus":[[[[1,0],[0,0]],[[0,0],[0,0]]]]}"#]);
    assert_eq!(code, 2);
    assert!(err.contains("completeness residual"), "{err}");
    let (code, _, _) = run(&["capacity", "--channel", "depolarizing", "--eps", "1.5"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["simulate", "--n", "8", "--lambda", "0.3"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["region", "--channel", "identity", "--ensemble", "/nonexistent/ensemble.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["timediv", "--c=-1", "--cea", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_exit_status() {
    let bin = Path::new(env!("CARGO_BIN_EXE_qregion"));
    let ok = Command::new(bin).args(["timediv", "--c", "1", "--cea", "2", "--lambdas", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "lambda,R,Rprime\n0,1,0\n1,0,2\n");
    let usage = Command::new(bin).arg("sweep").arg("--betas").arg("many").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let invalid = Command::new(bin).args(["simulate", "--n", "3", "--lambda", "0.5"]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(2));
}
