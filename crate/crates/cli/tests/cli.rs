use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlsubspace"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

#[test]
fn exact_estimate_recovers_sigma() {
    let o = run(&["estimate", "--exact", "--sigma0", "1", "--xi0", "2.5"]);
    assert!(o.status.success());
    let s = field(&stdout(&o), "sigma");
    assert!((s - 1.0).abs() < 1e-3, "{s}");
}

#[test]
fn exact_lognormal_without_start() {
    let o = run(&[
        "estimate",
        "--model",
        "lognormal",
        "--sigma0",
        "1",
        "--mu0",
        "2",
        "--exact",
    ]);
    assert!(o.status.success());
    let line = stdout(&o);
    assert!(
        (field(&line, "sigma") - 1.0).abs() < 1e-3 && (field(&line, "mu") - 2.0).abs() < 1e-3,
        "{line}"
    );
}

// A single K=100 record: μ̂ has a standard deviation near 0.16.
#[test]
fn synthetic_lognormal_record() {
    let o = run(&[
        "estimate",
        "--model",
        "lognormal",
        "--mu0",
        "2",
        "--k",
        "100",
        "--seed",
        "11",
    ]);
    assert!(o.status.success());
    let line = stdout(&o);
    assert!(
        (field(&line, "sigma") - 1.0).abs() < 0.5 && (field(&line, "mu") - 2.0).abs() < 0.5,
        "{line}"
    );
}

#[test]
fn file_and_stdin_inputs_agree_and_write_a_trace() {
    let dir = std::env::temp_dir().join(format!("nlsubspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data = "# Rayleigh record\n0.4\n1.1\n0.9\n2.3\n1.6\n0.7\n1.2\n\n1.9\n0.3\n1.4\n";
    let file = dir.join("samples.txt");
    std::fs::write(&file, data).unwrap();
    let trace = dir.join("trace.csv");
    let o = run(&[
        "estimate",
        "--input",
        file.to_str().unwrap(),
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");

    let mut child = Command::new(env!("CARGO_BIN_EXE_nlsubspace"))
        .args(["estimate", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(data.as_bytes())
        .unwrap();
    let piped = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), stdout(&piped));

    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iteration,sigma,lyapunov"));
    let v: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn closed_form_estimators_on_inline_values() {
    let o = run(&["estimate", "--estimators", "mle,bayes,moment", "1", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let moment = out.lines().find(|l| l.starts_with("moment")).unwrap();
    assert!((field(moment, "sigma") - 2.158655).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["estimate", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["nope"]).status.code(), Some(1));
    assert_eq!(
        run(&["estimate", "--sigma0", "-1", "--exact"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["estimate"]).status.code(), Some(1));
    assert_eq!(
        run(&["estimate", "--exact", "--estimators", "mle"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["estimate", "--input", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );
    // One sample cannot define a data-driven histogram range.
    assert_eq!(run(&["estimate", "1.0"]).status.code(), Some(2));
    // The moment estimator needs two distinct samples.
    assert_eq!(
        run(&["estimate", "--estimators", "moment", "2.0", "2.0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_file_is_a_data_error() {
    let path = std::env::temp_dir().join(format!("nlsubspace-bad-{}.txt", std::process::id()));
    std::fs::write(&path, "1.0\n2.0\nnot-a-number\n").unwrap();
    let o = run(&["estimate", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn bench_writes_identical_csv_for_a_fixed_seed() {
    let dir = std::env::temp_dir().join(format!("nlsubspace-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for p in [&a, &b] {
        let o = run(&[
            "bench",
            "--trials",
            "50",
            "--k",
            "30,60",
            "--seed",
            "4",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(stdout(&o).starts_with("K"));
    }
    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv, std::fs::read_to_string(&b).unwrap());
    assert_eq!(
        csv.lines().next(),
        Some("estimator,K,N,trials,mean,variance,failures")
    );
    assert_eq!(csv.lines().count(), 1 + 2 * 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweeps_print_csv() {
    let k = stdout(&run(&["sweep-k", "--trials", "20", "--k", "50,100"]));
    assert_eq!(k.lines().count(), 3);
    assert!(k.lines().nth(2).unwrap().starts_with("subspace,100,15,20,"));
    let n = stdout(&run(&[
        "sweep-n", "--trials", "20", "--k", "80", "--n-bins", "10,20,30",
    ]));
    let ns: Vec<&str> = n
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(ns, ["10", "20", "30"]);
}

#[test]
fn residual_curve_has_one_root_at_sigma0() {
    let csv = stdout(&run(&["residual", "--sigma0", "1"]));
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (x, r) = l.split_once(',').unwrap();
            (x.parse().unwrap(), r.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 281);
    let flips: Vec<f64> = rows
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| w[1].0)
        .collect();
    assert_eq!(flips.len(), 1);
    assert!((flips[0] - 1.0).abs() <= 0.011, "{flips:?}");
    assert_eq!(
        run(&["residual", "--lo", "2", "--hi", "1"]).status.code(),
        Some(1)
    );
}
