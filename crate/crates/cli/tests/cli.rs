use std::path::Path;
use std::process::{Command, Output};

fn femlearn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_femlearn"))
        .args(args)
        .current_dir(dir)
        .env_remove("FEMLEARN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value of `key=...` in a summary line.
fn field(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .parse()
        .unwrap()
}

#[test]
fn solve_prints_table_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(
        dir.path(),
        &["solve", "--eps", "0.1", "--n", "20", "--method", "galerkin"],
    );
    assert!(o.status.success(), "{o:?}");
    let l2 = field(&stdout(&o), "l2");
    assert!((l2 - 3.87e-3).abs() / 3.87e-3 < 0.01, "{l2}");

    let o = femlearn(
        dir.path(),
        &[
            "solve", "--eps", "0.001", "--n", "100", "--method", "supg", "--out", "s.csv",
        ],
    );
    assert!(o.status.success());
    let h1 = field(&stdout(&o), "h1");
    assert!((h1 - 20.04).abs() / 20.04 < 0.02, "{h1}");

    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,u_exact,u_approx"));
    assert_eq!(lines.count(), 101 + 100 * 10);
}

#[test]
fn solve_rejects_degenerate_mesh_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(dir.path(), &["solve", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let o = femlearn(dir.path(), &["solve", "--method", "upwind"]);
    assert_eq!(o.status.code(), Some(2));
    let o = femlearn(dir.path(), &["solve", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn single_iteration_trace_has_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "train", "--regime", "r3", "--n", "20", "--eta", "1e-6", "--iters", "1", "--eps", "0.1",
        "--cost", "galerkin", "--seed", "7", "--out", "run",
    ];
    let o = femlearn(dir.path(), &args);
    assert!(o.status.success(), "{o:?}");
    let trace = std::fs::read_to_string(dir.path().join("run/trace.csv")).unwrap();
    let iters: Vec<&str> = trace
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(trace.lines().next(), Some("iter,cost,l2_error"));
    assert_eq!(iters, ["0", "1"]);
    for f in ["model.txt", "solution.csv"] {
        assert!(dir.path().join("run").join(f).is_file(), "{f}");
    }

    // identical invocation, identical bytes
    let again = femlearn(dir.path(), &[&args[..args.len() - 1], &["run2"]].concat());
    assert!(again.status.success());
    for f in ["model.txt", "trace.csv", "solution.csv"] {
        let a = std::fs::read(dir.path().join("run").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("run2").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_femlearn"))
        .args(["train", "--preset", "fig5", "--dump-config"])
        .env("FEMLEARN_SEED", "42")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(stdout(&o).contains("seed = 42"));
    let o = femlearn(
        dir.path(),
        &["train", "--preset", "fig5", "--dump-config", "--iters", "5"],
    );
    let text = stdout(&o);
    assert!(
        text.contains("seed = 1") && text.contains("iters = 5") && text.contains("n = 20"),
        "{text}"
    );
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(dir.path(), &["train", "--preset", "fig3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fig3"));
}

#[test]
fn divergence_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(
        dir.path(),
        &[
            "train", "--regime", "r3", "--n", "20", "--eta", "1e-3", "--iters", "10000",
        ],
    );
    assert_eq!(o.status.code(), Some(3), "{o:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverged at iteration"));
}

#[test]
fn plot_renders_trace_and_solution() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("t.csv"),
        "iter,cost,l2_error\n0,4,1\n10,2,0.5\n20,1,0.25\n",
    )
    .unwrap();
    let o = femlearn(dir.path(), &["plot", "t.csv"]);
    assert!(o.status.success(), "{o:?}");
    let svg = std::fs::read_to_string(dir.path().join("t.svg")).unwrap();
    assert!(svg.contains(r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1""#));
    assert_eq!(svg.matches("<polyline").count(), 2);

    assert!(femlearn(dir.path(), &["solve", "--out", "s.csv"])
        .status
        .success());
    let o = femlearn(dir.path(), &["plot", "s.csv", "--out", "figs/s.svg"]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.path().join("figs/s.svg")).unwrap();
    assert!(svg.contains(r#"id="u_exact""#) && svg.contains(r#"id="u_approx""#));
}

#[test]
fn plot_reports_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.csv"), "").unwrap();
    let o = femlearn(dir.path(), &["plot", "empty.csv"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    std::fs::write(
        dir.path().join("bad.csv"),
        "iter,cost,l2_error\n0,1,1\n5,oops,1\n",
    )
    .unwrap();
    let o = femlearn(dir.path(), &["plot", "bad.csv"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!dir.path().join("bad.svg").exists());

    let o = femlearn(dir.path(), &["plot", "missing.csv"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn table_reports_reference_and_network_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(
        dir.path(),
        &["table", "2", "--iters", "10", "--out", "t2.csv"],
    );
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("t2.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0].join(","), "method,n,l2_ref,h1_ref,l2_nn,h1_nn");
    assert_eq!(rows.len(), 4);
    let want = [(20, 1.25e-1), (40, 8.52e-2), (100, 4.87e-2)];
    for (row, (n, l2)) in rows[1..].iter().zip(want) {
        assert_eq!(row[0], "SUPG");
        assert_eq!(row[1], n.to_string());
        let got: f64 = row[2].parse().unwrap();
        assert!((got - l2).abs() / l2 < 0.01, "N={n}: {got}");
        assert!(row[2..].iter().all(|v| v.parse::<f64>().unwrap() >= 0.0));
    }
    let again = femlearn(
        dir.path(),
        &["table", "2", "--iters", "10", "--out", "t2b.csv"],
    );
    assert!(again.status.success());
    assert_eq!(
        csv,
        std::fs::read_to_string(dir.path().join("t2b.csv")).unwrap()
    );

    assert_eq!(femlearn(dir.path(), &["table", "3"]).status.code(), Some(2));
}

#[test]
fn presets_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let o = femlearn(dir.path(), &["presets"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in [
        "fig1", "fig2", "fig4a", "fig4b", "fig5", "fig7", "figA7a", "figA7b", "fig8", "fig9",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}
