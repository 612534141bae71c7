use std::fs;
use std::path::Path;
use std::process::Command;

use ssbroyden::bench::{
    run_benchmark, BenchArgs, JsonTrace, OutputFormat, ProblemSpec, RunSpecification, RunSummary,
    CSV_HEADER, SUMMARY_HEADER,
};
use ssbroyden::{LineSearchParams, UpdateVariant};

fn bench(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("bench runs")
}

#[test]
fn single_solver_rosenbrock() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(
        &[
            "--solver",
            "bfgs",
            "--problem",
            "rosenbrock",
            "--n",
            "2",
            "--tol",
            "1e-6",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let trace = fs::read_to_string(dir.path().join("rosenbrock_bfgs.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), CSV_HEADER);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<_> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("bfgs,rosenbrock,converged,32,"));
}

#[test]
fn all_solvers_on_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(
        &["--solver", "all", "--problem", "quadratic", "--n", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    for v in UpdateVariant::ALL {
        assert!(dir.path().join(format!("quadratic_{v}.csv")).exists());
    }
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let rows: Vec<_> = summary.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    for (row, v) in rows.iter().zip(UpdateVariant::ALL) {
        assert!(
            row.starts_with(&format!("{v},quadratic,converged,")),
            "{row}"
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(
        &["--solver", "nosuch", "--problem", "quadratic"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));
    let out = bench(
        &["--solver", "bfgs", "--problem", "rosenbrock", "--n", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unconverged_run_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = bench(
        &[
            "--solver",
            "bfgs",
            "--problem",
            "rosenbrock",
            "--max-iters",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.contains(",max_iters,"));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = bench(
        &["--solver", "bfgs", "--problem", "quadratic"],
        &blocker.join("sub"),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_specs_give_identical_traces() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = bench(
            &[
                "--solver",
                "all",
                "--problem",
                "pinn1d",
                "--max-iters",
                "60",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(1));
    }
    for v in UpdateVariant::ALL {
        let name = format!("pinn1d_{v}.csv");
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap()
        );
    }
}

fn spec(out: &Path, format: OutputFormat) -> RunSpecification {
    RunSpecification {
        solvers: vec![UpdateVariant::SsBroyden, UpdateVariant::Dfp],
        problem: ProblemSpec::Rosenbrock { n: 2 },
        tol: 1e-6,
        max_iters: 500,
        line_search: LineSearchParams::default(),
        out_dir: out.to_owned(),
        format,
    }
}

#[test]
fn csv_round_trips_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_benchmark(&spec(dir.path(), OutputFormat::Csv)).unwrap();
    for run in &report.runs {
        let text = fs::read_to_string(run.trace_path.as_ref().unwrap()).unwrap();
        let trace = run.trace.as_ref().unwrap();
        let mut rows = text.lines().skip(1);
        for rec in &trace.records {
            let row = rows.next().unwrap();
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols.len(), 10);
            assert_eq!(cols[0].parse::<usize>().unwrap(), rec.k);
            assert_eq!(cols[1].parse::<f64>().unwrap().to_bits(), rec.f.to_bits());
            assert_eq!(
                cols[4].parse::<f64>().unwrap().to_bits(),
                rec.alpha.to_bits()
            );
            assert_eq!(cols[7].parse::<usize>().unwrap(), rec.ls_evals);
        }
        assert!(rows.next().is_none());
        assert_eq!(run.summary.qn_iters, run.counters.qn_iters);
        assert_eq!(run.summary.ls_steps, run.counters.ls_steps);
        assert_eq!(run.summary.f_evals, run.counters.f_evals);
    }
    assert_eq!(report.runs[0].summary.solver, "ssbroyden");
    assert_eq!(report.runs[1].summary.solver, "dfp");
}

#[test]
fn json_output_follows_schema() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_benchmark(&spec(dir.path(), OutputFormat::Json)).unwrap();
    for run in &report.runs {
        let text = fs::read_to_string(run.trace_path.as_ref().unwrap()).unwrap();
        let doc: JsonTrace = serde_json::from_str(&text).unwrap();
        let trace = run.trace.as_ref().unwrap();
        assert_eq!(doc.solver, run.summary.solver);
        assert_eq!(doc.records.len(), trace.records.len());
        assert_eq!(doc.summary.counters, run.counters);
        assert_eq!(doc.summary.status, "converged");
        for (j, r) in doc.records.iter().zip(&trace.records) {
            assert_eq!(j.f.to_bits(), r.f.to_bits());
            assert_eq!(j.theta, Some(r.theta));
        }
    }
    let rows: Vec<RunSummary> =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(rows.len(), 2);
}

#[test]
fn pinn_summary_reports_l2_error() {
    use clap::Parser;
    let dir = tempfile::tempdir().unwrap();
    let args = BenchArgs::try_parse_from([
        "bench",
        "--solver",
        "ssbfgs",
        "--problem",
        "pinn1d",
        "--m",
        "4",
        "--npoints",
        "16",
        "--max-iters",
        "20",
        "--out",
        dir.path().to_str().unwrap(),
    ])
    .unwrap();
    let report = run_benchmark(&args.into_spec().unwrap()).unwrap();
    assert!(report.runs[0].summary.l2_error.is_some());
    assert_eq!(report.exit_code(), 1);
}
