use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rapid_svdd::io::read_indices;
use rapid_svdd::sop::PIPELINE_TOLERANCE;
use rapid_svdd::{
    check_feasible, gram_matrix, load_csv, prefilter, rapid_sample, solve_sop_exact, CsvOptions,
    KernelSpec,
};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rapid-svdd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    stdout(&out)
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generated(dir: &TempDir) -> PathBuf {
    let data = path(dir, "data.csv");
    ok(&[
        "gen",
        "--n",
        "400",
        "--m",
        "2",
        "--components",
        "2",
        "--outlier-ratio",
        "0.05",
        "--seed",
        "7",
        "--out",
        s(&data),
    ]);
    data
}

#[test]
fn gen_writes_one_row_per_observation() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let text = std::fs::read_to_string(&data).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,label");
    assert_eq!(lines.len(), 401);
    assert_eq!(lines.iter().filter(|l| l.ends_with(",out")).count(), 20);

    let again = ok(&[
        "gen",
        "--n",
        "400",
        "--m",
        "2",
        "--components",
        "2",
        "--outlier-ratio",
        "0.05",
        "--seed",
        "7",
    ]);
    assert_eq!(again, text);
}

#[test]
fn sample_writes_inlier_indices() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let idx = path(&dir, "sample.idx");
    let trace = path(&dir, "trace.csv");
    ok(&[
        "sample",
        "--in",
        s(&data),
        "--method",
        "rapid",
        "--p-out",
        "0.05",
        "--gamma-rule",
        "scott",
        "--out",
        s(&idx),
        "--trace",
        s(&trace),
    ]);
    let text = std::fs::read_to_string(&idx).unwrap();
    assert!(text
        .lines()
        .all(|l| l.parse::<usize>().is_ok_and(|i| (1..=400).contains(&i))));

    let inliers: Vec<&str> = text.lines().collect();
    assert!(inliers
        .windows(2)
        .all(|w| w[0].parse::<usize>().unwrap() < w[1].parse().unwrap()));
    let trace = std::fs::read_to_string(&trace).unwrap();
    assert!(trace.starts_with("iteration,candidate,theta_min,violator\n"));
    assert!(matches!(
        load_csv(&data, &CsvOptions::default()),
        Err(rapid_svdd::Error::ParseCell { column: 3, .. })
    ));
}

#[test]
fn sample_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let idx = path(&dir, "sample.idx");
    ok(&[
        "sample",
        "--in",
        s(&data),
        "--gamma",
        "0.5",
        "--out",
        s(&idx),
    ]);

    let options = CsvOptions {
        labels: Some(rapid_svdd::LabelMapping::parse("label", "in=in,out=out").unwrap()),
        ..CsvOptions::default()
    };
    let (x, _) = load_csv(&data, &options).unwrap();
    let gram = gram_matrix(&x, KernelSpec::new(0.5).unwrap()).unwrap();
    let expected = rapid_sample(&gram, 0.05).unwrap();
    assert_eq!(read_indices(&idx, x.n()).unwrap(), expected.sample);
    assert!(expected.sample.is_subset(&expected.prefilter.inliers));

    let second = ok(&["sample", "--in", s(&data), "--gamma", "0.5"]);
    assert_eq!(second, std::fs::read_to_string(&idx).unwrap());
}

#[test]
fn random_sample_depends_only_on_the_seed() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let draw = |seed| {
        ok(&[
            "sample",
            "--in",
            s(&data),
            "--method",
            "rand",
            "--ratio",
            "0.1",
            "--seed",
            seed,
        ])
    };
    let (a, b, c) = (draw("4"), draw("4"), draw("5"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 38);
}

#[test]
fn train_then_eval_model() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let idx = path(&dir, "sample.idx");
    let model = path(&dir, "model.json");
    let preds = path(&dir, "pred.txt");
    ok(&["sample", "--in", s(&data), "--out", s(&idx)]);
    ok(&[
        "train",
        "--in",
        s(&data),
        "--sample",
        s(&idx),
        "--out",
        s(&model),
    ]);
    let report = ok(&[
        "eval",
        "--in",
        s(&data),
        "--model",
        s(&model),
        "--format",
        "json",
        "--predictions",
        s(&preds),
    ]);
    let value: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(value["dataset"], "data");
    assert_eq!(value["method"], "model");
    let mcc = value["mcc"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&mcc));
    let text = std::fs::read_to_string(&preds).unwrap();
    assert_eq!(text.lines().count(), 400);
    assert!(text.lines().all(|l| l == "in" || l == "out"));
}

#[test]
fn eval_end_to_end_report() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let report = ok(&[
        "eval",
        "--in",
        s(&data),
        "--method",
        "full",
        "--dataset-id",
        "bimodal",
    ]);
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(
        lines[0],
        "dataset,method,t_samp,t_train,t_inf,size,ratio,mcc,gamma,p_out,seed"
    );
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[0], "bimodal");
    assert_eq!(cells[1], "full");
    assert_eq!(cells[5], "381");
    assert_eq!(cells[10], "");
}

#[test]
fn bench_reports_every_run() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let summary = path(&dir, "summary.csv");
    let out = run(&[
        "bench",
        "--in",
        s(&data),
        "--in",
        s(&path(&dir, "missing.csv")),
        "--synthetic",
        "150,2,1,0.05,3",
        "--method",
        "rapid",
        "--method",
        "rand_0.2",
        "--repetitions",
        "3",
        "--summary",
        s(&summary),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout(&out);
    assert_eq!(report.lines().count(), 1 + 2 * (1 + 3));
    assert_eq!(
        report.lines().filter(|l| l.contains(",rand_0.2,")).count(),
        6
    );
    assert!(stderr(&out).contains("missing"));
    let summary = std::fs::read_to_string(&summary).unwrap();
    assert_eq!(summary.lines().count(), 1 + 4);
}

#[test]
fn oracle_agrees_with_the_library() {
    let dir = TempDir::new().unwrap();
    let tiny = path(&dir, "tiny.csv");
    std::fs::write(&tiny, "0,0\n1,0\n0,1\n2,2\n0.5,0.5\n3,0\n").unwrap();
    let out = ok(&["oracle", "--in", s(&tiny), "--p-out", "0", "--gamma", "1.0"]);
    let field = |key: &str| {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{key}: ")))
            .unwrap_or_else(|| panic!("{key} missing from {out}"))
            .to_string()
    };

    let (x, _) = load_csv(&tiny, &CsvOptions::default()).unwrap();
    let gram = gram_matrix(&x, KernelSpec::new(1.0).unwrap()).unwrap();
    let pre = prefilter(&gram, 0.0).unwrap();
    let exact = solve_sop_exact(&gram, &pre.inliers).unwrap();
    let greedy = rapid_sample(&gram, 0.0).unwrap();
    let fit = check_feasible(&gram, &pre.inliers, &greedy.sample, PIPELINE_TOLERANCE).unwrap();

    assert_eq!(
        field("exact_delta_fit").parse::<f64>().unwrap(),
        exact.objective
    );
    assert_eq!(
        field("rapid_delta_fit").parse::<f64>().unwrap(),
        fit.fit_gap()
    );
    assert_eq!(field("rapid_feasible"), fit.feasible.to_string());
    let listed: Vec<usize> = field("rapid_sample")
        .split(' ')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(listed, greedy.sample.to_one_based());
}

#[test]
fn oracle_rejects_large_inputs() {
    let dir = TempDir::new().unwrap();
    let big = path(&dir, "big.csv");
    let rows: String = (0..20).map(|i| format!("{i}\n")).collect();
    std::fs::write(&big, rows).unwrap();
    let out = run(&["oracle", "--in", s(&big), "--p-out", "0", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("capped at 15"), "{}", stderr(&out));
}

#[test]
fn custom_label_column_and_map() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "custom.csv");
    std::fs::write(
        &file,
        "a,anomaly,b\n0,no,0\n1,no,0\n0,no,1\n1,no,1\n0.5,no,0.5\n9,yes,9\n",
    )
    .unwrap();
    let report = ok(&[
        "eval",
        "--in",
        s(&file),
        "--label-column",
        "anomaly",
        "--label-map",
        "yes=out,no=in",
        "--method",
        "full",
        "--p-out",
        "0.4",
        "--gamma",
        "0.5",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(value["size"], 5);
    assert_eq!(value["mcc"], 1.0);

    let out = run(&[
        "eval",
        "--in",
        s(&file),
        "--label-column",
        "anomaly",
        "--method",
        "full",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no mapping"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let data = generated(&dir);
    let cases: &[&[&str]] = &[
        &["sample", "--in", s(&data), "--bogus"],
        &["sample", "--in", s(&data), "--p-out", "1"],
        &["sample", "--in", s(&data), "--method", "rand"],
        &["sample", "--in", s(&data), "--ratio", "0.5"],
        &[
            "sample",
            "--in",
            s(&data),
            "--method",
            "rand",
            "--ratio",
            "0",
        ],
        &[
            "sample",
            "--in",
            s(&data),
            "--gamma",
            "1",
            "--gamma-rule",
            "scott",
        ],
        &["sample", "--in", s(&data), "--gamma-rule", "fixed"],
        &["sample", "--in", s(&data), "--gamma", "-1"],
        &[
            "sample",
            "--in",
            s(&data),
            "--method",
            "rand",
            "--ratio",
            "0.5",
            "--trace",
            "t.csv",
        ],
        &["gen", "--n", "10", "--m", "2", "--components", "11"],
        &["gen", "--n", "0", "--m", "2"],
        &["bench", "--method", "rapid"],
        &["bench", "--synthetic", "10,2"],
        &["bench", "--synthetic", "100,2,1,0,0", "--method", "rand_2"],
        &[
            "eval",
            "--in",
            s(&data),
            "--model",
            "m.json",
            "--gamma",
            "1",
        ],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let garbage = path(&dir, "garbage.csv");
    std::fs::write(&garbage, "1,2\n3,abc\n").unwrap();
    let unlabelled = path(&dir, "plain.csv");
    std::fs::write(&unlabelled, "1,2\n3,4\n").unwrap();
    let absent = path(&dir, "absent.csv");
    let no_index = path(&dir, "none.idx");
    let cases: &[&[&str]] = &[
        &["sample", "--in", s(&absent)],
        &["sample", "--in", s(&garbage)],
        &["eval", "--in", s(&unlabelled)],
        &["train", "--in", s(&unlabelled), "--sample", s(&no_index)],
        &["bench", "--in", s(&unlabelled)],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(
            stderr(&out).lines().last().unwrap().starts_with("error: "),
            "{args:?}"
        );
    }
    assert!(stderr(&run(cases[1])).contains("row 2, column 2"));
}

#[test]
fn help_documents_every_flag() {
    let top = run(&["--help"]);
    assert_eq!(top.status.code(), Some(0));
    for sub in ["gen", "sample", "train", "eval", "bench", "oracle"] {
        assert!(stdout(&top).contains(sub));
        let help = ok(&[sub, "--help"]);
        let lines: Vec<&str> = help.lines().map(str::trim).collect();
        let mut flags = 0;
        for (k, line) in lines.iter().enumerate() {
            if !line.starts_with("--") {
                continue;
            }
            flags += 1;
            let inline = line.split("  ").filter(|p| !p.trim().is_empty()).count() > 1;
            let below = lines
                .get(k + 1)
                .is_some_and(|next| !next.is_empty() && !next.starts_with('-'));
            assert!(inline || below, "{sub}: undocumented flag {line:?}");
        }
        assert!(flags > 0);
    }
    let sample = ok(&["sample", "--help"]);
    for flag in [
        "--in",
        "--method",
        "--ratio",
        "--seed",
        "--p-out",
        "--gamma",
        "--gamma-rule",
        "--out",
        "--trace",
        "--label-column",
        "--label-map",
        "--header",
    ] {
        assert!(sample.contains(flag), "sample --help lacks {flag}");
    }
    assert!(sample.contains("modified_mean"));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
