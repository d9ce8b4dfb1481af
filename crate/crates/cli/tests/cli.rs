use std::path::PathBuf;
use std::process::{Command, Output};

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cayley-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn geodesic_count_of_a_three_cycle() {
    let o = cayley(&["geodesic-count", "--cycles", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\n");
    let o = cayley(&["geodesic-count", "--cycles", "3,2", "--n", "6", "--oracle"]);
    assert_eq!(stdout(&o), "9\n");
}

#[test]
fn exact_volume_of_s4_sphere() {
    let o = cayley(&["volume", "--n", "4", "--k", "2", "--exact"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "11\n");
    let o = cayley(&["volume", "--n", "4", "--k", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ln: f64 = v["ln_sphere_size"].as_str().unwrap().parse().unwrap();
    assert!((ln - 11f64.ln()).abs() < 1e-12);
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "speed-curve",
        "--n",
        "2000",
        "--c",
        "0.8",
        "--reps",
        "100",
        "--seed",
        "7",
    ];
    let a = cayley(&args);
    let b = cayley(&args);
    let mut threaded: Vec<&str> = args.to_vec();
    threaded.extend(["--jobs", "2"]);
    let c = cayley(&threaded);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 7"));
}

#[test]
fn check_flag_turns_failures_into_exit_status() {
    let base = [
        "speed-curve",
        "--n",
        "300",
        "--c",
        "1.5",
        "--reps",
        "4",
        "--seed",
        "1",
    ];
    let mut strict = base.to_vec();
    strict.extend(["--tolerance", "1e-9", "--check"]);
    assert_eq!(cayley(&strict).status.code(), Some(1));
    let mut loose = base.to_vec();
    loose.extend(["--tolerance", "0.5", "--check"]);
    assert_eq!(cayley(&loose).status.code(), Some(0));
    let mut unchecked = base.to_vec();
    unchecked.extend(["--tolerance", "1e-9"]);
    assert_eq!(cayley(&unchecked).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cayley(&["speed-curve", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        cayley(&["volume", "--n", "4", "--k", "4", "--exact"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cayley(&["geodesic-count", "--cycles", "3", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cayley(&["walk-trace", "--n", "5"]).status.code(), Some(2));
    assert_eq!(cayley(&[]).status.code(), Some(2));
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let cfg = scratch("cfg.toml");
    std::fs::write(
        &cfg,
        "seed = 11\n[no_fragmentation]\nn = 300\nreps = 20\nc = 0.4\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let o = cayley(&["no-fragmentation", "--config", path]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# n = 300\n"));
    assert!(text.contains("# c = 0.4\n"));
    assert!(text.contains("# seed = 11\n"));
    let o = cayley(&[
        "no-fragmentation",
        "--config",
        path,
        "--n",
        "200",
        "--seed",
        "5",
    ]);
    let text = stdout(&o);
    assert!(text.contains("# n = 200\n"));
    assert!(text.contains("# seed = 5\n"));

    std::fs::write(&cfg, "[no_fragmentation]\nnn = 3\n").unwrap();
    assert_eq!(
        cayley(&["no-fragmentation", "--config", path])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_mirrors_csv() {
    let out = scratch("sphere.json");
    let o = cayley(&[
        "sphere-sample",
        "--n",
        "12",
        "--k",
        "5",
        "--count",
        "4",
        "--seed",
        "3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["name"], "sphere_sample");
    assert_eq!(v["params"]["k"], 5);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[4], 5);
    }
    let csv = stdout(&cayley(&[
        "sphere-sample",
        "--n",
        "12",
        "--k",
        "5",
        "--count",
        "4",
        "--seed",
        "3",
    ]));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    let cols: Vec<&str> = v["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(header, cols.join(","));
}

#[test]
fn walk_trace_and_hitting_samples() {
    let o = cayley(&["walk-trace", "--n", "50", "--c", "1", "--seed", "4"]);
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "step,i,j,kind,distance");
    assert_eq!(data.len(), 26);
    let o = cayley(&[
        "hitting-sample",
        "--n",
        "200",
        "--a",
        "0.3",
        "--count",
        "3",
        "--no-fragmentation",
        "--seed",
        "2",
    ]);
    assert!(o.status.success());
    for line in stdout(&o)
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .take(3)
    {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[4], "60");
        assert_eq!(fields[5], "0");
    }
}

#[test]
fn branching_check_runs_both_kinds() {
    let o = cayley(&[
        "branching-check",
        "--samples",
        "2000",
        "--tolerance",
        "0.2",
        "--seed",
        "1",
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = cayley(&[
        "branching-check",
        "--kind",
        "cluster-weight",
        "--n",
        "200",
        "--samples",
        "200",
        "--seed",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["name"], "cluster_weight");
}
