use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gwac(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwac"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = gwac(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn edge_set(text: &str) -> Vec<(usize, usize)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--kind", "er", "--n", "500", "--p", "0.05", "--seed", "7"];
    ok(dir.path(), &[&args[..], &["--out", "a.txt"]].concat());
    ok(dir.path(), &[&args[..], &["--out", "b.txt"]].concat());
    let a = fs::read(dir.path().join("a.txt")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.txt")).unwrap());
    let header = String::from_utf8(a).unwrap();
    assert!(header.starts_with("500 "));
}

#[test]
fn compress_decompress_keeps_topology() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "sensor", "--n", "200", "--seed", "2", "--out", "g.txt"]);
    for mode in ["line", "edge"] {
        ok(d, &["compress", "--in", "g.txt", "--out", "g.gwac", "--mode", mode, "--rho", "0.1"]);
        ok(d, &["decompress", "--in", "g.gwac", "--out", "r.txt"]);
        let g = fs::read_to_string(d.join("g.txt")).unwrap();
        let r = fs::read_to_string(d.join("r.txt")).unwrap();
        assert_eq!(g.lines().next(), r.lines().next());
        assert_eq!(edge_set(&g), edge_set(&r), "mode {mode}");
    }
}

#[test]
fn compress_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "knn", "--n", "150", "--seed", "4", "--out", "g.txt"]);
    ok(d, &["compress", "--in", "g.txt", "--out", "a.gwac", "--rho", "0.3", "--K", "4"]);
    ok(d, &["compress", "--in", "g.txt", "--out", "b.gwac", "--rho", "0.3", "--K", "4"]);
    let a = fs::read(d.join("a.gwac")).unwrap();
    assert_eq!(&a[..4], b"GWAC");
    assert_eq!(a, fs::read(d.join("b.gwac")).unwrap());
}

#[test]
fn sweep_row_count_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "sweep",
        "--graph",
        "community",
        "--n",
        "120",
        "--methods",
        "proposed-line,proposed-edge,direct-dct,direct-lra,direct-gfb,binary",
        "--points",
        "0.1,0.5,1.0",
        "--seed",
        "3",
    ];
    ok(d, &[&args[..], &["--out", "a.csv"]].concat());
    ok(d, &[&args[..], &["--out", "b.csv"]].concat());
    let a = fs::read_to_string(d.join("a.csv")).unwrap();
    // Header plus five methods at three points plus one binary row.
    assert_eq!(a.lines().count(), 1 + 5 * 3 + 1);
    assert!(a.starts_with("method,operating_point,bytes_topology"));
    assert_eq!(a, fs::read_to_string(d.join("b.csv")).unwrap());
    let refs = fs::read_to_string(d.join("a.csv.refs.json")).unwrap();
    assert!(refs.contains("lossless_weighted_bytes"));
    assert_eq!(refs, fs::read_to_string(d.join("b.csv.refs.json")).unwrap());
}

#[test]
fn sweep_json_and_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("cfg.toml"),
        "format = \"json\"\nmethods = [\"binary\", \"proposed-line\"]\npoints = [0.5]\nn = 110\ntrials = 0\nclusters = 0\n",
    )
    .unwrap();
    ok(d, &["sweep", "--config", "cfg.toml", "--graph", "sensor", "--out", "s.json"]);
    let text = fs::read_to_string(d.join("s.json")).unwrap();
    assert_eq!(text.matches("\"method\"").count(), 2);
    assert!(text.contains("\"diffusion_snr_db\": null"));

    // A flag overrides the config file.
    ok(d, &["sweep", "--config", "cfg.toml", "--graph", "sensor", "--format", "csv", "--out", "s.csv"]);
    let csv = fs::read_to_string(d.join("s.csv")).unwrap();
    assert!(csv.starts_with("method,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn eval_reports_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "community", "--n", "150", "--seed", "5", "--out", "g.txt"]);
    ok(d, &["compress", "--in", "g.txt", "--out", "g.gwac", "--rho", "1", "--step", "0.001"]);
    let out = ok(d, &["eval", "--in", "g.gwac", "--graph", "g.txt", "--seed", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "proposed-line");
    let snr: f64 = fields[5].parse().unwrap();
    assert!(snr > 40.0, "snr {snr}");
    assert_eq!(fields[7], "1.0");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&gwac(d, &["nonsense"])), 1);
    assert_eq!(code(&gwac(d, &["compress", "--in", "x"])), 1);
    assert_eq!(code(&gwac(d, &["generate", "--kind", "lattice", "--out", "g.txt"])), 1);
    ok(d, &["generate", "--kind", "er", "--n", "60", "--out", "g.txt"]);
    for bad in [
        &["--mode", "diagonal"][..],
        &["--rho", "0"],
        &["--rho", "1.5"],
        &["--K", "3"],
        &["--mmax", "9"],
        &["--step", "-1"],
    ] {
        let out = gwac(d, &[&["compress", "--in", "g.txt", "--out", "g.gwac"][..], bad].concat());
        assert_eq!(code(&out), 1, "{bad:?}");
    }
    assert!(!d.join("g.gwac").exists());
    assert_eq!(code(&gwac(d, &["sweep", "--graph", "er", "--n", "60", "--methods", "zip", "--out", "s.csv"])), 1);
    fs::write(d.join("bad.toml"), "colour = 3\n").unwrap();
    assert_eq!(code(&gwac(d, &["--config", "bad.toml", "decompress", "--in", "a", "--out", "b"])), 1);
    assert_eq!(code(&gwac(d, &["--help"])), 0);
}

#[test]
fn data_errors_exit_two_naming_the_section() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "sensor", "--n", "100", "--seed", "1", "--out", "g.txt"]);
    ok(d, &["compress", "--in", "g.txt", "--out", "g.gwac", "--rho", "0.5"]);
    let bytes = fs::read(d.join("g.gwac")).unwrap();

    let cases: Vec<(Vec<u8>, &str)> = vec![
        (b"NOPE".iter().chain(&bytes[4..]).copied().collect(), "header"),
        (bytes[..20].to_vec(), "header"),
        (bytes[..60].to_vec(), "topology"),
        (bytes[..bytes.len() - 3].to_vec(), "weights"),
        ([&bytes[..4], &[9u8], &bytes[5..]].concat(), "version"),
    ];
    for (i, (data, section)) in cases.iter().enumerate() {
        let name = format!("bad{i}.gwac");
        fs::write(d.join(&name), data).unwrap();
        let out = gwac(d, &["decompress", "--in", &name, "--out", "r.txt"]);
        assert_eq!(code(&out), 2, "case {i}");
        let msg = String::from_utf8_lossy(&out.stderr);
        assert!(msg.contains(section), "case {i}: {msg}");
    }
    assert!(!d.join("r.txt").exists());

    fs::write(d.join("broken.txt"), "3 1\n0 1 abc\n").unwrap();
    let out = gwac(d, &["compress", "--in", "broken.txt", "--out", "b.gwac"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&gwac(d, &["decompress", "--in", "missing.gwac", "--out", "r.txt"])), 2);
}
