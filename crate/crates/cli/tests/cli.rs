use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cavity-bell"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse_csv(text: &str, delimiter: u8) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rd = csv::ReaderBuilder::new().delimiter(delimiter).from_reader(text.as_bytes());
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn curve(text: &str) -> Vec<(f64, f64)> {
    parse_csv(text, b',').1.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["fig2", "--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &[][..],
        &["bogus"],
        &["table1", "--scheme", "c"],
        &["fig1", "--step", "0"],
        &["fig1", "--step", "-1"],
        &["fig1", "--eta-min", "5", "--eta-max", "1"],
        &["fig2", "--n", "1,2"],
        &["correlate", "--scheme", "phase", "--eta", "1"],
        &["correlate", "--case", "I", "--scheme", "phase"],
        &["table1", "--n", ""],
        &["table1", "--plot", "x.svg"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_output_fails() {
    let o = run(&["fig1", "--step", "1", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}

#[test]
fn fig1_defaults() {
    let o = run(&["fig1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (header, rows) = parse_csv(&text, b',');
    assert_eq!(header, ["eta2", "value"]);
    assert_eq!(rows.len(), 25_001);
    let pts = curve(&text);
    assert_eq!(pts[0], (0.0, 0.0));
    let (eta, v) = pts[3300];
    assert!((eta - 3.3).abs() < 1e-9);
    assert!(v.abs() > 0.98);
    assert_eq!(pts.last().unwrap().0, 25.0);
}

#[test]
fn outputs_are_deterministic_and_parallelism_is_invisible() {
    let a = run(&["fig2"]);
    let b = run(&["fig2"]);
    let c = run(&["fig2", "--sequential"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let args = ["table1", "--eta-max", "4", "--step", "0.01", "--n", "0,1"];
    let t1 = run(&args);
    let t2 = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(code(&t1), 0);
    assert_eq!(t1.stdout, t2.stdout);
    assert_eq!(t1.stdout, run(&seq).stdout);
}

#[test]
fn out_file_matches_stdout_and_tsv_has_same_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let o = run(&["fig1", "--step", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let file = fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout(&run(&["fig1", "--step", "0.5"])));
    let tsv = stdout(&run(&["fig1", "--step", "0.5", "--format", "tsv"]));
    assert_eq!(parse_csv(&tsv, b'\t'), parse_csv(&file, b','));
}

#[test]
fn numeric_cells_have_six_significant_digits() {
    let text = stdout(&run(&["fig2", "--step", "0.01"]));
    for row in parse_csv(&text, b',').1 {
        for cell in row {
            let v: f64 = cell.parse().unwrap();
            if v != 0.0 {
                let digits = cell.trim_start_matches('-').replace('.', "");
                let digits = digits.split('e').next().unwrap().trim_start_matches('0');
                assert_eq!(digits.len(), 6, "{cell}");
            }
        }
    }
}

#[test]
fn fig2_violation_windows() {
    let pts = curve(&stdout(&run(&["fig2"])));
    assert_eq!(pts.len(), 18_801);
    // the window [12.0, 12.7] is quoted to one decimal; the violation ends near 12.68
    for &(eta, s) in pts.iter().filter(|p| (12.0..=12.68).contains(&p.0)) {
        assert!(s >= 2.0, "{eta}: {s}");
    }
    let at = |x: f64| pts.iter().find(|p| (p.0 - x).abs() < 1e-9).unwrap().1;
    assert!(at(1.0) < 2.0);
    assert!(at(7.5) < 2.0);
    assert!(at(0.0).abs() < 1e-12);
}

#[test]
fn fig2_without_first_rotation_follows_beta() {
    let pts = curve(&stdout(&run(&["fig2", "--eta1", "0", "--step", "0.01"])));
    for (eta2, s) in pts {
        let want = 2.0 * (2.0 * eta2).cos().abs();
        assert!((s - want).abs() <= 1e-5 * want.max(1e-3), "{eta2}: {s} vs {want}");
    }
}

#[test]
fn plots_are_written() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["fig1", "fig2"] {
        let svg = dir.path().join(format!("{sub}.svg"));
        let o = run(&[sub, "--step", "0.05", "--plot", svg.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let body = fs::read_to_string(&svg).unwrap();
        assert!(body.starts_with("<svg") && body.contains("<polyline"));
    }
}

#[test]
fn correlate_examples() {
    let eta = format!("{}", PI / SQRT_2);
    let o = run(&["correlate", "--case", "II", "--scheme", "phase", "--n", "0", "--eta", &eta]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o), b',');
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let e: f64 = rows[0][col("e_generic")].parse().unwrap();
    assert!((e - 0.766).abs() <= 0.002, "{e}");
    assert_eq!(rows[0][col("check")], "PASS");

    let half = format!("{FRAC_PI_2}");
    let o = run(&["correlate", "--case", "III", "--scheme", "bloch", "--eta1", &half, "--eta2", &half]);
    assert_eq!(code(&o), 0);
    let (_, rows) = parse_csv(&stdout(&o), b',');
    assert_eq!(rows[0][col("e_generic")], "-1.00000");
    assert_eq!(rows[0][col("e_closed")], "-1.00000");
}

#[test]
fn correlate_passes_everywhere_sampled() {
    for (case, scheme) in [("I", "phase"), ("II", "bloch"), ("III", "b"), ("1", "a")] {
        let o = run(&[
            "correlate",
            "--case",
            case,
            "--scheme",
            scheme,
            "--n",
            "0,3,6",
            "--eta1",
            "1.7",
            "--eta2",
            "22.1",
            "--angle1",
            "0.4",
            "--angle2",
            "-2.9",
        ]);
        assert_eq!(code(&o), 0);
        let rows = parse_csv(&stdout(&o), b',').1;
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.last().unwrap() == "PASS"));
    }
}

#[test]
fn table1_empty_cavity_restriction() {
    let o = run(&["table1", "--n", "0", "--case", "I", "--scheme", "phase", "--eta-max", "5"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o), b',');
    assert_eq!(header.len(), 14);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][..3], ["I", "phase", "equal"]);
    assert_eq!(rows[0][12], "0.00");
    assert_eq!(rows[1][2], "unequal");
}

#[test]
fn scan_sweep_matches_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let eta1 = PI / (4.0 * SQRT_2);
    let cfg = write_config(
        dir.path(),
        &format!("# fig2 again\ncase = III\nscheme = B\nsubcase = ii\nn = 1\neta1 = {eta1:?}\neta_max = 18.8\nstep = 0.01\n"),
    );
    let o = run(&["scan", &cfg]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = parse_csv(&stdout(&o), b',');
    let s_col = header.iter().position(|h| h == "s").unwrap();
    let fig2 = parse_csv(&stdout(&run(&["fig2", "--step", "0.01"])), b',').1;
    assert_eq!(rows.len(), fig2.len());
    for (r, f) in rows.iter().zip(&fig2) {
        assert_eq!(r[5], f[0]);
        assert_eq!(r[s_col], f[1]);
    }
}

#[test]
fn scan_rows_are_sorted_by_selector_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "case = III, I\nscheme = bloch, phase\nsubcase = unequal, equal\nn = 2, 0\neta1 = 0.9, 0.2\neta_max = 1\nstep = 0.25\n",
    );
    let o = run(&["scan", &cfg, "--format", "tsv"]);
    assert_eq!(code(&o), 0);
    let rows = parse_csv(&stdout(&o), b'\t').1;
    // 2 cases x 2 schemes x 2 n x (5 equal + 2 x 5 unequal)
    assert_eq!(rows.len(), 2 * 2 * 2 * 15);
    let rank = |r: &Vec<String>| {
        let case = ["I", "II", "III"].iter().position(|c| *c == r[0]).unwrap();
        let scheme = ["phase", "bloch"].iter().position(|c| *c == r[1]).unwrap();
        let sub = ["equal", "unequal"].iter().position(|c| *c == r[2]).unwrap();
        let n: u32 = r[3].parse().unwrap();
        let e1: f64 = r[4].parse().unwrap();
        let e2: f64 = r[5].parse().unwrap();
        (case, scheme, sub, n, (e1 * 1e6) as i64, (e2 * 1e6) as i64)
    };
    let keys: Vec<_> = rows.iter().map(rank).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn scan_optimize_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mode = optimize\ncase = III\nscheme = phase\nn = 0\neta_max = 8\n");
    let o = run(&["scan", &cfg]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o), b',');
    assert_eq!(rows.len(), 2);
    let s: f64 = rows[1][header.len() - 1].parse().unwrap();
    assert!((s - 2.0 * SQRT_2).abs() < 1e-3, "{s}");
}

#[test]
fn config_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    for (body, line) in [
        ("case = I\nn =\n", ":2:"),
        ("n = 1\n# note\ncolour = red\n", ":3:"),
        ("n = 1\nstep = fast\n", ":2:"),
        ("n = 1\nn = 2\n", ":2:"),
        ("case = I\n", ":0:"),
    ] {
        let cfg = write_config(dir.path(), body);
        let o = run(&["scan", &cfg]);
        assert_eq!(code(&o), 2, "{body}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(line), "{body}");
        assert!(o.stdout.is_empty());
    }
    let missing = dir.path().join("absent.cfg");
    assert_eq!(code(&run(&["scan", missing.to_str().unwrap()])), 2);
}
