use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn limsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_limsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn csv_rows(p: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(p).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn compare_writes_edp_and_ten_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&["compare", "--size", "256", "--out", arg(tmp.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files = listing(tmp.path());
    assert_eq!(files.len(), 11);
    assert!(files.contains(&"edp.csv".to_string()));
    let edp = csv_rows(&tmp.path().join("edp.csv"));
    assert_eq!(edp[0], ["memory", "write", "read", "search", "and"]);
    assert_eq!(edp[1], ["SRAM", "134.00", "118.00", "", ""]);
    let t = csv_rows(&tmp.path().join("and_vs_and.csv"));
    assert_eq!(t[2], ["AND DYN", "+1948.98", "", ""]);
}

#[test]
fn uncalibrated_size_fails_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("o");
    let out = limsim(&["compare", "--size", "128", "--out", arg(&dir)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("128"));
    assert!(!dir.exists());
}

#[test]
fn compare_with_scaling_hook_covers_other_sizes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&[
        "compare",
        "--size",
        "128",
        "--scaling-exponent",
        "2",
        "--out",
        arg(tmp.path()),
    ]);
    assert!(out.status.success());
    let edp = csv_rows(&tmp.path().join("edp.csv"));
    assert_eq!(edp[1][2], "29.50");
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "[array]\nvariant = and_st\nspeed = fast\n").unwrap();
    let out = limsim(&["maxmin", "--config", arg(&cfg), "--out", arg(tmp.path())]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("speed") && err.contains("line 3"), "{err}");
}

#[test]
fn same_config_and_seed_give_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(
        &cfg,
        "seed = 42\n[array]\nvariant = and_dyn\nrows = 40\n[maxmin]\nmode = min\nencoding = twos_complement\nwidth = 12\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let dir = tmp.path().join(run);
        for cmd in ["maxmin", "simulate", "netlist", "compare", "audit"] {
            let sub = dir.join(cmd);
            let mut args = vec![cmd, "--config", arg(&cfg), "--out", arg(&sub)];
            if cmd == "netlist" {
                args.extend(["--rows", "32", "--cols", "64"]);
            }
            if cmd == "simulate" {
                args.extend(["--cols", "16"]);
            }
            let out = limsim(&args);
            assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        }
        let mut files = Vec::new();
        for cmd in listing(&dir) {
            for f in listing(&dir.join(&cmd)) {
                files.push((format!("{cmd}/{f}"), fs::read(dir.join(&cmd).join(&f)).unwrap()));
            }
        }
        outputs.push(files);
    }
    assert!(outputs[0].len() >= 17);
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn maxmin_reports_oracle_agreement_and_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&[
        "maxmin",
        "--words",
        "0111,1000,0111,0001",
        "--mode",
        "max",
        "--encoding",
        "twos_complement",
        "--out",
        arg(tmp.path()),
    ]);
    assert!(out.status.success());
    let res = csv_rows(&tmp.path().join("result.csv"));
    assert_eq!(res[0], ["row", "word", "value", "steps", "oracle_row", "oracle_value", "agrees"]);
    assert_eq!(res[1], ["0", "0111", "7", "4", "0", "7", "true"]);
    let trace = csv_rows(&tmp.path().join("trace.csv"));
    assert_eq!(trace.len(), 5);
    assert_eq!(trace[1][3], "min");
    assert_eq!(trace[1][6], "1011");
}

#[test]
fn maxmin_batch_mode() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&["maxmin", "--batch", "300", "--seed", "9", "--out", arg(tmp.path())]);
    assert!(out.status.success());
    let rows = csv_rows(&tmp.path().join("batch.csv"));
    assert_eq!(rows.len(), 301);
    assert!(rows[1..].iter().all(|r| r[9] == "true"));

    let seq = tmp.path().join("seq");
    let out = limsim(&["maxmin", "--batch", "300", "--seed", "9", "--sequential", "--out", arg(&seq)]);
    assert!(out.status.success());
    assert_eq!(read(&seq.join("batch.csv")), read(&tmp.path().join("batch.csv")));
}

#[test]
fn netlist_writes_two_decks() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&["netlist", "--variant", "cam", "--size", "64", "--out", arg(tmp.path())]);
    assert!(out.status.success());
    assert_eq!(listing(tmp.path()), ["netlist.sp", "stimuli.sp"]);
    let net = read(&tmp.path().join("netlist.sp"));
    assert_eq!(net.lines().filter(|l| l.starts_with("XDLOAD_")).count(), 64);
    let stim = read(&tmp.path().join("stimuli.sp"));
    assert!(stim.contains(".include \"netlist.sp\""));
}

#[test]
fn netlist_rejects_bad_requests() {
    let tmp = tempfile::tempdir().unwrap();
    let o = arg(tmp.path());
    let misaligned = limsim(&["netlist", "--rows", "100", "--cols", "64", "--out", o]);
    assert!(!misaligned.status.success());
    let unsupported = limsim(&["netlist", "--variant", "sram", "--ops", "and 1000", "--size", "32", "--out", o]);
    assert!(!unsupported.status.success());
    let other_row = limsim(&["netlist", "--ops", "read 3", "--out", o]);
    assert!(!other_row.status.success());
}

#[test]
fn simulate_logs_one_event_per_operation() {
    let tmp = tempfile::tempdir().unwrap();
    let ones = "1".repeat(32);
    let zeros = "0".repeat(32);
    let onehot = format!("1{}", "0".repeat(31));
    let ops = format!(
        "write 0 {ones}; write 1 {zeros}; read 0; search {ones}; and {onehot}; and {ones}; read 1; search {zeros}"
    );
    let out = limsim(&["simulate", "--variant", "and_sp", "--size", "32", "--ops", &ops, "--out", arg(tmp.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&tmp.path().join("events.csv"));
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][0], "index");
    assert_eq!(rows[3][10], ones);
    assert!(rows[5][10].starts_with("10"));
}

#[test]
fn audit_reports_no_unexplained_cells() {
    let tmp = tempfile::tempdir().unwrap();
    let out = limsim(&["audit", "--out", arg(tmp.path())]);
    assert!(out.status.success());
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("0 unexplained"), "{summary}");
    let rows = csv_rows(&tmp.path().join("audit.csv"));
    assert_eq!(rows.len(), 96);
    assert_eq!(rows.iter().filter(|r| r[6] == "fail").count(), 0);
}

#[test]
fn audit_fails_on_a_tampered_calibration() {
    let tmp = tempfile::tempdir().unwrap();
    let cal = tmp.path().join("cal.txt");
    fs::write(&cal, "memory,op,size,edp_pj_ps\ncam,read,256,300\n").unwrap();
    let out = limsim(&["audit", "--calibration", arg(&cal), "--out", arg(tmp.path())]);
    assert!(!out.status.success());
}

#[test]
fn library_entry_point_matches_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let summary = lim_cli::run(["limsim", "audit", "--out", arg(tmp.path())]).unwrap();
    let out = limsim(&["audit", "--out", arg(tmp.path())]);
    assert_eq!(format!("{summary}\n"), String::from_utf8_lossy(&out.stdout));
}
