use std::fs;
use std::process::{Command, Output};

fn scrollsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scrollsys"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const BOX: [&str; 10] = ["--n", "0..=2", "--a", "0..=3", "--b", "1..=4", "--m", "2..=3", "--r", "1..=5"];

#[test]
fn dim_reports_table_row() {
    let o = scrollsys(&["dim", "L1(0,4,2^5)", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("v = -1"));
    assert!(text.contains("row 1"));
    assert!(text.contains("l_est = 0"));
}

#[test]
fn dim_json_fields() {
    let o = scrollsys(&["--json", "dim", "L5(1,4,3^10)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["spec"], "L5(1,4,3^10)");
    assert_eq!(v["v"], -1);
}

#[test]
fn spec_round_trips_through_output() {
    for spec in ["L0(3,2,1^4)", "L4(3,6,2^9)", "L2(1,5,3^7,2,1^2)"] {
        let o = scrollsys(&["--json", "dim", spec]);
        assert_eq!(o.status.code(), Some(0), "{spec}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["spec"], spec);
    }
}

#[test]
fn usage_errors_exit_one() {
    let o = scrollsys(&["dim", "L1(0,4,2^x)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains('^'));
    assert_eq!(scrollsys(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(scrollsys(&["--prime", "4", "dim", "L1(0,4,2^5)"]).status.code(), Some(1));
    assert_eq!(scrollsys(&["--config", "/nonexistent/cfg", "dim", "L1(0,4,2^5)"]).status.code(), Some(1));
    assert_eq!(scrollsys(&["--help"]).status.code(), Some(0));
}

#[test]
fn open_case_is_inconclusive() {
    let o = scrollsys(&["prove", "L2(1,5,3^7)", "--no-oracle-leaves"]);
    assert_eq!(o.status.code(), Some(3));
    let o = scrollsys(&["prove", "L2(1,5,3^7)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle"));
}

#[test]
fn prove_verify_passes() {
    let o = scrollsys(&["prove", "L4(3,6,2^9)", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn paper_notes_flag() {
    let o = scrollsys(&["--paper-notes"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("m^{r-k}"));
    assert!(text.lines().count() > 10);
}

#[test]
fn scan_is_deterministic() {
    let mut args = vec!["scan"];
    args.extend(BOX);
    let first = scrollsys(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let second = scrollsys(&args);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("# scrollsys scan csv v1 columns=spec,v,e,l_est,verdict,table1_row,agree\n"));
    assert!(text.lines().skip(2).all(|l| l.ends_with(",true")));
    assert!(stderr(&first).contains("disagreements   0"));
}

fn resume_token(o: &Output) -> String {
    let err = stderr(o);
    let line = err.lines().find(|l| l.starts_with("resume: ")).expect("resume token");
    line["resume: ".len()..].to_string()
}

#[test]
fn resume_reproduces_the_stream() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let (full_s, part_s) = (full.to_str().unwrap(), part.to_str().unwrap());

    let mut args = vec!["scan", "--out", full_s];
    args.extend(BOX);
    assert_eq!(scrollsys(&args).status.code(), Some(0));

    let mut args = vec!["scan", "--out", part_s, "--limit", "37"];
    args.extend(BOX);
    let mut o = scrollsys(&args);
    for _ in 0..100 {
        if !stderr(&o).contains("resume: ") {
            break;
        }
        let token = resume_token(&o);
        let mut args = vec!["scan", "--out", part_s, "--limit", "37", "--resume", &token];
        args.extend(BOX);
        o = scrollsys(&args);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&full).unwrap(), fs::read(&part).unwrap());
}

#[test]
fn resume_rejects_other_configuration() {
    let mut args = vec!["scan", "--limit", "3"];
    args.extend(BOX);
    let token = resume_token(&scrollsys(&args));
    let o = scrollsys(&["scan", "--n", "0..=1", "--resume", &token]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("different scan configuration"));
}

#[test]
fn scan_json_lines() {
    let mut args = vec!["--json", "scan", "--limit", "5"];
    args.extend(BOX);
    let o = scrollsys(&args);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["agree"] == true));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.cfg");
    fs::write(&cfg, "# small box\nn = 1\na = 0..=2\nb = 2..=3\nm = 2\nr = 1..=3\nseed = 7\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();

    let from_file = scrollsys(&["--config", cfg_s, "scan"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let body = stdout(&from_file);
    let specs: Vec<&str> = body.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(specs.len(), 3 * 2 * 3);
    assert!(specs.iter().all(|s| s.starts_with("\"L1(")));

    let overridden = scrollsys(&["--config", cfg_s, "scan", "--n", "2"]);
    let body = stdout(&overridden);
    assert!(body.lines().skip(2).all(|l| l.starts_with("\"L2(")));

    fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(scrollsys(&["--config", cfg_s, "scan"]).status.code(), Some(1));
}
