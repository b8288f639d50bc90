use std::path::Path;
use std::process::{Command, Output};

use ssgt::cloud::read_ply;
use ssgt::eval::{psnr, synth_cloud, PSNR_SENTINEL, REPORT_HEADER};

fn ssgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssgt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn near_lossless_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (file, ply) = (path(dir.path(), "a.ssgt"), path(dir.path(), "a.ply"));
    let enc = ssgt(&["encode", "--input", "synth:seed=42,n=800", "--depth", "6", "--q", "0.001", "--output", &file]);
    assert_eq!(enc.status.code(), Some(0), "{}", stderr(&enc));
    let summary = stdout(&enc);
    for key in ["points=", "bpp=", "geometry_bytes="] {
        assert!(summary.lines().any(|l| l.starts_with(key)), "{summary}");
    }

    let dec = ssgt(&["decode", "--input", &file, "--output", &ply]);
    assert_eq!(dec.status.code(), Some(0), "{}", stderr(&dec));

    let decoded = read_ply(&std::fs::read(&ply).unwrap()).unwrap();
    let original = synth_cloud(42, 800, 6).unwrap().to_raw();
    assert_eq!(decoded.len(), original.len());
    for c in 0..3 {
        let a: Vec<f64> = original.colors.iter().map(|p| f64::from(p[c])).collect();
        let b: Vec<f64> = decoded.colors.iter().map(|p| f64::from(p[c])).collect();
        assert_eq!(psnr(&a, &b).unwrap(), PSNR_SENTINEL);
    }
    for (p, q) in original.points.iter().zip(&decoded.points) {
        assert_eq!(p, q);
    }
}

#[test]
fn info_dumps_header() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "b.ssgt");
    let args = ["encode", "--input", "synth:seed=1,n=200", "--depth", "4", "--transform", "raht", "--q", "10:20:30"];
    let enc = ssgt(&[&args[..], &["--output", &file]].concat());
    assert_eq!(enc.status.code(), Some(0), "{}", stderr(&enc));
    let info = ssgt(&["info", "--input", &file]);
    assert_eq!(info.status.code(), Some(0));
    let text = stdout(&info);
    for line in ["transform=raht", "depth=4", "q=10:20:30", "points=200"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
    for key in ["alpha=", "step=", "geometry_bytes=", "payload_bits=", "origin=", "edge="] {
        assert!(text.contains(key));
    }
}

#[test]
fn step_must_divide_depth() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "c.ssgt");
    let o = ssgt(&["encode", "--input", "synth:seed=1,n=50", "--depth", "5", "--step", "2", "--output", &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("L mod s"));
    assert!(!Path::new(&out).exists());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(ssgt(&["bogus"]).status.code(), Some(1));
    assert_eq!(ssgt(&["encode", "--input", "synth:seed=1,n=5"]).status.code(), Some(1));
    let bad_q = ssgt(&["eval", "--input", "synth:seed=1,n=5", "--depth", "2", "--q", "1:2"]);
    assert_eq!(bad_q.status.code(), Some(1));
    let bad_t = ssgt(&["eval", "--input", "synth:seed=1,n=5", "--depth", "2", "--transform", "dct"]);
    assert_eq!(bad_t.status.code(), Some(1));
    let bad_synth = ssgt(&["eval", "--input", "synth:seed=1", "--depth", "2"]);
    assert_eq!(bad_synth.status.code(), Some(1));
    let zero_q = ssgt(&["eval", "--input", "synth:seed=1,n=5", "--depth", "2", "--q", "0"]);
    assert_eq!(zero_q.status.code(), Some(1));
    assert_eq!(ssgt(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "nope.ply");
    let out = path(dir.path(), "x.ssgt");
    let o = ssgt(&["encode", "--input", &missing, "--depth", "4", "--output", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.ply"));
    assert_eq!(ssgt(&["decode", "--input", &missing, "--output", &out]).status.code(), Some(2));
}

#[test]
fn malformed_files_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let junk = path(dir.path(), "junk");
    std::fs::write(&junk, b"ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nend_header\n1\n").unwrap();
    let out = path(dir.path(), "out");
    assert_eq!(ssgt(&["encode", "--input", &junk, "--depth", "4", "--output", &out]).status.code(), Some(3));
    assert_eq!(ssgt(&["decode", "--input", &junk, "--output", &out]).status.code(), Some(3));
    assert_eq!(ssgt(&["info", "--input", &junk]).status.code(), Some(3));
    assert!(!Path::new(&out).exists());
}

#[test]
fn escape_overflow_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "d.ssgt");
    let o = ssgt(&["encode", "--input", "synth:seed=1,n=50", "--depth", "4", "--q", "1e-9", "--output", &out]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(!Path::new(&out).exists());
}

#[test]
fn sweep_defaults_to_both_transforms_and_five_steps() {
    let o = ssgt(&["sweep", "--input", "synth:seed=2,n=300", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], REPORT_HEADER);
    assert_eq!(lines.len(), 11);
    assert!(lines[1..6].iter().all(|l| l.contains(",raht,")));
    assert!(lines[6..].iter().all(|l| l.contains(",ssgt,4,2,")));
    let qs: Vec<&str> = lines[1..6].iter().map(|l| l.split(',').nth(6).unwrap()).collect();
    assert_eq!(qs, ["15.0", "20.0", "25.0", "30.0", "35.0"]);
}

#[test]
fn sweep_and_eval_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(dir.path(), "rd.csv");
    let o = ssgt(&[
        "sweep",
        "--input",
        "synth:seed=2,n=300",
        "--depth",
        "4",
        "--transform",
        "ssgt",
        "--step",
        "1",
        "--q-list",
        "10,40",
        "--report",
        &report,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(!text.contains('\r'));

    let e = ssgt(&["eval", "--input", "synth:seed=2,n=300", "--depth", "4", "--q", "12"]);
    assert_eq!(e.status.code(), Some(0));
    let text = stdout(&e);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains(",ssgt,4,2,0.01,12.0,"));
}
