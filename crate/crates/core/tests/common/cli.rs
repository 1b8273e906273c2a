use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

pub fn run_bin(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_weylstack"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Golden file name and the classify arguments producing it.
pub const GOLDEN: [(&str, &[&str]); 5] = [
    ("classify_w111_l0.json", &["--weights", "1,1,1", "--twist", "0"]),
    ("classify_w23_l1.json", &["--weights", "2,3", "--twist", "1"]),
    ("classify_w24_l3.json", &["--weights", "2,4", "--twist", "3"]),
    ("classify_w111_lm5.json", &["--weights", "1,1,1", "--twist", "-5"]),
    ("classify_w122_l1_2.json", &["--weights", "1,2,2", "--twist", "1/2"]),
];

pub fn golden_args(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = vec!["classify"];
    v.extend_from_slice(extra);
    v.extend_from_slice(&["--output", "json"]);
    v
}

/// Invocations with their required exit status.
pub const EXIT_MATRIX: &[(&[&str], i32)] = &[
    (&["classify", "--weights", "1,1,1", "--twist", "0"], 0),
    (&["classify", "--weights", "2,3", "--twist", "generic", "--output", "json"], 0),
    (&["semigroup", "--weights", "6,9,20", "frobenius"], 0),
    (&["semigroup", "--weights", "2,3", "gaps"], 0),
    (&["semigroup", "--weights", "2,3", "member", "-1"], 0),
    (&["weyl", "--weights", "2,3", "[E, x0]"], 0),
    (&["verify", "--weights", "2,3", "--twist", "0", "koszul"], 0),
    (&["verify", "--weights", "1,1,1", "--twist", "-5", "--seed", "7", "--output", "json", "all"], 0),
    (&["classify", "--weights", "0,1", "--twist", "0"], 2),
    (&["classify", "--weights", "1", "--twist", "0"], 2),
    (&["classify", "--weights", "1,1", "--twist", "1/0"], 2),
    (&["classify", "--weights", "1,1", "--twist", "abc"], 2),
    (&["classify", "--weights", "1,1"], 2),
    (&["weyl", "x0 +"], 2),
    (&["weyl", "E"], 2),
    (&["verify", "--weights", "1,1", "--degree-lo", "3", "--degree-hi", "1", "euler"], 2),
    (&["frobnicate"], 2),
    (&["semigroup", "--weights", "2,4", "frobenius"], 3),
    (&["semigroup", "--weights", "3,6,9", "gaps"], 3),
    (&["verify", "--weights", "1,2", "--padding", "1", "koszul"], 3),
    (&["verify", "--weights", "2,3", "--twist", "1", "--degree-lo", "-3", "--degree-hi", "-1", "witnesses"], 4),
];
