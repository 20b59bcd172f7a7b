#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

pub fn hilbheis(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbheis"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `curve` on a spec written to `dir/<name>.json`, output into `dir/<name>/`.
pub fn curve(dir: &Path, name: &str, spec: &str) -> PathBuf {
    let input = write(dir, &format!("{name}.json"), spec);
    let out = dir.join(name);
    let r = hilbheis(&["curve", "--input", s(&input), "--output", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    out
}
