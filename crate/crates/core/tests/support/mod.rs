//! Helpers for driving the `risklab` binary against the documented examples.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

/// `(subcommand, config, golden csv)` for every documented example.
pub fn golden_cases() -> Vec<(&'static str, PathBuf, PathBuf)> {
    let mut cases: Vec<_> = std::fs::read_dir(examples_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|config| {
            let stem = config.file_stem().unwrap().to_str().unwrap().to_owned();
            let cmd = ["price", "smile", "hedge", "convexity", "check_measure"]
                .into_iter()
                .find(|c| stem.starts_with(c))
                .map(|c| if c == "check_measure" { "check-measure" } else { c })
                .unwrap_or_else(|| panic!("unrecognised example {stem}"));
            (cmd, config.clone(), config.with_extension("csv"))
        })
        .collect();
    cases.sort_by(|a, b| a.1.cmp(&b.1));
    cases
}

pub fn risklab(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_risklab"));
    cmd.args(args).env_remove("RISKLAB_THREADS");
    if let Some(n) = threads {
        cmd.env("RISKLAB_THREADS", n.to_string());
    }
    cmd.output().expect("failed to launch risklab")
}

/// Runs an example and returns stdout, panicking on a non-zero exit.
pub fn run_example(cmd: &str, config: &Path, threads: Option<usize>) -> Vec<u8> {
    let out = risklab(&[cmd, "--config", config.to_str().unwrap()], threads);
    assert!(
        out.status.success(),
        "{cmd} {}: {}",
        config.display(),
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}
