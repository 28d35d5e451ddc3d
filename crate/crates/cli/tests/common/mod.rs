#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture() -> String {
    crate_dir()
        .join("../core/fixtures/rtm-example.ttl")
        .to_string_lossy()
        .into_owned()
}

pub fn query(name: &str) -> String {
    crate_dir()
        .join("../core/fixtures/queries")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn sis_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sis"));
    cmd.args(args).env_remove("SIS_PREFIXES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn sis(args: &[&str]) -> Run {
    sis_with_env(args, &[])
}

pub const KNOWN: &str = "ex:Geometry,ex:ResinViscosity,ex:ShellFEModel";
