//! Acceptance criteria 1 through 9, one line each. Runs without the libtest
//! harness so the lines always reach the console.

use std::process::{Command, ExitCode};
use std::time::Instant;

use reciplab::acceptance::{run_all, DEFAULT_SEED, SELFTEST_BUDGET};

fn selftest_binary() -> (bool, String, f64) {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_reciplab"))
        .arg("selftest")
        .output()
        .expect("reciplab binary runs");
    let secs = started.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines = stdout.lines().filter(|l| l.starts_with("criterion")).count();
    let ok = out.status.code() == Some(0) && lines == 8 && secs <= SELFTEST_BUDGET.as_secs_f64();
    let detail = format!(
        "`reciplab selftest` exit {:?}, {lines} criterion lines, {secs:.1} s (budget {} s)",
        out.status.code(),
        SELFTEST_BUDGET.as_secs()
    );
    (ok, detail, secs)
}

fn main() -> ExitCode {
    let mut all = true;
    for o in run_all(DEFAULT_SEED) {
        println!("{}", o.line());
        all &= o.passed;
    }
    let (ok, detail, secs) = selftest_binary();
    println!(
        "criterion 9 {} selftest end to end: {detail} ({secs:.1} s)",
        if ok { "PASS" } else { "FAIL" }
    );
    all &= ok;
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
