//! Determinism acceptance check: a fixed-seed self check must report byte
//! for byte the same thing on every run.

use std::process::Command;

fn selftest_report() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_sphaural"))
        .args(["selftest", "--seed", "7", "--order", "4", "-v"])
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "selftest failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    out.stdout
}

#[test]
fn criterion_9_selftest_reports_are_byte_identical() {
    let first = selftest_report();
    let second = selftest_report();
    let verdict = if first == second { "PASS" } else { "FAIL" };
    println!(
        "criterion 9 (fixed-seed selftest reports are byte-identical): {verdict} — {} bytes compared",
        first.len()
    );
    assert_eq!(first, second);
}
