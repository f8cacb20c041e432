//! The invariant suite behind `fkd validate`; pass `--quick` to skip the
//! eigensolver checks.

use faber_krahn::harness::validate;

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let report = validate(quick);
    for c in &report.checks {
        println!(
            "{:<22} {:<4} measured {:.3e} {} {:.1e}",
            c.name,
            if c.passed { "ok" } else { "FAIL" },
            c.measured,
            c.requirement,
            c.tolerance
        );
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
