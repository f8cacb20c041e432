//! Deficit ratios Q_k per harmonic degree, their differences, and the
//! polynomial criterion.

use faber_krahn::harness::cmd_qseq;
use faber_krahn::spectral::q_convexity_report;

fn main() -> faber_krahn::Result<()> {
    let dim = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let report = cmd_qseq(dim, 12)?;
    print!("{}", report.to_csv());

    for n in [2, 5, 6, 9] {
        let r = q_convexity_report(n, 30)?;
        println!(
            "N = {n}: monotone = {}, second differences negative at k = {:?}",
            r.monotonicity_violations.is_empty(),
            r.convexity_violations
        );
    }
    Ok(())
}
