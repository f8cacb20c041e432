//! δP/δλ along the family r = c(t)(1 + tY_k) in the plane: degree 2 tends to
//! C_2, higher degrees to Q_k > C_2.

use faber_krahn::harness::{run_convergence, Mode, RunConfig, Source};
use faber_krahn::perturbation::HarmonicProfile;

fn main() -> faber_krahn::Result<()> {
    let degrees: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let degrees = if degrees.is_empty() { vec![2, 3] } else { degrees };
    for k in degrees {
        let mut config = RunConfig::new(HarmonicProfile::single(2, k)?);
        config.mode = Mode::Both;
        let report = run_convergence(&config, None)?;
        println!("V = Y_{k}");
        print!("{}", report.to_csv());
        for fit in &report.summary.fits {
            let label = if fit.source == Source::Numeric { "numeric " } else { "analytic" };
            println!(
                "  {label} c0 = {:.6} (Q_{k} = {:.6}, gap {:+.2e}; C_2 = {:.6}, gap {:+.2e})",
                fit.c0,
                report.summary.q_k.unwrap_or(f64::NAN),
                fit.gap_to_q,
                report.summary.c_n,
                fit.gap_to_c_n
            );
        }
    }
    Ok(())
}
