//! Perimeter and volume of volume-normalized perturbed balls against the
//! analytic t² coefficient of the isoperimetric deficit.

use faber_krahn::harmonics::Phase;
use faber_krahn::perturbation::{deficit_coeffs, geometry_exact, normalize_volume, HarmonicProfile, Mode};

fn main() -> faber_krahn::Result<()> {
    let profiles = [
        HarmonicProfile::single(2, 2)?,
        HarmonicProfile::new(2, vec![Mode::new(3, 0.6, Phase::Cos), Mode::new(3, 0.8, Phase::Sin)])?,
        HarmonicProfile::single(3, 2)?,
        HarmonicProfile::new(3, vec![Mode::new(2, 1.0, Phase::Zonal), Mode::new(4, 0.5, Phase::Zonal)])?,
    ];
    for p in &profiles {
        let c = deficit_coeffs(p)?;
        println!("N = {}, modes = {:?}, c_P = {:.10}", p.dim(), p.modes(), c.c_p);
        for t in [0.04, 0.02, 0.01] {
            let ball = normalize_volume(p, t)?;
            let g = geometry_exact(&ball)?;
            println!(
                "  t = {t:<5} c(t) = {:.12} volume = {:.14} delta_P = {:.6e} delta_P/t^2 = {:.8}",
                ball.scale(),
                g.volume,
                g.delta_p,
                g.delta_p / (t * t)
            );
        }
    }
    Ok(())
}
