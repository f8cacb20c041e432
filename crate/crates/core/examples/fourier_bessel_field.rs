//! The Fourier–Bessel field v solving the linearized eigenvalue problem, its
//! boundary data and the finite-difference residual of its PDE.

use faber_krahn::perturbation::{
    poisson_residual, second_variation, v_boundary_slope, v_field, HarmonicProfile, PoissonGrid,
};
use faber_krahn::spectral::dimension_params;

fn main() -> faber_krahn::Result<()> {
    for dim in [2, 3] {
        let p = HarmonicProfile::single(dim, 2)?;
        let g = dimension_params(dim)?.g_n;
        println!("N = {dim}, V = Y_2");
        for r in [0.25, 0.5, 0.75, 1.0] {
            println!("  v({r}, 0.3) = {:.12}", v_field(&p, r, 0.3)?);
        }
        println!("  G_N V(0.3)  = {:.12}", g * p.value(0.3));
        println!("  dv/dr(1, 0.3) = {:.12}", v_boundary_slope(&p, 0.3)?);
        println!("  lambda''(0) = {:.12}", second_variation(&p)?);
        for n in [50, 100, 200, 400] {
            let r = poisson_residual(&p, &PoissonGrid::uniform(dim, n, 16))?;
            println!("  radial grid {n:>3}: residual / max|v| = {:.3e}", r.max_residual / r.max_abs_v);
        }
    }
    Ok(())
}
