//! Mapped-polar eigensolver on the disk and on a perturbed disk, with
//! Richardson extrapolation over a grid ladder.

use faber_krahn::eigensolver::{
    extrapolated_eigenvalue, solve_dirichlet_eig, Disk, PolarGrid, RadiusFn,
};

fn main() -> faber_krahn::Result<()> {
    let ladder: Vec<PolarGrid> = [(32, 64), (64, 128), (128, 256), (256, 512)]
        .into_iter()
        .map(|(n_r, n_theta)| PolarGrid::new(n_r, n_theta))
        .collect::<Result<_, _>>()?;

    for &grid in &ladder {
        let r = solve_dirichlet_eig(&Disk::unit(), grid)?;
        println!(
            "disk {:>3} x {:<3} lambda_h = {:.12} ({} iterations, residual {:.1e})",
            grid.n_r, grid.n_theta, r.lambda_h, r.iterations, r.residual
        );
    }
    let (ex, _) = extrapolated_eigenvalue(&Disk::unit(), &ladder)?;
    println!("disk extrapolated lambda* = {:.12}, order {:.4}", ex.lambda_star, ex.order);

    let ellipse_like = RadiusFn {
        radius: |th: f64| 1.0 + 0.1 * (2.0 * th).cos(),
        derivative: |th: f64| -0.2 * (2.0 * th).sin(),
    };
    let (ex, _) = extrapolated_eigenvalue(&ellipse_like, &ladder)?;
    println!("r = 1 + 0.1 cos 2θ: lambda* = {:.12}, order {:.4}", ex.lambda_star, ex.order);
    Ok(())
}
