//! First zeros z_N = j_{N/2−1} with their brackets, and a few Bessel values.

use faber_krahn::bessel::{bessel_j, bessel_ratio_cf, first_zero, HalfIntOrder, ZeroBracket};

fn main() -> faber_krahn::Result<()> {
    println!("{:>3} {:>6} {:>22} {:>22}", "N", "order", "z_N", "bracket");
    for dim in 2..=12 {
        let order = HalfIntOrder::for_dimension(dim)?;
        let z = first_zero(order)?;
        let b = ZeroBracket::for_order(order);
        println!("{dim:>3} {:>6} {z:>22.16} [{:.4}, {:.4}]", order.to_string(), b.lower, b.upper);
    }

    let nu = HalfIntOrder::from_twice(7);
    let x = 2.5;
    println!(
        "J_{nu}({x}) = {:.16e}, J_(nu+1)/J_nu by continued fraction = {:.16e}",
        bessel_j(nu, x)?,
        bessel_ratio_cf(nu, x)?
    );
    Ok(())
}
