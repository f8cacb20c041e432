//! The optimal constant C_N alongside the ball data it is built from.

use faber_krahn::harness::cmd_constants;

fn main() -> faber_krahn::Result<()> {
    println!("{:>4} {:>20} {:>20} {:>20} {:>20}", "N", "z_N", "omega_N", "G_N", "C_N");
    for dim in [2, 3, 4, 5, 8, 10, 20, 50, 100] {
        let r = cmd_constants(dim)?;
        println!("{dim:>4} {:>20.15} {:>20.12e} {:>20.12e} {:>20.15}", r.z_n, r.omega_n, r.g_n, r.c_n);
    }
    let j0 = cmd_constants(2)?.z_n;
    println!("planar closed form 3/(2(j0^2 - 2)) = {:.15}", 3.0 / (2.0 * (j0 * j0 - 2.0)));
    Ok(())
}
