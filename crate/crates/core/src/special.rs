//! Gamma function and unit-ball measures.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Γ(x). Integer and half-integer arguments up to 171 go through exact
/// products, everything else through the Lanczos series.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x <= 171.0 {
        let twice = 2.0 * x;
        if twice.fract() == 0.0 {
            let twice = twice as u32;
            // Γ(1) = 1, Γ(1/2) = √π, then Γ(x+1) = xΓ(x)
            let (mut value, mut arg) = if twice % 2 == 0 {
                (1.0, 1.0)
            } else {
                (PI.sqrt(), 0.5)
            };
            while arg < x {
                value *= arg;
                arg += 1.0;
            }
            return value;
        }
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma(x).exp()
}

/// Volume of the unit ball in R^N, π^{N/2} / Γ(N/2 + 1).
pub fn unit_ball_volume(dim: u32) -> f64 {
    let half = f64::from(dim) / 2.0;
    PI.powf(half) / gamma(half + 1.0)
}

/// Surface measure of the unit sphere S^{N-1}, N ω_N.
pub fn unit_sphere_area(dim: u32) -> f64 {
    f64::from(dim) * unit_ball_volume(dim)
}
