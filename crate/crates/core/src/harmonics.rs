//! L²-normalized spherical harmonics: Fourier modes on S¹ and zonal
//! (Gegenbauer) harmonics on S^{N−1}, N ≥ 3. Points on the sphere are given
//! by a single angle θ: the circle angle for N = 2, the polar angle otherwise.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::special::{ln_gamma, unit_sphere_area};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Cos,
    Sin,
    Zonal,
}

impl Phase {
    pub fn valid_for(self, dim: u32) -> bool {
        match self {
            Phase::Cos | Phase::Sin => dim == 2,
            Phase::Zonal => dim >= 3,
        }
    }
}

/// Eigenvalue of −Δ_ξ on S^{N−1} for degree k.
pub fn laplace_beltrami_eigenvalue(dim: u32, degree: u32) -> f64 {
    let k = f64::from(degree);
    k * (k + f64::from(dim) - 2.0)
}

/// Gegenbauer C_n^λ(x) by the three-term recurrence.
pub fn gegenbauer(n: u32, lambda: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut c0, mut c1) = (1.0, 2.0 * lambda * x);
    for m in 2..=n {
        let mf = f64::from(m);
        let c2 = (2.0 * x * (mf + lambda - 1.0) * c1 - (mf + 2.0 * lambda - 2.0) * c0) / mf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// ∫_{S^{N−1}} C_k^λ(cos θ)² dσ with λ = N/2 − 1.
fn zonal_norm_squared(dim: u32, degree: u32) -> f64 {
    let lambda = f64::from(dim) / 2.0 - 1.0;
    let k = f64::from(degree);
    // |S^{N−2}| · π 2^{1−2λ} Γ(k+2λ) / (k! (k+λ) Γ(λ)²)
    let log_weight = (PI).ln() + (1.0 - 2.0 * lambda) * 2f64.ln() + ln_gamma(k + 2.0 * lambda)
        - ln_gamma(k + 1.0)
        - (k + lambda).ln()
        - 2.0 * ln_gamma(lambda);
    unit_sphere_area(dim - 1) * log_weight.exp()
}

/// Y(θ) and dY/dθ for a normalized harmonic of the given degree and phase.
pub fn harmonic(dim: u32, degree: u32, phase: Phase, theta: f64) -> (f64, f64) {
    match phase {
        Phase::Cos | Phase::Sin => {
            let k = f64::from(degree);
            let norm = if degree == 0 { (2.0 * PI).sqrt() } else { PI.sqrt() };
            let (s, c) = (k * theta).sin_cos();
            if phase == Phase::Cos {
                (c / norm, -k * s / norm)
            } else {
                (s / norm, k * c / norm)
            }
        }
        Phase::Zonal => {
            let lambda = f64::from(dim) / 2.0 - 1.0;
            let norm = zonal_norm_squared(dim, degree).sqrt();
            let (s, x) = theta.sin_cos();
            let value = gegenbauer(degree, lambda, x) / norm;
            let derivative = if degree == 0 {
                0.0
            } else {
                -s * 2.0 * lambda * gegenbauer(degree - 1, lambda + 1.0, x) / norm
            };
            (value, derivative)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;
    use approx::assert_relative_eq;

    #[test]
    fn circle_modes_are_orthonormal() {
        let n = 512;
        let h = 2.0 * PI / n as f64;
        for k in 1..6 {
            for phase in [Phase::Cos, Phase::Sin] {
                let norm: f64 = (0..n)
                    .map(|j| harmonic(2, k, phase, j as f64 * h).0.powi(2))
                    .sum::<f64>()
                    * h;
                assert_relative_eq!(norm, 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn zonal_modes_are_orthonormal() {
        let rule = GaussLegendre::new(64);
        for dim in [3u32, 5] {
            // odd N: the weight (1−x²)^{(N−3)/2} is polynomial
            let power = (dim - 3) / 2;
            let area_lower = unit_sphere_area(dim - 1);
            for a in 1..6 {
                for b in 1..6 {
                    let got = area_lower
                        * rule.integrate(-1.0, 1.0, |x| {
                            let theta = x.acos();
                            (1.0 - x * x).powi(power as i32)
                                * harmonic(dim, a, Phase::Zonal, theta).0
                                * harmonic(dim, b, Phase::Zonal, theta).0
                        });
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!((got - expected).abs() < 1e-12, "N={dim} {a},{b}: {got}");
                }
            }
        }
    }

    #[test]
    fn legendre_case() {
        // Y_2 on S² = √(5/4π) (3x² − 1)/2
        let theta = 0.7f64;
        let x = theta.cos();
        let expected = (5.0 / (4.0 * PI)).sqrt() * (3.0 * x * x - 1.0) / 2.0;
        assert_relative_eq!(harmonic(3, 2, Phase::Zonal, theta).0, expected, max_relative = 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for (dim, phase) in [(2, Phase::Cos), (2, Phase::Sin), (3, Phase::Zonal), (6, Phase::Zonal)] {
            for k in 1..5 {
                let theta = 0.9;
                let fd = (harmonic(dim, k, phase, theta + h).0 - harmonic(dim, k, phase, theta - h).0)
                    / (2.0 * h);
                let d = harmonic(dim, k, phase, theta).1;
                assert!((fd - d).abs() < 1e-8, "N={dim} k={k}");
            }
        }
    }
}
