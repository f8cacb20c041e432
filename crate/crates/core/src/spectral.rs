//! Closed-form spectral constants of the unit ball and the deficit-ratio
//! sequence Q_k.
//!
//! Two independent routes reach the optimal constant: the direct formula
//! through the radial normalization integral and J'_ν(z_N), and the k = 2
//! member of the Q_k sequence, whose Bessel ratio comes from the continued
//! fraction.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::bessel::{self, HalfIntOrder};
use crate::error::{Error, Result};
use crate::special::unit_ball_volume;

pub const MAX_DIMENSION: u32 = 100;
pub const MAX_CRITERION_DIMENSION: u32 = 200;
pub const MAX_DEGREE: u32 = 1000;

/// Tolerances reported by [`q_convexity_report`].
pub const MONOTONE_TOLERANCE: f64 = 1e-12;
pub const CONVEXITY_TOLERANCE: f64 = 1e-10;

/// Constants of the unit ball in R^N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionParams {
    pub dim: u32,
    /// First zero of J_{N/2−1}.
    pub z_n: f64,
    pub omega_n: f64,
    /// First Dirichlet eigenvalue of the unit ball, z_N².
    pub lambda_ball: f64,
    /// Boundary gradient modulus of the normalized first eigenfunction.
    pub g_n: f64,
    /// ∫_0^{z_N} r J_{N/2−1}(r)² dr.
    pub radial_integral: f64,
    /// J'_{N/2−1}(z_N); negative.
    pub j_prime_at_zero: f64,
}

impl DimensionParams {
    pub fn order(&self) -> HalfIntOrder {
        HalfIntOrder::from_twice(self.dim - 2)
    }

    /// z_N² / (2 N ω_N G_N²), the common prefactor of every Q_k.
    pub fn q_prefactor(&self) -> f64 {
        let n = f64::from(self.dim);
        self.z_n * self.z_n / (2.0 * n * self.omega_n * self.g_n * self.g_n)
    }
}

fn check_dimension(dim: u32, max: u32) -> Result<()> {
    if !(2..=max).contains(&dim) {
        return Err(Error::Range(format!("dimension N = {dim} outside 2..={max}")));
    }
    Ok(())
}

/// Assemble z_N, ω_N, λ(0) and G_N. Memoized per N.
pub fn dimension_params(dim: u32) -> Result<DimensionParams> {
    check_dimension(dim, MAX_DIMENSION)?;
    static CACHE: OnceLock<Mutex<BTreeMap<u32, DimensionParams>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(params) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&dim) {
        return Ok(*params);
    }
    let params = compute_params(dim)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(dim, params);
    Ok(params)
}

fn compute_params(dim: u32) -> Result<DimensionParams> {
    let order = HalfIntOrder::for_dimension(dim)?;
    let z_n = bessel::first_zero(order)?;
    let omega_n = unit_ball_volume(dim);
    let radial_integral = bessel::radial_norm_integral_to(order, z_n)?;
    let j_prime_at_zero = bessel::bessel_j_prime(order, z_n)?;
    let n = f64::from(dim);
    // modulus: J'(z_N) < 0, only G_N² enters downstream
    let g_n = (z_n * z_n * j_prime_at_zero).abs() / (n * omega_n * radial_integral).sqrt();
    Ok(DimensionParams {
        dim,
        z_n,
        omega_n,
        lambda_ball: z_n * z_n,
        g_n,
        radial_integral,
        j_prime_at_zero,
    })
}

/// C_N = N(N+1) ∫_0^{z_N} r J² dr / [2 (z_N J'(z_N))² (z_N² − N)].
pub fn faber_krahn_constant(dim: u32) -> Result<f64> {
    let p = dimension_params(dim)?;
    let n = f64::from(dim);
    let zj = p.z_n * p.j_prime_at_zero;
    Ok(n * (n + 1.0) * p.radial_integral / (2.0 * zj * zj * (p.lambda_ball - n)))
}

/// ρ_k = J_{ℓ_k+1}(z_N) / J_{ℓ_k}(z_N) through the continued fraction.
pub fn mode_ratio(dim: u32, degree: u32) -> Result<f64> {
    let p = dimension_params(dim)?;
    bessel::bessel_ratio_cf(HalfIntOrder::for_mode(dim, degree)?, p.z_n)
}

/// ℓ_k + N/2 − z_N ρ_k, the per-mode factor of the eigenvalue deficit.
pub fn eigen_mode_factor(dim: u32, degree: u32) -> Result<f64> {
    let p = dimension_params(dim)?;
    let ell = HalfIntOrder::for_mode(dim, degree)?.value();
    Ok(ell + f64::from(dim) / 2.0 - p.z_n * mode_ratio(dim, degree)?)
}

/// ℓ_k² − N²/4 = k(k+N−2) − (N−1), the per-mode factor of the perimeter deficit.
pub fn perimeter_mode_factor(dim: u32, degree: u32) -> f64 {
    let (k, n) = (f64::from(degree), f64::from(dim));
    k * (k + n - 2.0) - (n - 1.0)
}

/// The limiting ratio δP/δλ for a pure degree-k perturbation.
pub fn q_value(dim: u32, degree: u32) -> Result<f64> {
    if degree < 2 {
        return Err(Error::InvalidMode(degree));
    }
    if degree > MAX_DEGREE {
        return Err(Error::Range(format!("degree k = {degree} exceeds {MAX_DEGREE}")));
    }
    let p = dimension_params(dim)?;
    let denominator = eigen_mode_factor(dim, degree)?;
    if denominator <= 0.0 {
        return Err(Error::Domain(format!(
            "non-positive eigenvalue factor {denominator} at N = {dim}, k = {degree}"
        )));
    }
    Ok(p.q_prefactor() * perimeter_mode_factor(dim, degree) / denominator)
}

/// (z_N² − 2)N² + 5 z_N² N − 2 z_N⁴; positive exactly when Q_2 < Q_3.
pub fn finale_criterion(dim: u32) -> Result<f64> {
    check_dimension(dim, MAX_CRITERION_DIMENSION)?;
    let z = bessel::first_zero(HalfIntOrder::for_dimension(dim)?)?;
    let (z2, n) = (z * z, f64::from(dim));
    Ok((z2 - 2.0) * n * n + 5.0 * z2 * n - 2.0 * z2 * z2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QTable {
    pub dim: u32,
    /// (k, Q_k) for k = 2..=kmax.
    pub entries: Vec<(u32, f64)>,
    pub c_n: f64,
}

impl QTable {
    pub fn build(dim: u32, kmax: u32) -> Result<Self> {
        if kmax < 2 {
            return Err(Error::InvalidMode(kmax));
        }
        let entries = (2..=kmax)
            .map(|k| q_value(dim, k).map(|q| (k, q)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim,
            entries,
            c_n: faber_krahn_constant(dim)?,
        })
    }

    pub fn q(&self, degree: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|(k, _)| *k == degree)
            .map(|(_, q)| *q)
    }
}

/// Q_k together with its first and second differences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QConvexityReport {
    pub table: QTable,
    /// (k, Q_{k+1} − Q_k) for k = 2..kmax−1.
    pub first_differences: Vec<(u32, f64)>,
    /// (k, Q_{k+1} − 2Q_k + Q_{k−1}) for k = 3..kmax−1.
    pub second_differences: Vec<(u32, f64)>,
    /// Degrees k where Q_{k+1} < Q_k − 1e-12.
    pub monotonicity_violations: Vec<u32>,
    /// Degrees k where the second difference is below −1e-10.
    pub convexity_violations: Vec<u32>,
}

impl QConvexityReport {
    pub fn is_clean(&self) -> bool {
        self.monotonicity_violations.is_empty() && self.convexity_violations.is_empty()
    }
}

pub fn q_convexity_report(dim: u32, kmax: u32) -> Result<QConvexityReport> {
    if kmax < 4 {
        return Err(Error::Range(format!("convexity report needs kmax >= 4, got {kmax}")));
    }
    let table = QTable::build(dim, kmax)?;
    let q = &table.entries;
    let first_differences: Vec<(u32, f64)> =
        q.windows(2).map(|w| (w[0].0, w[1].1 - w[0].1)).collect();
    let second_differences: Vec<(u32, f64)> = q
        .windows(3)
        .map(|w| (w[1].0, w[2].1 - 2.0 * w[1].1 + w[0].1))
        .collect();
    let monotonicity_violations = first_differences
        .iter()
        .filter(|(_, d)| *d < -MONOTONE_TOLERANCE)
        .map(|(k, _)| *k)
        .collect();
    let convexity_violations = second_differences
        .iter()
        .filter(|(_, d)| *d < -CONVEXITY_TOLERANCE)
        .map(|(k, _)| *k)
        .collect();
    Ok(QConvexityReport {
        table,
        first_differences,
        second_differences,
        monotonicity_violations,
        convexity_violations,
    })
}

/// ρ_k = J_{ℓ_k+1}(z_N)/J_{ℓ_k}(z_N) for k = kmin..=kmax.
pub fn ratio_sequence(dim: u32, kmin: u32, kmax: u32) -> Result<Vec<(u32, f64)>> {
    (kmin..=kmax)
        .map(|k| mode_ratio(dim, k).map(|r| (k, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    // 30-digit reference values of the closed forms
    const C2: f64 = 0.396_491_215_259_116_1;
    const Q3_N2: f64 = 0.621_588_012_444_266_8;
    const C3: f64 = 0.436_706_369_805_555_3;

    #[test]
    fn disk_params() {
        let p = dimension_params(2).unwrap();
        assert!((p.z_n - 2.404826).abs() < 1e-6);
        assert_relative_eq!(p.lambda_ball, 5.783_185_962_946_785, max_relative = 1e-14);
        assert_relative_eq!(p.g_n * p.g_n, p.lambda_ball / PI, max_relative = 1e-12);
        assert_relative_eq!(p.g_n * p.g_n, 1.840_845_265_645_287, max_relative = 1e-12);
    }

    #[test]
    fn ball_params() {
        let p = dimension_params(3).unwrap();
        assert_relative_eq!(p.z_n, PI, max_relative = 1e-15);
        assert_relative_eq!(p.lambda_ball, PI * PI, max_relative = 1e-15);
    }

    #[test]
    fn gradient_identity() {
        for dim in [2, 3, 4, 7, 20, 100] {
            let p = dimension_params(dim).unwrap();
            let n = f64::from(dim);
            let lhs = p.g_n * p.g_n * n * p.omega_n * p.radial_integral;
            let rhs = (p.lambda_ball * p.j_prime_at_zero).powi(2);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            assert!(p.g_n > 0.0);
        }
    }

    #[test]
    fn constant_reference_values() {
        assert_relative_eq!(faber_krahn_constant(2).unwrap(), C2, max_relative = 1e-12);
        assert_relative_eq!(faber_krahn_constant(3).unwrap(), C3, max_relative = 1e-12);
        assert_relative_eq!(q_value(3, 2).unwrap(), C3, max_relative = 1e-10);
    }

    #[test]
    fn q_values_for_the_disk() {
        assert_relative_eq!(q_value(2, 2).unwrap(), C2, max_relative = 1e-12);
        assert_relative_eq!(q_value(2, 3).unwrap(), Q3_N2, max_relative = 1e-12);
        assert!(q_value(3, 2).unwrap() < q_value(3, 3).unwrap());
    }

    #[test]
    fn low_modes_are_rejected() {
        assert!(matches!(q_value(2, 0), Err(Error::InvalidMode(0))));
        assert!(matches!(q_value(2, 1), Err(Error::InvalidMode(1))));
        assert!(matches!(q_value(2, 1001), Err(Error::Range(_))));
        assert!(matches!(dimension_params(1), Err(Error::Range(_))));
        assert!(matches!(dimension_params(101), Err(Error::Range(_))));
    }

    #[test]
    fn finale_for_the_disk() {
        // (z²−2)·4 + 10z² − 2z⁴ at z = j_0
        assert_relative_eq!(finale_criterion(2).unwrap(), 6.074_123_717_205_529, max_relative = 1e-12);
        assert!(finale_criterion(10).unwrap() > 0.0);
        assert!(finale_criterion(201).is_err());
    }

    #[test]
    fn convexity_report_n2() {
        let report = q_convexity_report(2, 50).unwrap();
        assert!(report.first_differences.iter().all(|(_, d)| *d > 0.0));
        assert!(report.is_clean());
        let short = q_convexity_report(2, 4).unwrap();
        let q: Vec<f64> = short.table.entries.iter().map(|e| e.1).collect();
        assert!(q[0] < q[1] && q[1] < q[2]);
        assert!(q_convexity_report(2, 3).is_err());
    }

    #[test]
    fn n9_is_monotone_but_not_convex_at_low_degree() {
        // the ratio sequence ρ_k is convex, yet Q_k bends down at k = 3..6 once N >= 6;
        // monotonicity survives (30-digit check: Q_4 − 2Q_3 + Q_2 = −0.0056028)
        let report = q_convexity_report(9, 50).unwrap();
        assert!(report.monotonicity_violations.is_empty());
        assert_eq!(report.convexity_violations.first(), Some(&3));
        let (_, d3) = report.second_differences[0];
        assert_relative_eq!(d3, -0.005_602_826_380_329_949, max_relative = 1e-9);
        let rho = ratio_sequence(9, 1, 51).unwrap();
        assert!(rho.windows(3).all(|w| w[2].1 - 2.0 * w[1].1 + w[0].1 >= -1e-12));
    }

    #[test]
    fn low_dimensions_are_convex() {
        for dim in 2..=5 {
            assert!(q_convexity_report(dim, 50).unwrap().is_clean(), "N={dim}");
        }
    }

    #[test]
    fn table_constant_matches_first_entry() {
        for dim in [2, 5, 12, 60] {
            let t = QTable::build(dim, 6).unwrap();
            assert_relative_eq!(t.c_n, t.q(2).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn translation_mode_has_vanishing_factors() {
        for dim in 2..=30 {
            assert_eq!(perimeter_mode_factor(dim, 1), 0.0);
            // ρ_{ℓ_1} = N / z_N makes 1 + N − 1 − z_N ρ vanish
            let p = dimension_params(dim).unwrap();
            let defect = f64::from(dim) - p.z_n * mode_ratio(dim, 1).unwrap();
            assert!(defect.abs() < 1e-11, "N={dim}: {defect}");
        }
    }
}
