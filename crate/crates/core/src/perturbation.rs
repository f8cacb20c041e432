//! Harmonically perturbed balls.
//!
//! A boundary velocity V on S^{N−1} is a finite sum of normalized harmonics.
//! The perturbed ball is the radial graph r = c(t)(1 + tV(ξ)) with c(t)
//! fixing the volume at ω_N.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, HalfIntOrder};
use crate::error::{Error, Result};
use crate::harmonics::{harmonic, laplace_beltrami_eigenvalue, Phase};
use crate::quadrature::GaussLegendre;
use crate::special::unit_ball_volume;
use crate::spectral::{self, dimension_params};

/// Uniform angles for the planar quadrature.
pub const CIRCLE_NODES: usize = 2048;
/// Gauss–Legendre nodes in cos θ for surfaces of revolution.
pub const ZONAL_NODES: usize = 512;
/// Largest t·max|V| accepted when building a perturbed ball.
pub const STAR_SHAPE_GUARD: f64 = 0.5;
/// Highest degree the exact-geometry quadratures integrate without aliasing.
pub const MAX_GEOMETRY_DEGREE: u32 = 256;

const SUP_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    #[serde(rename = "k")]
    pub degree: u32,
    #[serde(rename = "a")]
    pub coefficient: f64,
    pub phase: Phase,
}

impl Mode {
    pub fn new(degree: u32, coefficient: f64, phase: Phase) -> Self {
        Self {
            degree,
            coefficient,
            phase,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileSpec {
    dim: u32,
    modes: Vec<Mode>,
}

/// Boundary velocity V = Σ a Y on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileSpec", into = "ProfileSpec")]
pub struct HarmonicProfile {
    dim: u32,
    modes: Vec<Mode>,
}

impl TryFrom<ProfileSpec> for HarmonicProfile {
    type Error = Error;

    fn try_from(spec: ProfileSpec) -> Result<Self> {
        Self::new(spec.dim, spec.modes)
    }
}

impl From<HarmonicProfile> for ProfileSpec {
    fn from(p: HarmonicProfile) -> Self {
        Self {
            dim: p.dim,
            modes: p.modes,
        }
    }
}

impl HarmonicProfile {
    pub fn new(dim: u32, modes: Vec<Mode>) -> Result<Self> {
        if !(2..=spectral::MAX_DIMENSION).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &modes {
            if m.degree == 0 {
                return Err(Error::InvalidProfile(
                    "degree 0 violates the volume constraint".into(),
                ));
            }
            if !m.phase.valid_for(dim) {
                return Err(Error::InvalidProfile(format!(
                    "phase {:?} is not available in dimension {dim}",
                    m.phase
                )));
            }
            if !m.coefficient.is_finite() {
                return Err(Error::InvalidProfile("non-finite coefficient".into()));
            }
            // ℓ_k must stay inside the supported Bessel range for the field
            if HalfIntOrder::for_mode(dim, m.degree)?.twice() > bessel::MAX_TWICE_ORDER - 2 {
                return Err(Error::InvalidProfile(format!("degree {} too large", m.degree)));
            }
            if !seen.insert((m.degree, m.phase)) {
                return Err(Error::InvalidProfile(format!(
                    "duplicate mode k = {} ({:?})",
                    m.degree, m.phase
                )));
            }
        }
        Ok(Self { dim, modes })
    }

    /// V ≡ 0.
    pub fn empty(dim: u32) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// A single unit-coefficient harmonic of degree k: cosine for N = 2, zonal otherwise.
    pub fn single(dim: u32, degree: u32) -> Result<Self> {
        let phase = if dim == 2 { Phase::Cos } else { Phase::Zonal };
        Self::new(dim, vec![Mode::new(degree, 1.0, phase)])
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_empty(&self) -> bool {
        self.modes.iter().all(|m| m.coefficient == 0.0)
    }

    pub fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            modes: self
                .modes
                .iter()
                .map(|m| Mode::new(m.degree, -m.coefficient, m.phase))
                .collect(),
        }
    }

    /// Per-degree energy a_k² (cosine and sine parts pooled).
    pub fn degree_energies(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for m in &self.modes {
            *out.entry(m.degree).or_insert(0.0) += m.coefficient * m.coefficient;
        }
        out
    }

    /// ‖V‖²_{L²(S^{N−1})}.
    pub fn norm_squared(&self) -> f64 {
        self.degree_energies().values().sum()
    }

    /// Lowest degree k ≥ 2 carrying energy.
    pub fn lowest_active_degree(&self) -> Option<u32> {
        self.degree_energies()
            .into_iter()
            .find(|(k, e)| *k >= 2 && *e > 0.0)
            .map(|(k, _)| k)
    }

    pub fn max_degree(&self) -> u32 {
        self.modes.iter().map(|m| m.degree).max().unwrap_or(0)
    }

    /// V(θ) and dV/dθ.
    pub fn evaluate(&self, theta: f64) -> (f64, f64) {
        self.modes.iter().fold((0.0, 0.0), |(v, dv), m| {
            let (y, dy) = harmonic(self.dim, m.degree, m.phase, theta);
            (v + m.coefficient * y, dv + m.coefficient * dy)
        })
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.evaluate(theta).0
    }

    /// max |V| sampled densely over the angle range.
    pub fn sup_norm(&self) -> f64 {
        let span = if self.dim == 2 { 2.0 * PI } else { PI };
        (0..=SUP_SAMPLES)
            .map(|i| self.value(span * i as f64 / SUP_SAMPLES as f64).abs())
            .fold(0.0, f64::max)
    }

    /// ∫_{S^{N−1}} V dσ by quadrature (N = 2, 3); zero by orthogonality otherwise.
    pub fn sphere_integral(&self) -> f64 {
        match self.dim {
            2 => circle_quadrature(|theta| self.value(theta)),
            3 => zonal_quadrature(|theta| self.value(theta)),
            _ => 0.0,
        }
    }
}

fn circle_quadrature<F: Fn(f64) -> f64>(f: F) -> f64 {
    let h = 2.0 * PI / CIRCLE_NODES as f64;
    (0..CIRCLE_NODES).map(|j| f(j as f64 * h)).sum::<f64>() * h
}

fn zonal_rule() -> &'static GaussLegendre {
    static RULE: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ZONAL_NODES))
}

/// ∫_{S²} f(θ) dσ for zonal f, as 2π ∫_{−1}^{1} f(acos x) dx.
fn zonal_quadrature<F: Fn(f64) -> f64>(f: F) -> f64 {
    2.0 * PI * zonal_rule().integrate(-1.0, 1.0, |x| f(x.acos()))
}

fn check_geometry_dim(dim: u32) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A volume-normalized star-shaped domain r < c(t)(1 + tV(ξ)).
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedBall {
    profile: HarmonicProfile,
    t: f64,
    scale: f64,
}

impl PerturbedBall {
    pub fn profile(&self) -> &HarmonicProfile {
        &self.profile
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The volume-normalizing factor c(t).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> u32 {
        self.profile.dim
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.scale * (1.0 + self.t * self.profile.value(theta))
    }

    pub fn radius_derivative(&self, theta: f64) -> f64 {
        self.scale * self.t * self.profile.evaluate(theta).1
    }
}

/// Rescale 1 + tV so the enclosed volume equals ω_N.
pub fn normalize_volume(profile: &HarmonicProfile, t: f64) -> Result<PerturbedBall> {
    check_geometry_dim(profile.dim)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::DegenerateDomain(format!("t must be finite and >= 0, got {t}")));
    }
    if profile.max_degree() > MAX_GEOMETRY_DEGREE {
        return Err(Error::InvalidProfile(format!(
            "degree {} exceeds the geometry limit {MAX_GEOMETRY_DEGREE}",
            profile.max_degree()
        )));
    }
    let sup = profile.sup_norm();
    if t * sup >= 1.0 {
        return Err(Error::DegenerateDomain(format!(
            "min(1 + tV) <= 0 at t = {t} (max|V| = {sup})"
        )));
    }
    if t * sup > STAR_SHAPE_GUARD {
        return Err(Error::DegenerateDomain(format!(
            "t·max|V| = {} exceeds the star-shape guard {STAR_SHAPE_GUARD}",
            t * sup
        )));
    }
    let dim = profile.dim;
    let raw = match dim {
        2 => 0.5 * circle_quadrature(|theta| (1.0 + t * profile.value(theta)).powi(2)),
        _ => zonal_quadrature(|theta| (1.0 + t * profile.value(theta)).powi(3)) / 3.0,
    };
    let scale = (unit_ball_volume(dim) / raw).powf(1.0 / f64::from(dim));
    Ok(PerturbedBall {
        profile: profile.clone(),
        t,
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    pub perimeter: f64,
    pub volume: f64,
    pub delta_p: f64,
}

/// Perimeter, volume and isoperimetric deficit by spectrally accurate quadrature.
pub fn geometry_exact(ball: &PerturbedBall) -> Result<Geometry> {
    let dim = ball.dim();
    check_geometry_dim(dim)?;
    let (perimeter, volume) = if dim == 2 {
        let per = circle_quadrature(|theta| ball.radius(theta).hypot(ball.radius_derivative(theta)));
        let vol = 0.5 * circle_quadrature(|theta| ball.radius(theta).powi(2));
        (per, vol)
    } else {
        let per = zonal_quadrature(|theta| {
            let r = ball.radius(theta);
            r * r.hypot(ball.radius_derivative(theta))
        });
        let vol = zonal_quadrature(|theta| ball.radius(theta).powi(3)) / 3.0;
        (per, vol)
    };
    let n = f64::from(dim);
    let omega = unit_ball_volume(dim);
    let reference = n * omega.powf(1.0 / n) * volume.powf((n - 1.0) / n);
    Ok(Geometry {
        perimeter,
        volume,
        delta_p: perimeter / reference - 1.0,
    })
}

/// Analytic t² coefficients of δP and δλ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeficitCoefficients {
    pub c_p: f64,
    pub c_lambda: f64,
}

impl DeficitCoefficients {
    /// c_P / c_λ; NaN when no degree k ≥ 2 is active.
    pub fn ratio(&self) -> f64 {
        if self.c_lambda > 0.0 {
            self.c_p / self.c_lambda
        } else {
            f64::NAN
        }
    }
}

/// (δP, δλ) for one domain together with the analytic coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeficitPair {
    pub delta_p: f64,
    pub delta_lambda: f64,
    pub c_p: f64,
    pub c_lambda: f64,
}

impl DeficitPair {
    /// δP/δλ, defined when δλ > 0.
    pub fn ratio(&self) -> Option<f64> {
        (self.delta_lambda > 0.0).then(|| self.delta_p / self.delta_lambda)
    }
}

/// c_P = Σ a_k²(ℓ_k² − N²/4) / (2Nω_N) and c_λ = (G_N/z_N)² Σ a_k²(ℓ_k + N/2 − z_N ρ_k), k ≥ 2.
pub fn deficit_coeffs(profile: &HarmonicProfile) -> Result<DeficitCoefficients> {
    let dim = profile.dim;
    let p = dimension_params(dim)?;
    let n = f64::from(dim);
    let mut perimeter_sum = 0.0;
    let mut eigen_sum = 0.0;
    for (degree, energy) in profile.degree_energies() {
        if degree < 2 {
            continue;
        }
        perimeter_sum += energy * spectral::perimeter_mode_factor(dim, degree);
        eigen_sum += energy * spectral::eigen_mode_factor(dim, degree)?;
    }
    Ok(DeficitCoefficients {
        c_p: perimeter_sum / (2.0 * n * p.omega_n),
        c_lambda: (p.g_n / p.z_n).powi(2) * eigen_sum,
    })
}

/// λ''(0) = 2G_N² Σ a_k² (k − z_N ρ_k + N − 1); degree-1 terms vanish identically
/// and are skipped.
pub fn second_variation(profile: &HarmonicProfile) -> Result<f64> {
    let dim = profile.dim;
    let p = dimension_params(dim)?;
    let mut sum = 0.0;
    for (degree, energy) in profile.degree_energies() {
        if degree < 2 {
            continue;
        }
        let k = f64::from(degree);
        let rho = spectral::mode_ratio(dim, degree)?;
        sum += energy * (k - p.z_n * rho + f64::from(dim) - 1.0);
    }
    Ok(2.0 * p.g_n * p.g_n * sum)
}

/// λ'(0) = −G_N² ∫ V dσ.
pub fn first_variation(profile: &HarmonicProfile) -> Result<f64> {
    let p = dimension_params(profile.dim)?;
    Ok(-p.g_n * p.g_n * profile.sphere_integral())
}

/// r^{1−N/2} J_ℓ(z_N r) / J_ℓ(z_N), the radial factor of degree k in v.
fn radial_factor(dim: u32, degree: u32, z: f64, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let order = HalfIntOrder::for_mode(dim, degree)?;
    let num = bessel::bessel_j(order, z * r)?;
    let den = bessel::bessel_j(order, z)?;
    Ok(r.powf(1.0 - f64::from(dim) / 2.0) * num / den)
}

/// The Fourier–Bessel field v(r, ξ) = G_N r^{1−N/2} Σ a_k J_{ℓ_k}(z_N r)/J_{ℓ_k}(z_N) Y_k(ξ),
/// normalized so that v(1, ξ) = G_N V(ξ).
pub fn v_field(profile: &HarmonicProfile, r: f64, theta: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&r) {
        return Err(Error::Domain(format!("v is defined for r in [0, 1], got {r}")));
    }
    let p = dimension_params(profile.dim)?;
    let mut sum = 0.0;
    for m in profile.modes() {
        let y = harmonic(profile.dim, m.degree, m.phase, theta).0;
        sum += m.coefficient * radial_factor(profile.dim, m.degree, p.z_n, r)? * y;
    }
    Ok(p.g_n * sum)
}

/// ∂v/∂r at r = 1: G_N Σ (k − z_N ρ_k) a_k Y_k(ξ).
pub fn v_boundary_slope(profile: &HarmonicProfile, theta: f64) -> Result<f64> {
    let p = dimension_params(profile.dim)?;
    let mut sum = 0.0;
    for m in profile.modes() {
        let rho = spectral::mode_ratio(profile.dim, m.degree)?;
        let y = harmonic(profile.dim, m.degree, m.phase, theta).0;
        sum += (f64::from(m.degree) - p.z_n * rho) * m.coefficient * y;
    }
    Ok(p.g_n * sum)
}

/// Evaluation points and finite-difference step for [`poisson_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonGrid {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    pub step: f64,
}

impl PoissonGrid {
    /// r_i = i/n for i = 3..=n with step 1/n, and `n_angles` angles over the
    /// profile's angular range.
    pub fn uniform(dim: u32, n_radial: usize, n_angles: usize) -> Self {
        let step = 1.0 / n_radial as f64;
        let span = if dim == 2 { 2.0 * PI } else { PI };
        Self {
            radii: (3..=n_radial).map(|i| i as f64 * step).collect(),
            angles: (0..n_angles).map(|j| span * j as f64 / n_angles as f64).collect(),
            step,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonResidual {
    pub max_residual: f64,
    pub max_abs_v: f64,
}

/// max |−r^{1−N}∂_r(r^{N−1}∂_r v) − r^{−2}Δ_ξ v − z_N² v| over the grid, radial
/// derivatives by fourth-order central differences.
pub fn poisson_residual(profile: &HarmonicProfile, grid: &PoissonGrid) -> Result<PoissonResidual> {
    check_geometry_dim(profile.dim)?;
    let h = grid.step;
    if !(h > 0.0) || grid.radii.iter().any(|&r| r - 2.0 * h < 0.0) {
        return Err(Error::Domain("grid radii must satisfy r >= 2h > 0".into()));
    }
    let p = dimension_params(profile.dim)?;
    let n = f64::from(profile.dim);
    let z = p.z_n;

    // residual and value of each mode's radial part at each radius
    let mut radial: Vec<Vec<(f64, f64)>> = Vec::with_capacity(profile.modes().len());
    for m in profile.modes() {
        let eig = laplace_beltrami_eigenvalue(profile.dim, m.degree);
        let f = |r: f64| radial_factor(profile.dim, m.degree, z, r).map(|v| p.g_n * v);
        let mut column = Vec::with_capacity(grid.radii.len());
        for &r in &grid.radii {
            let (fm2, fm1, f0, fp1, fp2) = (f(r - 2.0 * h)?, f(r - h)?, f(r)?, f(r + h)?, f(r + 2.0 * h)?);
            let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
            let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
            let residual = -d2 - (n - 1.0) / r * d1 + eig / (r * r) * f0 - z * z * f0;
            column.push((residual, f0));
        }
        radial.push(column);
    }

    let mut max_residual: f64 = 0.0;
    let mut max_abs_v: f64 = 0.0;
    for &theta in &grid.angles {
        let ys: Vec<f64> = profile
            .modes()
            .iter()
            .map(|m| m.coefficient * harmonic(profile.dim, m.degree, m.phase, theta).0)
            .collect();
        for i in 0..grid.radii.len() {
            let (res, val) = radial
                .iter()
                .zip(&ys)
                .fold((0.0, 0.0), |(a, b), (col, y)| (a + col[i].0 * y, b + col[i].1 * y));
            max_residual = max_residual.max(res.abs());
            max_abs_v = max_abs_v.max(val.abs());
        }
    }
    Ok(PoissonResidual {
        max_residual,
        max_abs_v,
    })
}
