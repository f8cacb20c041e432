//! First Dirichlet eigenvalue of star-shaped planar domains r < ρ(θ).
//!
//! The Laplacian is discretized in mapped polar coordinates s = r/ρ(θ), where
//! the Dirichlet energy becomes
//! ∫∫ [s(1+g²)U_s² − 2g U_s U_φ + U_φ²/s] ds dφ with g = ρ'/ρ
//! and the mass is ∫∫ U² sρ² ds dφ. Cell-centred finite volumes give a
//! symmetric nine-point stiffness K and a diagonal mass M; the smallest
//! eigenpair of K u = λ M u comes from zero-shift inverse iteration with
//! conjugate-gradient inner solves, preconditioned by the φ-averaged operator
//! (FFT in φ, tridiagonal in s).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perturbation::{normalize_volume, HarmonicProfile, PerturbedBall};
use crate::spectral::dimension_params;

pub const MIN_RADIAL_CELLS: usize = 16;
pub const MIN_ANGULAR_NODES: usize = 64;
pub const MAX_OUTER_ITERATIONS: usize = 500;
pub const EIGEN_TOLERANCE: f64 = 1e-12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const INNER_TOLERANCE: f64 = 1e-13;
const MAX_INNER_ITERATIONS: usize = 2000;
const MAX_RESTARTS: usize = 8;
const ROUNDOFF_FLOOR: f64 = 1e-9;

/// Cell-centred polar grid: s_i = (i + 1/2)/n_r and θ_j = 2πj/n_theta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
}

impl PolarGrid {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        if n_r < MIN_RADIAL_CELLS {
            return Err(Error::Domain(format!("n_r must be >= {MIN_RADIAL_CELLS}, got {n_r}")));
        }
        if n_theta < MIN_ANGULAR_NODES || n_theta % 2 != 0 {
            return Err(Error::Domain(format!(
                "n_theta must be even and >= {MIN_ANGULAR_NODES}, got {n_theta}"
            )));
        }
        Ok(Self { n_r, n_theta })
    }

    /// Radial cell width h = 1/n_r.
    pub fn h(&self) -> f64 {
        1.0 / self.n_r as f64
    }

    pub fn d_theta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    pub fn radial_node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h()
    }

    pub fn angular_node(&self, j: usize) -> f64 {
        j as f64 * self.d_theta()
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Default refinement ladder, halving h at each step.
pub fn default_grid_ladder() -> Vec<PolarGrid> {
    [(64, 128), (128, 256), (256, 512)]
        .into_iter()
        .map(|(n_r, n_theta)| PolarGrid { n_r, n_theta })
        .collect()
}

/// A domain r < ρ(θ) with ρ smooth, positive and 2π-periodic.
pub trait StarDomain: Sync {
    fn radius(&self, theta: f64) -> f64;
    fn radius_derivative(&self, theta: f64) -> f64;
}

/// The disk of the given radius about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub radius: f64,
}

impl Disk {
    pub fn unit() -> Self {
        Self { radius: 1.0 }
    }
}

impl StarDomain for Disk {
    fn radius(&self, _theta: f64) -> f64 {
        self.radius
    }

    fn radius_derivative(&self, _theta: f64) -> f64 {
        0.0
    }
}

impl StarDomain for PerturbedBall {
    fn radius(&self, theta: f64) -> f64 {
        PerturbedBall::radius(self, theta)
    }

    fn radius_derivative(&self, theta: f64) -> f64 {
        PerturbedBall::radius_derivative(self, theta)
    }
}

/// A domain given by a radius function and its derivative.
pub struct RadiusFn<F, D> {
    pub radius: F,
    pub derivative: D,
}

impl<F, D> StarDomain for RadiusFn<F, D>
where
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    fn radius(&self, theta: f64) -> f64 {
        (self.radius)(theta)
    }

    fn radius_derivative(&self, theta: f64) -> f64 {
        (self.derivative)(theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigResult {
    pub lambda_h: f64,
    pub iterations: usize,
    /// ‖K u − λ M u‖₂ / (λ ‖M u‖₂).
    pub residual: f64,
    pub grid: PolarGrid,
    /// Cell values with unit discrete L² mass, index i·n_theta + j, positive sum.
    #[serde(skip)]
    pub eigenvector: Vec<f64>,
}

impl EigResult {
    /// Most negative entry relative to the largest; zero for a one-signed vector.
    pub fn sign_defect(&self) -> f64 {
        let max = self.eigenvector.iter().cloned().fold(0.0, f64::max);
        let min = self.eigenvector.iter().cloned().fold(0.0, f64::min);
        if max > 0.0 {
            -min / max
        } else {
            f64::INFINITY
        }
    }
}

const STENCIL: usize = 9;

fn slot(di: isize, dj: isize) -> usize {
    ((di + 1) * 3 + (dj + 1)) as usize
}

struct Operator {
    grid: PolarGrid,
    stencil: Vec<[f64; STENCIL]>,
    /// Dirichlet face weight of each cell in the outermost ring.
    boundary: Vec<f64>,
    mass: Vec<f64>,
}

impl Operator {
    fn assemble<D: StarDomain + ?Sized>(domain: &D, grid: PolarGrid) -> Result<Self> {
        let (n, m) = (grid.n_r, grid.n_theta);
        let h = grid.h();
        let dphi = grid.d_theta();
        let mut rho = vec![0.0; m];
        let mut g = vec![0.0; m];
        let mut g_mid = vec![0.0; m];
        for j in 0..m {
            let theta = grid.angular_node(j);
            let r = domain.radius(theta);
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::DegenerateDomain(format!("ρ({theta}) = {r}")));
            }
            rho[j] = r;
            g[j] = domain.radius_derivative(theta) / r;
            let half = theta + 0.5 * dphi;
            g_mid[j] = domain.radius_derivative(half) / domain.radius(half);
        }

        let mut stencil = vec![[0.0; STENCIL]; n * m];
        let mut boundary = vec![0.0; m];
        let idx = |i: usize, j: usize| i * m + j % m;
        let add = |stencil: &mut Vec<[f64; STENCIL]>, row: (usize, usize), col_di: isize, col_dj: isize, v: f64| {
            stencil[idx(row.0, row.1)][slot(col_di, col_dj)] += v;
        };

        for j in 0..m {
            let a = 1.0 + g[j] * g[j];
            // s-faces between cells i and i+1
            for i in 0..n - 1 {
                let w = dphi * (i + 1) as f64 * h * a / h;
                add(&mut stencil, (i, j), 0, 0, w);
                add(&mut stencil, (i, j), 1, 0, -w);
                add(&mut stencil, (i + 1, j), 0, 0, w);
                add(&mut stencil, (i + 1, j), -1, 0, -w);
            }
            // Dirichlet face at s = 1, ghost half a cell outside
            boundary[j] = 2.0 * dphi * a / h;
            add(&mut stencil, (n - 1, j), 0, 0, boundary[j]);
            // φ-faces between j and j+1
            for i in 0..n {
                let w = h / (grid.radial_node(i) * dphi);
                add(&mut stencil, (i, j), 0, 0, w);
                add(&mut stencil, (i, j), 0, 1, -w);
                add(&mut stencil, (i, (j + 1) % m), 0, 0, w);
                add(&mut stencil, (i, (j + 1) % m), 0, -1, -w);
            }
            // mixed term at interior vertices (s_{i+1/2}, φ_{j+1/2})
            let c = -h * dphi * g_mid[j];
            if c != 0.0 {
                let cells = [(0isize, 0isize), (1, 0), (0, 1), (1, 1)];
                let alpha = [-0.5 / h, 0.5 / h, -0.5 / h, 0.5 / h];
                let beta = [-0.5 / dphi, -0.5 / dphi, 0.5 / dphi, 0.5 / dphi];
                for i in 0..n - 1 {
                    for (p, &(pi, pj)) in cells.iter().enumerate() {
                        for (q, &(qi, qj)) in cells.iter().enumerate() {
                            let v = c * (alpha[p] * beta[q] + beta[p] * alpha[q]);
                            let row = (i + pi as usize, j + pj as usize);
                            add(&mut stencil, (row.0, row.1 % m), qi - pi, qj - pj, v);
                        }
                    }
                }
            }
        }

        let mut mass = vec![0.0; n * m];
        for i in 0..n {
            for j in 0..m {
                mass[idx(i, j)] = grid.radial_node(i) * rho[j] * rho[j] * h * dphi;
            }
        }
        Ok(Self {
            grid,
            stencil,
            boundary,
            mass,
        })
    }

    /// K x in difference form, Σ_nb K_{c,nb}(x_nb − x_c) plus the Dirichlet term.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (n, m) = (self.grid.n_r, self.grid.n_theta);
        y.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            for (j, out) in row.iter_mut().enumerate() {
                let st = &self.stencil[i * m + j];
                let jm = (j + m - 1) % m;
                let jp = (j + 1) % m;
                let xc = x[i * m + j];
                let mut acc = if i + 1 == n { self.boundary[j] * xc } else { 0.0 };
                for (di, ii) in [(-1isize, i.wrapping_sub(1)), (0, i), (1, i + 1)] {
                    if ii >= n {
                        continue;
                    }
                    let base = ii * m;
                    acc += st[slot(di, -1)] * (x[base + jm] - xc) + st[slot(di, 1)] * (x[base + jp] - xc);
                    if di != 0 {
                        acc += st[slot(di, 0)] * (x[base + j] - xc);
                    }
                }
                *out = acc;
            }
        });
    }
}

/// K₀: the stiffness with g² replaced by its φ-mean and no mixed term,
/// diagonalized by the DFT in φ.
struct Preconditioner {
    grid: PolarGrid,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    /// Thomas-eliminated diagonals and multipliers per Fourier mode.
    diag: Vec<f64>,
    lower: Vec<f64>,
    off: Vec<f64>,
}

impl Preconditioner {
    fn new<D: StarDomain + ?Sized>(domain: &D, grid: PolarGrid) -> Self {
        let (n, m) = (grid.n_r, grid.n_theta);
        let h = grid.h();
        let dphi = grid.d_theta();
        let mean_g2 = (0..m)
            .map(|j| {
                let theta = grid.angular_node(j);
                (domain.radius_derivative(theta) / domain.radius(theta)).powi(2)
            })
            .sum::<f64>()
            / m as f64;
        let a = 1.0 + mean_g2;
        let off: Vec<f64> = (0..n - 1).map(|i| -dphi * (i + 1) as f64 * a).collect();
        let mut base = vec![0.0; n];
        for i in 0..n {
            if i > 0 {
                base[i] -= off[i - 1];
            }
            if i + 1 < n {
                base[i] -= off[i];
            }
        }
        base[n - 1] += 2.0 * dphi * a / h;
        let mut diag = vec![0.0; n * m];
        let mut lower = vec![0.0; n * m];
        for k in 0..m {
            let mu = 2.0 - 2.0 * (2.0 * PI * k as f64 / m as f64).cos();
            let d = &mut diag[k * n..(k + 1) * n];
            let l = &mut lower[k * n..(k + 1) * n];
            for i in 0..n {
                let mut di = base[i] + mu * h / (grid.radial_node(i) * dphi);
                if i > 0 {
                    l[i] = off[i - 1] / d[i - 1];
                    di -= l[i] * off[i - 1];
                }
                d[i] = di;
            }
        }
        let mut planner = FftPlanner::new();
        Self {
            grid,
            fft: planner.plan_fft_forward(m),
            ifft: planner.plan_fft_inverse(m),
            diag,
            lower,
            off,
        }
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let (n, m) = (self.grid.n_r, self.grid.n_theta);
        let mut spectrum: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        spectrum.par_chunks_mut(m).for_each(|row| self.fft.process(row));
        // transpose to mode-major, solve, transpose back
        let mut modes = vec![Complex64::new(0.0, 0.0); n * m];
        modes.par_chunks_mut(n).enumerate().for_each(|(k, col)| {
            for i in 0..n {
                col[i] = spectrum[i * m + k];
            }
            let d = &self.diag[k * n..(k + 1) * n];
            let l = &self.lower[k * n..(k + 1) * n];
            for i in 1..n {
                let prev = col[i - 1];
                col[i] -= prev * l[i];
            }
            col[n - 1] /= d[n - 1];
            for i in (0..n - 1).rev() {
                let next = col[i + 1];
                col[i] = (col[i] - next * self.off[i]) / d[i];
            }
        });
        spectrum.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            for (k, v) in row.iter_mut().enumerate() {
                *v = modes[k * n + i];
            }
            self.ifft.process(row);
        });
        let scale = 1.0 / m as f64;
        z.par_iter_mut().zip(spectrum.par_iter()).for_each(|(zi, s)| *zi = s.re * scale);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_iter().zip(b.par_iter()).map(|(x, y)| x * y).sum()
}

/// Preconditioned CG for K x = b from the given x, restarted from the true
/// residual until it meets the tolerance or stops improving at roundoff level.
fn pcg(op: &Operator, pre: &Preconditioner, b: &[f64], x: &mut [f64]) -> Result<usize> {
    let len = b.len();
    let norm = |v: &[f64]| -> f64 { dot(v, v).sqrt() };
    let b_norm = norm(b);
    let target = INNER_TOLERANCE * b_norm;
    let mut previous = f64::INFINITY;
    let mut r = vec![0.0; len];
    let mut z = vec![0.0; len];
    let mut kp = vec![0.0; len];
    let mut total = 0;
    for _restart in 0..MAX_RESTARTS {
        op.apply(x, &mut r);
        r.par_iter_mut().zip(b.par_iter()).for_each(|(ri, bi)| *ri = bi - *ri);
        let true_residual = norm(&r);
        if true_residual <= target {
            return Ok(total);
        }
        if true_residual > 0.5 * previous {
            if true_residual <= ROUNDOFF_FLOOR * b_norm {
                return Ok(total);
            }
            break;
        }
        previous = true_residual;
        pre.apply(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        while norm(&r) > 0.5 * target {
            if total == MAX_INNER_ITERATIONS {
                return Err(Error::NonConvergence {
                    what: "preconditioned conjugate gradient",
                    iterations: total,
                });
            }
            total += 1;
            op.apply(&p, &mut kp);
            let pkp = dot(&p, &kp);
            if !(pkp > 0.0) {
                return Err(Error::Indefinite(format!(
                    "discrete operator lost positivity (pᵀKp = {pkp:e})"
                )));
            }
            let alpha = rz / pkp;
            x.par_iter_mut().zip(p.par_iter()).for_each(|(xi, pi)| *xi += alpha * pi);
            r.par_iter_mut().zip(kp.par_iter()).for_each(|(ri, ki)| *ri -= alpha * ki);
            pre.apply(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.par_iter_mut().zip(z.par_iter()).for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
    }
    Err(Error::NonConvergence {
        what: "preconditioned conjugate gradient restarts",
        iterations: total,
    })
}

/// Smallest eigenvalue of the mapped-polar discretization on `grid`.
pub fn solve_dirichlet_eig<D: StarDomain + ?Sized>(domain: &D, grid: PolarGrid) -> Result<EigResult> {
    let grid = PolarGrid::new(grid.n_r, grid.n_theta)?;
    let op = Operator::assemble(domain, grid)?;
    let pre = Preconditioner::new(domain, grid);
    let len = grid.len();

    // start from the disk mode shape 1 − s²
    let mut u: Vec<f64> = (0..len)
        .map(|c| {
            let s = grid.radial_node(c / grid.n_theta);
            1.0 - s * s
        })
        .collect();
    let mut ku = vec![0.0; len];
    let mut lambda = f64::NAN;

    for iteration in 1..=MAX_OUTER_ITERATIONS {
        let b: Vec<f64> = u.par_iter().zip(op.mass.par_iter()).map(|(x, w)| x * w).collect();
        let mut next: Vec<f64> = if lambda.is_finite() {
            u.par_iter().map(|x| x / lambda).collect()
        } else {
            vec![0.0; len]
        };
        pcg(&op, &pre, &b, &mut next)?;
        let norm = next
            .par_iter()
            .zip(op.mass.par_iter())
            .map(|(x, w)| x * x * w)
            .sum::<f64>()
            .sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Indefinite("inverse iteration collapsed".into()));
        }
        next.par_iter_mut().for_each(|x| *x /= norm);
        u = next;

        op.apply(&u, &mut ku);
        let new_lambda = dot(&u, &ku);
        if !(new_lambda > 0.0) {
            return Err(Error::Indefinite(format!("Rayleigh quotient {new_lambda:e}")));
        }
        let mu_norm = u.par_iter().zip(op.mass.par_iter()).map(|(x, w)| (x * w).powi(2)).sum::<f64>().sqrt();
        let residual = ku
            .par_iter()
            .zip(u.par_iter())
            .zip(op.mass.par_iter())
            .map(|((k, x), w)| {
                let r = k - new_lambda * w * x;
                r * r
            })
            .sum::<f64>()
            .sqrt()
            / (new_lambda * mu_norm);
        let change = ((new_lambda - lambda) / new_lambda).abs();
        lambda = new_lambda;
        if change < EIGEN_TOLERANCE && residual <= RESIDUAL_TOLERANCE {
            if u.iter().sum::<f64>() < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
            return Ok(EigResult {
                lambda_h: lambda,
                iterations: iteration,
                residual,
                grid,
                eigenvector: u,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "inverse iteration",
        iterations: MAX_OUTER_ITERATIONS,
    })
}

/// Extrapolated limit λ* and observed order p from the last three samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolation {
    pub lambda_star: f64,
    pub order: f64,
}

/// Fit λ_h = λ* + c h^p through the three finest samples (h decreasing by a
/// constant ratio).
pub fn richardson_extrapolate(samples: &[(f64, f64)]) -> Result<Extrapolation> {
    if samples.len() < 3 {
        return Err(Error::IllConditionedFit(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let s = &samples[samples.len() - 3..];
    let (h1, l1) = s[0];
    let (h2, l2) = s[1];
    let (h3, l3) = s[2];
    if !(h1 > h2 && h2 > h3 && h3 > 0.0) {
        return Err(Error::IllConditionedFit("step sizes must decrease".into()));
    }
    let ratio = h1 / h2;
    if ((h2 / h3) / ratio - 1.0).abs() > 1e-9 {
        return Err(Error::IllConditionedFit("step sizes must shrink by a constant ratio".into()));
    }
    let d1 = l1 - l2;
    let d2 = l2 - l3;
    if !(d1 * d2 > 0.0) || d2.abs() >= d1.abs() {
        return Err(Error::IllConditionedFit(format!(
            "samples are not monotonically converging (differences {d1:e}, {d2:e})"
        )));
    }
    let order = (d1 / d2).ln() / ratio.ln();
    Ok(Extrapolation {
        lambda_star: l3 - d2 / (ratio.powf(order) - 1.0),
        order,
    })
}

/// Solves on every grid of the ladder (in parallel) and extrapolates.
pub fn extrapolated_eigenvalue<D: StarDomain + ?Sized>(
    domain: &D,
    ladder: &[PolarGrid],
) -> Result<(Extrapolation, Vec<EigResult>)> {
    let results: Vec<EigResult> = ladder
        .par_iter()
        .map(|&grid| solve_dirichlet_eig(domain, grid).map(|mut r| {
            r.eigenvector = Vec::new();
            r
        }))
        .collect::<Result<_>>()?;
    let samples: Vec<(f64, f64)> = results.iter().map(|r| (r.grid.h(), r.lambda_h)).collect();
    Ok((richardson_extrapolate(&samples)?, results))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenDeficit {
    pub t: f64,
    pub delta_lambda: f64,
    pub lambda_star: f64,
    pub order: f64,
    /// λ*(−t) from the negated profile.
    pub lambda_star_negated: f64,
    /// [λ*(t) − λ*(−t)] / (2t); zero at t = 0.
    pub first_variation: f64,
}

/// δλ = λ*/z_2² − 1 on the volume-normalized perturbed disk, with the
/// centred first difference across ±t.
pub fn eigen_deficit(profile: &HarmonicProfile, t: f64, ladder: &[PolarGrid]) -> Result<EigenDeficit> {
    if profile.dim() != 2 {
        return Err(Error::UnsupportedDimension(profile.dim()));
    }
    let lambda_ball = dimension_params(2)?.lambda_ball;
    let plus = normalize_volume(profile, t)?;
    if t == 0.0 {
        let (ex, _) = extrapolated_eigenvalue(&plus, ladder)?;
        return Ok(EigenDeficit {
            t,
            delta_lambda: ex.lambda_star / lambda_ball - 1.0,
            lambda_star: ex.lambda_star,
            order: ex.order,
            lambda_star_negated: ex.lambda_star,
            first_variation: 0.0,
        });
    }
    let minus = normalize_volume(&profile.negated(), t)?;
    let (a, b) = rayon::join(
        || extrapolated_eigenvalue(&plus, ladder),
        || extrapolated_eigenvalue(&minus, ladder),
    );
    let (ex, _) = a?;
    let (ex_neg, _) = b?;
    Ok(EigenDeficit {
        t,
        delta_lambda: ex.lambda_star / lambda_ball - 1.0,
        lambda_star: ex.lambda_star,
        order: ex.order,
        lambda_star_negated: ex_neg.lambda_star,
        first_variation: (ex.lambda_star - ex_neg.lambda_star) / (2.0 * t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const J0_SQUARED: f64 = 5.783_185_962_946_784_5;

    fn small() -> PolarGrid {
        PolarGrid::new(32, 64).unwrap()
    }

    #[test]
    fn grid_guards() {
        assert!(PolarGrid::new(8, 64).is_err());
        assert!(PolarGrid::new(32, 63).is_err());
        assert!(PolarGrid::new(32, 32).is_err());
        let g = small();
        assert_eq!(g.radial_node(0), 0.5 / 32.0);
        assert_eq!(g.len(), 32 * 64);
    }

    #[test]
    fn operator_is_symmetric() {
        let ball = normalize_volume(&HarmonicProfile::single(2, 3).unwrap(), 0.3).unwrap();
        let grid = PolarGrid::new(16, 64).unwrap();
        let op = Operator::assemble(&ball, grid).unwrap();
        let len = grid.len();
        let e = |k: usize| {
            let mut v = vec![0.0; len];
            v[k] = 1.0;
            v
        };
        let mut col_a = vec![0.0; len];
        let mut col_b = vec![0.0; len];
        for (a, b) in [(0, 1), (5, 70), (64, 129), (63, 0), (900, 963), (960, 1023), (17, 81)] {
            op.apply(&e(a), &mut col_a);
            op.apply(&e(b), &mut col_b);
            assert!((col_a[b] - col_b[a]).abs() < 1e-12, "({a},{b})");
        }
    }

    #[test]
    fn disk_is_close_on_a_coarse_grid() {
        let r = solve_dirichlet_eig(&Disk::unit(), small()).unwrap();
        assert!((r.lambda_h - J0_SQUARED).abs() < 0.02, "{}", r.lambda_h);
        assert!(r.residual <= RESIDUAL_TOLERANCE);
        assert_eq!(r.sign_defect(), 0.0);
    }

    #[test]
    fn homothety_scaling() {
        let unit = solve_dirichlet_eig(&Disk::unit(), small()).unwrap().lambda_h;
        let big = solve_dirichlet_eig(&Disk { radius: 2.0 }, small()).unwrap().lambda_h;
        assert!((big * 4.0 - unit).abs() < 1e-10 * unit);
    }

    #[test]
    fn grid_aligned_rotation_is_exact() {
        let shape = |shift: f64| RadiusFn {
            radius: move |th: f64| 1.0 + 0.1 * (2.0 * (th + shift)).cos() + 0.05 * (3.0 * (th + shift)).sin(),
            derivative: move |th: f64| {
                -0.2 * (2.0 * (th + shift)).sin() + 0.15 * (3.0 * (th + shift)).cos()
            },
        };
        let grid = small();
        let a = solve_dirichlet_eig(&shape(0.0), grid).unwrap().lambda_h;
        let b = solve_dirichlet_eig(&shape(5.0 * grid.d_theta()), grid).unwrap().lambda_h;
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn richardson_recovers_synthetic_data() {
        let samples: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&h| (h, 3.0 + 2.0 * h * h)).collect();
        let ex = richardson_extrapolate(&samples).unwrap();
        assert!((ex.lambda_star - 3.0).abs() < 1e-12);
        assert!((ex.order - 2.0).abs() < 1e-9);
        let noisy = [(0.1, 3.02), (0.05, 3.0), (0.025, 3.01)];
        assert!(matches!(richardson_extrapolate(&noisy), Err(Error::IllConditionedFit(_))));
        assert!(richardson_extrapolate(&samples[..2]).is_err());
    }

    #[test]
    fn perturbed_disk_exceeds_the_ball() {
        let ball = normalize_volume(&HarmonicProfile::single(2, 2).unwrap(), 0.2).unwrap();
        let r = solve_dirichlet_eig(&ball, small()).unwrap();
        let disk = solve_dirichlet_eig(&Disk::unit(), small()).unwrap();
        assert!(r.lambda_h > disk.lambda_h);
        assert_eq!(r.sign_defect(), 0.0);
    }
}
