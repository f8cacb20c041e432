//! Reports behind the `fkd` command line: constants, Q-tables, deficit-ratio
//! convergence runs and the validation suite.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{self, HalfIntOrder};
use crate::eigensolver::{self, default_grid_ladder, Disk, PolarGrid};
use crate::error::{Error, Result};
use crate::perturbation::{self, deficit_coeffs, geometry_exact, normalize_volume, HarmonicProfile};
use crate::spectral::{self, dimension_params, DimensionParams, MONOTONE_TOLERANCE};

pub const CSV_HEADER: &str = "t,delta_P,delta_lambda,ratio,source";
pub const QSEQ_HEADER: &str = "k,Q_k,first_diff,second_diff";
/// Number of smallest t values entering the c₀ + c₁t fit.
pub const FIT_POINTS: usize = 3;

/// Twelve significant digits in scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Numeric,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    #[serde(rename = "analytic")]
    Analytic,
    #[serde(rename = "quadrature+eigensolver")]
    Numeric,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Numeric => "quadrature+eigensolver",
        }
    }
}

/// Geometric ladder t_i = t_max · factor^i, i < count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TLadder {
    pub t_max: f64,
    pub factor: f64,
    pub count: usize,
}

impl Default for TLadder {
    fn default() -> Self {
        Self {
            t_max: 0.08,
            factor: 0.5,
            count: 3,
        }
    }
}

impl TLadder {
    /// Decreasing t values.
    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.t_max * self.factor.powi(i as i32)).collect()
    }
}

fn default_grids() -> Vec<(usize, usize)> {
    default_grid_ladder().iter().map(|g| (g.n_r, g.n_theta)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: u32,
    pub profile: HarmonicProfile,
    #[serde(default)]
    pub t_ladder: TLadder,
    /// (n_r, n_theta) pairs, coarse to fine.
    #[serde(default = "default_grids")]
    pub grid_ladder: Vec<(usize, usize)>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub mode: Mode,
}

impl RunConfig {
    pub fn new(profile: HarmonicProfile) -> Self {
        Self {
            dimension: profile.dim(),
            profile,
            t_ladder: TLadder::default(),
            grid_ladder: default_grids(),
            output: None,
            mode: Mode::Both,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn grids(&self) -> Result<Vec<PolarGrid>> {
        self.grid_ladder
            .iter()
            .map(|&(n_r, n_theta)| PolarGrid::new(n_r, n_theta))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.profile.dim() != self.dimension {
            return Err(Error::Config(format!(
                "profile dimension {} differs from run dimension {}",
                self.profile.dim(),
                self.dimension
            )));
        }
        let TLadder { t_max, factor, count } = self.t_ladder;
        if count < FIT_POINTS {
            return Err(Error::Config(format!("t-ladder needs at least {FIT_POINTS} values, got {count}")));
        }
        if !(t_max > 0.0 && t_max.is_finite()) || !(factor > 0.0 && factor < 1.0) {
            return Err(Error::Config("t-ladder needs t_max > 0 and 0 < factor < 1".into()));
        }
        if matches!(self.dimension, 2 | 3) {
            let reach = t_max * self.profile.sup_norm();
            if reach > perturbation::STAR_SHAPE_GUARD {
                return Err(Error::Config(format!(
                    "t_max·max|V| = {reach} exceeds the star-shape guard {}",
                    perturbation::STAR_SHAPE_GUARD
                )));
            }
        }
        if self.mode != Mode::Analytic {
            if self.dimension != 2 {
                return Err(Error::Config("numeric mode requires dimension 2".into()));
            }
            let grids = self.grids()?;
            if grids.len() < 3 {
                return Err(Error::Config("grid ladder needs at least 3 grids".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub t: f64,
    pub delta_p: f64,
    pub delta_lambda: f64,
    pub ratio: f64,
    pub source: Source,
}

impl ConvergenceRow {
    fn new(t: f64, delta_p: f64, delta_lambda: f64, source: Source) -> Self {
        let ratio = if delta_lambda > 0.0 { delta_p / delta_lambda } else { f64::NAN };
        Self {
            t,
            delta_p,
            delta_lambda,
            ratio,
            source,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            format_real(self.t),
            format_real(self.delta_p),
            format_real(self.delta_lambda),
            format_real(self.ratio),
            self.source.as_str()
        )
    }
}

/// c₀ + c₁t through the smallest t values of one source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioFit {
    pub source: Source,
    pub c0: f64,
    pub c1: f64,
    /// (c₀ − Q_k)/Q_k for the lowest active degree k.
    pub gap_to_q: f64,
    /// (c₀ − C_N)/C_N.
    pub gap_to_c_n: f64,
}

/// Eigensolver diagnostics for one numeric row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericDiagnostics {
    pub t: f64,
    pub lambda_star: f64,
    pub lambda_star_negated: f64,
    pub order: f64,
    pub first_variation: f64,
    /// λ''(0)·t, the scale the first variation is compared against.
    pub second_variation_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSummary {
    pub dimension: u32,
    pub mode: Mode,
    pub lowest_degree: Option<u32>,
    pub q_k: Option<f64>,
    pub c_n: f64,
    pub c_p: f64,
    pub c_lambda: f64,
    pub fits: Vec<RatioFit>,
    pub diagnostics: Vec<NumericDiagnostics>,
    /// max |ratio_numeric − ratio_analytic|/ratio_analytic over t ≤ 0.04.
    pub max_agreement_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub summary: ConvergenceSummary,
}

impl ConvergenceReport {
    pub fn fit(&self, source: Source) -> Option<&RatioFit> {
        self.summary.fits.iter().find(|f| f.source == source)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv());
            out.push('\n');
        }
        out
    }
}

/// Least-squares line through the points; returns (intercept, slope).
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 || points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::IllConditionedFit("need at least two finite points".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::IllConditionedFit("abscissae coincide".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

fn analytic_row(profile: &HarmonicProfile, c_p: f64, c_lambda: f64, t: f64) -> Result<ConvergenceRow> {
    let delta_p = match profile.dim() {
        2 | 3 => geometry_exact(&normalize_volume(profile, t)?)?.delta_p,
        _ => c_p * t * t,
    };
    Ok(ConvergenceRow::new(t, delta_p, c_lambda * t * t, Source::Analytic))
}

fn numeric_row(
    profile: &HarmonicProfile,
    t: f64,
    grids: &[PolarGrid],
    lambda_second: f64,
) -> Result<(ConvergenceRow, NumericDiagnostics)> {
    let delta_p = geometry_exact(&normalize_volume(profile, t)?)?.delta_p;
    let d = eigensolver::eigen_deficit(profile, t, grids)?;
    Ok((
        ConvergenceRow::new(t, delta_p, d.delta_lambda, Source::Numeric),
        NumericDiagnostics {
            t,
            lambda_star: d.lambda_star,
            lambda_star_negated: d.lambda_star_negated,
            order: d.order,
            first_variation: d.first_variation,
            second_variation_scale: lambda_second * t,
        },
    ))
}

fn fit_rows(rows: &[ConvergenceRow], source: Source, q_k: Option<f64>, c_n: f64) -> Result<RatioFit> {
    let mut points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.source == source)
        .map(|r| (r.t, r.ratio))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.truncate(FIT_POINTS);
    if points.len() < FIT_POINTS {
        return Err(Error::IllConditionedFit(format!("need {FIT_POINTS} rows to fit")));
    }
    let (c0, c1) = fit_line(&points)?;
    Ok(RatioFit {
        source,
        c0,
        c1,
        gap_to_q: q_k.map_or(f64::NAN, |q| (c0 - q) / q),
        gap_to_c_n: (c0 - c_n) / c_n,
    })
}

/// Runs the configured experiment. Rows are written to `sink` (header first)
/// in order and flushed as they are assembled, so a failure leaves the
/// completed prefix on disk.
pub fn run_convergence(config: &RunConfig, sink: Option<&mut dyn Write>) -> Result<ConvergenceReport> {
    config.validate()?;
    let profile = &config.profile;
    let dim = config.dimension;
    let ts = config.t_ladder.values();
    let coeffs = deficit_coeffs(profile)?;
    let lambda_second = perturbation::second_variation(profile)?;
    let c_n = spectral::faber_krahn_constant(dim)?;
    let lowest_degree = profile.lowest_active_degree();
    let q_k = lowest_degree.map(|k| spectral::q_value(dim, k)).transpose()?;

    let mut pending: Vec<Result<(ConvergenceRow, Option<NumericDiagnostics>)>> = Vec::new();
    if config.mode != Mode::Numeric {
        pending.extend(ts.iter().map(|&t| {
            analytic_row(profile, coeffs.c_p, coeffs.c_lambda, t).map(|r| (r, None))
        }));
    }
    if config.mode != Mode::Analytic {
        let grids = config.grids()?;
        let numeric: Vec<_> = ts
            .par_iter()
            .map(|&t| numeric_row(profile, t, &grids, lambda_second).map(|(r, d)| (r, Some(d))))
            .collect();
        pending.extend(numeric);
    }

    let mut sink = sink;
    if let Some(w) = sink.as_deref_mut() {
        writeln!(w, "{CSV_HEADER}")?;
        w.flush()?;
    }
    let mut rows = Vec::with_capacity(pending.len());
    let mut diagnostics = Vec::new();
    for item in pending {
        let (row, diag) = item?;
        if let Some(w) = sink.as_deref_mut() {
            writeln!(w, "{}", row.to_csv())?;
            w.flush()?;
        }
        rows.push(row);
        diagnostics.extend(diag);
    }

    let mut fits = Vec::new();
    for source in [Source::Analytic, Source::Numeric] {
        if rows.iter().any(|r| r.source == source) && coeffs.c_lambda > 0.0 {
            fits.push(fit_rows(&rows, source, q_k, c_n)?);
        }
    }
    let max_agreement_gap = (config.mode == Mode::Both && coeffs.c_lambda > 0.0).then(|| {
        rows.iter()
            .filter(|r| r.source == Source::Numeric && r.t <= 0.04 + 1e-15)
            .filter_map(|n| {
                rows.iter()
                    .find(|a| a.source == Source::Analytic && a.t == n.t)
                    .map(|a| ((n.ratio - a.ratio) / a.ratio).abs())
            })
            .fold(0.0, f64::max)
    });

    Ok(ConvergenceReport {
        rows,
        summary: ConvergenceSummary {
            dimension: dim,
            mode: config.mode,
            lowest_degree,
            q_k,
            c_n,
            c_p: coeffs.c_p,
            c_lambda: coeffs.c_lambda,
            fits,
            diagnostics,
            max_agreement_gap,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub dimension: u32,
    pub z_n: f64,
    pub omega_n: f64,
    pub lambda_ball: f64,
    pub g_n: f64,
    pub c_n: f64,
}

impl ConstantsReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, value) in [
            ("z_N", self.z_n),
            ("omega_N", self.omega_n),
            ("lambda(ball)", self.lambda_ball),
            ("G_N", self.g_n),
            ("C_N", self.c_n),
        ] {
            let _ = writeln!(out, "{name:<14}{value:>24.16e}");
        }
        out
    }
}

pub fn cmd_constants(dim: u32) -> Result<ConstantsReport> {
    let DimensionParams {
        dim,
        z_n,
        omega_n,
        lambda_ball,
        g_n,
        ..
    } = dimension_params(dim)?;
    Ok(ConstantsReport {
        dimension: dim,
        z_n,
        omega_n,
        lambda_ball,
        g_n,
        c_n: spectral::faber_krahn_constant(dim)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QseqRow {
    pub k: u32,
    pub q: f64,
    pub first_diff: f64,
    pub second_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QseqReport {
    pub dimension: u32,
    pub rows: Vec<QseqRow>,
    pub c_n: f64,
    pub finale_criterion: f64,
    /// Degrees k with Q_{k+1} − Q_k < −1e-12.
    pub monotonicity_violations: Vec<u32>,
}

impl QseqReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(QSEQ_HEADER);
        out.push('\n');
        for r in &self.rows {
            let second = r.second_diff.map(format_real).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", r.k, format_real(r.q), format_real(r.first_diff), second);
        }
        let _ = writeln!(
            out,
            "C_N,{},finale_criterion,{}",
            format_real(self.c_n),
            format_real(self.finale_criterion)
        );
        out
    }
}

/// Q_k for k = 2..=kmax with first differences Q_{k+1} − Q_k and second
/// differences Q_{k+1} − 2Q_k + Q_{k−1}.
pub fn cmd_qseq(dim: u32, kmax: u32) -> Result<QseqReport> {
    if kmax < 2 {
        return Err(Error::InvalidMode(kmax));
    }
    let table = spectral::QTable::build(dim, kmax + 1)?;
    let q: Vec<f64> = table.entries.iter().map(|e| e.1).collect();
    let rows: Vec<QseqRow> = (0..q.len() - 1)
        .map(|i| QseqRow {
            k: table.entries[i].0,
            q: q[i],
            first_diff: q[i + 1] - q[i],
            second_diff: (i > 0).then(|| q[i + 1] - 2.0 * q[i] + q[i - 1]),
        })
        .collect();
    let monotonicity_violations = rows
        .iter()
        .filter(|r| r.first_diff < -MONOTONE_TOLERANCE)
        .map(|r| r.k)
        .collect();
    Ok(QseqReport {
        dimension: dim,
        rows,
        c_n: table.c_n,
        finale_criterion: spectral::finale_criterion(dim)?,
        monotonicity_violations,
    })
}

/// z_N for N = 2..9 at six-decimal table precision (π for N = 3).
pub const PUBLISHED_ZEROS: [(u32, f64); 8] = [
    (2, 2.404826),
    (3, PI),
    (4, 3.831706),
    (5, 4.4934095),
    (6, 5.135622),
    (7, 5.763459),
    (8, 6.380162),
    (9, 6.987932),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// "<=" when measured must not exceed the tolerance, ">" when it must exceed it.
    pub requirement: &'static str,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when measured ≤ tolerance.
    fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            requirement: "<=",
            tolerance,
            passed: measured <= tolerance,
        }
    }

    /// Passes when measured > bound.
    fn above(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            requirement: ">",
            tolerance: bound,
            passed: measured > bound,
        }
    }

    fn failed(name: &str, err: &Error) -> Self {
        Self {
            name: format!("{name}: {err}"),
            measured: f64::NAN,
            requirement: "<=",
            tolerance: f64::NAN,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

fn run_check(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, &e))
}

/// Cross-module invariant suite; `quick` skips the eigensolver checks.
pub fn validate(quick: bool) -> ValidationReport {
    validate_with_zero_table(quick, &PUBLISHED_ZEROS)
}

/// [`validate`] against a caller-supplied zero table.
pub fn validate_with_zero_table(quick: bool, zeros: &[(u32, f64)]) -> ValidationReport {
    let mut checks = vec![
        run_check("zero_table", || {
            let mut worst: f64 = 0.0;
            for &(dim, expected) in zeros {
                let z = bessel::first_zero(HalfIntOrder::for_dimension(dim)?)?;
                worst = worst.max((z - expected).abs());
            }
            Ok(Check::at_most("zero_table", worst, 1e-6))
        }),
        run_check("constant_consistency", || {
            let mut worst: f64 = 0.0;
            for dim in 2..=spectral::MAX_DIMENSION {
                let c = spectral::faber_krahn_constant(dim)?;
                worst = worst.max(((c - spectral::q_value(dim, 2)?) / c).abs());
            }
            Ok(Check::at_most("constant_consistency", worst, 1e-10))
        }),
        run_check("reduced_closed_form", || {
            let j0 = bessel::first_zero(HalfIntOrder::integer(0))?;
            let c2 = spectral::faber_krahn_constant(2)?;
            let closed = 3.0 / (2.0 * (j0 * j0 - 2.0));
            Ok(Check::at_most("reduced_closed_form", ((c2 - closed) / closed).abs(), 1e-10))
        }),
        run_check("q_monotonicity", || {
            let mut worst = f64::NEG_INFINITY;
            for dim in 2..=12 {
                for r in cmd_qseq(dim, 50)?.rows {
                    worst = worst.max(-r.first_diff);
                }
            }
            Ok(Check::at_most("q_monotonicity", worst, MONOTONE_TOLERANCE))
        }),
        run_check("finale_criterion", || {
            let mut smallest = f64::INFINITY;
            for dim in 2..=spectral::MAX_CRITERION_DIMENSION {
                smallest = smallest.min(spectral::finale_criterion(dim)?);
            }
            Ok(Check::above("finale_criterion", smallest, 0.0))
        }),
        run_check("single_mode_ratio", || {
            let mut worst: f64 = 0.0;
            for dim in 2..=10 {
                for k in 2..=20 {
                    let c = deficit_coeffs(&HarmonicProfile::single(dim, k)?)?;
                    let q = spectral::q_value(dim, k)?;
                    worst = worst.max(((c.ratio() - q) / q).abs());
                }
            }
            Ok(Check::at_most("single_mode_ratio", worst, 1e-10))
        }),
        run_check("poisson_residual", || {
            let mut worst: f64 = 0.0;
            for dim in [2, 3] {
                let p = HarmonicProfile::single(dim, 2)?;
                let grid = perturbation::PoissonGrid::uniform(dim, 400, 16);
                let r = perturbation::poisson_residual(&p, &grid)?;
                worst = worst.max(r.max_residual / r.max_abs_v);
            }
            Ok(Check::at_most("poisson_residual", worst, 1e-6))
        }),
    ];
    if !quick {
        checks.push(run_check("disk_eigenvalue", || {
            let lambda = dimension_params(2)?.lambda_ball;
            let (ex, _) = eigensolver::extrapolated_eigenvalue(&Disk::unit(), &default_grid_ladder())?;
            Ok(Check::at_most("disk_eigenvalue", ((ex.lambda_star - lambda) / lambda).abs(), 1e-4))
        }));
        checks.push(run_check("disk_order", || {
            let (ex, _) = eigensolver::extrapolated_eigenvalue(&Disk::unit(), &default_grid_ladder())?;
            Ok(Check::at_most("disk_order", (ex.order - 2.0).abs(), 0.2))
        }));
        checks.push(run_check("mode_two_deficit", || {
            let p = HarmonicProfile::single(2, 2)?;
            let t = 0.05;
            let d = eigensolver::eigen_deficit(&p, t, &default_grid_ladder())?;
            let expected = deficit_coeffs(&p)?.c_lambda * t * t;
            Ok(Check::at_most("mode_two_deficit", ((d.delta_lambda - expected) / expected).abs(), 0.05))
        }));
    }
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::Mode as ProfileMode;
    use crate::harmonics::Phase;

    #[test]
    fn csv_number_format() {
        assert_eq!(format_real(0.125), "1.25000000000e-1");
        assert_eq!(format_real(-3.0e-7), "-3.00000000000e-7");
    }

    #[test]
    fn t_ladder_values() {
        assert_eq!(TLadder::default().values(), vec![0.08, 0.04, 0.02]);
    }

    #[test]
    fn config_parsing_and_defaults() {
        let text = r#"{"dimension":2,"profile":{"dim":2,"modes":[{"k":2,"a":1.0,"phase":"cos"}]},"mode":"analytic"}"#;
        let c = RunConfig::from_json(text).unwrap();
        assert_eq!(c.mode, Mode::Analytic);
        assert_eq!(c.t_ladder, TLadder::default());
        assert_eq!(c.grid_ladder, default_grids());

        let mismatch = text.replace("\"dimension\":2", "\"dimension\":3");
        assert!(matches!(RunConfig::from_json(&mismatch), Err(Error::Config(_))));
        let short = text.replace("\"mode\"", "\"t_ladder\":{\"t_max\":0.08,\"factor\":0.5,\"count\":2},\"mode\"");
        assert!(matches!(RunConfig::from_json(&short), Err(Error::Config(_))));
        let wide = text.replace("\"mode\"", "\"t_ladder\":{\"t_max\":0.95,\"factor\":0.5,\"count\":3},\"mode\"");
        assert!(matches!(RunConfig::from_json(&wide), Err(Error::Config(_))));
        let numeric3 = r#"{"dimension":3,"profile":{"dim":3,"modes":[{"k":2,"a":1.0,"phase":"zonal"}]},"mode":"numeric"}"#;
        assert!(matches!(RunConfig::from_json(numeric3), Err(Error::Config(_))));
    }

    #[test]
    fn line_fit() {
        let (a, b) = fit_line(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((a - 1.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
        assert!(fit_line(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn analytic_ratio_is_flat_above_dimension_three() {
        let mut config = RunConfig::new(HarmonicProfile::single(5, 2).unwrap());
        config.mode = Mode::Analytic;
        let report = run_convergence(&config, None).unwrap();
        let c5 = spectral::faber_krahn_constant(5).unwrap();
        for row in &report.rows {
            assert!(((row.ratio - c5) / c5).abs() < 1e-10);
        }
        let fit = report.fit(Source::Analytic).unwrap();
        assert!(fit.gap_to_c_n.abs() < 1e-10);
    }

    #[test]
    fn analytic_mode_two_approaches_the_constant() {
        let mut config = RunConfig::new(HarmonicProfile::single(2, 2).unwrap());
        config.mode = Mode::Analytic;
        let mut buf = Vec::new();
        let report = run_convergence(&config, Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, report.to_csv());
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 4);
        assert!(report.fit(Source::Analytic).unwrap().gap_to_c_n.abs() < 0.01);
    }

    #[test]
    fn translation_only_profile_has_no_fit() {
        let p = HarmonicProfile::new(2, vec![ProfileMode::new(1, 1.0, Phase::Cos)]).unwrap();
        let mut config = RunConfig::new(p);
        config.mode = Mode::Analytic;
        let report = run_convergence(&config, None).unwrap();
        assert!(report.summary.fits.is_empty());
        assert_eq!(report.summary.lowest_degree, None);
        assert!(report.rows.iter().all(|r| r.ratio.is_nan()));
    }

    #[test]
    fn qseq_rows_and_footer() {
        let r = cmd_qseq(2, 10).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert!(r.rows.iter().all(|row| row.first_diff > 0.0));
        assert!(r.rows[0].second_diff.is_none());
        let csv = r.to_csv();
        assert!(csv.starts_with("k,Q_k,first_diff,second_diff\n2,"));
        assert!(csv.lines().last().unwrap().starts_with("C_N,"));
        assert!(cmd_qseq(9, 10).unwrap().finale_criterion > 0.0);
        assert!(cmd_qseq(2, 1).is_err());
    }

    #[test]
    fn constants_for_the_disk_and_ball() {
        let r = cmd_constants(2).unwrap();
        assert!((r.c_n - 0.396_491_215_259_116_1).abs() < 1e-12);
        assert!((cmd_constants(3).unwrap().z_n - PI).abs() < 1e-15);
        assert!(cmd_constants(1).is_err());
        assert!(r.to_text().contains("C_N"));
    }

    #[test]
    fn quick_validation_and_tampering() {
        let report = validate(true);
        assert!(report.passed(), "{:?}", report.failures());
        let mut tampered = PUBLISHED_ZEROS;
        tampered[0].1 = 2.5;
        let bad = validate_with_zero_table(true, &tampered);
        assert_eq!(bad.failures(), vec!["zero_table"]);
    }
}
