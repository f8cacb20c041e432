//! Bessel functions of the first kind on the half-integer order lattice.
//!
//! Values come from the ascending series where it converges without
//! cancellation and from Miller's backward recurrence elsewhere. Integer
//! orders are normalized with `1 = J_0 + 2 Σ J_{2k}`, half-integer orders
//! with `Σ (2n+1) J_{n+1/2}^2 = 2x/π` (sign taken from the closed forms of
//! `J_{1/2}` and `J_{3/2}`).

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature;

/// Largest supported twice-order, i.e. ν ≤ 200.
pub const MAX_TWICE_ORDER: u32 = 400;

const CF_TOLERANCE: f64 = 1e-14;
const CF_MAX_DEPTH: usize = 10_000;
const NEWTON_MAX_ITERATIONS: usize = 50;
const RESCALE_THRESHOLD: f64 = 1e100;

/// A Bessel order ν on the lattice {0, 1/2, 1, 3/2, ...}, stored as 2ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIntOrder {
    twice: u32,
}

impl HalfIntOrder {
    pub const fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    pub const fn integer(n: u32) -> Self {
        Self { twice: 2 * n }
    }

    /// ν = N/2 − 1, the order whose first zero gives λ on the unit ball of R^N.
    pub fn for_dimension(dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self { twice: dim - 2 })
    }

    /// ℓ_k = k + N/2 − 1, the order attached to degree-k harmonics on S^{N−1}.
    pub fn for_mode(dim: u32, degree: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self {
            twice: 2 * degree + dim - 2,
        })
    }

    pub const fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// ν + n.
    pub const fn shifted(self, n: u32) -> Self {
        Self {
            twice: self.twice + 2 * n,
        }
    }

    fn check_supported(self) -> Result<()> {
        if self.twice > MAX_TWICE_ORDER {
            return Err(Error::Range(format!(
                "order {} exceeds the supported maximum {}",
                self.value(),
                f64::from(MAX_TWICE_ORDER) / 2.0
            )));
        }
        Ok(())
    }
}

impl fmt::Display for HalfIntOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Certified enclosure of the first positive zero j_ν.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    pub lower: f64,
    pub upper: f64,
}

impl ZeroBracket {
    /// ν ≤ j_ν ≤ √(ν+1)(√(ν+2) + 1), i.e. the bounds
    /// N/2 − 1 ≤ j_{N/2−1} ≤ √(N/2)(√(N/2+1) + 1) written in terms of ν.
    pub fn for_order(order: HalfIntOrder) -> Self {
        let nu = order.value();
        Self {
            lower: nu,
            upper: (nu + 1.0).sqrt() * ((nu + 2.0).sqrt() + 1.0),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// J_ν(x) for x ≥ 0.
pub fn bessel_j(order: HalfIntOrder, x: f64) -> Result<f64> {
    order.check_supported()?;
    eval_j(order, x)
}

/// Unchecked-order evaluation; used internally for ν + 1 at the top of the range.
fn eval_j(order: HalfIntOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("J_ν(x) requires finite x >= 0, got {x}")));
    }
    let nu = order.value();
    if x == 0.0 {
        return Ok(if order.twice == 0 { 1.0 } else { 0.0 });
    }
    if x * x <= (2.0 * (nu + 1.0)).max(4.0) {
        Ok(series(order, x))
    } else {
        Ok(miller(order, x))
    }
}

/// (x/2)^ν / Γ(ν+1) as a running product, exact in the order lattice.
fn series_prefactor(order: HalfIntOrder, x: f64) -> f64 {
    let half_x = 0.5 * x;
    if order.is_integer() {
        let n = order.twice / 2;
        (1..=n).fold(1.0, |acc, i| acc * half_x / f64::from(i))
    } else {
        // Γ(3/2) = √π/2, then Γ(i + 3/2) = (i + 1/2)Γ(i + 1/2)
        let n = order.twice / 2;
        let start = half_x.sqrt() * 2.0 / PI.sqrt();
        (1..=n).fold(start, |acc, i| acc * half_x / (f64::from(i) + 0.5))
    }
}

fn series(order: HalfIntOrder, x: f64) -> f64 {
    let nu = order.value();
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..500 {
        let mf = f64::from(m);
        term *= q / (mf * (mf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    series_prefactor(order, x) * sum
}

/// Starting offset for the backward recurrence: far enough past the turning
/// point that the seed's relative contribution is below 1e-17.
fn miller_start(nu: f64, x: f64) -> u32 {
    let m = nu.max(x);
    (m + 20.0 + 12.0 * m.cbrt()).ceil() as u32
}

fn miller(order: HalfIntOrder, x: f64) -> f64 {
    let base = if order.is_integer() { 0.0 } else { 0.5 };
    let target = order.twice / 2;
    let start = miller_start(order.value(), x).max(target + 2);

    // f holds the unnormalized J_{base+m}; walk m = start .. 0
    let mut f_next = 0.0_f64;
    let mut f_cur = 1e-30_f64;
    let mut captured: Option<f64> = None;
    let mut rescales_after_capture = 0i32;
    let mut linear = 0.0_f64;
    let mut quadratic = 0.0_f64;
    let mut low = [0.0_f64; 2];

    let mut m = start;
    loop {
        if m == target {
            captured = Some(f_cur);
        }
        if base == 0.0 {
            if m == 0 {
                linear += f_cur;
            } else if m % 2 == 0 {
                linear += 2.0 * f_cur;
            }
        } else {
            quadratic += (2.0 * f64::from(m) + 1.0) * f_cur * f_cur;
        }
        if m < 2 {
            low[m as usize] = f_cur;
        }
        if m == 0 {
            break;
        }
        let mu = base + f64::from(m);
        let f_prev = 2.0 * mu / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        m -= 1;
        if f_cur.abs() > RESCALE_THRESHOLD {
            let s = 1.0 / RESCALE_THRESHOLD;
            f_cur *= s;
            f_next *= s;
            linear *= s;
            quadratic *= s * s;
            low.iter_mut().for_each(|v| *v *= s);
            // captured stays unscaled so tiny results do not underflow early
            if captured.is_some() {
                rescales_after_capture += 1;
            }
        }
    }

    let captured = captured.unwrap_or(0.0);
    let ratio = if base == 0.0 {
        captured / linear
    } else {
        let magnitude = quadratic.sqrt() * (PI / (2.0 * x)).sqrt();
        let amp = (2.0 / (PI * x)).sqrt();
        let j_half = amp * x.sin();
        let j_three_halves = amp * (x.sin() / x - x.cos());
        let sign = if j_half.abs() >= j_three_halves.abs() {
            j_half.signum() * low[0].signum()
        } else {
            j_three_halves.signum() * low[1].signum()
        };
        sign * captured / magnitude
    };
    ratio * RESCALE_THRESHOLD.powi(-rescales_after_capture)
}

/// Closed trigonometric forms for ν = 1/2, 3/2, ..., 9/2 (spherical Bessel
/// functions of degree 0..4). `None` outside that set.
pub fn bessel_j_closed_form(order: HalfIntOrder, x: f64) -> Option<f64> {
    if order.is_integer() || order.twice > 9 || x <= 0.0 {
        return None;
    }
    let (s, c) = x.sin_cos();
    let y = 1.0 / x;
    let spherical = match order.twice {
        1 => s * y,
        3 => s * y * y - c * y,
        5 => (3.0 * y * y * y - y) * s - 3.0 * y * y * c,
        7 => (15.0 * y.powi(4) - 6.0 * y * y) * s - (15.0 * y.powi(3) - y) * c,
        9 => {
            (105.0 * y.powi(5) - 45.0 * y.powi(3) + y) * s
                - (105.0 * y.powi(4) - 10.0 * y * y) * c
        }
        _ => unreachable!(),
    };
    Some((2.0 * x / PI).sqrt() * spherical)
}

/// J'_ν(x) = (ν/x) J_ν(x) − J_{ν+1}(x).
pub fn bessel_j_prime(order: HalfIntOrder, x: f64) -> Result<f64> {
    order.check_supported()?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("J'_ν(x) requires finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return match order.twice {
            0 => Ok(0.0),
            1 => Err(Error::Domain(format!("J'_{order}(x) is singular at x = 0"))),
            2 => Ok(0.5),
            _ => Ok(0.0),
        };
    }
    let nu = order.value();
    let j = eval_j(order, x)?;
    let j_next = eval_j(order.shifted(1), x)?;
    Ok(nu / x * j - j_next)
}

/// J_{ν+1}(x) / J_ν(x) from the continued fraction
/// 1 / (2(ν+1)/x − 1 / (2(ν+2)/x − ...)), evaluated by modified Lentz.
pub fn bessel_ratio_cf(order: HalfIntOrder, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("ratio requires finite x > 0, got {x}")));
    }
    let nu = order.value();
    if 2.0 * (nu + 1.0) / x <= 1.0 {
        return Err(Error::Domain(format!(
            "continued fraction for order {order} needs 2(ν+1)/x > 1, got x = {x}"
        )));
    }
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for m in 1..=CF_MAX_DEPTH {
        let b = 2.0 * (nu + m as f64) / x;
        let a = if m == 1 { 1.0 } else { -1.0 };
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < CF_TOLERANCE {
            return Ok(f);
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel ratio continued fraction",
        iterations: CF_MAX_DEPTH,
    })
}

/// First positive zero j_ν: scan the certified bracket for the first sign
/// change, bisect, then polish with safeguarded Newton.
pub fn first_zero(order: HalfIntOrder) -> Result<f64> {
    order.check_supported()?;
    let bracket = ZeroBracket::for_order(order);
    let f = |x: f64| eval_j(order, x);

    let f_lower = f(bracket.lower)?;
    let f_upper = f(bracket.upper)?;
    if !(f_lower > 0.0 && f_upper < 0.0) {
        return Err(Error::BracketFailure {
            lower: bracket.lower,
            upper: bracket.upper,
        });
    }

    // consecutive zeros are more than π apart, so a 0.5 scan cannot skip one
    let steps = ((bracket.upper - bracket.lower) / 0.5).ceil().max(1.0) as usize;
    let width = (bracket.upper - bracket.lower) / steps as f64;
    let mut lo = bracket.lower;
    let mut hi = bracket.upper;
    for i in 1..=steps {
        let x = bracket.lower + width * i as f64;
        let x = if i == steps { bracket.upper } else { x };
        if f(x)? <= 0.0 {
            hi = x;
            break;
        }
        lo = x;
    }

    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let value = f(x)?;
        if value == 0.0 {
            return Ok(x);
        }
        if value > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = bessel_j_prime_unchecked(order, x)?;
        let mut next = x - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

fn bessel_j_prime_unchecked(order: HalfIntOrder, x: f64) -> Result<f64> {
    Ok(order.value() / x * eval_j(order, x)? - eval_j(order.shifted(1), x)?)
}

/// ∫_0^{j_ν} r J_ν(r)^2 dr by adaptive Gauss–Legendre.
pub fn radial_norm_integral(order: HalfIntOrder) -> Result<f64> {
    let zero = first_zero(order)?;
    radial_norm_integral_to(order, zero)
}

/// ∫_0^{upper} r J_ν(r)^2 dr.
pub fn radial_norm_integral_to(order: HalfIntOrder, upper: f64) -> Result<f64> {
    order.check_supported()?;
    let value = quadrature::adaptive(
        |r| {
            let j = eval_j(order, r).unwrap_or(f64::NAN);
            r * j * j
        },
        0.0,
        upper,
        1e-14,
    );
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "radial integral for order {order} is not finite"
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn nu(twice: u32) -> HalfIntOrder {
        HalfIntOrder::from_twice(twice)
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(bessel_j(nu(0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(nu(3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn half_order_vanishes_at_pi() {
        assert!(bessel_j(nu(1), PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn j1_vanishes_at_tabulated_zero() {
        assert!(bessel_j(nu(2), 3.831706).unwrap().abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(bessel_j(nu(0), -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(nu(402), 1.0), Err(Error::Range(_))));
        assert!(matches!(bessel_j_prime(nu(1), 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_ratio_cf(nu(0), 5.0), Err(Error::Domain(_))));
        assert!(matches!(first_zero(nu(401)), Err(Error::Range(_))));
    }

    #[test]
    fn derivative_of_j0_is_minus_j1() {
        assert!(bessel_j_prime(nu(0), 3.831706).unwrap().abs() < 1e-5);
        assert_eq!(bessel_j_prime(nu(0), 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(nu(2), 0.0).unwrap(), 0.5);
        assert!(bessel_j_prime(nu(0), 1e-9).unwrap().abs() < 1e-9);
        // -J_1(j_0), mpmath to 30 digits
        let got = bessel_j_prime(nu(0), 2.404_825_557_695_773).unwrap();
        assert_relative_eq!(got, -0.519_147_497_289_466_8, max_relative = 1e-13);
    }

    #[test]
    fn ratio_small_argument_leading_term() {
        // J_2/J_1 at 1e-3: x/(2(ν+1)) = 2.5e-4 to leading order
        let got = bessel_ratio_cf(nu(2), 1e-3).unwrap();
        assert_relative_eq!(got, 2.500_000_104_166_673e-4, max_relative = 1e-13);
    }

    #[test]
    fn ratio_closed_forms_at_j0() {
        let z = first_zero(nu(0)).unwrap();
        // J_2/J_1 (j_0) = 2/z and J_3/J_2 (j_0) = 4/z − z/2
        assert_relative_eq!(bessel_ratio_cf(nu(2), z).unwrap(), 2.0 / z, max_relative = 1e-13);
        assert_relative_eq!(
            bessel_ratio_cf(nu(4), z).unwrap(),
            4.0 / z - z / 2.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(bessel_ratio_cf(nu(2), z).unwrap(), 0.831_661_154_631_247_5, max_relative = 1e-13);
        assert_relative_eq!(bessel_ratio_cf(nu(4), z).unwrap(), 0.460_909_530_414_608_5, max_relative = 1e-12);
    }

    #[test]
    fn zeros_from_closed_forms() {
        assert_relative_eq!(first_zero(nu(1)).unwrap(), PI, max_relative = 1e-15);
        // j_{3/2} solves tan x = x
        let z = first_zero(nu(3)).unwrap();
        assert!((z.tan() - z).abs() < 1e-10);
        assert_relative_eq!(z, 4.493_409_457_909_064, max_relative = 1e-14);
    }

    #[test]
    fn bracket_encloses_every_zero() {
        for twice in 0..=198 {
            let order = nu(twice);
            let z = first_zero(order).unwrap();
            assert!(ZeroBracket::for_order(order).contains(z), "order {order}");
            let below = bessel_j(order, z - 1e-8).unwrap();
            let above = bessel_j(order, z + 1e-8).unwrap();
            assert!(below * above < 0.0, "order {order}");
        }
    }

    #[test]
    fn radial_integral_half_order_is_one() {
        // r J_{1/2}(r)^2 = (2/π) sin^2 r
        assert_relative_eq!(radial_norm_integral(nu(1)).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn radial_integral_matches_derivative_identity() {
        for twice in [0, 2, 4, 7, 20, 60] {
            let order = nu(twice);
            let z = first_zero(order).unwrap();
            let jp = bessel_j_prime(order, z).unwrap();
            let identity = 0.5 * z * z * jp * jp;
            assert_relative_eq!(radial_norm_integral(order).unwrap(), identity, max_relative = 1e-11);
        }
    }

    #[test]
    fn display_orders() {
        assert_eq!(nu(4).to_string(), "2");
        assert_eq!(nu(7).to_string(), "7/2");
    }

    #[test]
    fn mode_orders_step_by_one() {
        for dim in 2..40 {
            for k in 0..50 {
                let a = HalfIntOrder::for_mode(dim, k).unwrap();
                let b = HalfIntOrder::for_mode(dim, k + 1).unwrap();
                assert_eq!(b.twice() - a.twice(), 2);
            }
        }
        assert!(HalfIntOrder::for_dimension(1).is_err());
    }
}
