//! Cardy's crossing formula and the few explicit conformal maps used to
//! put test domains into a reference position.
//!
//! All crossing predictions go through the unit disc: points of the
//! half-plane or of the upper unit semi-disc are first mapped to the unit
//! circle, where counterclockwise order is read off from arguments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use thiserror::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_TERMS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CardyError {
    #[error("cross-ratio denominator vanishes")]
    DegenerateDenominator,
    #[error("cross-ratio has imaginary part {0:e}; points are not on a common circle")]
    NotReal(f64),
    #[error("eta = {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("series did not reach tolerance {0:e}")]
    ToleranceNotReached(f64),
    #[error("z = -1 is the pole of the disc-to-half-plane map")]
    PoleAtMinusOne,
    #[error("point {0} is not on the boundary of the reference domain")]
    NotOnBoundary(Complex64),
    #[error("points are not in counterclockwise order a, c, x, d")]
    OrderViolation,
}

/// A crossing probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CardyValue {
    pub probability: f64,
    pub series_terms: usize,
    pub error_bound: f64,
}

/// `((w1 - w2)(w3 - w4)) / ((w1 - w3)(w2 - w4))` as a complex number.
pub fn cross_ratio_complex(w1: Complex64, w2: Complex64, w3: Complex64, w4: Complex64) -> Result<Complex64, CardyError> {
    let den = (w1 - w3) * (w2 - w4);
    if den.norm() < 1e-300 {
        return Err(CardyError::DegenerateDenominator);
    }
    Ok((w1 - w2) * (w3 - w4) / den)
}

/// The cross-ratio of four concyclic points, which is real.
pub fn cross_ratio(w1: Complex64, w2: Complex64, w3: Complex64, w4: Complex64) -> Result<f64, CardyError> {
    let eta = cross_ratio_complex(w1, w2, w3, w4)?;
    if eta.im.abs() > 1e-9 * eta.re.abs().max(1.0) {
        return Err(CardyError::NotReal(eta.im));
    }
    Ok(eta.re)
}

/// `Γ(2/3) / (Γ(4/3) Γ(1/3))`.
pub fn cardy_prefactor() -> f64 {
    gamma(2.0 / 3.0) / (gamma(4.0 / 3.0) * gamma(1.0 / 3.0))
}

/// Cardy's formula summed straight from the power series of
/// `η^{1/3} ₂F₁(1/3, 2/3; 4/3; η)` for any `η` in `[0, 1)`.
///
/// Each coefficient ratio is below one, so the tail after term `n` is at
/// most `t_n · η / (1 - η)`; summation stops once that bound, scaled by the
/// prefactor, is below `tol`.
pub fn cardy_series(eta: f64, tol: f64) -> Result<CardyValue, CardyError> {
    if !(0.0..1.0).contains(&eta) {
        return Err(CardyError::OutOfRange(eta));
    }
    let scale = cardy_prefactor() * eta.cbrt();
    if eta == 0.0 {
        return Ok(CardyValue { probability: 0.0, series_terms: 0, error_bound: 0.0 });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let bound = scale * term * eta / (1.0 - eta);
        if bound <= tol {
            return Ok(CardyValue { probability: scale * sum, series_terms: n + 1, error_bound: bound });
        }
        let k = n as f64;
        term *= (k + 1.0 / 3.0) * (k + 2.0 / 3.0) / ((k + 4.0 / 3.0) * (k + 1.0)) * eta;
        sum += term;
    }
    Err(CardyError::ToleranceNotReached(tol))
}

/// Cardy's crossing probability `F(η)`. The series is used up to `η = 1/2`
/// and `F(η) = 1 - F(1 - η)` beyond.
pub fn cardy_f(eta: f64, tol: f64) -> Result<CardyValue, CardyError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(CardyError::OutOfRange(eta));
    }
    if eta <= 0.5 {
        cardy_series(eta, tol)
    } else {
        let v = cardy_series(1.0 - eta, tol)?;
        Ok(CardyValue { probability: 1.0 - v.probability, ..v })
    }
}

/// `F(η)` at the default tolerance `1e-14`.
pub fn cardy(eta: f64) -> f64 {
    cardy_f(eta.clamp(0.0, 1.0), 1e-14).expect("series converges on [0, 1/2]").probability
}

/// `w = i (1 - z) / (1 + z)`, unit disc onto the upper half-plane.
pub fn mobius_disc_to_half(z: Complex64) -> Result<Complex64, CardyError> {
    let den = 1.0 + z;
    if den.norm() < 1e-300 {
        return Err(CardyError::PoleAtMinusOne);
    }
    Ok(I * (1.0 - z) / den)
}

/// Inverse of [`mobius_disc_to_half`]: `z = (i - w) / (i + w)`. An infinite
/// `w` goes to `-1`.
pub fn mobius_half_to_disc(w: Complex64) -> Complex64 {
    if !w.is_finite() {
        return Complex64::new(-1.0, 0.0);
    }
    (I - w) / (I + w)
}

/// `w = -(z + 1/z) / 2`, upper unit semi-disc onto the upper half-plane.
/// The origin goes to infinity; the arc `e^{iθ}` to `-cos θ`.
pub fn joukowski(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    -(z + z.inv()) / 2.0
}

/// Reference domains with an explicit map to the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReferenceDomain {
    Disc,
    HalfPlane,
    /// The upper half of the unit disc.
    SemiDisc,
}

impl ReferenceDomain {
    fn on_boundary(self, z: Complex64) -> bool {
        const EPS: f64 = 1e-9;
        match self {
            ReferenceDomain::Disc => (z.norm() - 1.0).abs() <= EPS,
            ReferenceDomain::HalfPlane => !z.is_finite() || z.im.abs() <= EPS,
            ReferenceDomain::SemiDisc => {
                (z.im.abs() <= EPS && z.re.abs() <= 1.0 + EPS) || ((z.norm() - 1.0).abs() <= EPS && z.im >= -EPS)
            }
        }
    }

    /// Boundary point moved to the unit circle.
    pub fn to_circle(self, z: Complex64) -> Result<Complex64, CardyError> {
        if !self.on_boundary(z) {
            return Err(CardyError::NotOnBoundary(z));
        }
        let w = match self {
            ReferenceDomain::Disc => z,
            ReferenceDomain::HalfPlane => mobius_half_to_disc(z),
            ReferenceDomain::SemiDisc => {
                // mobius_half_to_disc(joukowski(z)) with z multiplied through,
                // finite at z = 0
                let s = z * z + 1.0;
                -(s + 2.0 * I * z) / (s - 2.0 * I * z)
            }
        };
        Ok(w / w.norm())
    }
}

/// Counterclockwise angle from `from` to `to` on the unit circle, in `[0, 2π)`.
fn ccw_angle(from: Complex64, to: Complex64) -> f64 {
    let a = (to / from).arg();
    if a < 0.0 { a + std::f64::consts::TAU } else { a }
}

/// Continuum probability of a crossing from arc `z1 z2` to arc `z3 z4` for
/// counterclockwise boundary points of a reference domain.
pub fn crossing_probability(domain: ReferenceDomain, z: [Complex64; 4]) -> Result<CardyValue, CardyError> {
    let [w1, w2, w3, w4] = [domain.to_circle(z[0])?, domain.to_circle(z[1])?, domain.to_circle(z[2])?, domain.to_circle(z[3])?];
    let (t2, t3, t4) = (ccw_angle(w1, w2), ccw_angle(w1, w3), ccw_angle(w1, w4));
    if !(t2 <= t3 && t3 <= t4) {
        return Err(CardyError::OrderViolation);
    }
    let eta = cross_ratio(w1, w2, w3, w4)?;
    cardy_f(eta.clamp(0.0, 1.0), 1e-14)
}

/// Probability that a curve from `a` first reaches the arc from `c` to `d`
/// somewhere between `c` and `x`: `1 - Φ(a, c; x, d)`. The points must be
/// in counterclockwise order `a, c, x, d`; `x` may coincide with `c` or `d`.
pub fn hitting_cdf(domain: ReferenceDomain, a: Complex64, c: Complex64, d: Complex64, x: Complex64) -> Result<f64, CardyError> {
    let [wa, wc, wx, wd] = [domain.to_circle(a)?, domain.to_circle(c)?, domain.to_circle(x)?, domain.to_circle(d)?];
    let (tc, tx, td) = (ccw_angle(wa, wc), ccw_angle(wa, wx), ccw_angle(wa, wd));
    const SLACK: f64 = 1e-12;
    if tc == 0.0 || tc > td || tx + SLACK < tc || tx > td + SLACK {
        return Err(CardyError::OrderViolation);
    }
    if (tx - tc).abs() <= SLACK {
        return Ok(0.0);
    }
    if (tx - td).abs() <= SLACK {
        return Ok(1.0);
    }
    let eta = cross_ratio(wa, wc, wx, wd)?;
    Ok(1.0 - cardy(eta))
}

/// Hitting distribution of the unit semicircle for a curve started at the
/// origin of the semi-disc, as a function of the exit angle `θ` measured
/// from the positive real axis: `F((1 - cos θ) / 2)`.
pub fn semicircle_hitting_cdf(theta: f64) -> f64 {
    cardy(((1.0 - theta.cos()) / 2.0).clamp(0.0, 1.0))
}
