//! Curves associated with a frontal: involute, evolute, evolutoids and
//! pedaloids, plus the two auxiliary circle families whose envelopes are
//! contrapedals and pedaloids of an envelope.
//!
//! With frame `{ν, μ}` and `β = lα`:
//!
//! - evolute `γ - αν`;
//! - `φ`-evolutoid `γ - α sin φ (cos φ μ + sin φ ν)`, from `γ` (`φ = 0`) to
//!   the evolute (`φ = π/2`);
//! - `φ`-pedaloid relative to `P`: `γ + ((P - γ)·w) w` with
//!   `w = sin φ μ - cos φ ν`, from the contrapedal (`φ = 0`) to the pedal
//!   (`φ = π/2`).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::{CircleFamily, Classification, EnvelopeError};
use crate::frontal::{FrontalData, FrontalError, SampledFrame};
use crate::geom::Vec2;
use crate::io::SampledCurve;

#[derive(Debug, Error)]
pub enum AssocError {
    #[error("t0 = {t0} lies outside the domain [{a}, {b}]")]
    OutsideDomain { t0: f64, a: f64, b: f64 },
    #[error("evolute undefined at inflection (t = {t}); declare alpha")]
    EvoluteUndefined { t: f64 },
    #[error("base point lies on the center curve (distance {distance:.3e} at t = {t})")]
    PointOnCurve { t: f64, distance: f64 },
    #[error("base point lies on the excluded evolutoid (distance {distance:.3e} at t = {t})")]
    PointOnEvolutoid { t: f64, distance: f64 },
    #[error("pedaloid family needs a family with a unique envelope, found {0:?}")]
    NotUnique(Classification),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Frontal(#[from] FrontalError),
}

/// Fixed angle of an evolutoid or pedaloid, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angle(pub f64);

impl Angle {
    /// `(sin φ, cos φ)`, exact at multiples of `π/2`: `FRAC_PI_2` is not
    /// exactly `π/2`, and `cos(FRAC_PI_2) ≈ 6e-17` would leave `α`-sized
    /// residue in the evolutoid.
    pub fn sin_cos(self) -> (f64, f64) {
        let q = self.0 / FRAC_PI_2;
        let k = q.round();
        if (q - k).abs() <= 4.0 * f64::EPSILON * k.abs().max(1.0) {
            return match (k as i64).rem_euclid(4) {
                0 => (0.0, 1.0),
                1 => (1.0, 0.0),
                2 => (0.0, -1.0),
                _ => (-1.0, 0.0),
            };
        }
        self.0.sin_cos()
    }

    /// Whether the angle is `π/2 + kπ` within `1e-12`.
    pub fn is_right_angle_mod_pi(self) -> bool {
        let r = (self.0 - FRAC_PI_2).rem_euclid(std::f64::consts::PI);
        r.min(std::f64::consts::PI - r) <= 1e-12
    }
}

/// Fixed base point of a pedal-type curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePoint(pub Vec2);

/// Minimum distance from `p` to the samples and where it is attained.
fn closest(points: &[Vec2], ts: &[f64], p: Vec2) -> (f64, f64) {
    points
        .iter()
        .zip(ts)
        .map(|(q, &t)| (q.distance(p), t))
        .fold((f64::INFINITY, f64::NAN), |best, x| if x.0 < best.0 { x } else { best })
}

const EXCLUSION_MARGIN: f64 = 1e-9;

/// Involute together with an estimate of the quadrature error.
#[derive(Debug, Clone)]
pub struct Involute {
    pub curve: SampledCurve,
    pub error_estimate: f64,
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, parts: usize) -> f64 {
    let h = (b - a) / parts as f64;
    let mut sum = f(a) + f(b);
    for k in 1..parts {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// `γ(t) - (∫_{t0}^t β) μ(t)`.
///
/// With a closed-form frontal, `∫β` is composite Simpson with four
/// sub-intervals per grid cell; the error estimate is the Richardson
/// difference against two sub-intervals. From samples alone the trapezoid
/// rule is used.
pub fn involute(fd: &FrontalData, t0: f64) -> Result<Involute, AssocError> {
    let grid = fd.grid;
    if !grid.contains(t0) {
        return Err(AssocError::OutsideDomain { t0, a: grid.a, b: grid.b });
    }
    let n = grid.n;
    let ts = grid.ts();
    let mut cumulative = vec![0.0; n];
    let mut error = 0.0;
    let j = grid.cell(t0);
    let partial;
    if fd.symbolic().is_some() {
        let beta = |t: f64| fd.beta_at(t);
        for i in 1..n {
            let fine = simpson(&beta, ts[i - 1], ts[i], 4);
            let coarse = simpson(&beta, ts[i - 1], ts[i], 2);
            error += (fine - coarse).abs() / 15.0;
            cumulative[i] = cumulative[i - 1] + fine;
        }
        partial = if t0 == ts[j] { 0.0 } else { simpson(&beta, ts[j], t0, 4) };
    } else {
        let h = grid.step();
        for i in 1..n {
            cumulative[i] = cumulative[i - 1] + 0.5 * h * (fd.beta[i - 1] + fd.beta[i]);
            if i + 1 < n {
                error += h * (fd.beta[i + 1] - 2.0 * fd.beta[i] + fd.beta[i - 1]).abs() / 12.0;
            }
        }
        let w = (t0 - ts[j]) / h;
        let b0 = fd.beta[j] * (1.0 - w) + fd.beta[j + 1] * w;
        partial = 0.5 * (t0 - ts[j]) * (fd.beta[j] + b0);
    }
    let base = cumulative[j] + partial;
    let points = (0..n).map(|i| fd.gamma[i] - (cumulative[i] - base) * fd.mu[i]).collect();
    Ok(Involute { curve: SampledCurve::new(ts, points), error_estimate: error })
}

fn require_alpha(fd: &FrontalData) -> Result<Vec<f64>, AssocError> {
    fd.alpha
        .iter()
        .enumerate()
        .map(|(i, a)| a.ok_or(AssocError::EvoluteUndefined { t: fd.grid.t(i) }))
        .collect()
}

/// `γ - αν`.
pub fn evolute(fd: &FrontalData) -> Result<SampledCurve, AssocError> {
    let alpha = require_alpha(fd)?;
    let points = (0..fd.len()).map(|i| fd.gamma[i] - alpha[i] * fd.nu[i]).collect();
    Ok(SampledCurve::new(fd.ts(), points))
}

/// `γ - α sin φ (cos φ μ + sin φ ν)`. At `sin φ = 0` this is `γ` and `α`
/// is not needed.
pub fn evolutoid(fd: &FrontalData, phi: Angle) -> Result<SampledCurve, AssocError> {
    let (s, c) = phi.sin_cos();
    if s == 0.0 {
        return Ok(SampledCurve::new(fd.ts(), fd.gamma.clone()));
    }
    let alpha = require_alpha(fd)?;
    let points = (0..fd.len())
        .map(|i| fd.gamma[i] - alpha[i] * s * (c * fd.mu[i] + s * fd.nu[i]))
        .collect();
    Ok(SampledCurve::new(fd.ts(), points))
}

/// The evolutoid as a frontal, with Gauss map `cos φ ν - sin φ μ`,
/// `l` unchanged and `β = β cos φ - α̇ sin φ`.
pub fn evolutoid_frontal(fd: &FrontalData, phi: Angle) -> Result<FrontalData, AssocError> {
    let (s, c) = phi.sin_cos();
    let curve = evolutoid(fd, phi)?;
    let alpha_dot = if s == 0.0 {
        vec![0.0; fd.len()]
    } else {
        fd.alpha_dot().ok_or_else(|| {
            let i = fd.alpha.iter().position(Option::is_none).unwrap_or(0);
            AssocError::EvoluteUndefined { t: fd.grid.t(i) }
        })?
    };
    let nu: Vec<Vec2> = (0..fd.len()).map(|i| c * fd.nu[i] - s * fd.mu[i]).collect();
    let gamma_dot = (0..fd.len())
        .map(|i| (fd.beta[i] * c - alpha_dot[i] * s) * nu[i].rotate90())
        .collect();
    Ok(FrontalData::from_samples(
        fd.grid,
        curve.points,
        gamma_dot,
        SampledFrame::Declared { nu, l: fd.l.clone() },
        &fd.tol,
    )?)
}

/// `γ + ((P - γ)·w) w` with `w = sin φ μ - cos φ ν`.
pub fn pedaloid(fd: &FrontalData, p: BasePoint, phi: Angle) -> SampledCurve {
    let (s, c) = phi.sin_cos();
    let points = (0..fd.len())
        .map(|i| {
            let w = s * fd.mu[i] - c * fd.nu[i];
            fd.gamma[i] + (p.0 - fd.gamma[i]).dot(w) * w
        })
        .collect();
    SampledCurve::new(fd.ts(), points)
}

/// Feet of the perpendiculars from `P` to the tangent lines.
pub fn pedal(fd: &FrontalData, p: BasePoint) -> SampledCurve {
    pedaloid(fd, p, Angle(FRAC_PI_2))
}

/// Feet of the perpendiculars from `P` to the normal lines.
pub fn contrapedal(fd: &FrontalData, p: BasePoint) -> SampledCurve {
    pedaloid(fd, p, Angle(0.0))
}

/// Circles on the segments from `γ` to `P` as diameters: center
/// `(γ + P)/2`, radius `|γ - P|/2`. `P` lies on every circle, so it is an
/// envelope; the other envelope is the contrapedal of the family's own
/// envelope.
///
/// The Gauss map is inherited from the parent (`γ̇₁ = γ̇/2`, so
/// `β₁ = β/2` and `l₁ = l`).
pub fn midpoint_family(family: &CircleFamily, p: BasePoint) -> Result<CircleFamily, AssocError> {
    let fd = &family.frontal;
    let ts = fd.ts();
    let (distance, t) = closest(&fd.gamma, &ts, p.0);
    if distance <= EXCLUSION_MARGIN {
        return Err(AssocError::PointOnCurve { t, distance });
    }
    let gamma: Vec<Vec2> = fd.gamma.iter().map(|&g| 0.5 * (g + p.0)).collect();
    let gamma_dot: Vec<Vec2> = fd.gamma_dot.iter().map(|&v| 0.5 * v).collect();
    let lambda: Vec<f64> = fd.gamma.iter().map(|g| 0.5 * g.distance(p.0)).collect();
    let lambda_dot = (0..fd.len())
        .map(|i| (fd.gamma[i] - p.0).dot(fd.gamma_dot[i]) / (4.0 * lambda[i]))
        .collect();
    let frontal = FrontalData::from_samples(
        fd.grid,
        gamma,
        gamma_dot,
        SampledFrame::Declared { nu: fd.nu.clone(), l: fd.l.clone() },
        &fd.tol,
    )?;
    Ok(CircleFamily::new(frontal, lambda, lambda_dot)?)
}

/// Circles on the segments from the `(φ + π/2)`-evolutoid `c` of the
/// envelope to `P` as diameters:
/// `γ₂ = (γ + λ sin φ cos θ (-sin φ μ + cos φ ν) + P)/2`, `λ₂ = |c - P|/2`.
/// Its envelopes are `P` and the `φ`-pedaloid of the family's envelope.
///
/// Requires a family with a unique envelope (`cos θ ≡ ±1`); the sign of
/// `cos θ` orients the evolutoid.
pub fn pedaloid_family(family: &CircleFamily, p: BasePoint, phi: Angle) -> Result<CircleFamily, AssocError> {
    let class = family.classify();
    if class.variant != Classification::Unique {
        return Err(AssocError::NotUnique(class.variant));
    }
    let witness = family.creative_check();
    let fd = &family.frontal;
    let (s, c) = phi.sin_cos();
    let (a, b) = (-s, c);
    let n = family.len();
    let mut center = Vec::with_capacity(n);
    let mut center_dot = Vec::with_capacity(n);
    for i in 0..n {
        let k = witness.cos_theta[i] * s;
        let (lam, lam_dot, l) = (family.lambda[i], family.lambda_dot[i], fd.l[i]);
        center.push(fd.gamma[i] + lam * k * (a * fd.mu[i] + b * fd.nu[i]));
        let along_mu = fd.beta[i] + lam_dot * k * a + lam * k * b * l;
        let along_nu = lam_dot * k * b - lam * k * a * l;
        center_dot.push(along_mu * fd.mu[i] + along_nu * fd.nu[i]);
    }
    let ts = fd.ts();
    let (distance, t) = closest(&center, &ts, p.0);
    if distance <= EXCLUSION_MARGIN {
        return Err(AssocError::PointOnEvolutoid { t, distance });
    }
    let lambda: Vec<f64> = center.iter().map(|q| 0.5 * q.distance(p.0)).collect();
    let lambda_dot = (0..n)
        .map(|i| (center[i] - p.0).dot(center_dot[i]) / (4.0 * lambda[i]))
        .collect();
    let nu = (0..n).map(|i| c * fd.nu[i] - s * fd.mu[i]).collect();
    let frontal = FrontalData::from_samples(
        fd.grid,
        center.iter().map(|&q| 0.5 * (q + p.0)).collect(),
        center_dot.iter().map(|&v| 0.5 * v).collect(),
        SampledFrame::Declared { nu, l: fd.l.clone() },
        &fd.tol,
    )?;
    Ok(CircleFamily::new(frontal, lambda, lambda_dot)?)
}
