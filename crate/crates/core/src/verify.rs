//! Numerical checks of the relations between circle families, their
//! envelopes and associated curves.
//!
//! Every verifier returns a [`VerificationReport`] whose verdict is
//! `max_residual <= tolerance`; a precondition that does not hold is an
//! error, not a failed report.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assoc::{self, Angle, AssocError, BasePoint};
use crate::envelope::{
    build_envelope, CircleFamily, Classification, EnvelopeBranch, EnvelopeError, Sign,
};
use crate::frontal::{inflection_points, zero_set, FrontalData, FrontalError, Grid, ZeroSet};
use crate::geom::{derivative, derivative4, is_constant_curve, Vec2};
use crate::tolerance::{FINITE_DIFFERENCE_TOL, SYMBOLIC_TOL};

pub mod random;

/// The relations this module checks. The serialized ids are the identifiers
/// accepted by `circenv verify --relation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `f` lies on every circle and is tangent to it.
    #[serde(rename = "Def1.2")]
    EnvelopeDefinition,
    /// `ν̃` is the Gauss map of `f` with curvature `(l ± θ̇, λ(l ± θ̇) ± β sin θ)`.
    #[serde(rename = "T1.7-1")]
    EnvelopeFrame,
    /// The center curve is the evolute of the unique envelope.
    #[serde(rename = "T1.7-2i")]
    EvoluteOfEnvelope,
    /// Scaling radii by `cos φ` gives the `φ` and `π - φ` evolutoids.
    #[serde(rename = "T1.7-2ii")]
    ScaledFamilyEvolutoids,
    /// Circles with diameters `γP` envelope `P` and the contrapedal.
    #[serde(rename = "T1.7-2iii")]
    MidpointFamilyContrapedal,
    /// Circles with diameters from an evolutoid to `P` envelope `P` and the
    /// pedaloid.
    #[serde(rename = "T1.7-2iv")]
    PedaloidFamilyPedaloid,
    /// With one constant envelope `f₁`, `f₂` is the pedal of `2γ - f₁`
    /// relative to `f₁`.
    #[serde(rename = "T1.7-3")]
    PedalOfReflectedCenters,
    /// Singular points of the unique envelope are inflections of `γ`.
    #[serde(rename = "P4.1")]
    SingularitiesAtInflections,
    /// The circle at `t₀` with `|cos θ(t₀)| = 1` osculates the envelope.
    #[serde(rename = "P4.2")]
    OsculatingCircle,
    /// With `f₁` constant, singular points of `f₂` are inflections of `γ`.
    #[serde(rename = "P4.3-1")]
    ConstantEnvelopeSingularities,
    /// Two distinct constant envelopes: centers on their bisector.
    #[serde(rename = "P4.3-2")]
    CentersOnBisector,
    /// Two equal constant envelopes: centers on a line through them.
    #[serde(rename = "P4.3-3")]
    CentersOnLine,
    /// Pedaloids are pedals of evolutoids.
    #[serde(rename = "P4.4")]
    PedaloidOfEvolutoid,
}

impl Relation {
    pub const ALL: [Relation; 13] = [
        Relation::EnvelopeDefinition,
        Relation::EnvelopeFrame,
        Relation::EvoluteOfEnvelope,
        Relation::ScaledFamilyEvolutoids,
        Relation::MidpointFamilyContrapedal,
        Relation::PedaloidFamilyPedaloid,
        Relation::PedalOfReflectedCenters,
        Relation::SingularitiesAtInflections,
        Relation::OsculatingCircle,
        Relation::ConstantEnvelopeSingularities,
        Relation::CentersOnBisector,
        Relation::CentersOnLine,
        Relation::PedaloidOfEvolutoid,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::EnvelopeDefinition => "Def1.2",
            Relation::EnvelopeFrame => "T1.7-1",
            Relation::EvoluteOfEnvelope => "T1.7-2i",
            Relation::ScaledFamilyEvolutoids => "T1.7-2ii",
            Relation::MidpointFamilyContrapedal => "T1.7-2iii",
            Relation::PedaloidFamilyPedaloid => "T1.7-2iv",
            Relation::PedalOfReflectedCenters => "T1.7-3",
            Relation::SingularitiesAtInflections => "P4.1",
            Relation::OsculatingCircle => "P4.2",
            Relation::ConstantEnvelopeSingularities => "P4.3-1",
            Relation::CentersOnBisector => "P4.3-2",
            Relation::CentersOnLine => "P4.3-3",
            Relation::PedaloidOfEvolutoid => "P4.4",
        }
    }

    /// Tolerance used when none is given: looser where finite differences
    /// enter the residual.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Relation::EnvelopeDefinition
            | Relation::EnvelopeFrame
            | Relation::OsculatingCircle
            | Relation::ConstantEnvelopeSingularities => FINITE_DIFFERENCE_TOL,
            _ => SYMBOLIC_TOL,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown relation '{0}'")]
pub struct UnknownRelation(pub String);

impl FromStr for Relation {
    type Err = UnknownRelation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Relation::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| UnknownRelation(s.to_string()))
    }
}

/// Worst sample of a check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Worst {
    pub t: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub relation: Relation,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst: Option<Worst>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Report from per-sample residuals. A NaN residual fails.
    pub fn from_residuals(relation: Relation, ts: &[f64], residuals: &[f64], tolerance: f64) -> Self {
        let mut worst: Option<Worst> = None;
        for (&t, &r) in ts.iter().zip(residuals) {
            let r = if r.is_nan() { f64::INFINITY } else { r };
            if worst.map_or(true, |w| r > w.residual) {
                worst = Some(Worst { t, residual: r });
            }
        }
        let max_residual = worst.map_or(0.0, |w| w.residual);
        VerificationReport { relation, max_residual, tolerance, pass: max_residual <= tolerance, worst, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Combines two checks of the same relation: the worse residual wins.
    pub fn merge(self, other: VerificationReport) -> Self {
        let note = match (self.note, other.note) {
            (Some(a), Some(b)) => Some(format!("{}; {}", a, b)),
            (a, b) => a.or(b),
        };
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if b.residual > a.residual { b } else { a }),
            (a, b) => a.or(b),
        };
        let max_residual = self.max_residual.max(other.max_residual);
        VerificationReport {
            relation: self.relation,
            max_residual,
            tolerance: self.tolerance,
            pass: max_residual <= self.tolerance,
            worst,
            note,
        }
    }

    fn fail_with(mut self, t: f64, note: impl Into<String>) -> Self {
        self.max_residual = f64::INFINITY;
        self.pass = false;
        self.worst = Some(Worst { t, residual: f64::INFINITY });
        self.with_note(note)
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("relation needs a family with a unique envelope, found {0:?}")]
    NotUnique(Classification),
    #[error("angle {0} is forbidden (π/2 + kπ)")]
    ForbiddenAngle(f64),
    #[error("cos φ = {0} is not positive; the scaled family would have nonpositive radii")]
    NonPositiveScale(f64),
    #[error("samples do not match the family grid ({got} vs {expected})")]
    GridMismatch { got: usize, expected: usize },
    #[error("no constant envelope found")]
    NoConstantEnvelope,
    #[error("neither envelope is constant; the relation does not apply")]
    PatternNotApplicable,
    #[error("|cos θ(t0)| = {cos} is not 1 at t0 = {t0}")]
    NotOsculating { t0: f64, cos: f64 },
    #[error("t0 = {0} is an inflection of the envelope")]
    EnvelopeInflection(f64),
    #[error("t0 = {t0} lies outside the domain [{a}, {b}]")]
    OutsideDomain { t0: f64, a: f64, b: f64 },
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Frontal(#[from] FrontalError),
}

fn require_unique(family: &CircleFamily) -> Result<(), VerifyError> {
    match family.classify().variant {
        Classification::Unique => Ok(()),
        other => Err(VerifyError::NotUnique(other)),
    }
}

/// The unique envelope as a frontal with `α = λ`.
fn unique_envelope(family: &CircleFamily) -> Result<(EnvelopeBranch, FrontalData), VerifyError> {
    require_unique(family)?;
    let branch = build_envelope(family, &family.creative_check(), Sign::Plus)?;
    let mut fd = branch.to_frontal()?;
    fd.set_alpha(family.lambda.clone())?;
    Ok((branch, fd))
}

fn per_sample_pair(a: &[Vec2], b: &[Vec2], x: &[Vec2], y: &[Vec2]) -> Vec<f64> {
    (0..a.len())
        .map(|i| {
            let direct = a[i].distance(x[i]).max(b[i].distance(y[i]));
            let swapped = a[i].distance(y[i]).max(b[i].distance(x[i]));
            direct.min(swapped)
        })
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// `f` on the circles and tangent to them; `ḟ` by fourth-order central
/// differences.
pub fn verify_envelope_def(family: &CircleFamily, f: &[Vec2], tol: f64) -> Result<VerificationReport, VerifyError> {
    let fd = &family.frontal;
    if f.len() != fd.len() {
        return Err(VerifyError::GridMismatch { got: f.len(), expected: fd.len() });
    }
    let df = if f.len() >= 5 { derivative4(f, fd.grid.step()) } else { derivative(f, fd.grid.step()) };
    let residuals: Vec<f64> = (0..fd.len())
        .map(|i| {
            let r = f[i] - fd.gamma[i];
            let lam = family.lambda[i];
            let on_circle = (r.norm_sq() - lam * lam).abs() / (1.0 + lam * lam);
            let tangent = df[i].dot(r).abs() / (1.0 + df[i].norm() * lam);
            on_circle.max(tangent)
        })
        .collect();
    Ok(VerificationReport::from_residuals(Relation::EnvelopeDefinition, &fd.ts(), &residuals, tol))
}

/// Finite differences of `f` and `ν̃` against `β_f μ̃` and `l_f μ̃`.
pub fn verify_envelope_frame(branch: &EnvelopeBranch, tol: f64) -> VerificationReport {
    let h = branch.grid.step();
    let df = derivative(&branch.f, h);
    let dnu = derivative(&branch.nu_tilde, h);
    let residuals: Vec<f64> = (0..branch.len())
        .map(|i| {
            let a = (df[i] - branch.beta_f[i] * branch.mu_tilde[i]).norm() / (1.0 + branch.beta_f[i].abs());
            let b = (dnu[i] - branch.l_f[i] * branch.mu_tilde[i]).norm() / (1.0 + branch.l_f[i].abs());
            a.max(b)
        })
        .collect();
    VerificationReport::from_residuals(Relation::EnvelopeFrame, &branch.grid.ts(), &residuals, tol)
}

/// The evolute `f - α_f ν̃` of the unique envelope against `γ`, with
/// `α_f = β_f/l_f` where `l_f ≠ 0` and `α_f = λ` elsewhere.
pub fn verify_2i(family: &CircleFamily, tol: f64) -> Result<VerificationReport, VerifyError> {
    require_unique(family)?;
    let branch = build_envelope(family, &family.creative_check(), Sign::Plus)?;
    let fd = &family.frontal;
    let mut declared = 0;
    let residuals: Vec<f64> = (0..fd.len())
        .map(|i| {
            let alpha = if branch.l_f[i].abs() > fd.tol.zero {
                branch.beta_f[i] / branch.l_f[i]
            } else {
                declared += 1;
                family.lambda[i]
            };
            (branch.f[i] - alpha * branch.nu_tilde[i]).distance(fd.gamma[i])
        })
        .collect();
    let report = VerificationReport::from_residuals(Relation::EvoluteOfEnvelope, &fd.ts(), &residuals, tol);
    Ok(if declared > 0 {
        report.with_note(format!("alpha_f = lambda declared on {} samples where l_f = 0", declared))
    } else {
        report
    })
}

/// Envelopes of `(γ, cos φ · λ)` against the `φ` and `π - φ` evolutoids of
/// the unique envelope, matched as an unordered pair.
pub fn verify_2ii(family: &CircleFamily, phi: Angle, tol: f64) -> Result<VerificationReport, VerifyError> {
    if phi.is_right_angle_mod_pi() {
        return Err(VerifyError::ForbiddenAngle(phi.0));
    }
    let scale = phi.0.cos();
    if scale <= 0.0 {
        return Err(VerifyError::NonPositiveScale(scale));
    }
    let (_, f) = unique_envelope(family)?;
    let (e1, e2) = family.scaled(scale)?.envelopes()?;
    let x = assoc::evolutoid(&f, phi)?.points;
    let y = assoc::evolutoid(&f, Angle(PI - phi.0))?.points;
    let dist = |a: &[Vec2], b: &[Vec2]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p.distance(*q)).collect() };
    let direct: Vec<f64> = dist(&e1.f, &x).into_iter().zip(dist(&e2.f, &y)).map(|(a, b)| a.max(b)).collect();
    let swapped: Vec<f64> = dist(&e1.f, &y).into_iter().zip(dist(&e2.f, &x)).map(|(a, b)| a.max(b)).collect();
    let residuals = if max_of(&direct) <= max_of(&swapped) { direct } else { swapped };
    Ok(VerificationReport::from_residuals(Relation::ScaledFamilyEvolutoids, &f.ts(), &residuals, tol))
}

/// Envelopes of the midpoint family against `{P, contrapedal of f}`.
pub fn verify_2iii(family: &CircleFamily, p: BasePoint, tol: f64) -> Result<VerificationReport, VerifyError> {
    let (_, f) = unique_envelope(family)?;
    let aux = assoc::midpoint_family(family, p)?;
    let (e1, e2) = aux.envelopes()?;
    let expected = assoc::contrapedal(&f, p).points;
    let fixed = vec![p.0; f.len()];
    let residuals = per_sample_pair(&e1.f, &e2.f, &fixed, &expected);
    Ok(VerificationReport::from_residuals(Relation::MidpointFamilyContrapedal, &f.ts(), &residuals, tol))
}

/// Envelopes of the pedaloid family against `{P, φ-pedaloid of f}`.
pub fn verify_2iv(family: &CircleFamily, p: BasePoint, phi: Angle, tol: f64) -> Result<VerificationReport, VerifyError> {
    let (_, f) = unique_envelope(family)?;
    let aux = assoc::pedaloid_family(family, p, phi)?;
    let (e1, e2) = aux.envelopes()?;
    let expected = assoc::pedaloid(&f, p, phi).points;
    let fixed = vec![p.0; f.len()];
    let residuals = per_sample_pair(&e1.f, &e2.f, &fixed, &expected);
    Ok(VerificationReport::from_residuals(Relation::PedaloidFamilyPedaloid, &f.ts(), &residuals, tol))
}

/// Constant envelope (if any) of a pair of branches.
fn constant_envelope(a: &EnvelopeBranch, b: &EnvelopeBranch) -> (Option<Vec2>, Option<Vec2>) {
    (is_constant_curve(&a.f), is_constant_curve(&b.f))
}

/// With `f₁` constant, `f₂` against the pedal of `2γ - f₁` relative to
/// `f₁`, which is `f₁ + 2((γ - f₁)·ν)ν`.
pub fn verify_3(family: &CircleFamily, tol: f64) -> Result<VerificationReport, VerifyError> {
    let (a, b) = family.envelopes()?;
    let fixed = match constant_envelope(&a, &b) {
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(VerifyError::NoConstantEnvelope),
    };
    let fd = &family.frontal;
    let pedal: Vec<Vec2> = (0..fd.len())
        .map(|i| {
            let g = 2.0 * fd.gamma[i];
            g + (fixed - g).dot(fd.mu[i]) * fd.mu[i]
        })
        .collect();
    let residuals = per_sample_pair(&a.f, &b.f, &vec![fixed; fd.len()], &pedal);
    Ok(VerificationReport::from_residuals(Relation::PedalOfReflectedCenters, &fd.ts(), &residuals, tol))
}

fn lerp_at(grid: &Grid, values: &[f64], t: f64) -> f64 {
    let i = grid.cell(t);
    let w = (t - grid.t(i)) / grid.step();
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// `β_f = expected` pointwise, plus agreement of the zero sets of `β_f` and `l`.
fn singular_inflection_check(
    relation: Relation,
    fd: &FrontalData,
    beta_f: &[f64],
    expected: &[f64],
    tol: f64,
) -> VerificationReport {
    let residuals: Vec<f64> = beta_f
        .iter()
        .zip(expected)
        .map(|(b, e)| (b - e).abs() / (1.0 + b.abs()))
        .collect();
    let report = VerificationReport::from_residuals(relation, &fd.ts(), &residuals, tol);
    let grid = fd.grid;
    let singular: ZeroSet = zero_set(&grid, beta_f, |t| lerp_at(&grid, beta_f, t), fd.tol.zero);
    let inflections = inflection_points(fd);
    if singular.matches(&inflections, 2.0 * grid.step()) {
        report
    } else {
        let t = singular
            .locations()
            .into_iter()
            .chain(inflections.locations())
            .next()
            .unwrap_or(grid.a);
        report.fail_with(
            t,
            format!(
                "singular points {:?} do not match inflections {:?}",
                singular.locations(),
                inflections.locations()
            ),
        )
    }
}

/// `β_f = lλ` for the unique envelope, and singular points of `f` are
/// exactly the inflections of `γ`.
pub fn verify_prop41(family: &CircleFamily, tol: f64) -> Result<VerificationReport, VerifyError> {
    require_unique(family)?;
    let branch = build_envelope(family, &family.creative_check(), Sign::Plus)?;
    let fd = &family.frontal;
    let expected: Vec<f64> = (0..fd.len()).map(|i| fd.l[i] * family.lambda[i]).collect();
    Ok(singular_inflection_check(Relation::SingularitiesAtInflections, fd, &branch.beta_f, &expected, tol))
}

/// At the sample nearest `t0`, where `|cos θ| = 1`, the circle is the
/// osculating circle of the envelope: its center is `f - (β_f/l_f) ν̃` and
/// the envelope frame agrees with finite differences there.
pub fn verify_prop42(family: &CircleFamily, t0: f64, tol: f64) -> Result<VerificationReport, VerifyError> {
    let fd = &family.frontal;
    let grid = fd.grid;
    if !grid.contains(t0) {
        return Err(VerifyError::OutsideDomain { t0, a: grid.a, b: grid.b });
    }
    let i = grid.nearest(t0);
    let t = grid.t(i);
    let witness = family.creative_check();
    let cos = witness.cos_theta[i];
    if (cos.abs() - 1.0).abs() > 1e-9 {
        return Err(VerifyError::NotOsculating { t0: t, cos });
    }
    let branch = build_envelope(family, &witness, Sign::Plus)?;
    if branch.l_f[i].abs() <= fd.tol.zero {
        return Err(VerifyError::EnvelopeInflection(t));
    }
    let lam = family.lambda[i];
    let curvature = (lam * branch.l_f[i] - branch.beta_f[i]).abs() / (1.0 + branch.beta_f[i].abs());
    let center = branch.f[i] - (branch.beta_f[i] / branch.l_f[i]) * branch.nu_tilde[i];
    let center_residual = center.distance(fd.gamma[i]) / (1.0 + lam);
    // frame consistency at the single sample i
    let h = grid.step();
    let lo = i.saturating_sub(1).min(grid.n - 3);
    let window = |v: &[Vec2]| derivative(&v[lo..lo + 3], h)[i - lo];
    let df = window(&branch.f);
    let dnu = window(&branch.nu_tilde);
    let fd_residual = ((df - branch.beta_f[i] * branch.mu_tilde[i]).norm() / (1.0 + branch.beta_f[i].abs()))
        .max((dnu - branch.l_f[i] * branch.mu_tilde[i]).norm() / (1.0 + branch.l_f[i].abs()));
    let residual = curvature.max(center_residual).max(fd_residual);
    Ok(VerificationReport::from_residuals(Relation::OsculatingCircle, &[t], &[residual], tol)
        .with_note(format!("checked at sample t = {}", t)))
}

/// Distance of each point to the line through `origin` best fitting them.
fn distances_to_best_line(points: &[Vec2], origin: Vec2) -> Vec<f64> {
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = *p - origin;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    // principal direction of the scatter matrix
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = Vec2::new(-angle.sin(), angle.cos());
    points.iter().map(|p| (*p - origin).dot(normal).abs()).collect()
}

/// Geometry of circle families with a constant envelope, dispatched on the
/// detected pattern.
pub fn verify_prop43(family: &CircleFamily, tol: f64) -> Result<VerificationReport, VerifyError> {
    let (a, b) = family.envelopes()?;
    let fd = &family.frontal;
    let ts = fd.ts();
    match constant_envelope(&a, &b) {
        (Some(c1), Some(c2)) => {
            let scale = 1.0 + c1.norm().max(c2.norm());
            if c1.distance(c2) > 1e-8 * scale {
                let mid = 0.5 * (c1 + c2);
                let axis = (c2 - c1).normalized();
                let residuals: Vec<f64> = fd.gamma.iter().map(|g| (*g - mid).dot(axis).abs()).collect();
                Ok(VerificationReport::from_residuals(Relation::CentersOnBisector, &ts, &residuals, tol))
            } else {
                let residuals = distances_to_best_line(&fd.gamma, c1);
                Ok(VerificationReport::from_residuals(Relation::CentersOnLine, &ts, &residuals, tol))
            }
        }
        (Some(_), None) | (None, Some(_)) => {
            let other = if is_constant_curve(&a.f).is_some() { &b } else { &a };
            let expected: Vec<f64> = (0..fd.len()).map(|i| 2.0 * family.lambda[i] * fd.l[i]).collect();
            Ok(singular_inflection_check(Relation::ConstantEnvelopeSingularities, fd, &other.beta_f, &expected, tol))
        }
        (None, None) => Err(VerifyError::PatternNotApplicable),
    }
}

/// `φ`-pedaloid of `f` against the pedal of its `(φ + π/2)`-evolutoid,
/// both relative to `P`.
pub fn verify_prop44(f: &FrontalData, p: BasePoint, phi: Angle, tol: f64) -> Result<VerificationReport, VerifyError> {
    let evo = assoc::evolutoid_frontal(f, Angle(phi.0 + FRAC_PI_2))?;
    let (distance, t) = evo
        .gamma
        .iter()
        .zip(evo.ts())
        .map(|(q, t)| (q.distance(p.0), t))
        .fold((f64::INFINITY, f64::NAN), |best, x| if x.0 < best.0 { x } else { best });
    let lhs = assoc::pedaloid(f, p, phi);
    let rhs = assoc::pedal(&evo, p);
    let residuals: Vec<f64> = lhs.points.iter().zip(&rhs.points).map(|(a, b)| a.distance(*b)).collect();
    let report = VerificationReport::from_residuals(Relation::PedaloidOfEvolutoid, &lhs.t, &residuals, tol);
    // the identity holds pointwise even there; only the pedaloid family
    // construction needs P off this evolutoid
    Ok(if distance <= 1e-9 {
        report.with_note(format!("P lies on the (phi + pi/2)-evolutoid near t = {}", t))
    } else {
        report
    })
}

impl VerificationReport {
    /// Checks performed in both directions on the same relation are merged
    /// into one report.
    pub fn combine(reports: Vec<VerificationReport>) -> Option<VerificationReport> {
        reports.into_iter().reduce(VerificationReport::merge)
    }
}
