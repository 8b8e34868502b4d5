//! Creativity, creators and envelopes of circle families.
//!
//! A family `(γ, λ)` is creative when `λ̇ = cos θ · β` for a continuous `θ`.
//! On samples with `β ≠ 0` the ratio `λ̇/β` pins `cos θ` down; elsewhere it
//! is interpolated from the neighbours. `sin θ` is always taken
//! nonnegative and the two creators `ν̃± = -cos θ μ ± sin θ ν` carry the sign.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::FamilySpec;
use crate::expr::EvalError;
use crate::frontal::{build_frontal, FrontalData, FrontalError, SampledFrame};
use crate::geom::{derivative, Vec2};
use crate::io::write_table;
use crate::tolerance::Tolerances;

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error("family has no radius")]
    MissingRadius,
    #[error(transparent)]
    Frontal(#[from] FrontalError),
    #[error("radius evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("radius must be positive, got {value} at t = {t}")]
    NonPositiveRadius { t: f64, value: f64 },
    #[error("radius samples do not match the grid")]
    LengthMismatch,
    #[error("family is not creative: |λ'| > |β| on t ∈ [{from}, {to}] ({count} samples)")]
    NotCreative { from: f64, to: f64, count: usize },
    #[error("family is not creative: cos θ jumps by {jump:.3} near t = {t}")]
    Discontinuous { t: f64, jump: f64 },
    #[error("creator angle jumps by {jump:.3} rad near t = {t}; refine the grid")]
    AngleJump { t: f64, jump: f64 },
}

/// Centers, Gauss map and radii of a circle family on a grid.
#[derive(Debug, Clone)]
pub struct CircleFamily {
    pub frontal: FrontalData,
    pub lambda: Vec<f64>,
    pub lambda_dot: Vec<f64>,
}

impl CircleFamily {
    pub fn new(frontal: FrontalData, lambda: Vec<f64>, lambda_dot: Vec<f64>) -> Result<Self, EnvelopeError> {
        if lambda.len() != frontal.len() || lambda_dot.len() != frontal.len() {
            return Err(EnvelopeError::LengthMismatch);
        }
        if let Some(i) = lambda.iter().position(|&r| !(r > 0.0)) {
            return Err(EnvelopeError::NonPositiveRadius { t: frontal.grid.t(i), value: lambda[i] });
        }
        Ok(CircleFamily { frontal, lambda, lambda_dot })
    }

    pub fn from_spec(spec: &FamilySpec, tol: &Tolerances) -> Result<Self, EnvelopeError> {
        let radius = spec.radius.as_ref().ok_or(EnvelopeError::MissingRadius)?;
        let frontal = build_frontal(spec, tol)?;
        let d_radius = radius.differentiate();
        let mut lambda = Vec::with_capacity(frontal.len());
        let mut lambda_dot = Vec::with_capacity(frontal.len());
        for t in frontal.ts() {
            lambda.push(radius.eval(t)?);
            lambda_dot.push(d_radius.eval(t)?);
        }
        CircleFamily::new(frontal, lambda, lambda_dot)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn tol(&self) -> &Tolerances {
        &self.frontal.tol
    }

    /// Same circles, radii multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<CircleFamily, EnvelopeError> {
        CircleFamily::new(
            self.frontal.clone(),
            self.lambda.iter().map(|r| r * k).collect(),
            self.lambda_dot.iter().map(|r| r * k).collect(),
        )
    }

    /// Same circles described with the opposite Gauss map.
    pub fn with_reversed_normal(&self) -> CircleFamily {
        CircleFamily {
            frontal: self.frontal.with_reversed_normal(),
            lambda: self.lambda.clone(),
            lambda_dot: self.lambda_dot.clone(),
        }
    }

    /// Same circles traversed backwards, `t ↦ -t`.
    pub fn reparametrized_backwards(&self) -> Result<CircleFamily, EnvelopeError> {
        let fd = &self.frontal;
        let grid = crate::frontal::Grid::new(-fd.grid.b, -fd.grid.a, fd.grid.n);
        let rev = |v: &[Vec2], s: f64| v.iter().rev().map(|&p| p * s).collect::<Vec<_>>();
        let frontal = FrontalData::from_samples(
            grid,
            rev(&fd.gamma, 1.0),
            rev(&fd.gamma_dot, -1.0),
            SampledFrame::Declared { nu: rev(&fd.nu, 1.0), l: fd.l.iter().rev().map(|l| -l).collect() },
            &fd.tol,
        )?;
        CircleFamily::new(
            frontal,
            self.lambda.iter().rev().copied().collect(),
            self.lambda_dot.iter().rev().map(|d| -d).collect(),
        )
    }

    pub fn creative_check(&self) -> CreativeWitness {
        creative_check(self)
    }

    pub fn classify(&self) -> EnvelopeClassification {
        classify_count(self, &creative_check(self))
    }

    /// Both envelope branches, `(plus, minus)`.
    pub fn envelopes(&self) -> Result<(EnvelopeBranch, EnvelopeBranch), EnvelopeError> {
        let w = creative_check(self);
        Ok((build_envelope(self, &w, Sign::Plus)?, build_envelope(self, &w, Sign::Minus)?))
    }
}

/// Evidence for (or against) creativity.
#[derive(Debug, Clone, PartialEq)]
pub struct CreativeWitness {
    pub cos_theta: Vec<f64>,
    pub sin_theta: Vec<f64>,
    /// `β ≠ 0` at the sample, so `cos θ = λ̇/β` is determined there.
    pub defined: Vec<bool>,
    pub creative: bool,
    /// Parameters where `|λ̇| > |β|` (or `λ̇ ≠ 0` where `β = 0`).
    pub failure_samples: Vec<f64>,
    /// Largest change of `cos θ` between adjacent samples, and where.
    pub max_cos_jump: f64,
    pub max_cos_jump_t: f64,
}

impl CreativeWitness {
    fn ensure_creative(&self) -> Result<(), EnvelopeError> {
        if let (Some(&from), Some(&to)) = (self.failure_samples.first(), self.failure_samples.last()) {
            return Err(EnvelopeError::NotCreative { from, to, count: self.failure_samples.len() });
        }
        if !self.creative {
            return Err(EnvelopeError::Discontinuous { t: self.max_cos_jump_t, jump: self.max_cos_jump });
        }
        Ok(())
    }
}

pub fn creative_check(family: &CircleFamily) -> CreativeWitness {
    let fd = &family.frontal;
    let tol = fd.tol;
    let n = family.len();
    let mut cos: Vec<Option<f64>> = vec![None; n];
    let mut failures = Vec::new();
    for i in 0..n {
        let (beta, ld) = (fd.beta[i], family.lambda_dot[i]);
        if beta.abs() > tol.zero {
            let r = ld / beta;
            if r.abs() > 1.0 + tol.clamp {
                failures.push(fd.grid.t(i));
            }
            let c = r.clamp(-1.0, 1.0);
            cos[i] = Some(if 1.0 - c.abs() <= tol.unit_snap { c.signum() } else { c });
        } else if ld.abs() > tol.equality * (1.0 + family.lambda[i]) {
            failures.push(fd.grid.t(i));
        }
    }
    let defined: Vec<bool> = cos.iter().map(Option::is_some).collect();
    let cos_theta = fill_gaps(&cos);
    let (max_cos_jump, jump_at) = cos_theta
        .windows(2)
        .enumerate()
        .map(|(i, w)| ((w[1] - w[0]).abs(), i))
        .fold((0.0, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
    let sin_theta = cos_theta.iter().map(|c| (1.0 - c * c).max(0.0).sqrt()).collect();
    CreativeWitness {
        creative: failures.is_empty() && max_cos_jump <= tol.max_cos_jump,
        cos_theta,
        sin_theta,
        defined,
        failure_samples: failures,
        max_cos_jump,
        max_cos_jump_t: fd.grid.t(jump_at),
    }
}

/// Linear interpolation across undefined samples; constant extension at the
/// ends; zero when nothing is defined.
fn fill_gaps(values: &[Option<f64>]) -> Vec<f64> {
    let known: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    if known.is_empty() {
        return vec![0.0; values.len()];
    }
    let mut out = Vec::with_capacity(values.len());
    let mut k = 0;
    for i in 0..values.len() {
        if let Some(v) = values[i] {
            out.push(v);
            continue;
        }
        while k + 1 < known.len() && known[k + 1] < i {
            k += 1;
        }
        let left = (known[k] < i).then_some(known[k]);
        let right = known[k..].iter().copied().find(|&j| j > i);
        out.push(match (left, right) {
            (Some(a), Some(b)) => {
                let w = (i - a) as f64 / (b - a) as f64;
                values[a].unwrap() * (1.0 - w) + values[b].unwrap() * w
            }
            (Some(a), None) => values[a].unwrap(),
            (None, Some(b)) => values[b].unwrap(),
            (None, None) => unreachable!(),
        });
    }
    out
}

/// Which creator `-cos θ μ ± sin θ ν` a branch uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The two creator fields.
#[derive(Debug, Clone)]
pub struct Creators {
    pub plus: Vec<Vec2>,
    pub minus: Vec<Vec2>,
}

pub fn creators(family: &CircleFamily, witness: &CreativeWitness) -> Result<Creators, EnvelopeError> {
    witness.ensure_creative()?;
    let field = |s: f64| -> Vec<Vec2> {
        (0..family.len())
            .map(|i| {
                let fd = &family.frontal;
                -witness.cos_theta[i] * fd.mu[i] + s * witness.sin_theta[i] * fd.nu[i]
            })
            .collect()
    };
    Ok(Creators { plus: field(1.0), minus: field(-1.0) })
}

/// One envelope with its Gauss map `ν̃` and curvature pair.
#[derive(Debug, Clone)]
pub struct EnvelopeBranch {
    pub sign: Sign,
    pub grid: crate::frontal::Grid,
    pub nu_tilde: Vec<Vec2>,
    pub mu_tilde: Vec<Vec2>,
    pub f: Vec<Vec2>,
    pub l_f: Vec<f64>,
    pub beta_f: Vec<f64>,
    pub theta_dot: Vec<f64>,
    pub lambda: Vec<f64>,
    tol: Tolerances,
}

/// `f = γ + λν̃` with `(l_f, β_f) = (l ± θ̇, λ(l ± θ̇) ± β sin θ)`.
pub fn build_envelope(
    family: &CircleFamily,
    witness: &CreativeWitness,
    sign: Sign,
) -> Result<EnvelopeBranch, EnvelopeError> {
    let creators = creators(family, witness)?;
    let fd = &family.frontal;
    let n = family.len();
    let theta: Vec<f64> = (0..n).map(|i| witness.sin_theta[i].atan2(witness.cos_theta[i])).collect();
    for i in 1..n {
        let jump = (theta[i] - theta[i - 1]).abs();
        if jump > std::f64::consts::FRAC_PI_2 {
            return Err(EnvelopeError::AngleJump { t: fd.grid.t(i), jump });
        }
    }
    let (lo, hi) = witness
        .cos_theta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    let theta_dot = if hi - lo <= 1e-12 { vec![0.0; n] } else { derivative(&theta, fd.grid.step()) };

    let s = sign.value();
    let nu_tilde = match sign {
        Sign::Plus => creators.plus,
        Sign::Minus => creators.minus,
    };
    let mut f = Vec::with_capacity(n);
    let mut l_f = Vec::with_capacity(n);
    let mut beta_f = Vec::with_capacity(n);
    for i in 0..n {
        f.push(fd.gamma[i] + family.lambda[i] * nu_tilde[i]);
        let lf = fd.l[i] + s * theta_dot[i];
        l_f.push(lf);
        beta_f.push(family.lambda[i] * lf + s * fd.beta[i] * witness.sin_theta[i]);
    }
    Ok(EnvelopeBranch {
        sign,
        grid: fd.grid,
        mu_tilde: nu_tilde.iter().map(|v| v.rotate90()).collect(),
        nu_tilde,
        f,
        l_f,
        beta_f,
        theta_dot,
        lambda: family.lambda.clone(),
        tol: fd.tol,
    })
}

impl EnvelopeBranch {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// The envelope as a frontal in its own right, with Gauss map `ν̃`.
    pub fn to_frontal(&self) -> Result<FrontalData, FrontalError> {
        let gamma_dot = self.beta_f.iter().zip(&self.mu_tilde).map(|(&b, &m)| b * m).collect();
        FrontalData::from_samples(
            self.grid,
            self.f.clone(),
            gamma_dot,
            SampledFrame::Declared { nu: self.nu_tilde.clone(), l: self.l_f.clone() },
            &self.tol,
        )
    }

    /// `t,fx,fy,nutx,nuty,l_f,beta_f` table.
    pub fn to_csv(&self) -> String {
        write_table(
            &["t", "fx", "fy", "nutx", "nuty", "l_f", "beta_f"],
            (0..self.len()).map(|i| {
                let (p, v) = (self.f[i], self.nu_tilde[i]);
                vec![self.grid.t(i), p.x, p.y, v.x, v.y, self.l_f[i], self.beta_f[i]]
            }),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Unique,
    ExactlyTwo,
    UncountablyMany,
    NotCreative,
}

/// Envelope count with the grid evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeClassification {
    pub variant: Classification,
    pub creative: bool,
    /// Fraction of samples with `β ≠ 0`.
    pub density_beta_nonzero: f64,
    /// Fraction of samples with `β ≠ 0` and `|λ̇| = |β|`.
    pub density_equality: f64,
    /// Sample with the largest margin `|β| - |λ̇|` when two envelopes exist.
    pub witness_t0: Option<f64>,
    pub tolerances: Tolerances,
}

pub fn classify_count(family: &CircleFamily, witness: &CreativeWitness) -> EnvelopeClassification {
    let fd = &family.frontal;
    let tol = fd.tol;
    let n = family.len() as f64;
    let mut nonzero = 0usize;
    let mut equal = 0usize;
    let mut best: Option<(f64, usize)> = None;
    for i in 0..family.len() {
        let b = fd.beta[i].abs();
        if b <= tol.zero {
            continue;
        }
        nonzero += 1;
        let margin = b - family.lambda_dot[i].abs();
        if margin.abs() <= tol.equality * b {
            equal += 1;
        } else if margin > 0.0 && best.map_or(true, |(m, _)| margin > m) {
            best = Some((margin, i));
        }
    }
    let density_beta_nonzero = nonzero as f64 / n;
    let variant = if !witness.creative {
        Classification::NotCreative
    } else if density_beta_nonzero < tol.density {
        Classification::UncountablyMany
    } else if best.is_some() {
        Classification::ExactlyTwo
    } else {
        Classification::Unique
    };
    EnvelopeClassification {
        variant,
        creative: witness.creative,
        density_beta_nonzero,
        density_equality: equal as f64 / n,
        witness_t0: match variant {
            Classification::ExactlyTwo => best.map(|(_, i)| fd.grid.t(i)),
            _ => None,
        },
        tolerances: tol,
    }
}
