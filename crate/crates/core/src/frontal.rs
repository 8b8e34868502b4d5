//! Sampled frontals: Gauss map, moving frame and curvature pair.
//!
//! For a curve `γ` with unit normal field `ν` the frame is `{ν, μ = J(ν)}`,
//! where `J` rotates by a right angle anti-clockwise. The curvature pair
//! `(l, β)` is defined by `ν̇ = l μ` and `γ̇ = β μ`. Zeros of `β` are singular
//! points, zeros of `l` inflection points.
//!
//! When a family file declares `nu`, that field is used verbatim (and
//! checked). Otherwise the Gauss map is reconstructed from the tangent as
//! `ν = (ẏ, -ẋ)/|γ̇|`, so `β = |γ̇| > 0` on the first regular piece, and its
//! sign is carried continuously through isolated singular samples.

use std::sync::Arc;

use thiserror::Error;

use crate::dsl::FamilySpec;
use crate::expr::{EvalError, Expr};
use crate::geom::{derivative, Vec2};
use crate::io::write_table;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid {
    /// Uniform grid on `[a, b]` with `n` samples, both endpoints included.
    ///
    /// # Panics
    /// If `n < 3` or `a >= b`.
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        assert!(n >= 3, "a grid needs at least three samples");
        assert!(a < b, "grid interval must satisfy a < b");
        Grid { a, b, n }
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + (self.b - self.a) * (i as f64 / (self.n - 1) as f64)
        }
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.t(i)).collect()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    /// Index of the grid cell `[t_i, t_{i+1}]` containing `t` (clamped).
    pub fn cell(&self, t: f64) -> usize {
        let raw = ((t - self.a) / self.step()).floor();
        (raw.max(0.0) as usize).min(self.n - 2)
    }

    pub fn nearest(&self, t: f64) -> usize {
        let raw = ((t - self.a) / self.step()).round();
        (raw.max(0.0) as usize).min(self.n - 1)
    }
}

#[derive(Debug, Error)]
pub enum FrontalError {
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("declared nu is not a unit vector at t = {t} (|nu| = {norm})")]
    NotUnit { t: f64, norm: f64 },
    #[error("declared nu is not normal to the curve at t = {t} (residual {residual:.3e})")]
    NotNormal { t: f64, residual: f64 },
    #[error("declared alpha violates beta = l*alpha at t = {t} (residual {residual:.3e})")]
    AlphaMismatch { t: f64, residual: f64 },
    #[error("tangent undefined on a non-isolated set of samples near t = {t}; declare nu explicitly")]
    TangentUndefined { t: f64 },
    #[error("Gauss map jumps by {angle:.3} rad near t = {t}; increase samples or declare nu")]
    Discontinuous { t: f64, angle: f64 },
    #[error("sample arrays have inconsistent lengths")]
    LengthMismatch,
}

/// Frame quantities at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub gamma: Vec2,
    pub gamma_dot: Vec2,
    pub nu: Vec2,
    pub mu: Vec2,
    pub l: f64,
    pub beta: f64,
    pub singular: bool,
}

#[derive(Debug, Clone)]
struct DeclaredNormal {
    nx: Expr,
    ny: Expr,
    dnx: Expr,
    dny: Expr,
}

/// Closed-form description of a frontal, kept alongside its samples so that
/// quadrature and root refinement can evaluate between grid points.
#[derive(Debug, Clone)]
pub struct SymbolicFrontal {
    x: Expr,
    y: Expr,
    dx: Expr,
    dy: Expr,
    ddx: Expr,
    ddy: Expr,
    normal: Option<DeclaredNormal>,
    alpha: Option<(Expr, Expr)>,
    singular_speed: f64,
}

impl SymbolicFrontal {
    pub fn from_spec(spec: &FamilySpec, tol: &Tolerances) -> Self {
        let dx = spec.x.differentiate();
        let dy = spec.y.differentiate();
        SymbolicFrontal {
            ddx: dx.differentiate(),
            ddy: dy.differentiate(),
            x: spec.x.clone(),
            y: spec.y.clone(),
            dx,
            dy,
            normal: spec.nu.as_ref().map(|(nx, ny)| DeclaredNormal {
                dnx: nx.differentiate(),
                dny: ny.differentiate(),
                nx: nx.clone(),
                ny: ny.clone(),
            }),
            alpha: spec.alpha.as_ref().map(|a| (a.clone(), a.differentiate())),
            singular_speed: tol.singular_speed,
        }
    }

    pub fn has_declared_normal(&self) -> bool {
        self.normal.is_some()
    }

    /// Frame at `t`. Without a declared normal the sign of `ν` is chosen to
    /// agree with `hint`.
    pub fn frame_at(&self, t: f64, hint: Option<Vec2>) -> Result<FrameSample, EvalError> {
        let gamma = Vec2::new(self.x.eval(t)?, self.y.eval(t)?);
        let gamma_dot = Vec2::new(self.dx.eval(t)?, self.dy.eval(t)?);
        if let Some(n) = &self.normal {
            let raw = Vec2::new(n.nx.eval(t)?, n.ny.eval(t)?);
            let nu = raw.normalized();
            let mu = nu.rotate90();
            let dnu = Vec2::new(n.dnx.eval(t)?, n.dny.eval(t)?);
            return Ok(FrameSample {
                gamma,
                gamma_dot,
                nu,
                mu,
                l: dnu.dot(mu),
                beta: gamma_dot.dot(mu),
                singular: gamma_dot.norm() < self.singular_speed,
            });
        }
        let speed = gamma_dot.norm();
        if speed < self.singular_speed {
            let nu = hint.map(|h| h.normalized()).unwrap_or(Vec2::new(1.0, 0.0));
            let mu = nu.rotate90();
            return Ok(FrameSample { gamma, gamma_dot, nu, mu, l: f64::NAN, beta: gamma_dot.dot(mu), singular: true });
        }
        let mut nu = gamma_dot.rotate_neg90() / speed;
        if let Some(h) = hint {
            if nu.dot(h) < 0.0 {
                nu = -nu;
            }
        }
        let mu = nu.rotate90();
        let acc = Vec2::new(self.ddx.eval(t)?, self.ddy.eval(t)?);
        // ν̇·μ for ν = ±(ẏ, -ẋ)/|γ̇| is the same for both signs
        let l = gamma_dot.cross(acc) / (speed * speed);
        Ok(FrameSample { gamma, gamma_dot, nu, mu, l, beta: gamma_dot.dot(mu), singular: false })
    }

    pub fn alpha_at(&self, t: f64) -> Option<Result<(f64, f64), EvalError>> {
        self.alpha.as_ref().map(|(a, da)| Ok((a.eval(t)?, da.eval(t)?)))
    }
}

/// How a sampled frontal obtains its Gauss map.
#[derive(Debug, Clone)]
pub enum SampledFrame {
    /// Normal field and `l` known at every sample.
    Declared { nu: Vec<Vec2>, l: Vec<f64> },
    /// Reconstruct `ν` from the tangent; `l` by finite differences of `ν`.
    FromTangent,
}

#[derive(Debug, Clone)]
pub struct FrontalData {
    pub grid: Grid,
    pub gamma: Vec<Vec2>,
    pub gamma_dot: Vec<Vec2>,
    pub nu: Vec<Vec2>,
    pub mu: Vec<Vec2>,
    pub l: Vec<f64>,
    pub beta: Vec<f64>,
    /// `α` with `β = lα`, where known.
    pub alpha: Vec<Option<f64>>,
    /// True when `alpha` came from the caller rather than `β/l`.
    pub alpha_declared: bool,
    pub tol: Tolerances,
    symbolic: Option<Arc<SymbolicFrontal>>,
}

/// Chooses the sign of each reconstructed normal to agree with its
/// predecessor and fills isolated singular samples from their neighbours.
fn orient_normals(
    grid: &Grid,
    raw: &[Option<Vec2>],
    tol: &Tolerances,
) -> Result<Vec<Vec2>, FrontalError> {
    let n = raw.len();
    for i in 0..n {
        if raw[i].is_none() {
            let prev_singular = i > 0 && raw[i - 1].is_none();
            let next_singular = i + 1 < n && raw[i + 1].is_none();
            if prev_singular || next_singular || n == 1 {
                return Err(FrontalError::TangentUndefined { t: grid.t(i) });
            }
        }
    }
    let mut nu: Vec<Option<Vec2>> = vec![None; n];
    let mut prev: Option<(usize, Vec2)> = None;
    for i in 0..n {
        let Some(mut v) = raw[i] else { continue };
        if let Some((j, p)) = prev {
            if v.dot(p) < 0.0 {
                v = -v;
            }
            let angle = v.cross(p).atan2(v.dot(p)).abs();
            if angle > tol.max_normal_jump * (i - j) as f64 {
                return Err(FrontalError::Discontinuous { t: grid.t(i), angle });
            }
        }
        nu[i] = Some(v);
        prev = Some((i, v));
    }
    let filled = (0..n)
        .map(|i| match nu[i] {
            Some(v) => v,
            None => {
                let left = if i > 0 { nu[i - 1] } else { None };
                let right = if i + 1 < n { nu[i + 1] } else { None };
                match (left, right) {
                    (Some(a), Some(b)) => (a + b).normalized(),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("isolated singular samples have regular neighbours"),
                }
            }
        })
        .collect();
    Ok(filled)
}

/// Builds the sampled frontal of a family's center curve.
pub fn build_frontal(spec: &FamilySpec, tol: &Tolerances) -> Result<FrontalData, FrontalError> {
    let grid = spec.grid();
    let sym = Arc::new(SymbolicFrontal::from_spec(spec, tol));
    let n = grid.n;
    let mut frames = Vec::with_capacity(n);

    if sym.has_declared_normal() {
        let (nx, ny) = spec.nu.as_ref().expect("declared normal");
        for i in 0..n {
            let t = grid.t(i);
            let raw = Vec2::new(nx.eval(t)?, ny.eval(t)?);
            let norm = raw.norm();
            if (norm - 1.0).abs() > tol.frame {
                return Err(FrontalError::NotUnit { t, norm });
            }
            let f = sym.frame_at(t, None)?;
            let residual = f.gamma_dot.dot(f.nu).abs();
            if residual > tol.frame * (1.0 + f.gamma_dot.norm()) {
                return Err(FrontalError::NotNormal { t, residual });
            }
            frames.push(f);
        }
    } else {
        // first pass: raw tangent normals to fix orientation
        let mut raw = Vec::with_capacity(n);
        for i in 0..n {
            let f = sym.frame_at(grid.t(i), None)?;
            raw.push((!f.singular).then_some(f.nu));
        }
        let oriented = orient_normals(&grid, &raw, tol)?;
        for (i, &hint) in oriented.iter().enumerate() {
            let mut f = sym.frame_at(grid.t(i), Some(hint))?;
            if f.singular {
                f.nu = hint;
                f.mu = hint.rotate90();
                f.beta = f.gamma_dot.dot(f.mu);
            }
            frames.push(f);
        }
        // l at singular samples: fourth-order symmetric interpolation from
        // the neighbours where they exist, else their mean
        for i in 0..n {
            if frames[i].singular {
                let at = |j: isize| (j >= 0 && (j as usize) < n).then(|| frames[j as usize].l);
                let k = i as isize;
                frames[i].l = match (at(k - 2), at(k - 1), at(k + 1), at(k + 2)) {
                    (Some(c), Some(a), Some(b), Some(d)) => (4.0 * (a + b) - (c + d)) / 6.0,
                    (_, Some(a), Some(b), _) => 0.5 * (a + b),
                    (_, Some(a), None, _) | (_, None, Some(a), _) => a,
                    _ => 0.0,
                };
            }
        }
    }

    let mut fd = FrontalData {
        grid,
        gamma: frames.iter().map(|f| f.gamma).collect(),
        gamma_dot: frames.iter().map(|f| f.gamma_dot).collect(),
        nu: frames.iter().map(|f| f.nu).collect(),
        mu: frames.iter().map(|f| f.mu).collect(),
        l: frames.iter().map(|f| f.l).collect(),
        beta: frames.iter().map(|f| f.beta).collect(),
        alpha: vec![None; n],
        alpha_declared: false,
        tol: *tol,
        symbolic: None,
    };
    if spec.alpha.is_some() {
        let mut alpha = Vec::with_capacity(n);
        for i in 0..n {
            let (a, _) = sym.alpha_at(grid.t(i)).expect("declared alpha")?;
            alpha.push(a);
        }
        fd.set_alpha(alpha)?;
    } else {
        fd.derive_alpha();
    }
    fd.symbolic = Some(sym);
    Ok(fd)
}

impl FrontalData {
    /// Frontal from samples of `γ` and `γ̇`.
    pub fn from_samples(
        grid: Grid,
        gamma: Vec<Vec2>,
        gamma_dot: Vec<Vec2>,
        frame: SampledFrame,
        tol: &Tolerances,
    ) -> Result<Self, FrontalError> {
        let n = grid.n;
        if gamma.len() != n || gamma_dot.len() != n {
            return Err(FrontalError::LengthMismatch);
        }
        let (nu, l) = match frame {
            SampledFrame::Declared { nu, l } => {
                if nu.len() != n || l.len() != n {
                    return Err(FrontalError::LengthMismatch);
                }
                for i in 0..n {
                    let norm = nu[i].norm();
                    if (norm - 1.0).abs() > tol.frame {
                        return Err(FrontalError::NotUnit { t: grid.t(i), norm });
                    }
                }
                (nu, l)
            }
            SampledFrame::FromTangent => {
                let raw: Vec<Option<Vec2>> = gamma_dot
                    .iter()
                    .map(|&v| {
                        let s = v.norm();
                        (s >= tol.singular_speed).then(|| v.rotate_neg90() / s)
                    })
                    .collect();
                let nu = orient_normals(&grid, &raw, tol)?;
                let dnu = derivative(&nu, grid.step());
                let l = dnu.iter().zip(&nu).map(|(d, v)| d.dot(v.rotate90())).collect();
                (nu, l)
            }
        };
        let mu: Vec<Vec2> = nu.iter().map(|v| v.rotate90()).collect();
        for i in 0..n {
            let residual = gamma_dot[i].dot(nu[i]).abs();
            if residual > tol.frame * (1.0 + gamma_dot[i].norm()) {
                return Err(FrontalError::NotNormal { t: grid.t(i), residual });
            }
        }
        let beta = gamma_dot.iter().zip(&mu).map(|(v, m)| v.dot(*m)).collect();
        let mut fd = FrontalData {
            grid,
            gamma,
            gamma_dot,
            nu,
            mu,
            l,
            beta,
            alpha: vec![None; n],
            alpha_declared: false,
            tol: *tol,
            symbolic: None,
        };
        fd.derive_alpha();
        Ok(fd)
    }

    pub fn len(&self) -> usize {
        self.grid.n
    }

    pub fn is_empty(&self) -> bool {
        self.grid.n == 0
    }

    pub fn ts(&self) -> Vec<f64> {
        self.grid.ts()
    }

    pub fn symbolic(&self) -> Option<&SymbolicFrontal> {
        self.symbolic.as_deref()
    }

    /// Declares `α` at every sample, checking `β = lα`.
    pub fn set_alpha(&mut self, alpha: Vec<f64>) -> Result<(), FrontalError> {
        if alpha.len() != self.len() {
            return Err(FrontalError::LengthMismatch);
        }
        for i in 0..self.len() {
            let residual = (self.beta[i] - self.l[i] * alpha[i]).abs();
            let scale = 1.0 + self.beta[i].abs() + (self.l[i] * alpha[i]).abs();
            if residual > self.tol.frame * scale {
                return Err(FrontalError::AlphaMismatch { t: self.grid.t(i), residual });
            }
        }
        self.alpha = alpha.into_iter().map(Some).collect();
        self.alpha_declared = true;
        Ok(())
    }

    fn derive_alpha(&mut self) {
        self.alpha = self
            .l
            .iter()
            .zip(&self.beta)
            .map(|(&l, &b)| (l.abs() > self.tol.zero).then(|| b / l))
            .collect();
        self.alpha_declared = false;
    }

    /// Derivative of `α` at every sample: closed form when `alpha` was
    /// declared in a family file, finite differences otherwise.
    pub fn alpha_dot(&self) -> Option<Vec<f64>> {
        if let Some(sym) = self.symbolic() {
            if self.alpha_declared {
                if let Some(vals) = self
                    .grid
                    .ts()
                    .iter()
                    .map(|&t| sym.alpha_at(t).and_then(|r| r.ok()).map(|(_, d)| d))
                    .collect::<Option<Vec<f64>>>()
                {
                    return Some(vals);
                }
            }
        }
        let alpha: Option<Vec<f64>> = self.alpha.iter().copied().collect();
        alpha.map(|a| derivative(&a, self.grid.step()))
    }

    fn hint_at(&self, t: f64) -> Vec2 {
        let i = self.grid.cell(t);
        let s = self.nu[i] + self.nu[i + 1];
        if s.norm() > 1e-12 {
            s
        } else {
            self.nu[i]
        }
    }

    fn lerp(&self, values: &[f64], t: f64) -> f64 {
        let i = self.grid.cell(t);
        let w = (t - self.grid.t(i)) / self.grid.step();
        values[i] * (1.0 - w) + values[i + 1] * w
    }

    /// `β(t)` between samples: closed form when available, otherwise linear
    /// interpolation.
    pub fn beta_at(&self, t: f64) -> f64 {
        if let Some(sym) = self.symbolic() {
            if let Ok(f) = sym.frame_at(t, Some(self.hint_at(t))) {
                return f.beta;
            }
        }
        self.lerp(&self.beta, t)
    }

    /// `l(t)` between samples, as [`FrontalData::beta_at`].
    pub fn l_at(&self, t: f64) -> f64 {
        if let Some(sym) = self.symbolic() {
            if let Ok(f) = sym.frame_at(t, Some(self.hint_at(t))) {
                if !f.singular {
                    return f.l;
                }
            }
        }
        self.lerp(&self.l, t)
    }

    /// Same curve with the opposite Gauss map.
    pub fn with_reversed_normal(&self) -> FrontalData {
        let mut out = self.clone();
        out.nu.iter_mut().for_each(|v| *v = -*v);
        out.mu.iter_mut().for_each(|v| *v = -*v);
        out.beta.iter_mut().for_each(|b| *b = -*b);
        out.alpha.iter_mut().for_each(|a| *a = a.map(|v| -v));
        out.symbolic = None;
        out
    }

    /// `t,x,y,nu_x,nu_y,l,beta` table.
    pub fn to_csv(&self) -> String {
        write_table(
            &["t", "x", "y", "nu_x", "nu_y", "l", "beta"],
            (0..self.len()).map(|i| {
                let (g, v) = (self.gamma[i], self.nu[i]);
                vec![self.grid.t(i), g.x, g.y, v.x, v.y, self.l[i], self.beta[i]]
            }),
        )
    }
}

/// Zeros of a sampled function.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    /// Sign changes refined by bisection, plus exact zeros crossed by a sign
    /// change.
    pub roots: Vec<f64>,
    /// Samples whose magnitude is within the zero tolerance.
    pub touching: Vec<f64>,
    /// Every sample is within the zero tolerance.
    pub identically_zero: bool,
}

impl ZeroSet {
    /// All parameter values where the function vanishes or crosses zero.
    pub fn locations(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.roots.iter().chain(&self.touching).copied().collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// Two zero sets agree when each location of one lies within `slack` of
    /// a location of the other.
    pub fn matches(&self, other: &ZeroSet, slack: f64) -> bool {
        if self.identically_zero || other.identically_zero {
            return self.identically_zero == other.identically_zero;
        }
        let a = self.locations();
        let b = other.locations();
        let covered = |xs: &[f64], ys: &[f64]| xs.iter().all(|x| ys.iter().any(|y| (x - y).abs() <= slack));
        covered(&a, &b) && covered(&b, &a)
    }
}

/// Locates zeros of `values` sampled on `grid`, refining sign changes with
/// `value_at` to `1e-10`.
pub fn zero_set(grid: &Grid, values: &[f64], value_at: impl Fn(f64) -> f64, tol_zero: f64) -> ZeroSet {
    let n = values.len();
    let is_zero: Vec<bool> = values.iter().map(|v| v.abs() <= tol_zero).collect();
    let touching: Vec<f64> = (0..n).filter(|&i| is_zero[i]).map(|i| grid.t(i)).collect();
    if is_zero.iter().all(|&z| z) {
        return ZeroSet { roots: Vec::new(), touching, identically_zero: true };
    }
    let mut roots = Vec::new();
    let mut i = 0;
    while i + 1 < n {
        if !is_zero[i] && !is_zero[i + 1] && values[i].signum() != values[i + 1].signum() {
            let (mut lo, mut hi) = (grid.t(i), grid.t(i + 1));
            let f_lo = value_at(lo).signum();
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                let fm = value_at(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == f_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
            i += 1;
        } else if is_zero[i] {
            let start = i;
            while i < n && is_zero[i] {
                i += 1;
            }
            let end = i - 1;
            if start > 0 && end + 1 < n && values[start - 1].signum() != values[end + 1].signum() {
                roots.push(0.5 * (grid.t(start) + grid.t(end)));
            }
        } else {
            i += 1;
        }
    }
    ZeroSet { roots, touching, identically_zero: false }
}

/// Inflection points: zeros of `l`.
pub fn inflection_points(fd: &FrontalData) -> ZeroSet {
    zero_set(&fd.grid, &fd.l, |t| fd.l_at(t), fd.tol.zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_family;

    fn frontal(src: &str) -> FrontalData {
        build_frontal(&parse_family(src).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn grid_includes_endpoints() {
        let g = Grid::new(-1.0, 1.0, 2001);
        assert_eq!(g.t(0), -1.0);
        assert_eq!(g.t(2000), 1.0);
        assert_eq!(g.t(1000), 0.0);
        assert_eq!(g.cell(1.0), 1999);
        assert_eq!(g.nearest(0.0004), 1000);
    }

    #[test]
    fn line_with_declared_normal() {
        let fd = frontal("curve x=0; y=t\nnu x=-1; y=0\ndomain (0.1, 5)\nsamples 101");
        for i in 0..fd.len() {
            assert_eq!(fd.mu[i], Vec2::new(0.0, -1.0));
            assert_eq!(fd.beta[i], -1.0);
            assert_eq!(fd.l[i], 0.0);
        }
    }

    #[test]
    fn unit_circle_frame() {
        let fd = frontal("curve x=cos(t); y=sin(t)\nnu x=cos(t); y=sin(t)\ndomain (0, 2*pi)\nsamples 201");
        for i in 0..fd.len() {
            let t = fd.grid.t(i);
            assert!((fd.mu[i] - Vec2::new(-t.sin(), t.cos())).norm() < 1e-15);
            assert!((fd.beta[i] - 1.0).abs() < 1e-15);
            assert!((fd.l[i] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cusp_family_curvature_pair() {
        let fd = frontal(
            "curve x=-4*t^3; y=3*t^2+1/2\nnu x=1/sqrt(1+4*t^2); y=2*t/sqrt(1+4*t^2)\ndomain (-1,1)",
        );
        for i in 0..fd.len() {
            let t = fd.grid.t(i);
            let s = (1.0 + 4.0 * t * t).sqrt();
            assert!((fd.l[i] - 2.0 / (s * s)).abs() < 1e-14);
            assert!((fd.beta[i] - 6.0 * t * s).abs() < 1e-13);
        }
    }

    #[test]
    fn reconstructed_normal_continues_through_cusp() {
        // t = 0 is a grid sample and a cusp; the tangent flips there
        let fd = frontal("curve x=-4*t^3; y=3*t^2+1/2\ndomain (-1,1)");
        for i in 0..fd.len() {
            let t = fd.grid.t(i);
            let s = (1.0 + 4.0 * t * t).sqrt();
            // the orientation is fixed by the first sample: nu = -(1, 2t)/s
            let expected = Vec2::new(-1.0 / s, -2.0 * t / s);
            assert!((fd.nu[i] - expected).norm() < 1e-12, "t = {}", t);
            // the cusp sample gets l by interpolation
            let l_tol = if t == 0.0 { 1e-9 } else { 1e-12 };
            assert!((fd.l[i] - 2.0 / (s * s)).abs() < l_tol, "t = {}", t);
            assert!((fd.beta[i] + 6.0 * t * s).abs() < 1e-12);
        }
        // cusp strictly between samples
        let fd = frontal("curve x=-4*t^3; y=3*t^2+1/2\ndomain (-1,1)\nsamples 2000");
        assert!(fd.beta.first().unwrap() * fd.beta.last().unwrap() < 0.0);
    }

    #[test]
    fn default_convention_gives_positive_speed() {
        let fd = frontal("curve x=t; y=t^2\ndomain (-1,1)\nsamples 101");
        assert!(fd.beta.iter().all(|&b| b > 0.0));
        for i in 0..fd.len() {
            assert!((fd.mu[i] - fd.gamma_dot[i].normalized()).norm() < 1e-15);
        }
    }

    #[test]
    fn non_unit_or_non_normal_declared_nu_rejected() {
        let spec = parse_family("curve x=t; y=0\nnu x=0; y=2\ndomain (0,1)").unwrap();
        assert!(matches!(build_frontal(&spec, &Tolerances::default()), Err(FrontalError::NotUnit { .. })));
        let spec = parse_family("curve x=t; y=0\nnu x=1; y=0\ndomain (0,1)").unwrap();
        assert!(matches!(build_frontal(&spec, &Tolerances::default()), Err(FrontalError::NotNormal { .. })));
    }

    #[test]
    fn constant_curve_needs_declared_normal() {
        let spec = parse_family("curve x=0; y=0\ndomain (0,1)").unwrap();
        assert!(matches!(
            build_frontal(&spec, &Tolerances::default()),
            Err(FrontalError::TangentUndefined { .. })
        ));
    }

    #[test]
    fn coarse_grid_discontinuity_detected() {
        let spec = parse_family("curve x=cos(t); y=sin(t)\ndomain (0, 2*pi)\nsamples 20").unwrap();
        assert!(matches!(
            build_frontal(&spec, &Tolerances::default()),
            Err(FrontalError::Discontinuous { .. })
        ));
    }

    #[test]
    fn declared_alpha_is_checked() {
        let ok = "curve x=cos(t); y=sin(t)\nnu x=cos(t); y=sin(t)\nalpha 1\ndomain (0,1)";
        assert!(frontal(ok).alpha_declared);
        let bad = parse_family("curve x=cos(t); y=sin(t)\nnu x=cos(t); y=sin(t)\nalpha 2\ndomain (0,1)").unwrap();
        assert!(matches!(
            build_frontal(&bad, &Tolerances::default()),
            Err(FrontalError::AlphaMismatch { .. })
        ));
    }

    #[test]
    fn inflections_of_line_cubic_and_parabola_family() {
        let line = frontal("curve x=0; y=t\nnu x=-1; y=0\ndomain (0.1, 5)\nsamples 101");
        assert!(inflection_points(&line).identically_zero);

        let parab = frontal("curve x=-4*t^3; y=3*t^2+1/2\nnu x=1/sqrt(1+4*t^2); y=2*t/sqrt(1+4*t^2)\ndomain (-1,1)");
        let z = inflection_points(&parab);
        assert!(z.roots.is_empty() && z.touching.is_empty());

        for samples in [2001, 2000] {
            let src = format!("curve x=t; y=t^3\ndomain (-1,1)\nsamples {}", samples);
            let fd = frontal(&src);
            // oracle: sign changes of x'y'' - x''y' = 6t on the grid
            let oracle: Vec<f64> = (0..fd.len() - 1)
                .filter(|&i| {
                    let (a, b) = (6.0 * fd.grid.t(i), 6.0 * fd.grid.t(i + 1));
                    a == 0.0 || a.signum() != b.signum() && b != 0.0
                })
                .map(|i| fd.grid.t(i))
                .collect();
            assert_eq!(oracle.len(), 1);
            let z = inflection_points(&fd);
            assert_eq!(z.roots.len(), 1, "samples {}", samples);
            assert!(z.roots[0].abs() < 1e-9);
        }
    }

    #[test]
    fn frenet_row_matches_finite_differences() {
        let fd = frontal("curve x=t; y=t^3/3+sin(t)\ndomain (-1,1)\nsamples 1001");
        let dnu = derivative(&fd.nu, fd.grid.step());
        for i in 0..fd.len() {
            let err = (dnu[i] - fd.l[i] * fd.mu[i]).norm();
            assert!(err < 1e-4 * (1.0 + fd.l[i].abs()), "i = {} err = {}", i, err);
        }
    }

    #[test]
    fn sampled_frame_matches_symbolic() {
        let sym = frontal("curve x=t; y=t^2\ndomain (-1,1)\nsamples 2001");
        let sampled = FrontalData::from_samples(
            sym.grid,
            sym.gamma.clone(),
            sym.gamma_dot.clone(),
            SampledFrame::FromTangent,
            &Tolerances::default(),
        )
        .unwrap();
        for i in 1..sym.len() - 1 {
            assert!((sym.nu[i] - sampled.nu[i]).norm() < 1e-14);
            assert!((sym.l[i] - sampled.l[i]).abs() < 1e-5);
        }
    }

    #[test]
    fn csv_has_expected_columns() {
        let fd = frontal("curve x=t; y=t\ndomain (0,1)\nsamples 3");
        let csv = fd.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,x,y,nu_x,nu_y,l,beta");
        assert_eq!(lines.count(), 3);
    }
}
