//! Mohr circles of soil tests at failure and their failure envelope.
//!
//! Each test `(σ₁, σ₃)` gives a circle in the `(σ, τ)` plane centred at
//! `s = (σ₁+σ₃)/2` with radius `r = (σ₁−σ₃)/2`. A line `τ = σ tan φ + c`
//! touches that circle from above exactly when `r = s sin φ + c cos φ`, so the
//! straight failure line is a linear least-squares fit of `r` on `s`.
//!
//! The curved envelope interpolates the circles by a monotone cubic family
//! and hands it to [`crate::envelope`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envelope::{build_envelope, CircleFamily, EnvelopeError, Sign};
use crate::frontal::{FrontalData, FrontalError, Grid, SampledFrame};
use crate::geom::Vec2;
use crate::io::SampledCurve;
use crate::tolerance::Tolerances;

#[derive(Debug, Error)]
pub enum MohrError {
    #[error("cannot read stress file: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Invalid { row: usize, message: String },
    #[error("no records")]
    NoRecords,
    #[error("row {row}: sigma1 = {sigma1} must exceed sigma3 = {sigma3}")]
    NotOrdered { row: usize, sigma1: f64, sigma3: f64 },
    #[error("row {row}: negative stress")]
    NegativeStress { row: usize },
    #[error("need ≥ {need} circles, got {got}")]
    TooFewCircles { need: usize, got: usize },
    #[error("circles have identical centers")]
    IdenticalCenters,
    #[error("no admissible friction angle: fitted slope {slope} has |m| ≥ 1")]
    NoFrictionAngle { slope: f64 },
    #[error("interpolated family is not creative between circles {from} and {to}")]
    NotCreative { from: f64, to: f64 },
    #[error(transparent)]
    Envelope(EnvelopeError),
    #[error(transparent)]
    Frontal(#[from] FrontalError),
}

impl From<EnvelopeError> for MohrError {
    fn from(e: EnvelopeError) -> Self {
        match e {
            // the family parameter is the record index, so report it as such
            EnvelopeError::NotCreative { from, to, .. } => MohrError::NotCreative { from, to },
            EnvelopeError::Discontinuous { t, .. } => MohrError::NotCreative { from: t, to: t },
            other => MohrError::Envelope(other),
        }
    }
}

/// Effective principal stresses at failure, in kPa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StressRecord {
    pub sigma1: f64,
    pub sigma3: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StressRecord {
    pub fn new(sigma1: f64, sigma3: f64) -> Self {
        StressRecord { sigma1, sigma3, label: None }
    }

    fn validate(&self, row: usize) -> Result<(), MohrError> {
        if !(self.sigma1.is_finite() && self.sigma3.is_finite()) {
            return Err(MohrError::Invalid { row, message: "stress is not finite".into() });
        }
        if self.sigma1 < 0.0 || self.sigma3 < 0.0 {
            return Err(MohrError::NegativeStress { row });
        }
        if self.sigma1 <= self.sigma3 {
            return Err(MohrError::NotOrdered { row, sigma1: self.sigma1, sigma3: self.sigma3 });
        }
        Ok(())
    }
}

/// Parses `sigma1,sigma3[,label]` rows; rows are numbered from 1 after the header.
pub fn parse_stress_csv(text: &str) -> Result<Vec<StressRecord>, MohrError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (i, row) in rdr.deserialize::<StressRecord>().enumerate() {
        let row_no = i + 1;
        let rec = row.map_err(|e| MohrError::Invalid { row: row_no, message: e.to_string() })?;
        rec.validate(row_no)?;
        records.push(rec);
    }
    if records.is_empty() {
        return Err(MohrError::NoRecords);
    }
    Ok(records)
}

pub fn load_stress_csv(path: impl AsRef<Path>) -> Result<Vec<StressRecord>, MohrError> {
    parse_stress_csv(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MohrCircle {
    pub center_s: f64,
    pub radius_r: f64,
    /// Position of the source record in the input.
    pub record: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MohrCircle {
    pub fn new(center_s: f64, radius_r: f64) -> Self {
        MohrCircle { center_s, radius_r, record: 0, label: None }
    }
}

/// One circle per record, sorted by center (stable for equal centers).
pub fn mohr_circles(records: &[StressRecord]) -> Vec<MohrCircle> {
    let mut circles: Vec<MohrCircle> = records
        .iter()
        .enumerate()
        .map(|(i, r)| MohrCircle {
            center_s: 0.5 * (r.sigma1 + r.sigma3),
            radius_r: 0.5 * (r.sigma1 - r.sigma3),
            record: i,
            label: r.label.clone(),
        })
        .collect();
    circles.sort_by(|a, b| a.center_s.total_cmp(&b.center_s));
    circles
}

/// Straight failure line `τ = σ tan φ + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureLine {
    pub phi_deg: f64,
    pub c_kpa: f64,
    pub rms_residual: f64,
}

impl FailureLine {
    pub fn phi(&self) -> f64 {
        self.phi_deg.to_radians()
    }

    pub fn tau(&self, sigma: f64) -> f64 {
        sigma * self.phi().tan() + self.c_kpa
    }

    /// Perpendicular distance from `(σ, τ)` to the line, signed positive above it.
    pub fn offset(&self, p: Vec2) -> f64 {
        (p.y - self.tau(p.x)) * self.phi().cos()
    }

    /// Tangency residual `r − s sin φ − c cos φ` of one circle.
    pub fn residual(&self, c: &MohrCircle) -> f64 {
        let (s, co) = self.phi().sin_cos();
        c.radius_r - c.center_s * s - self.c_kpa * co
    }

    /// Negative cohesion is allowed but physically suspicious.
    pub fn warning(&self) -> Option<String> {
        (self.c_kpa < 0.0).then(|| format!("negative cohesion intercept c = {} kPa", self.c_kpa))
    }
}

/// Ordinary least squares of `r` on `s`: slope `sin φ`, intercept `c cos φ`.
pub fn fit_failure_line(circles: &[MohrCircle]) -> Result<FailureLine, MohrError> {
    let n = circles.len();
    if n < 2 {
        return Err(MohrError::TooFewCircles { need: 2, got: n });
    }
    let nf = n as f64;
    let mean_s = circles.iter().map(|c| c.center_s).sum::<f64>() / nf;
    let mean_r = circles.iter().map(|c| c.radius_r).sum::<f64>() / nf;
    let sxx: f64 = circles.iter().map(|c| (c.center_s - mean_s).powi(2)).sum();
    let sxy: f64 = circles.iter().map(|c| (c.center_s - mean_s) * (c.radius_r - mean_r)).sum();
    let spread = circles.iter().map(|c| c.center_s.abs()).fold(0.0, f64::max);
    if sxx <= (f64::EPSILON * spread).powi(2) * nf {
        return Err(MohrError::IdenticalCenters);
    }
    let m = sxy / sxx;
    if !(m.abs() < 1.0) {
        return Err(MohrError::NoFrictionAngle { slope: m });
    }
    let b = mean_r - m * mean_s;
    let phi = m.asin();
    let mut line = FailureLine { phi_deg: phi.to_degrees(), c_kpa: b / phi.cos(), rms_residual: 0.0 };
    let ss: f64 = circles.iter().map(|c| (c.radius_r - m * c.center_s - b).powi(2)).sum();
    line.rms_residual = (ss / nf).sqrt();
    Ok(line)
}

/// Report written by `circenv mohr --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MohrReport {
    pub phi_deg: f64,
    pub c_kpa: f64,
    pub rms_residual: f64,
    pub n_circles: usize,
}

impl MohrReport {
    pub fn new(line: &FailureLine, n_circles: usize) -> Self {
        MohrReport { phi_deg: line.phi_deg, c_kpa: line.c_kpa, rms_residual: line.rms_residual, n_circles }
    }
}

/// Shape-preserving piecewise cubic Hermite interpolant on unit-spaced knots
/// `u = 0, 1, …, n−1` (Fritsch–Carlson slopes with the harmonic-mean rule).
///
/// The slopes are positively homogeneous and shift invariant, so
/// interpolating `a·y + b` (`a ≥ 0`) gives exactly `a·p(u) + b`.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 2, "monotone cubic needs two knots");
        let delta: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes.fill(delta[0]);
        } else {
            for k in 1..n - 1 {
                let (a, b) = (delta[k - 1], delta[k]);
                slopes[k] = if a * b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
            }
            slopes[0] = end_slope(delta[0], delta[1]);
            slopes[n - 1] = end_slope(delta[n - 2], delta[n - 3]);
        }
        MonotoneCubic { values: values.to_vec(), slopes }
    }

    pub fn domain(&self) -> (f64, f64) {
        (0.0, (self.values.len() - 1) as f64)
    }

    fn locate(&self, u: f64) -> (usize, f64) {
        let last = self.values.len() - 2;
        let k = (u.floor().max(0.0) as usize).min(last);
        (k, u - k as f64)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let (k, x) = self.locate(u);
        let (x2, x3) = (x * x, x * x * x);
        let h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
        let h10 = x3 - 2.0 * x2 + x;
        let h01 = -2.0 * x3 + 3.0 * x2;
        let h11 = x3 - x2;
        h00 * self.values[k] + h10 * self.slopes[k] + h01 * self.values[k + 1] + h11 * self.slopes[k + 1]
    }

    pub fn derivative(&self, u: f64) -> f64 {
        let (k, x) = self.locate(u);
        let x2 = x * x;
        let d00 = 6.0 * x2 - 6.0 * x;
        let d10 = 3.0 * x2 - 4.0 * x + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * x2 - 2.0 * x;
        d00 * self.values[k] + d10 * self.slopes[k] + d01 * self.values[k + 1] + d11 * self.slopes[k + 1]
    }
}

/// Three-point end slope, clipped to keep the end segment shape preserving.
fn end_slope(d0: f64, d1: f64) -> f64 {
    let m = (3.0 * d0 - d1) / 2.0;
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Grid samples per gap between consecutive circles.
pub const SAMPLES_PER_SEGMENT: usize = 64;

/// The curved failure envelope and how far it strays from the fitted line.
#[derive(Debug, Clone)]
pub struct MohrEnvelope {
    pub family: CircleFamily,
    /// Envelope points over the record-index parameter.
    pub curve: SampledCurve,
    pub sign: Sign,
    pub line: FailureLine,
    /// Largest perpendicular distance from the envelope to the line.
    pub max_deviation: f64,
}

/// Circle family `γ(u) = (s(u), 0)`, `ν = (0, −1)`, `λ = r(u)` through the
/// circles sorted by center.
pub fn interpolated_family(circles: &[MohrCircle]) -> Result<CircleFamily, MohrError> {
    if circles.len() < 4 {
        return Err(MohrError::TooFewCircles { need: 4, got: circles.len() });
    }
    let mut sorted = circles.to_vec();
    sorted.sort_by(|a, b| a.center_s.total_cmp(&b.center_s));
    if sorted.windows(2).any(|w| !(w[1].center_s > w[0].center_s)) {
        return Err(MohrError::IdenticalCenters);
    }
    let s = MonotoneCubic::new(&sorted.iter().map(|c| c.center_s).collect::<Vec<_>>());
    let r = MonotoneCubic::new(&sorted.iter().map(|c| c.radius_r).collect::<Vec<_>>());
    let (a, b) = s.domain();
    let grid = Grid::new(a, b, SAMPLES_PER_SEGMENT * (sorted.len() - 1) + 1);
    let ts = grid.ts();
    let gamma = ts.iter().map(|&u| Vec2::new(s.eval(u), 0.0)).collect();
    let gamma_dot = ts.iter().map(|&u| Vec2::new(s.derivative(u), 0.0)).collect();
    let frame = SampledFrame::Declared { nu: vec![Vec2::new(0.0, -1.0); grid.n], l: vec![0.0; grid.n] };
    let frontal = FrontalData::from_samples(grid, gamma, gamma_dot, frame, &Tolerances::default())?;
    let lambda = ts.iter().map(|&u| r.eval(u)).collect();
    let lambda_dot = ts.iter().map(|&u| r.derivative(u)).collect();
    Ok(CircleFamily::new(frontal, lambda, lambda_dot)?)
}

/// Envelope of the interpolated family on the `τ ≥ 0` side, compared with
/// the least-squares line.
pub fn mohr_envelope_curve(circles: &[MohrCircle]) -> Result<MohrEnvelope, MohrError> {
    let family = interpolated_family(circles)?;
    let line = fit_failure_line(circles)?;
    let witness = family.creative_check();
    let plus = build_envelope(&family, &witness, Sign::Plus)?;
    let minus = build_envelope(&family, &witness, Sign::Minus)?;
    let mid = family.len() / 2;
    let upper = if plus.f[mid].y >= minus.f[mid].y { plus } else { minus };
    let max_deviation = upper.f.iter().map(|&p| line.offset(p).abs()).fold(0.0, f64::max);
    Ok(MohrEnvelope {
        curve: SampledCurve::new(family.frontal.ts(), upper.f.clone()),
        sign: upper.sign,
        family,
        line,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::derivative4;
    use crate::verify::verify_envelope_def;

    /// Tangency residual of the envelope away from the knots, where the
    /// C¹ interpolant makes `ḟ` kink and the 5-point stencil straddles it.
    fn segment_tangency(env: &MohrEnvelope) -> f64 {
        let fd = &env.family.frontal;
        let df = derivative4(&env.curve.points, fd.grid.step());
        (0..fd.len())
            .filter(|i| {
                let k = i % SAMPLES_PER_SEGMENT;
                k > 2 && k < SAMPLES_PER_SEGMENT - 2
            })
            .map(|i| {
                let r = env.curve.points[i] - fd.gamma[i];
                let on_circle = (r.norm() - env.family.lambda[i]).abs() / env.family.lambda[i];
                on_circle.max(df[i].dot(r).abs() / (df[i].norm() * r.norm()))
            })
            .fold(0.0, f64::max)
    }

    fn tangent_circles(phi_deg: f64, c: f64, centers: &[f64]) -> Vec<MohrCircle> {
        let (s, co) = phi_deg.to_radians().sin_cos();
        centers.iter().map(|&x| MohrCircle::new(x, x * s + c * co)).collect()
    }

    #[test]
    fn parses_records_and_labels() {
        let recs = parse_stress_csv("sigma1,sigma3\n300,100\n").unwrap();
        assert_eq!(recs, vec![StressRecord::new(300.0, 100.0)]);
        let recs = parse_stress_csv("sigma1, sigma3, label\n 300 , 100, T1\n").unwrap();
        assert_eq!(recs[0].label.as_deref(), Some("T1"));
    }

    #[test]
    fn rejects_bad_records() {
        assert!(matches!(parse_stress_csv("sigma1,sigma3\n100,300\n"), Err(MohrError::NotOrdered { row: 1, .. })));
        assert!(matches!(parse_stress_csv("sigma1,sigma3\n100,100\n"), Err(MohrError::NotOrdered { .. })));
        assert!(matches!(parse_stress_csv("sigma1,sigma3\n10,-1\n"), Err(MohrError::NegativeStress { .. })));
        assert!(matches!(parse_stress_csv("sigma1,sigma3\n10,abc\n"), Err(MohrError::Invalid { row: 1, .. })));
        let empty = parse_stress_csv("").unwrap_err();
        assert_eq!(empty.to_string(), "no records");
        assert!(matches!(parse_stress_csv("sigma1,sigma3\n"), Err(MohrError::NoRecords)));
    }

    #[test]
    fn circles_from_principal_stresses() {
        let c = mohr_circles(&[StressRecord::new(300.0, 100.0)]);
        assert_eq!((c[0].center_s, c[0].radius_r), (200.0, 100.0));
        let eps = 1e-3;
        let c = mohr_circles(&[StressRecord::new(50.0, 50.0 - 2.0 * eps)]);
        assert!((c[0].radius_r - eps).abs() < 1e-12);
        let c = mohr_circles(&[StressRecord::new(500.0, 300.0), StressRecord::new(30.0, 10.0)]);
        assert_eq!(c.iter().map(|c| c.record).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn recovers_tangent_line() {
        let line = fit_failure_line(&tangent_circles(30.0, 10.0, &[100.0, 200.0, 400.0, 800.0])).unwrap();
        assert!((line.phi_deg - 30.0).abs() < 1e-10);
        assert!((line.c_kpa - 10.0).abs() < 1e-9);
        assert!(line.rms_residual < 1e-9);
        assert!(line.warning().is_none());
    }

    #[test]
    fn fit_is_scale_equivariant() {
        let circles = vec![
            MohrCircle::new(80.0, 52.0),
            MohrCircle::new(150.0, 83.0),
            MohrCircle::new(260.0, 141.0),
            MohrCircle::new(410.0, 210.0),
        ];
        let a = fit_failure_line(&circles).unwrap();
        let k = 1000.0;
        let scaled: Vec<_> = circles.iter().map(|c| MohrCircle::new(k * c.center_s, k * c.radius_r)).collect();
        let b = fit_failure_line(&scaled).unwrap();
        assert!((a.phi().sin() - b.phi().sin()).abs() < 1e-12);
        assert!((k * a.c_kpa - b.c_kpa).abs() < 1e-9 * b.c_kpa.abs());
        assert!((k * a.rms_residual - b.rms_residual).abs() < 1e-9 * b.rms_residual);
    }

    #[test]
    fn two_circles_interpolate() {
        let line = fit_failure_line(&[MohrCircle::new(100.0, 60.0), MohrCircle::new(300.0, 150.0)]).unwrap();
        assert!(line.rms_residual < 1e-12);
        for c in [MohrCircle::new(100.0, 60.0), MohrCircle::new(300.0, 150.0)] {
            assert!(line.residual(&c).abs() < 1e-10);
        }
    }

    #[test]
    fn fit_errors() {
        let steep: Vec<_> = [100.0, 200.0, 300.0].iter().map(|&s| MohrCircle::new(s, 1.2 * s)).collect();
        assert!(matches!(fit_failure_line(&steep), Err(MohrError::NoFrictionAngle { .. })));
        assert!(matches!(fit_failure_line(&steep[..1]), Err(MohrError::TooFewCircles { .. })));
        let same = [MohrCircle::new(100.0, 10.0), MohrCircle::new(100.0, 20.0)];
        assert!(matches!(fit_failure_line(&same), Err(MohrError::IdenticalCenters)));
    }

    #[test]
    fn negative_cohesion_warns() {
        let line = fit_failure_line(&tangent_circles(25.0, -5.0, &[100.0, 200.0, 300.0])).unwrap();
        assert!(line.warning().unwrap().contains("negative cohesion"));
    }

    #[test]
    fn monotone_cubic_interpolates_and_preserves_shape() {
        let y = [0.0, 1.0, 1.5, 4.0, 4.1, 9.0];
        let p = MonotoneCubic::new(&y);
        for (k, &v) in y.iter().enumerate() {
            assert_eq!(p.eval(k as f64), v);
        }
        let mut prev = p.eval(0.0);
        for i in 1..=500 {
            let v = p.eval(i as f64 * 0.01);
            assert!(v >= prev - 1e-15);
            assert!(p.derivative(i as f64 * 0.01) >= -1e-12);
            prev = v;
        }
        let lin = MonotoneCubic::new(&[2.0, 5.0, 8.0, 11.0]);
        assert!((lin.eval(1.37) - (2.0 + 3.0 * 1.37)).abs() < 1e-12);
        assert!((lin.derivative(2.6) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn straight_data_gives_straight_envelope() {
        let centers = [50.0, 90.0, 150.0, 220.0, 300.0, 420.0, 560.0, 700.0];
        let env = mohr_envelope_curve(&tangent_circles(30.0, 10.0, &centers)).unwrap();
        let scale = 700.0;
        assert!(env.max_deviation < 1e-6 * scale, "deviation {}", env.max_deviation);
        assert!(env.curve.points.iter().all(|p| p.y > 0.0));
        let def = verify_envelope_def(&env.family, &env.curve.points, 1e-5).unwrap();
        assert!(def.pass, "{:?}", def);
        assert!(segment_tangency(&env) < 1e-9);
    }

    #[test]
    fn parabolic_data_bends_away_from_the_line() {
        // circles tangent to τ = a√σ touch it at σ = s − a²/2
        let a: f64 = 10.0;
        let centers: Vec<f64> = (0..16).map(|k| a * a * (1.0 + 0.6 * k as f64)).collect();
        let circles: Vec<_> =
            centers.iter().map(|&s| MohrCircle::new(s, (a * a * s - a.powi(4) / 4.0).sqrt())).collect();
        let env = mohr_envelope_curve(&circles).unwrap();
        let scale = centers.last().unwrap() + circles.last().unwrap().radius_r;
        let worst = env.curve.points.iter().map(|p| (p.y - a * p.x.sqrt()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-3 * scale, "parabola distance {} vs scale {}", worst, scale);
        assert!(env.max_deviation > 1e-3 * scale);
        let tangency = segment_tangency(&env);
        assert!(tangency < 1e-6, "tangency {}", tangency);
    }

    #[test]
    fn envelope_needs_four_circles() {
        let err = mohr_envelope_curve(&tangent_circles(30.0, 10.0, &[1.0, 2.0, 3.0])).unwrap_err();
        assert_eq!(err.to_string(), "need ≥ 4 circles, got 3");
    }

    #[test]
    fn steep_interpolation_is_not_creative() {
        let circles = vec![
            MohrCircle::new(100.0, 20.0),
            MohrCircle::new(101.0, 40.0),
            MohrCircle::new(200.0, 50.0),
            MohrCircle::new(300.0, 60.0),
        ];
        assert!(matches!(mohr_envelope_curve(&circles), Err(MohrError::NotCreative { .. })));
    }
}
