//! The family description format.
//!
//! A family file is line oriented, one `key value` pair per line, with `#`
//! starting a comment:
//!
//! ```text
//! # parabola evolute family
//! curve  x=-4*t^3; y=3*t^2+1/2
//! nu     x=1/sqrt(1+4*t^2); y=2*t/sqrt(1+4*t^2)
//! radius (1+4*t^2)^(3/2)/2
//! domain (-1, 1)
//! samples 2001
//! ```
//!
//! `curve` and `domain` are mandatory. `radius` is optional (a curve-only
//! file), as are the explicit Gauss map `nu` and the evolute scale `alpha`
//! satisfying `beta = l * alpha`.

use std::fmt;

use thiserror::Error;

use crate::expr::Expr;
use crate::frontal::Grid;
use crate::parser::parse_expr_at;
use crate::ParseError;

pub const DEFAULT_SAMPLES: usize = 2001;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("missing mandatory key '{0}'")]
    MissingKey(&'static str),
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// Parsed description of a curve and, optionally, a circle family on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub x: Expr,
    pub y: Expr,
    pub radius: Option<Expr>,
    pub nu: Option<(Expr, Expr)>,
    pub alpha: Option<Expr>,
    pub domain: (f64, f64),
    pub samples: usize,
}

impl FamilySpec {
    /// A curve-only spec on `(a, b)` with the default grid size.
    pub fn curve(x: Expr, y: Expr, domain: (f64, f64)) -> Self {
        FamilySpec {
            x,
            y,
            radius: None,
            nu: None,
            alpha: None,
            domain,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn with_radius(mut self, radius: Expr) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_nu(mut self, nx: Expr, ny: Expr) -> Self {
        self.nu = Some((nx, ny));
        self
    }

    pub fn with_alpha(mut self, alpha: Expr) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.domain = (a, b);
        self
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.domain.0, self.domain.1, self.samples)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve x={}; y={}", self.x, self.y)?;
        if let Some((nx, ny)) = &self.nu {
            writeln!(f, "nu x={}; y={}", nx, ny)?;
        }
        if let Some(a) = &self.alpha {
            writeln!(f, "alpha {}", a)?;
        }
        if let Some(r) = &self.radius {
            writeln!(f, "radius {}", r)?;
        }
        writeln!(f, "domain ({:?}, {:?})", self.domain.0, self.domain.1)?;
        writeln!(f, "samples {}", self.samples)
    }
}

fn invalid(line: usize, message: impl Into<String>) -> DslError {
    DslError::Invalid { line, message: message.into() }
}

/// Parses `x=<expr>; y=<expr>`; `col` is the 1-based column of `value`.
fn parse_pair(value: &str, line: usize, col: usize) -> Result<(Expr, Expr), DslError> {
    let mut x = None;
    let mut y = None;
    let mut offset = 0;
    for part in value.split(';') {
        let part_col = col + value[..offset].chars().count();
        offset += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        let Some(eq) = part.find('=') else {
            return Err(ParseError::new(line, part_col, "expected 'x=<expr>' or 'y=<expr>'").into());
        };
        let name = part[..eq].trim();
        let expr_src = &part[eq + 1..];
        let expr_col = part_col + part[..eq + 1].chars().count();
        let e = parse_expr_at(expr_src, line, expr_col)?;
        let slot = match name {
            "x" => &mut x,
            "y" => &mut y,
            other => {
                return Err(ParseError::new(line, part_col, format!("unknown component '{}'", other)).into())
            }
        };
        if slot.is_some() {
            return Err(invalid(line, format!("component '{}' given twice", name)));
        }
        *slot = Some(e);
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(invalid(line, "both x= and y= components are required")),
    }
}

fn parse_domain(value: &str, line: usize, col: usize) -> Result<(f64, f64), DslError> {
    let trimmed = value.trim();
    let lead = value.len() - value.trim_start().len();
    if !(trimmed.starts_with('(') && trimmed.ends_with(')')) {
        return Err(ParseError::new(line, col + lead, "domain must look like (a, b)").into());
    }
    let inner = &trimmed[1..trimmed.len() - 1];
    let inner_col = col + lead + 1;
    // split at the top-level comma
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(ParseError::new(line, inner_col + i, "domain takes exactly two endpoints").into());
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let Some(comma) = split else {
        return Err(ParseError::new(line, inner_col, "domain must look like (a, b)").into());
    };
    let a_expr = parse_expr_at(&inner[..comma], line, inner_col)?;
    let b_expr = parse_expr_at(&inner[comma + 1..], line, inner_col + comma + 1)?;
    if !a_expr.is_constant() || !b_expr.is_constant() {
        return Err(invalid(line, "domain endpoints must not depend on t"));
    }
    let a = a_expr.eval(0.0).map_err(|e| invalid(line, e.to_string()))?;
    let b = b_expr.eval(0.0).map_err(|e| invalid(line, e.to_string()))?;
    if !(a < b) {
        return Err(invalid(line, format!("domain needs a < b, got ({}, {})", a, b)));
    }
    Ok((a, b))
}

/// Parses a family description.
pub fn parse_family(text: &str) -> Result<FamilySpec, DslError> {
    let mut curve = None;
    let mut nu = None;
    let mut alpha = None;
    let mut radius = None;
    let mut domain = None;
    let mut samples = None;
    let mut seen: Vec<&str> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let body = &content[lead..];
        let key_end = body.find(char::is_whitespace).unwrap_or(body.len());
        let key = &body[..key_end];
        let value = &body[key_end..];
        let value_col = 1 + content[..lead + key_end].chars().count();

        let canonical = match key {
            "curve" => "curve",
            "nu" => "nu",
            "alpha" => "alpha",
            "radius" => "radius",
            "domain" => "domain",
            "samples" => "samples",
            other => return Err(DslError::UnknownKey { line, key: other.to_string() }),
        };
        if seen.contains(&canonical) {
            return Err(DslError::DuplicateKey { line, key: key.to_string() });
        }
        seen.push(canonical);

        match canonical {
            "curve" => curve = Some(parse_pair(value, line, value_col)?),
            "nu" => nu = Some(parse_pair(value, line, value_col)?),
            "alpha" => alpha = Some(parse_expr_at(value, line, value_col)?),
            "radius" => radius = Some(parse_expr_at(value, line, value_col)?),
            "domain" => domain = Some(parse_domain(value, line, value_col)?),
            "samples" => {
                let v = value.trim();
                let n: i64 = v
                    .parse()
                    .map_err(|_| invalid(line, format!("samples must be an integer, got '{}'", v)))?;
                if n <= 0 {
                    return Err(invalid(line, format!("samples must be positive, got {}", n)));
                }
                if n < 3 {
                    return Err(invalid(line, format!("samples must be at least 3, got {}", n)));
                }
                samples = Some(n as usize);
            }
            _ => unreachable!(),
        }
    }

    let (x, y) = curve.ok_or(DslError::MissingKey("curve"))?;
    let domain = domain.ok_or(DslError::MissingKey("domain"))?;
    Ok(FamilySpec {
        x,
        y,
        radius,
        nu,
        alpha,
        domain,
        samples: samples.unwrap_or(DEFAULT_SAMPLES),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARABOLA: &str = "\
# evolute family of the parabola
curve x=-4*t^3; y=3*t^2+1/2
radius (1+4*t^2)^(3/2)/2
domain (-1,1)
";

    #[test]
    fn parses_parabola_family() {
        let spec = parse_family(PARABOLA).unwrap();
        assert_eq!(spec.domain, (-1.0, 1.0));
        assert_eq!(spec.samples, DEFAULT_SAMPLES);
        assert_eq!(spec.x.eval(1.0).unwrap(), -4.0);
        assert_eq!(spec.y.eval(1.0).unwrap(), 3.5);
        let r = spec.radius.as_ref().unwrap();
        assert_eq!(r.eval(0.0).unwrap(), 0.5);
        // lambda(1) = 5^(3/2) / 2
        assert!((r.eval(1.0).unwrap() - 5f64.powf(1.5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn curve_only_has_no_radius() {
        let spec = parse_family("curve x=t; y=t\ndomain (0, 1)").unwrap();
        assert!(spec.radius.is_none());
        assert!(spec.nu.is_none());
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_family("curve x=t^2;y=t\ndomain (0,1)").unwrap();
        let b = parse_family("   curve   x = t ^ 2 ;  y = t  \n\n domain ( 0 , 1 )  # c").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unmatched_parenthesis_reports_position() {
        let err = parse_family("domain (0,1)\ncurve x=(t; y=t").unwrap_err();
        match err {
            DslError::Syntax(e) => {
                assert_eq!(e.line, 2);
                assert_eq!(e.column, 9);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn missing_keys() {
        assert_eq!(parse_family("domain (0,1)").unwrap_err(), DslError::MissingKey("curve"));
        assert_eq!(parse_family("curve x=t; y=t").unwrap_err(), DslError::MissingKey("domain"));
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        assert!(matches!(
            parse_family("curve x=t; y=t\nspeed 3\ndomain (0,1)"),
            Err(DslError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_family("curve x=t; y=t\ncurve x=t; y=t\ndomain (0,1)"),
            Err(DslError::DuplicateKey { line: 2, .. })
        ));
    }

    #[test]
    fn negative_samples_rejected() {
        let err = parse_family("curve x=t; y=t\ndomain (0,1)\nsamples -5").unwrap_err();
        assert!(err.to_string().contains("positive"));
        assert!(parse_family("curve x=t; y=t\ndomain (0,1)\nsamples 2").is_err());
    }

    #[test]
    fn domain_accepts_constant_expressions() {
        let spec = parse_family("curve x=cos(t); y=sin(t)\ndomain (0, 2*pi)").unwrap();
        assert_eq!(spec.domain.1, 2.0 * std::f64::consts::PI);
        assert!(parse_family("curve x=t; y=t\ndomain (0, t)").is_err());
        assert!(parse_family("curve x=t; y=t\ndomain (1, 0)").is_err());
    }

    #[test]
    fn display_round_trips() {
        let spec = parse_family(PARABOLA)
            .unwrap()
            .with_nu(
                crate::parser::parse_expr("1/sqrt(1+4*t^2)").unwrap(),
                crate::parser::parse_expr("2*t/sqrt(1+4*t^2)").unwrap(),
            )
            .with_alpha(crate::parser::parse_expr("(1+4*t^2)^(3/2)/2").unwrap());
        let again = parse_family(&spec.to_string()).unwrap();
        assert_eq!(spec, again);
    }
}
