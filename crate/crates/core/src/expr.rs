//! Expression trees in one parameter `t`.
//!
//! An [`Expr`] is closed under [`Expr::differentiate`], so every derivative the
//! geometry needs (speeds, radius rates, Gauss map rates) is exact up to
//! floating-point evaluation. A light constant-folding pass runs inside the
//! smart constructors; there is no canonical simplification.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Constant exponent of a power node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Rational(Ratio<i64>),
    Real(f64),
}

impl Exponent {
    pub fn integer(n: i64) -> Self {
        Exponent::Rational(Ratio::from_integer(n))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Real(x) => x,
        }
    }

    pub fn is_integer(&self) -> bool {
        match *self {
            Exponent::Rational(r) => r.is_integer(),
            Exponent::Real(x) => x.fract() == 0.0,
        }
    }

    fn minus_one(&self) -> Self {
        match *self {
            Exponent::Rational(r) => Exponent::Rational(r - 1),
            Exponent::Real(x) => Exponent::Real(x - 1.0),
        }
    }

    fn is(&self, v: i64) -> bool {
        match *self {
            Exponent::Rational(r) => r == Ratio::from_integer(v),
            Exponent::Real(x) => x == v as f64,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Exponent::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Rational(r) => write!(f, "({}/{})", r.numer(), r.denom()),
            // Debug formatting always carries a '.' or an exponent, so the
            // literal re-parses as a decimal rather than a rational.
            Exponent::Real(x) if x < 0.0 => write!(f, "({:?})", x),
            Exponent::Real(x) => write!(f, "{:?}", x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    T,
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    NegativeSqrt,
    NegativeBaseFractionalPower,
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{} at t = {t}", describe(*.kind))]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub t: f64,
}

fn describe(kind: EvalErrorKind) -> &'static str {
    match kind {
        EvalErrorKind::DivisionByZero => "division by zero",
        EvalErrorKind::NegativeSqrt => "square root of a negative number",
        EvalErrorKind::NegativeBaseFractionalPower => {
            "negative base raised to a non-integer power"
        }
        EvalErrorKind::NonFinite => "non-finite value",
    }
}

// Smart constructors with constant folding.
impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(z), e) | (e, Expr::Const(z)) if z == 0.0 => e,
            (a, Expr::Neg(b)) => Expr::sub(a, *b),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            (e, Expr::Const(z)) if z == 0.0 => e,
            (Expr::Const(z), e) if z == 0.0 => Expr::neg(e),
            (a, Expr::Neg(b)) => Expr::add(a, *b),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(z), _) | (_, Expr::Const(z)) if z == 0.0 => Expr::Const(0.0),
            (Expr::Const(o), e) | (e, Expr::Const(o)) if o == 1.0 => e,
            (Expr::Const(m), e) | (e, Expr::Const(m)) if m == -1.0 => Expr::neg(e),
            // keep numeric factors in front: c1*(c2*e) -> (c1*c2)*e
            (Expr::Const(x), Expr::Mul(l, r)) if matches!(*l, Expr::Const(_)) => {
                let Expr::Const(y) = *l else { unreachable!() };
                Expr::mul(Expr::Const(x * y), *r)
            }
            (e, Expr::Const(c)) => Expr::mul(Expr::Const(c), e),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) if y != 0.0 => Expr::Const(x / y),
            (Expr::Const(z), _) if z == 0.0 => Expr::Const(0.0),
            (e, Expr::Const(o)) if o == 1.0 => e,
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(base: Expr, exp: Exponent) -> Expr {
        if exp.is(0) {
            return Expr::Const(1.0);
        }
        if exp.is(1) {
            return base;
        }
        match base {
            Expr::Const(c) if c >= 0.0 || exp.is_integer() => Expr::Const(c.powf(exp.value())),
            b => Expr::Pow(Box::new(b), exp),
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        match (func, &arg) {
            (Func::Sin, Expr::Const(c)) if *c == 0.0 => Expr::Const(0.0),
            (Func::Cos, Expr::Const(c)) if *c == 0.0 => Expr::Const(1.0),
            (Func::Sqrt, Expr::Const(c)) if *c >= 0.0 => Expr::Const(c.sqrt()),
            (Func::Abs, Expr::Const(c)) => Expr::Const(c.abs()),
            _ => Expr::Call(func, Box::new(arg)),
        }
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::call(Func::Sin, a)
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::call(Func::Cos, a)
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::call(Func::Sqrt, a)
    }

    pub fn abs(a: Expr) -> Expr {
        Expr::call(Func::Abs, a)
    }
}

impl Expr {
    /// True when the tree does not mention `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Pi => true,
            Expr::T => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let err = |kind| EvalError { kind, t };
        let v = match self {
            Expr::Const(c) => *c,
            Expr::T => t,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let num = a.eval(t)?;
                let den = b.eval(t)?;
                if den == 0.0 {
                    return Err(err(EvalErrorKind::DivisionByZero));
                }
                num / den
            }
            Expr::Pow(base, exp) => {
                let b = base.eval(t)?;
                let p = exp.value();
                if b < 0.0 && !exp.is_integer() {
                    return Err(err(EvalErrorKind::NegativeBaseFractionalPower));
                }
                if b == 0.0 && p < 0.0 {
                    return Err(err(EvalErrorKind::DivisionByZero));
                }
                match *exp {
                    Exponent::Rational(r) if r.is_integer() && r.numer().abs() <= i32::MAX as i64 => {
                        b.powi(*r.numer() as i32)
                    }
                    _ => b.powf(p),
                }
            }
            Expr::Call(func, a) => {
                let x = a.eval(t)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Abs => x.abs(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(err(EvalErrorKind::NegativeSqrt));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(err(EvalErrorKind::NonFinite))
        }
    }

    /// Derivative with respect to `t`.
    ///
    /// `d|u| = u' * u / |u|`, which fails to evaluate where `u = 0`.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Pi => Expr::Const(0.0),
            Expr::T => Expr::Const(1.0),
            Expr::Neg(a) => Expr::neg(a.differentiate()),
            Expr::Add(a, b) => Expr::add(a.differentiate(), b.differentiate()),
            Expr::Sub(a, b) => Expr::sub(a.differentiate(), b.differentiate()),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.differentiate(), (**b).clone()),
                Expr::mul((**a).clone(), b.differentiate()),
            ),
            Expr::Div(a, b) => {
                let da = a.differentiate();
                let db = b.differentiate();
                if db == Expr::Const(0.0) {
                    return Expr::div(da, (**b).clone());
                }
                Expr::div(
                    Expr::sub(
                        Expr::mul(da, (**b).clone()),
                        Expr::mul((**a).clone(), db),
                    ),
                    Expr::pow((**b).clone(), Exponent::integer(2)),
                )
            }
            Expr::Pow(base, exp) => {
                let coeff = match *exp {
                    Exponent::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
                    Exponent::Real(x) => x,
                };
                Expr::mul(
                    Expr::mul(
                        Expr::Const(coeff),
                        Expr::pow((**base).clone(), exp.minus_one()),
                    ),
                    base.differentiate(),
                )
            }
            Expr::Call(func, a) => {
                let da = a.differentiate();
                let inner = (**a).clone();
                let outer = match func {
                    Func::Sin => Expr::cos(inner),
                    Func::Cos => Expr::neg(Expr::sin(inner)),
                    Func::Sqrt => Expr::div(Expr::Const(1.0), Expr::mul(Expr::Const(2.0), Expr::sqrt(inner))),
                    Func::Abs => Expr::div(inner.clone(), Expr::abs(inner)),
                };
                Expr::mul(outer, da)
            }
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::div(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

// Printing. Precedence levels: 1 = additive, 2 = multiplicative, 3 = unary,
// 4 = power, 5 = atom.
impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(c) => write!(f, "{}", c),
            Expr::T => write!(f, "t"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_prec(f, 3)
            }
            Expr::Add(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, "+")?;
                b.write_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, "-")?;
                b.write_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "*")?;
                b.write_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "/")?;
                b.write_prec(f, 3)
            }
            Expr::Pow(base, exp) => {
                base.write_prec(f, 5)?;
                write!(f, "^{}", exp)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Expr {
        Expr::pow(Expr::T, Exponent::integer(2))
    }

    #[test]
    fn square_derivative_folds_to_two_t() {
        assert_eq!(t2().differentiate().to_string(), "2*t");
    }

    #[test]
    fn constant_and_parameter_derivatives() {
        assert_eq!(Expr::Const(3.5).differentiate(), Expr::Const(0.0));
        assert_eq!(Expr::Pi.differentiate(), Expr::Const(0.0));
        assert_eq!(Expr::T.differentiate(), Expr::Const(1.0));
    }

    #[test]
    fn sine_derivative_is_cosine() {
        assert_eq!(Expr::sin(Expr::T).differentiate(), Expr::cos(Expr::T));
    }

    #[test]
    fn eval_reports_offending_parameter() {
        let e = Expr::sqrt(Expr::T);
        let err = e.eval(-1.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::NegativeSqrt);
        assert_eq!(err.t, -1.0);

        let e = Expr::div(Expr::Const(1.0), Expr::T);
        assert_eq!(e.eval(0.0).unwrap_err().kind, EvalErrorKind::DivisionByZero);

        let e = Expr::pow(Expr::T, Exponent::Rational(Ratio::new(3, 2)));
        assert_eq!(
            e.eval(-2.0).unwrap_err().kind,
            EvalErrorKind::NegativeBaseFractionalPower
        );
        // integer powers of negative bases are fine
        assert_eq!(Expr::pow(Expr::T, Exponent::integer(3)).eval(-2.0).unwrap(), -8.0);
    }

    #[test]
    fn abs_derivative_is_sign() {
        let d = Expr::abs(Expr::T).differentiate();
        assert_eq!(d.eval(-0.3).unwrap(), -1.0);
        assert_eq!(d.eval(2.0).unwrap(), 1.0);
        assert!(d.eval(0.0).is_err());
    }

    #[test]
    fn negative_constants_print_with_parentheses_as_bases() {
        let e = Expr::Pow(Box::new(Expr::Const(-2.0)), Exponent::integer(2));
        assert_eq!(e.to_string(), "(-2)^2");
        let e = Expr::Sub(Box::new(Expr::T), Box::new(Expr::Const(-2.0)));
        assert_eq!(e.to_string(), "t--2");
    }
}
