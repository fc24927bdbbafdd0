//! Monomial terms `x^a * y^b` and the comma-separated term grammar.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A monomial `x^x_exp * y^y_exp`. `Term::ONE` is the intercept column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub x_exp: f64,
    pub y_exp: f64,
}

impl Term {
    pub const ONE: Term = Term { x_exp: 0.0, y_exp: 0.0 };
    pub const X: Term = Term { x_exp: 1.0, y_exp: 0.0 };
    pub const Y: Term = Term { x_exp: 0.0, y_exp: 1.0 };
    pub const XY: Term = Term { x_exp: 1.0, y_exp: 1.0 };
    pub const X2: Term = Term { x_exp: 2.0, y_exp: 0.0 };
    pub const Y2: Term = Term { x_exp: 0.0, y_exp: 2.0 };

    pub fn new(x_exp: f64, y_exp: f64) -> Self {
        Term { x_exp, y_exp }
    }

    /// The five-term second-order set `{x, y, xy, x^2, y^2}`.
    pub fn conic_set() -> Vec<Term> {
        vec![Term::X, Term::Y, Term::XY, Term::X2, Term::Y2]
    }

    pub fn is_one(&self) -> bool {
        self.x_exp == 0.0 && self.y_exp == 0.0
    }

    /// Evaluates the monomial, or `None` when the power is undefined over the reals
    /// (fractional power of a negative number, negative power of zero, overflow).
    pub fn eval<T: Scalar>(&self, x: T, y: T) -> Option<T> {
        let v = pow(x, self.x_exp)? * pow(y, self.y_exp)?;
        v.is_finite().then_some(v)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn pow<T: Scalar>(base: T, exp: f64) -> Option<T> {
    let v = if exp == 0.0 {
        T::one()
    } else if exp.fract() == 0.0 && exp.abs() <= i32::MAX as f64 {
        base.powi(exp as i32)
    } else {
        base.powf(T::lit(exp))
    };
    v.is_finite().then_some(v)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(name: char, e: f64) -> Option<String> {
            if e == 0.0 {
                None
            } else if e == 1.0 {
                Some(name.to_string())
            } else {
                Some(format!("{name}^{e}"))
            }
        }
        if self.x_exp == 1.0 && self.y_exp == 1.0 {
            return f.write_str("xy");
        }
        let parts: Vec<String> = [factor('x', self.x_exp), factor('y', self.y_exp)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::TermSyntax("empty term".into()));
        }
        let mut term = Term::ONE;
        for factor in s.split('*') {
            let f = parse_factor(factor.trim())
                .ok_or_else(|| Error::TermSyntax(format!("cannot parse `{factor}` in `{s}`")))?;
            term.x_exp += f.x_exp;
            term.y_exp += f.y_exp;
        }
        Ok(term)
    }
}

fn parse_factor(tok: &str) -> Option<Term> {
    match tok {
        "1" => return Some(Term::ONE),
        "x" => return Some(Term::X),
        "y" => return Some(Term::Y),
        "xy" => return Some(Term::XY),
        "x2" => return Some(Term::X2),
        "y2" => return Some(Term::Y2),
        _ => {}
    }
    let (var, exp) = tok.split_once('^')?;
    let exp = exp.trim();
    if exp.is_empty()
        || !exp
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
    {
        return None;
    }
    let e: f64 = exp.parse().ok()?;
    if !e.is_finite() {
        return None;
    }
    match var.trim() {
        "x" => Some(Term::new(e, 0.0)),
        "y" => Some(Term::new(0.0, e)),
        _ => None,
    }
}

/// Parses a comma-separated term list such as `"x,y,xy,x2,y2"` or `"x^0.5*y^-1"`.
pub fn parse_terms(spec: &str) -> Result<Vec<Term>> {
    let mut out: Vec<Term> = Vec::new();
    for tok in spec.split(',') {
        let term: Term = tok.parse()?;
        if out.contains(&term) {
            return Err(Error::DuplicateTerm(term.label()));
        }
        out.push(term);
    }
    Ok(out)
}

/// Renders a term list back into the grammar accepted by [`parse_terms`].
pub fn format_terms(terms: &[Term]) -> String {
    terms.iter().map(Term::label).collect::<Vec<_>>().join(",")
}
