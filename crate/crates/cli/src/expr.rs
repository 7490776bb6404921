//! Scalar expressions over `r` and `phi`.

use std::fmt;
use std::str::FromStr;

use meval::{ContextProvider, FuncEvalError};

/// Parsed expression. Unknown names are rejected at parse time.
#[derive(Clone)]
pub struct Expression {
    source: String,
    expr: meval::Expr,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self, String> {
        let expr = meval::Expr::from_str(source).map_err(|e| format!("cannot parse expression `{source}`: {e}"))?;
        // meval resolves names lazily, so probe once
        expr.eval_with_context(Scope { r: 1.0, phi: 1.0 })
            .map_err(|e| format!("in expression `{source}`: {e}"))?;
        Ok(Self { source: source.to_owned(), expr })
    }

    pub fn eval(&self, r: f64, phi: f64) -> f64 {
        self.expr.eval_with_context(Scope { r, phi }).unwrap_or(f64::NAN)
    }

    /// Value of a constant expression; `r` and `phi` are not in scope.
    pub fn constant(source: &str) -> Result<f64, String> {
        let expr = meval::Expr::from_str(source).map_err(|e| format!("cannot parse expression `{source}`: {e}"))?;
        expr.eval_with_context(Constants).map_err(|e| format!("in expression `{source}`: {e}"))
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({:?})", self.source)
    }
}

/// Smooth bump `exp(1 - 1/(1 - t²))` on `(r0, r1)`, peak 1 at the midpoint.
pub fn bump(r: f64, r0: f64, r1: f64) -> f64 {
    let t = (2.0 * r - r0 - r1) / (r1 - r0);
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

struct Constants;

impl ContextProvider for Constants {
    fn get_var(&self, name: &str) -> Option<f64> {
        match name {
            "pi" => Some(std::f64::consts::PI),
            "e" => Some(std::f64::consts::E),
            _ => None,
        }
    }

    fn eval_func(&self, name: &str, args: &[f64]) -> Result<f64, FuncEvalError> {
        call(name, args)
    }
}

struct Scope {
    r: f64,
    phi: f64,
}

impl ContextProvider for Scope {
    fn get_var(&self, name: &str) -> Option<f64> {
        match name {
            "r" => Some(self.r),
            "phi" => Some(self.phi),
            _ => Constants.get_var(name),
        }
    }

    fn eval_func(&self, name: &str, args: &[f64]) -> Result<f64, FuncEvalError> {
        call(name, args)
    }
}

fn call(name: &str, args: &[f64]) -> Result<f64, FuncEvalError> {
    let unary: Option<fn(f64) -> f64> = match name {
        "sqrt" => Some(f64::sqrt),
        "exp" => Some(f64::exp),
        "ln" => Some(f64::ln),
        "abs" => Some(f64::abs),
        "sin" => Some(f64::sin),
        "cos" => Some(f64::cos),
        "tan" => Some(f64::tan),
        "atan" => Some(f64::atan),
        "sinh" => Some(f64::sinh),
        "cosh" => Some(f64::cosh),
        "tanh" => Some(f64::tanh),
        _ => None,
    };
    if let Some(f) = unary {
        return match args {
            [x] => Ok(f(*x)),
            _ => Err(FuncEvalError::NumberArgs(1)),
        };
    }
    match (name, args) {
        ("atan2", [y, x]) => Ok(y.atan2(*x)),
        ("atan2", _) => Err(FuncEvalError::NumberArgs(2)),
        ("bump", [r, r0, r1]) => Ok(bump(*r, *r0, *r1)),
        ("bump", _) => Err(FuncEvalError::NumberArgs(3)),
        _ => Err(FuncEvalError::UnknownFunction),
    }
}
