//! Built-in integrands looked up by name, and the textual function grammar
//! used on the command line:
//!
//! ```text
//! poly:c0,c1,...          c0 + c1·x + …
//! named:<name>            sin | cos | exp | qsin | qcos | qexp
//! named:const:<v>         the constant v
//! ```

use std::collections::BTreeMap;

use crate::error::{QError, Result};
use crate::evaluator::{Evaluator, NamedFn};
use crate::poly::Polynomial;
use crate::qcore::{DeformationParameter, SummationControl};
use crate::qspecial::{QSeries, QSeriesKind};

/// Builds an evaluator from the text after the name (`None` when absent).
pub type Constructor =
    fn(Option<&str>, &DeformationParameter, &SummationControl) -> Result<Box<dyn Evaluator>>;

pub struct FunctionRegistry {
    entries: BTreeMap<String, Constructor>,
}

impl Default for FunctionRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

fn no_argument(name: &str, arg: Option<&str>) -> Result<()> {
    match arg {
        None => Ok(()),
        Some(a) => Err(QError::domain(format!(
            "'{name}' takes no argument, got '{a}'"
        ))),
    }
}

macro_rules! plain_fn {
    ($ctor:ident, $name:literal, $f:path) => {
        fn $ctor(
            arg: Option<&str>,
            _: &DeformationParameter,
            _: &SummationControl,
        ) -> Result<Box<dyn Evaluator>> {
            no_argument($name, arg)?;
            Ok(Box::new(NamedFn::new($name, $f)))
        }
    };
}

macro_rules! series_fn {
    ($ctor:ident, $name:literal, $kind:expr) => {
        fn $ctor(
            arg: Option<&str>,
            dp: &DeformationParameter,
            ctrl: &SummationControl,
        ) -> Result<Box<dyn Evaluator>> {
            no_argument($name, arg)?;
            Ok(Box::new(QSeries::new($kind, *dp, *ctrl)))
        }
    };
}

plain_fn!(sin_fn, "sin", f64::sin);
plain_fn!(cos_fn, "cos", f64::cos);
plain_fn!(exp_fn, "exp", f64::exp);
series_fn!(qsin_fn, "qsin", QSeriesKind::Sin);
series_fn!(qcos_fn, "qcos", QSeriesKind::Cos);
series_fn!(qexp_fn, "qexp", QSeriesKind::Exp);

fn constant(
    arg: Option<&str>,
    _: &DeformationParameter,
    _: &SummationControl,
) -> Result<Box<dyn Evaluator>> {
    let text = arg.ok_or_else(|| QError::domain("const needs a value, e.g. named:const:2.5"))?;
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| QError::domain(format!("invalid constant '{text}'")))?;
    Ok(Box::new(NamedFn::new("const", move |_| v)))
}

impl FunctionRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("sin", sin_fn);
        reg.register("cos", cos_fn);
        reg.register("exp", exp_fn);
        reg.register("qsin", qsin_fn);
        reg.register("qcos", qcos_fn);
        reg.register("qexp", qexp_fn);
        reg.register("const", constant);
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, ctor: Constructor) {
        self.entries.insert(name.into(), ctor);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn build(
        &self,
        name: &str,
        arg: Option<&str>,
        dp: &DeformationParameter,
        ctrl: &SummationControl,
    ) -> Result<Box<dyn Evaluator>> {
        let ctor = self.entries.get(name).ok_or_else(|| {
            QError::domain(format!(
                "unknown function '{name}' (expected one of: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        ctor(arg, dp, ctrl)
    }

    /// Parses `poly:…` or `named:…`.
    pub fn parse(
        &self,
        spec: &str,
        dp: &DeformationParameter,
        ctrl: &SummationControl,
    ) -> Result<Box<dyn Evaluator>> {
        if let Some(body) = spec.strip_prefix("poly:") {
            return Ok(Box::new(parse_polynomial(body)?));
        }
        if let Some(body) = spec.strip_prefix("named:") {
            let (name, arg) = match body.split_once(':') {
                Some((n, a)) => (n, Some(a)),
                None => (body, None),
            };
            return self.build(name, arg, dp, ctrl);
        }
        Err(QError::domain(format!(
            "function spec '{spec}' must start with 'poly:' or 'named:'"
        )))
    }
}

/// `c0,c1,...` as a polynomial.
pub fn parse_polynomial(body: &str) -> Result<Polynomial> {
    let coeffs = body
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| QError::domain(format!("invalid polynomial coefficient '{c}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FunctionRegistry, DeformationParameter, SummationControl) {
        (
            FunctionRegistry::with_builtins(),
            DeformationParameter::new(0.5).unwrap(),
            SummationControl::default(),
        )
    }

    #[test]
    fn polynomials() {
        let (reg, dp, ctrl) = setup();
        let f = reg.parse("poly:1,0,2", &dp, &ctrl).unwrap();
        assert_eq!(f.eval(2.0), 9.0);
        assert!(reg.parse("poly:1,x", &dp, &ctrl).is_err());
    }

    #[test]
    fn named() {
        let (reg, dp, ctrl) = setup();
        assert_eq!(
            reg.parse("named:sin", &dp, &ctrl).unwrap().eval(0.3),
            0.3f64.sin()
        );
        assert_eq!(
            reg.parse("named:exp", &dp, &ctrl).unwrap().eval(1.0),
            1f64.exp()
        );
        assert_eq!(
            reg.parse("named:const:2.5", &dp, &ctrl).unwrap().eval(-4.0),
            2.5
        );
        let qs = reg.parse("named:qsin", &dp, &ctrl).unwrap();
        assert!((qs.eval(0.5) - 0.490_486_704_223_719_36).abs() < 1e-13);
        assert!(reg.parse("named:tan", &dp, &ctrl).is_err());
        assert!(reg.parse("named:const", &dp, &ctrl).is_err());
        assert!(reg.parse("named:sin:3", &dp, &ctrl).is_err());
        assert!(reg.parse("sin", &dp, &ctrl).is_err());
    }

    #[test]
    fn names_listed() {
        let reg = FunctionRegistry::with_builtins();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            vec!["const", "cos", "exp", "qcos", "qexp", "qsin", "sin"]
        );
    }
}
