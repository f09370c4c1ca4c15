//! The four Jackson integral forms behind one trait, looked up by name.

use std::collections::BTreeMap;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::qcore::{DeformationParameter, SummationControl};

use super::{
    jackson_integral, jackson_integral_improper, jackson_integral_interval,
    jackson_integral_real_line, IntegralResult,
};

/// Integration limits; which ones are required depends on the rule.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bounds {
    pub fn upper(b: f64) -> Self {
        Self {
            lower: None,
            upper: Some(b),
        }
    }

    pub fn interval(a: f64, b: f64) -> Self {
        Self {
            lower: Some(a),
            upper: Some(b),
        }
    }

    fn require_upper(&self, rule: &str) -> Result<f64> {
        self.upper
            .ok_or_else(|| QError::domain(format!("the {rule} integral needs an upper limit")))
    }

    fn require_lower(&self, rule: &str) -> Result<f64> {
        self.lower
            .ok_or_else(|| QError::domain(format!("the {rule} integral needs a lower limit")))
    }
}

pub trait IntegralRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn integrate(
        &self,
        f: &dyn Evaluator,
        dp: &DeformationParameter,
        bounds: &Bounds,
        ctrl: &SummationControl,
    ) -> Result<IntegralResult>;
}

pub struct FiniteRule;

impl IntegralRule for FiniteRule {
    fn name(&self) -> &'static str {
        "finite"
    }

    fn describe(&self) -> &'static str {
        "integral over [0, b]"
    }

    fn integrate(
        &self,
        f: &dyn Evaluator,
        dp: &DeformationParameter,
        bounds: &Bounds,
        ctrl: &SummationControl,
    ) -> Result<IntegralResult> {
        jackson_integral(f, dp, bounds.require_upper(self.name())?, ctrl)
    }
}

pub struct IntervalRule;

impl IntegralRule for IntervalRule {
    fn name(&self) -> &'static str {
        "interval"
    }

    fn describe(&self) -> &'static str {
        "integral over [a, b] as a difference of two base-point integrals"
    }

    fn integrate(
        &self,
        f: &dyn Evaluator,
        dp: &DeformationParameter,
        bounds: &Bounds,
        ctrl: &SummationControl,
    ) -> Result<IntegralResult> {
        let a = bounds.require_lower(self.name())?;
        let b = bounds.require_upper(self.name())?;
        jackson_integral_interval(f, dp, a, b, ctrl)
    }
}

pub struct ImproperRule;

impl IntegralRule for ImproperRule {
    fn name(&self) -> &'static str {
        "improper"
    }

    fn describe(&self) -> &'static str {
        "integral over [0, ∞) on the full lattice"
    }

    fn integrate(
        &self,
        f: &dyn Evaluator,
        dp: &DeformationParameter,
        _bounds: &Bounds,
        ctrl: &SummationControl,
    ) -> Result<IntegralResult> {
        jackson_integral_improper(f, dp, ctrl)
    }
}

pub struct RealLineRule;

impl IntegralRule for RealLineRule {
    fn name(&self) -> &'static str {
        "real-line"
    }

    fn describe(&self) -> &'static str {
        "two-sided integral over (−∞, ∞)"
    }

    fn integrate(
        &self,
        f: &dyn Evaluator,
        dp: &DeformationParameter,
        _bounds: &Bounds,
        ctrl: &SummationControl,
    ) -> Result<IntegralResult> {
        jackson_integral_real_line(f, dp, ctrl)
    }
}

/// Integral rules keyed by name.
pub struct RuleRegistry {
    rules: BTreeMap<&'static str, Box<dyn IntegralRule>>,
}

impl Default for RuleRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl RuleRegistry {
    pub fn empty() -> Self {
        Self {
            rules: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(FiniteRule);
        reg.register(IntervalRule);
        reg.register(ImproperRule);
        reg.register(RealLineRule);
        reg
    }

    pub fn register<R: IntegralRule + 'static>(&mut self, rule: R) {
        self.rules.insert(rule.name(), Box::new(rule));
    }

    pub fn get(&self, name: &str) -> Option<&dyn IntegralRule> {
        self.rules.get(name).map(|r| r.as_ref())
    }

    pub fn lookup(&self, name: &str) -> Result<&dyn IntegralRule> {
        self.get(name).ok_or_else(|| {
            QError::domain(format!(
                "unknown integral form '{name}' (expected one of: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.rules.keys().copied()
    }
}
