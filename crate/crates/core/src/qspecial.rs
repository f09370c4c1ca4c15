//! q-exponential, q-sine and q-cosine as q-factorial power series:
//!
//! ```text
//! E_q(x) = Σ xᵏ/[k]_q!
//! S_q(x) = Σ (−1)ᵏ x^(2k+1)/[2k+1]_q!
//! C_q(x) = Σ (−1)ᵏ x^(2k)/[2k]_q!
//! ```
//!
//! Because `D xⁿ = [n]_q xⁿ⁻¹`, the Jackson derivative shifts these series
//! term by term: `D E_q = E_q`, `D S_q = C_q`, `D C_q = −S_q`. Hence S_q and
//! C_q solve `D²f + f = 0`; C_q is taken as the cosine-type companion of S_q.
//!
//! With `q ∈ (0, 1)` the brackets grow geometrically, so the series converge
//! for every finite x; the term-count guard is what decides in practice.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::qcore::{DeformationParameter, SummationControl};
use crate::qderiv::jackson_derivative_with;
use crate::summation::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QSeriesKind {
    Exp,
    Sin,
    Cos,
}

impl QSeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            QSeriesKind::Exp => "qexp",
            QSeriesKind::Sin => "qsin",
            QSeriesKind::Cos => "qcos",
        }
    }
}

impl std::str::FromStr for QSeriesKind {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qexp" | "exp" => Ok(QSeriesKind::Exp),
            "qsin" | "sin" => Ok(QSeriesKind::Sin),
            "qcos" | "cos" => Ok(QSeriesKind::Cos),
            other => Err(QError::domain(format!("unknown q-series '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSeries {
    pub kind: QSeriesKind,
    pub dp: DeformationParameter,
    pub ctrl: SummationControl,
}

impl QSeries {
    pub fn new(kind: QSeriesKind, dp: DeformationParameter, ctrl: SummationControl) -> Self {
        Self { kind, dp, ctrl }
    }

    /// Ratio `t_k / t_{k−1}`.
    fn step(&self, x: f64, k: u32) -> f64 {
        let b = |n: u32| self.dp.bracket(n);
        match self.kind {
            QSeriesKind::Exp => x / b(k),
            QSeriesKind::Sin => -x * x / (b(2 * k) * b(2 * k + 1)),
            QSeriesKind::Cos => -x * x / (b(2 * k - 1) * b(2 * k)),
        }
    }

    /// Sums terms until one is below `tol` and no larger than its
    /// predecessor; the terms are then folded smallest first.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let mut term = match self.kind {
            QSeriesKind::Exp | QSeriesKind::Cos => 1.0,
            QSeriesKind::Sin => x,
        };
        let mut terms = vec![term];
        for k in 1..self.ctrl.max_terms as u32 {
            let next = term * self.step(x, k);
            if !next.is_finite() {
                return Err(QError::SeriesDivergence {
                    terms: terms.len(),
                    last_term: term.abs(),
                });
            }
            terms.push(next);
            let settled = next.abs() < self.ctrl.tol && next.abs() <= term.abs();
            term = next;
            if settled {
                return Ok(compensated_sum(terms.iter().rev().copied()));
            }
        }
        Err(QError::SeriesDivergence {
            terms: terms.len(),
            last_term: term.abs(),
        })
    }
}

impl Evaluator for QSeries {
    /// NaN where the series fails to settle.
    fn eval(&self, x: f64) -> f64 {
        self.eval_checked(x).unwrap_or(f64::NAN)
    }
}

pub fn q_exp(x: f64, dp: &DeformationParameter, ctrl: &SummationControl) -> Result<f64> {
    QSeries::new(QSeriesKind::Exp, *dp, *ctrl).eval_checked(x)
}

pub fn q_sin(x: f64, dp: &DeformationParameter, ctrl: &SummationControl) -> Result<f64> {
    QSeries::new(QSeriesKind::Sin, *dp, *ctrl).eval_checked(x)
}

pub fn q_cos(x: f64, dp: &DeformationParameter, ctrl: &SummationControl) -> Result<f64> {
    QSeries::new(QSeriesKind::Cos, *dp, *ctrl).eval_checked(x)
}

/// `D²f(x)` by composing two sampled Jackson derivatives of the series.
pub fn second_jackson_derivative(series: &QSeries, x: f64) -> Result<f64> {
    let dp = series.dp;
    let first = |y: f64| jackson_derivative_with(|t| series.eval_checked(t), &dp, y);
    jackson_derivative_with(first, &dp, x)
}

/// `|D²f(x) + a·f(x)|` for the chosen series.
pub fn ode_residual(
    kind: QSeriesKind,
    a: f64,
    dp: &DeformationParameter,
    x: f64,
    ctrl: &SummationControl,
) -> Result<f64> {
    let series = QSeries::new(kind, *dp, *ctrl);
    let d2 = second_jackson_derivative(&series, x)?;
    Ok((d2 + a * series.eval_checked(x)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qderiv::jackson_derivative;

    fn dp(q: f64) -> DeformationParameter {
        DeformationParameter::new(q).unwrap()
    }

    fn ctrl() -> SummationControl {
        SummationControl::default()
    }

    // 50-digit reference sums (80 / 60 terms) from an arbitrary-precision oracle
    const QEXP_1_HALF: f64 = 2.483_705_788_330_572_5;
    const QSIN_HALF_HALF: f64 = 0.490_486_704_223_719_36;
    const QCOS_HALF_HALF: f64 = 0.900_448_056_027_293;

    // direct term-by-term summation with explicit q-factorials
    fn brute(kind: QSeriesKind, x: f64, q: f64) -> f64 {
        let d = dp(q);
        let fact = |n: u32| (1..=n).map(|k| d.bracket(k)).product::<f64>();
        (0..40u32)
            .map(|k| match kind {
                QSeriesKind::Exp => x.powi(k as i32) / fact(k),
                QSeriesKind::Sin => {
                    (-1f64).powi(k as i32) * x.powi(2 * k as i32 + 1) / fact(2 * k + 1)
                }
                QSeriesKind::Cos => (-1f64).powi(k as i32) * x.powi(2 * k as i32) / fact(2 * k),
            })
            .sum()
    }

    #[test]
    fn at_zero() {
        for q in [0.3, 0.9] {
            assert_eq!(q_exp(0.0, &dp(q), &ctrl()).unwrap(), 1.0);
            assert_eq!(q_sin(0.0, &dp(q), &ctrl()).unwrap(), 0.0);
            assert_eq!(q_cos(0.0, &dp(q), &ctrl()).unwrap(), 1.0);
        }
    }

    #[test]
    fn pinned_values() {
        let d = dp(0.5);
        let e = q_exp(1.0, &d, &ctrl()).unwrap();
        assert!((e - QEXP_1_HALF).abs() < 1e-13);
        assert!((e - brute(QSeriesKind::Exp, 1.0, 0.5)).abs() < 1e-13);
        let s = q_sin(0.5, &d, &ctrl()).unwrap();
        assert!((s - QSIN_HALF_HALF).abs() < 1e-13);
        assert!((s - brute(QSeriesKind::Sin, 0.5, 0.5)).abs() < 1e-13);
        let c = q_cos(0.5, &d, &ctrl()).unwrap();
        assert!((c - QCOS_HALF_HALF).abs() < 1e-13);
    }

    #[test]
    fn classical_limit() {
        let d = dp(0.999);
        assert!((q_exp(1.0, &d, &ctrl()).unwrap() - std::f64::consts::E).abs() < 1e-2);
        assert!((q_cos(1.0, &d, &ctrl()).unwrap() - 1f64.cos()).abs() < 1e-2);
        for i in -10..=10 {
            let x = i as f64 / 10.0;
            assert!((q_exp(x, &d, &ctrl()).unwrap() - x.exp()).abs() < 1e-2);
            assert!((q_sin(x, &d, &ctrl()).unwrap() - x.sin()).abs() < 1e-2);
            assert!((q_cos(x, &d, &ctrl()).unwrap() - x.cos()).abs() < 1e-2);
        }
    }

    #[test]
    fn parity() {
        let d = dp(0.7);
        for x in [0.1, 0.6, 1.7, 3.0] {
            assert_eq!(
                q_sin(-x, &d, &ctrl()).unwrap(),
                -q_sin(x, &d, &ctrl()).unwrap()
            );
            assert_eq!(
                q_cos(-x, &d, &ctrl()).unwrap(),
                q_cos(x, &d, &ctrl()).unwrap()
            );
        }
    }

    #[test]
    fn derivative_shifts() {
        let d = dp(0.9);
        let c = ctrl();
        let exp = QSeries::new(QSeriesKind::Exp, d, c);
        let sin = QSeries::new(QSeriesKind::Sin, d, c);
        let cos = QSeries::new(QSeriesKind::Cos, d, c);
        for x in [0.25, 0.5, 1.0] {
            let de = jackson_derivative(&exp, &d, x).unwrap();
            assert!((de - exp.eval(x)).abs() <= 5.0 * c.tol, "x={x}");
            let ds = jackson_derivative(&sin, &d, x).unwrap();
            assert!((ds - cos.eval(x)).abs() <= 5.0 * c.tol, "x={x}");
            let dc = jackson_derivative(&cos, &d, x).unwrap();
            assert!((dc + sin.eval(x)).abs() <= 5.0 * c.tol, "x={x}");
        }
    }

    #[test]
    fn ode_residuals() {
        let d = dp(0.9);
        for x in [0.25, 0.5] {
            assert!(ode_residual(QSeriesKind::Sin, 1.0, &d, x, &ctrl()).unwrap() <= 1e-8);
            assert!(ode_residual(QSeriesKind::Cos, 1.0, &d, x, &ctrl()).unwrap() <= 1e-8);
            assert!(ode_residual(QSeriesKind::Exp, -1.0, &d, x, &ctrl()).unwrap() <= 1e-8);
        }
        let wrong = ode_residual(QSeriesKind::Sin, 2.0, &d, 0.5, &ctrl()).unwrap();
        let s = q_sin(0.5, &d, &ctrl()).unwrap();
        assert!(wrong >= 0.1);
        assert!((wrong - s).abs() < 1e-8);
        assert!(ode_residual(QSeriesKind::Sin, 1.0, &d, 0.0, &ctrl()).is_err());
    }

    #[test]
    fn divergence_guard() {
        let tight = SummationControl {
            max_terms: 3,
            ..ctrl()
        };
        let err = q_exp(5.0, &dp(0.5), &tight).unwrap_err();
        assert!(
            matches!(err, QError::SeriesDivergence { terms: 3, .. }),
            "{err:?}"
        );
        assert!(QSeries::new(QSeriesKind::Exp, dp(0.5), tight)
            .eval(5.0)
            .is_nan());
    }
}
