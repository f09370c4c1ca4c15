//! Fundamental-theorem identities and the integral equation `∫₀ᵇ h d_q x = F(b)`.
//!
//! Both directions of the fundamental theorem telescope on the lattice:
//!
//! * `D_b ∫₀ᵇ f = f(b)`, since `G(qb) − G(q⁻¹b) = −(q⁻¹−q)·b·f(b)`;
//! * `∫₀ᵇ Df = f(b) − lim f(q^(2n)·b)`. The boundary term is the limit along
//!   the even-power lattice, not `f(0)`, which is never sampled.
//!
//! For the integral equation, the Jackson integral only sees `h` on
//! `{q^(2n+1)·b}`. Two solutions must agree there, anything off the lattice
//! is invisible, and `h` is recovered pointwise as `D F`.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::qcore::{DeformationParameter, SummationControl};
use crate::qderiv::{jackson_derivative, jackson_derivative_with};
use crate::qint::jackson_integral;
use crate::summation::compensated_sum;

fn check_base(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(QError::domain(format!(
            "base point must be positive and finite, got {b}"
        )))
    }
}

/// Weight `(q⁻¹−q)·b·q^(2n+1)` of the lattice atom at `q^(2n+1)·b`.
pub fn atom_weight(dp: &DeformationParameter, b: f64, n: usize) -> f64 {
    dp.weight_factor() * b * dp.odd_power(n as i64)
}

/// `D_b` applied to `b ↦ ∫₀ᵇ f`, evaluated at `b`. Should reproduce `f(b)`.
pub fn ft_derivative_of_integral(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    b: f64,
    ctrl: &SummationControl,
) -> Result<f64> {
    check_base(b)?;
    jackson_derivative_with(|y| Ok(jackson_integral(f, dp, y, ctrl)?.value), dp, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralOfDerivative {
    /// `∫₀ᵇ Df d_q x`, summed term by term.
    pub value: f64,
    /// Limit of `f(q^(2n)·b)`, read off the deepest retained sample.
    pub lattice_limit: f64,
    pub terms_used: usize,
}

/// `∫₀ᵇ Df d_q x`.
///
/// Each term `(q⁻¹−q)·p·Df(p)` at `p = q^(2n+1)·b` equals
/// `f(q^(2n)·b) − f(q^(2n+2)·b)`. Terms are added until the last three
/// even-lattice samples agree within `ctrl.tol`; the last of them is the
/// reported lattice limit. If they never settle the boundary term is
/// undefined and an error is returned.
pub fn ft_integral_of_derivative(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    b: f64,
    ctrl: &SummationControl,
) -> Result<IntegralOfDerivative> {
    check_base(b)?;
    let sample = |x: f64| {
        let v = f.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QError::domain(format!("integrand is not finite at {x}")))
        }
    };
    let mut samples = vec![sample(b)?];
    let mut terms = Vec::new();
    for n in 0..ctrl.max_terms {
        let p = dp.odd_power(n as i64) * b;
        if dp.q() * p == 0.0 {
            break;
        }
        terms.push(dp.weight_factor() * p * jackson_derivative(f, dp, p)?);
        samples.push(sample(dp.q() * p)?);
        if samples.len() >= 3 {
            let last = &samples[samples.len() - 3..];
            let hi = last.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = last.iter().copied().fold(f64::INFINITY, f64::min);
            if hi - lo <= ctrl.tol {
                return Ok(IntegralOfDerivative {
                    value: compensated_sum(terms.iter().rev().copied()),
                    lattice_limit: last[2],
                    terms_used: terms.len(),
                });
            }
        }
    }
    let k = samples.len();
    let tail = [
        samples[k.saturating_sub(3)],
        samples[k.saturating_sub(2)],
        samples[k - 1],
    ];
    Err(QError::NoLatticeLimit {
        samples: tail,
        tol: ctrl.tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeValue {
    pub point: f64,
    pub h_value: f64,
}

/// Values of a solution `h` on `{q^(2n+1)·base}`, points decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSolution {
    pub base: f64,
    pub values: Vec<LatticeValue>,
}

impl LatticeSolution {
    /// `∫₀^base h d_q x` for `h` supported on the stored points.
    pub fn reintegrate(&self, dp: &DeformationParameter) -> f64 {
        compensated_sum(
            self.values
                .iter()
                .rev()
                .map(|v| dp.weight_factor() * v.point * v.h_value),
        )
    }
}

/// `h(p) = D F(p)` at `p = q^(2n+1)·b`, `n = 0 … depth`.
pub fn recover_integrand(
    big_f: &dyn Evaluator,
    dp: &DeformationParameter,
    b: f64,
    depth: usize,
) -> Result<LatticeSolution> {
    check_base(b)?;
    if depth < 1 {
        return Err(QError::domain("lattice depth must be at least 1"));
    }
    let values = (0..=depth)
        .map(|n| {
            let point = dp.odd_power(n as i64) * b;
            Ok(LatticeValue {
                point,
                h_value: jackson_derivative(big_f, dp, point)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeSolution { base: b, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniquenessReport {
    /// `f` and `g` agree within `tol` on `{q^(2n+1)·b : n ≤ depth}`.
    pub same_class: bool,
    /// `|∫₀ᵇ f − ∫₀ᵇ g|`
    pub integral_gap: f64,
}

pub fn uniqueness_check(
    f: &dyn Evaluator,
    g: &dyn Evaluator,
    dp: &DeformationParameter,
    b: f64,
    depth: usize,
    tol: f64,
    ctrl: &SummationControl,
) -> Result<UniquenessReport> {
    check_base(b)?;
    if depth < 1 {
        return Err(QError::domain("lattice depth must be at least 1"));
    }
    let same_class = (0..=depth).all(|n| {
        let x = dp.odd_power(n as i64) * b;
        (f.eval(x) - g.eval(x)).abs() <= tol
    });
    let int_f = jackson_integral(f, dp, b, ctrl)?.value;
    let int_g = jackson_integral(g, dp, b, ctrl)?.value;
    Ok(UniquenessReport {
        same_class,
        integral_gap: (int_f - int_g).abs(),
    })
}
