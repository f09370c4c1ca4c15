//! The symmetric Jackson derivative
//!
//! ```text
//! D f(x) = (f(qx) − f(q⁻¹x)) / ((q − q⁻¹)·x)
//! ```
//!
//! on sampled functions and, exactly, on [`Polynomial`]s where it acts as
//! `xⁿ ↦ [n]_q·xⁿ⁻¹`.
//!
//! The canonical commutator `[x̂, p̂]` with `p̂ = −iħD` is not `iħ` for this
//! derivative: on `xⁿ` it has eigenvalue `iħ([n+1]_q − [n]_q)`.
//! [`q_commutator_xp`] measures that deviation instead of assuming it away.
//! ħ is treated as the unit throughout.

use serde::Serialize;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::poly::Polynomial;
use crate::qcore::DeformationParameter;

fn check_nonzero(x: f64) -> Result<()> {
    if x == 0.0 {
        Err(QError::domain("Jackson derivative undefined at 0"))
    } else {
        Ok(())
    }
}

/// Jackson derivative of a sampled function at `x ≠ 0`.
pub fn jackson_derivative(f: &dyn Evaluator, dp: &DeformationParameter, x: f64) -> Result<f64> {
    check_nonzero(x)?;
    Ok((f.eval(dp.q() * x) - f.eval(dp.q_inv() * x)) / (dp.span() * x))
}

/// Same quotient for a function whose evaluation can itself fail.
pub fn jackson_derivative_with<F>(f: F, dp: &DeformationParameter, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_nonzero(x)?;
    Ok((f(dp.q() * x)? - f(dp.q_inv() * x)?) / (dp.span() * x))
}

/// Exact Jackson derivative of a polynomial: `c·xⁿ ↦ c·[n]_q·xⁿ⁻¹`.
pub fn jackson_derivative_poly(p: &Polynomial, dp: &DeformationParameter) -> Polynomial {
    Polynomial::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * dp.bracket(n as u32))
            .collect(),
    )
}

/// The two expansions of `D(f·g)` next to the direct derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductRuleForms {
    pub lhs: f64,
    /// `Df(x)·g(q⁻¹x) + f(qx)·Dg(x)`
    pub form1: f64,
    /// `Df(x)·g(qx) + f(q⁻¹x)·Dg(x)`
    pub form2: f64,
}

pub fn product_rule_forms(
    f: &dyn Evaluator,
    g: &dyn Evaluator,
    dp: &DeformationParameter,
    x: f64,
) -> Result<ProductRuleForms> {
    let fg = |t: f64| f.eval(t) * g.eval(t);
    let lhs = jackson_derivative(&fg, dp, x)?;
    let df = jackson_derivative(f, dp, x)?;
    let dg = jackson_derivative(g, dp, x)?;
    let (lo, hi) = (dp.q() * x, dp.q_inv() * x);
    Ok(ProductRuleForms {
        lhs,
        form1: df * g.eval(hi) + f.eval(lo) * dg,
        form2: df * g.eval(lo) + f.eval(hi) * dg,
    })
}

/// Measured eigenvalue of `[x̂, p̂]/(iħ)` on `xⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub n: u32,
    pub ratio: f64,
    /// `|ratio − 1|`
    pub deviation: f64,
}

/// Applies `x̂∘D − D∘x̂` to `xⁿ` in the polynomial representation and reads
/// off the eigenvalue. With `p̂ = −iħD` the commutator `[x̂, p̂]` is `−iħ`
/// times that, so the ratio against `iħ` is `[n+1]_q − [n]_q`.
pub fn q_commutator_xp(n: u32, dp: &DeformationParameter) -> CommutatorReport {
    let mono = Polynomial::monomial(n as usize, 1.0);
    let x_then_d = jackson_derivative_poly(&mono, dp).mul_x();
    let d_then_x = jackson_derivative_poly(&mono.mul_x(), dp);
    let commutator = &x_then_d - &d_then_x;
    let ratio = -commutator.coeff(n as usize);
    CommutatorReport {
        n,
        ratio,
        deviation: (ratio - 1.0).abs(),
    }
}

/// Coordinate of a two-variable function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    U,
    V,
}

/// Partial Jackson derivative of `f(u, v)` along one axis.
pub fn jackson_partial(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    axis: Axis,
    dp: &DeformationParameter,
    u: f64,
    v: f64,
) -> Result<f64> {
    match axis {
        Axis::U => jackson_derivative(&|t: f64| f(t, v), dp, u),
        Axis::V => jackson_derivative(&|t: f64| f(u, t), dp, v),
    }
}

/// `D_second ∘ D_first` applied to `f` at `(u, v)`.
pub fn jackson_mixed(
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    first: Axis,
    second: Axis,
    dp: &DeformationParameter,
    u: f64,
    v: f64,
) -> Result<f64> {
    let inner = |a: f64, b: f64| jackson_partial(f, first, dp, a, b).unwrap_or(f64::NAN);
    jackson_partial(&inner, second, dp, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dp(q: f64) -> DeformationParameter {
        DeformationParameter::new(q).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let d = dp(0.5);
        let cube = |x: f64| x * x * x;
        assert!((jackson_derivative(&cube, &d, 1.0).unwrap() - 5.25).abs() < 1e-14);
        assert_eq!(jackson_derivative(&|_x: f64| 4.0, &d, 2.0).unwrap(), 0.0);
        for q in [0.2, 0.5, 0.9] {
            let v = jackson_derivative(&|x: f64| x, &dp(q), 3.0).unwrap();
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_is_rejected() {
        let err = jackson_derivative(&|x: f64| x, &dp(0.5), 0.0).unwrap_err();
        assert_eq!(err.to_string(), "Jackson derivative undefined at 0");
        assert!(product_rule_forms(&|x: f64| x, &|x: f64| x, &dp(0.5), 0.0).is_err());
    }

    #[test]
    fn poly_examples() {
        let d = dp(0.5);
        let p = jackson_derivative_poly(&Polynomial::monomial(2, 1.0), &d);
        assert_eq!(p.degree(), Some(1));
        assert!((p.coeff(1) - 2.5).abs() < 1e-15);
        assert!(jackson_derivative_poly(&Polynomial::constant(7.0), &d).is_zero());
        assert!(jackson_derivative_poly(&Polynomial::zero(), &d).is_zero());
        let p = jackson_derivative_poly(&Polynomial::new(vec![0.0, 1.0, 0.0, 3.0]), &d);
        assert_eq!(p.coeff(0), 1.0);
        assert_eq!(p.coeff(1), 0.0);
        assert!((p.coeff(2) - 15.75).abs() < 1e-14);
    }

    #[test]
    fn product_rule_examples() {
        let d = dp(0.5);
        let x = |t: f64| t;
        let r = product_rule_forms(&x, &x, &d, 1.0).unwrap();
        for v in [r.lhs, r.form1, r.form2] {
            assert!((v - 2.5).abs() < 1e-14);
        }
        let one = |_t: f64| 1.0;
        let g = |t: f64| t.sin() + t * t;
        let r = product_rule_forms(&one, &g, &d, 2.0).unwrap();
        let dg = jackson_derivative(&g, &d, 2.0).unwrap();
        for v in [r.lhs, r.form1, r.form2] {
            assert!((v - dg).abs() < 1e-14);
        }
        // D(x⁵)(1) = [5]_q = q⁴ + q² + 1 + q⁻² + q⁻⁴ = 21.3125 at q = 0.5
        let five: f64 = [4, 2, 0, -2, -4].iter().map(|&k| 0.5f64.powi(k)).sum();
        assert_eq!(five, 21.3125);
        let r = product_rule_forms(&|t: f64| t * t, &|t: f64| t * t * t, &d, 1.0).unwrap();
        for v in [r.lhs, r.form1, r.form2] {
            assert!((v - five).abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_examples() {
        let r = q_commutator_xp(0, &dp(0.5));
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.deviation, 0.0);
        let r = q_commutator_xp(1, &dp(0.5));
        assert!((r.ratio - 1.5).abs() < 1e-15);
        assert!((r.deviation - 0.5).abs() < 1e-15);
        let r = q_commutator_xp(1, &dp(0.99));
        // [2] − [1] − 1 = q + 1/q − 2 = 1/9900
        assert!((r.deviation - 1.0101010101010101e-4).abs() < 1e-14);
        assert!(r.deviation < 0.01);
    }

    #[test]
    fn commutator_matches_brackets() {
        for q in [0.3, 0.5, 0.9] {
            let d = dp(q);
            for n in 0..10 {
                let r = q_commutator_xp(n, &d);
                let expected = d.bracket(n + 1) - d.bracket(n);
                assert!((r.ratio - expected).abs() <= 1e-12 * expected.abs().max(1.0));
                assert!(r.deviation >= 0.0);
            }
        }
    }

    #[test]
    fn separable_partials_commute() {
        let d = dp(0.7);
        let f = |u: f64, v: f64| (u * u + 1.0) * v.cos();
        let uv = jackson_mixed(&f, Axis::U, Axis::V, &d, 0.8, 1.3).unwrap();
        let vu = jackson_mixed(&f, Axis::V, Axis::U, &d, 0.8, 1.3).unwrap();
        assert!((uv - vu).abs() < 1e-10);
        let const_in_u = |_u: f64, v: f64| v.exp();
        assert_eq!(
            jackson_partial(&const_in_u, Axis::U, &d, 1.1, 0.4).unwrap(),
            0.0
        );
    }

    #[test]
    fn sin_tends_to_cos() {
        for i in 0..=15 {
            let x = 0.5 + 0.1 * i as f64;
            let gaps: Vec<f64> = [0.9, 0.99, 0.999]
                .iter()
                .map(|&q| (jackson_derivative(&f64::sin, &dp(q), x).unwrap() - x.cos()).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "x={x} {gaps:?}");
            assert!(gaps[2] < 1e-2);
        }
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-2.0f64..2.0, 1..=7).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn poly_and_sampled_paths_agree(p in poly_strategy(), q in 0.2f64..0.95, x in 0.3f64..2.0) {
            let d = dp(q);
            let exact = jackson_derivative_poly(&p, &d).eval_at(x);
            let sampled = jackson_derivative(&p, &d, x).unwrap();
            prop_assert!((exact - sampled).abs() <= 1e-9 * (1.0 + exact.abs()));
        }

        #[test]
        fn linearity(p in poly_strategy(), r in poly_strategy(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let d = dp(0.6);
            let combo = &p.scale(a) + &r.scale(b);
            let lhs = jackson_derivative_poly(&combo, &d);
            let rhs = &jackson_derivative_poly(&p, &d).scale(a) + &jackson_derivative_poly(&r, &d).scale(b);
            for k in 0..8 {
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).abs() <= 1e-12 * (1.0 + rhs.coeff(k).abs()));
            }
            for x in [0.5, 1.3] {
                let via_eval = jackson_derivative(&combo, &d, x).unwrap();
                let split = a * jackson_derivative(&p, &d, x).unwrap() + b * jackson_derivative(&r, &d, x).unwrap();
                prop_assert!((via_eval - split).abs() <= 1e-10 * (1.0 + split.abs()));
            }
        }
    }
}
