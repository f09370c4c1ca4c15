//! Deformation parameter, symmetric q-brackets and q-factorials.
//!
//! The symmetric bracket is `[n]_q = (qⁿ − q⁻ⁿ)/(q − q⁻¹)`. It is invariant
//! under `q ↦ q⁻¹`, reduces to `n` as `q → 1`, and satisfies
//! `[n+1]_q − q·[n]_q = q⁻ⁿ`, the identity behind the oscillator relation
//! `aa† − q·a†a = q^(−N)`.
//!
//! The bracket formula itself makes sense for any nonzero real `q`
//! ([`bracket_formula`]), but the calculus built on top of it only admits
//! `q ∈ (0, 1)`, so [`DeformationParameter`] rejects everything else.

use serde::Serialize;

use crate::error::{QError, Result};

/// Above this value of q the closed form loses digits to cancellation and the
/// bracket is summed term by term instead.
pub const NEAR_ONE_THRESHOLD: f64 = 0.9999;

/// A validated deformation parameter `q ∈ (0, 1)` with cached `q⁻¹` and
/// `q − q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationParameter {
    q: f64,
    q_inv: f64,
    span: f64,
}

impl DeformationParameter {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::domain(format!("q must lie in (0,1), got {q}")));
        }
        let q_inv = 1.0 / q;
        Ok(Self {
            q,
            q_inv,
            span: q - q_inv,
        })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn q_inv(&self) -> f64 {
        self.q_inv
    }

    /// `q − q⁻¹`, always negative.
    #[inline]
    pub fn span(&self) -> f64 {
        self.span
    }

    /// `q⁻¹ − q`, the positive factor in front of every Jackson sum.
    #[inline]
    pub fn weight_factor(&self) -> f64 {
        -self.span
    }

    /// `q^k` for any integer k.
    #[inline]
    pub fn pow(&self, k: i32) -> f64 {
        self.q.powi(k)
    }

    /// `q^(2n+1)`, the lattice point of index n at scale 1.
    #[inline]
    pub fn odd_power(&self, n: i64) -> f64 {
        self.q.powi((2 * n + 1) as i32)
    }

    /// `[n]_q` for a non-negative index.
    pub fn bracket(&self, n: u32) -> f64 {
        match n {
            0 => 0.0,
            1 => 1.0,
            _ if self.q > NEAR_ONE_THRESHOLD => bracket_by_sum(n, self.q),
            _ => (self.q.powi(n as i32) - self.q_inv.powi(n as i32)) / self.span,
        }
    }
}

/// `(qⁿ − q⁻ⁿ)/(q − q⁻¹)` for any nonzero real `q ≠ ±1`, without the `(0,1)`
/// restriction or the near-one rewrite. Useful for checking the `q ↦ q⁻¹`
/// symmetry of the bracket.
pub fn bracket_formula(n: u32, q: f64) -> f64 {
    let qi = 1.0 / q;
    (q.powi(n as i32) - qi.powi(n as i32)) / (q - qi)
}

/// `qⁿ⁻¹ + qⁿ⁻³ + … + q¹⁻ⁿ`, algebraically equal to the closed form.
pub fn bracket_by_sum(n: u32, q: f64) -> f64 {
    let n = n as i32;
    crate::summation::compensated_sum((0..n).map(|k| q.powi(n - 1 - 2 * k)))
}

fn check_index(n: i64) -> Result<u32> {
    u32::try_from(n).map_err(|_| QError::domain(format!("index must be non-negative, got {n}")))
}

/// `[n]_q`; negative `n` is a domain error.
pub fn q_bracket(n: i64, dp: &DeformationParameter) -> Result<f64> {
    Ok(dp.bracket(check_index(n)?))
}

/// `[n]_q! = [n]_q·[n−1]_q···[1]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: i64, dp: &DeformationParameter) -> Result<f64> {
    let n = check_index(n)?;
    let mut acc = 1.0_f64;
    for k in 1..=n {
        acc *= dp.bracket(k);
        if !acc.is_finite() {
            return Err(QError::Range { n: k });
        }
    }
    Ok(acc)
}

/// `|[n]_q − n|`, the distance of the deformed integer from the classical one.
pub fn q_bracket_classical_gap(n: i64, dp: &DeformationParameter) -> Result<f64> {
    Ok((q_bracket(n, dp)? - n as f64).abs())
}

/// What a truncated sum does when it cannot certify convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergencePolicy {
    #[default]
    Error,
    ReturnPartialWithFlag,
}

/// Truncation settings shared by the lattice integrals and the q-series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummationControl {
    /// Absolute bound on the discarded tail.
    pub tol: f64,
    pub max_terms: usize,
    /// Assumed bound `M` with `|f| ≤ M` on the lattice.
    pub magnitude_bound: f64,
    pub on_divergence: DivergencePolicy,
}

impl SummationControl {
    pub fn new(
        tol: f64,
        max_terms: usize,
        magnitude_bound: f64,
        on_divergence: DivergencePolicy,
    ) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(QError::domain(format!("tol must be positive, got {tol}")));
        }
        if max_terms < 1 {
            return Err(QError::domain("max_terms must be at least 1"));
        }
        if magnitude_bound.is_nan() || magnitude_bound <= 0.0 {
            return Err(QError::domain(format!(
                "magnitude bound must be positive, got {magnitude_bound}"
            )));
        }
        Ok(Self {
            tol,
            max_terms,
            magnitude_bound,
            on_divergence,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_policy(mut self, policy: DivergencePolicy) -> Self {
        self.on_divergence = policy;
        self
    }
}

impl Default for SummationControl {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_terms: 10_000,
            magnitude_bound: 1e6,
            on_divergence: DivergencePolicy::Error,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(q: f64) -> DeformationParameter {
        DeformationParameter::new(q).unwrap()
    }

    // independent oracle: direct powf evaluation, no special cases
    fn brute(n: u32, q: f64) -> f64 {
        let n = n as f64;
        (q.powf(n) - q.powf(-n)) / (q - 1.0 / q)
    }

    #[test]
    fn rejects_out_of_range_q() {
        for q in [1.0, 0.0, -0.5, 1.5, f64::NAN] {
            let err = DeformationParameter::new(q).unwrap_err();
            assert!(err.to_string().contains("q must lie in (0,1)"));
        }
    }

    #[test]
    fn cached_inverse() {
        for q in [0.1, 0.3, 0.5, 0.9, 0.99999] {
            let d = dp(q);
            assert!((d.q() * d.q_inv() - 1.0).abs() < 1e-15);
            assert_eq!(d.span(), q - d.q_inv());
            assert!(d.span() < 0.0);
        }
    }

    #[test]
    fn bracket_examples() {
        let d = dp(0.5);
        assert_eq!(q_bracket(0, &d).unwrap(), 0.0);
        assert_eq!(q_bracket(1, &d).unwrap(), 1.0);
        assert!((q_bracket(2, &d).unwrap() - brute(2, 0.5)).abs() < 1e-15);
        assert!((q_bracket(2, &d).unwrap() - 2.5).abs() < 1e-15);
        assert!((q_bracket(3, &d).unwrap() - 5.25).abs() < 1e-15);
        assert!(matches!(q_bracket(-1, &d), Err(QError::Domain(_))));
    }

    #[test]
    fn factorial_examples() {
        let d = dp(0.5);
        assert_eq!(q_factorial(0, &d).unwrap(), 1.0);
        assert_eq!(q_factorial(1, &d).unwrap(), 1.0);
        assert!((q_factorial(3, &d).unwrap() - 13.125).abs() < 1e-13);
        assert!(q_factorial(-2, &d).is_err());
    }

    #[test]
    fn factorial_overflow_names_first_index() {
        let d = dp(0.1);
        match q_factorial(200, &d) {
            Err(QError::Range { n }) => {
                let mut acc = 1.0_f64;
                let mut first = 0;
                for k in 1..=200u32 {
                    acc *= brute(k, 0.1);
                    if !acc.is_finite() {
                        first = k;
                        break;
                    }
                }
                assert_eq!(n, first);
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn classical_gap_examples() {
        assert_eq!(q_bracket_classical_gap(1, &dp(0.5)).unwrap(), 0.0);
        assert!((q_bracket_classical_gap(2, &dp(0.5)).unwrap() - 0.5).abs() < 1e-15);
        // q + 1/q − 2 at q = 0.99 is 1/9900
        let g = q_bracket_classical_gap(2, &dp(0.99)).unwrap();
        assert!((g - 1.0101010101010101e-4).abs() < 1e-13);
        assert!(g > 1e-4 && g < 1e-3);
    }

    #[test]
    fn symmetric_under_inversion() {
        for q in [0.3, 0.5, 0.9] {
            let d = dp(q);
            for n in 0..=50 {
                let direct = d.bracket(n);
                let inverted = if n == 0 {
                    0.0
                } else {
                    bracket_formula(n, 1.0 / q)
                };
                let scale = direct.abs().max(1.0);
                assert!((direct - inverted).abs() <= 1e-12 * scale, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn recurrence_holds() {
        for q in [0.3, 0.5, 0.9] {
            let d = dp(q);
            for n in 0..=20u32 {
                let lhs = d.bracket(n + 1) - q * d.bracket(n);
                let rhs = d.pow(-(n as i32));
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "n={n} q={q}");
            }
        }
        let d = dp(0.9);
        for n in 0..=20u32 {
            let lhs = d.bracket(n + 1) - 0.9 * d.bracket(n);
            assert!((lhs - d.pow(-(n as i32))).abs() <= 1e-12);
        }
    }

    #[test]
    fn strictly_increasing_and_not_classical() {
        let d = dp(0.5);
        for n in 1..40 {
            assert!(d.bracket(n + 1) > d.bracket(n));
        }
        for n in 2..=10 {
            assert!(q_bracket_classical_gap(n, &d).unwrap() > 0.0);
        }
    }

    #[test]
    fn near_one_forms_agree() {
        for q in [0.99, 0.999, 0.9999] {
            for n in 2..30 {
                let closed = bracket_formula(n, q);
                let summed = bracket_by_sum(n, q);
                assert!((closed - summed).abs() <= 1e-10 * summed, "q={q} n={n}");
            }
        }
        let d = dp(0.999_999);
        assert!((d.bracket(5) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn classical_limit_gap_shrinks() {
        for n in 0..=10i64 {
            let gaps: Vec<f64> = [0.9, 0.99, 0.999]
                .iter()
                .map(|&q| q_bracket_classical_gap(n, &dp(q)).unwrap())
                .collect();
            assert!(gaps[0] >= gaps[1] && gaps[1] >= gaps[2]);
            assert!(gaps[2] < 1e-2 * (n as f64).max(1.0));
        }
    }

    #[test]
    fn control_validation() {
        assert!(SummationControl::new(0.0, 10, 1.0, DivergencePolicy::Error).is_err());
        assert!(SummationControl::new(1e-9, 0, 1.0, DivergencePolicy::Error).is_err());
        assert!(SummationControl::new(1e-9, 10, -1.0, DivergencePolicy::Error).is_err());
        assert!(SummationControl::new(1e-9, 10, 1.0, DivergencePolicy::Error).is_ok());
    }
}
