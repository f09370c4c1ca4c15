//! Jackson integrals as weighted sums over the geometric q-lattice.
//!
//! The finite integral samples `f` only at `b·q^(2n+1)`, `n ≥ 0`:
//!
//! ```text
//! ∫₀ᵇ f d_q x = b·(q⁻¹ − q)·Σ_{n≥0} q^(2n+1)·f(q^(2n+1)·b)
//! ```
//!
//! which is integration against the atomic measure returned by
//! [`finite_measure`]. The improper and two-sided forms run over `n ∈ ℤ`,
//! i.e. both the points accumulating at 0 and the points `q⁻¹, q⁻³, …`
//! escaping to infinity; each tail is truncated on its own.
//!
//! Truncation of the small-point tail uses the majorant `|f| ≤ M`: after `N`
//! terms the discarded mass is at most `M·b·q^(2N)`. The large-point tail has
//! no a-priori bound and is stopped once three consecutive terms are below the
//! tail's tolerance share and their geometric extrapolation is too.
//!
//! An interval integral `∫ₐᵇ = ∫₀ᵇ − ∫₀ᵃ` is a signed difference of two such
//! measures. Its samples generally lie outside `[a, b]`, and it is not
//! monotone in the integrand (see [`monotonicity_counterexample`]).
//!
//! Within one integral every term is computed, then folded smallest-first
//! through a compensated sum, always in the same order; repeated calls are
//! bit-identical.

mod counterexample;
mod lattice;
mod measure;
mod rules;

use std::collections::BTreeSet;

use serde::Serialize;

pub use counterexample::{grid, monotonicity_counterexample, Counterexample};
pub use lattice::{
    lattice_points, LatticePoint, LatticeRow, LatticeSign, QLattice, MAX_LATTICE_INDEX,
};
pub use measure::{delta_eval, Atom, PointMeasure};
pub use rules::{
    Bounds, FiniteRule, ImproperRule, IntegralRule, IntervalRule, RealLineRule, RuleRegistry,
};

use crate::error::{QError, Result, Tail};
use crate::evaluator::Evaluator;
use crate::qcore::{DeformationParameter, DivergencePolicy, SummationControl};
use crate::summation::CompensatedSum;

/// Number of consecutive small terms required before the large-point tail is
/// considered settled.
const LARGE_TAIL_STALL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultFlag {
    Partial,
    GuardTripped,
}

impl std::fmt::Display for ResultFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResultFlag::Partial => f.write_str("partial"),
            ResultFlag::GuardTripped => f.write_str("guard_tripped"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub terms_used: usize,
    /// Upper estimate of the discarded tail(s).
    pub tail_estimate: f64,
    pub converged: bool,
    pub flags: BTreeSet<ResultFlag>,
}

struct SumState<'c> {
    ctrl: &'c SummationControl,
    flags: BTreeSet<ResultFlag>,
    terms_used: usize,
    tail_estimate: f64,
    converged: bool,
}

impl<'c> SumState<'c> {
    fn new(ctrl: &'c SummationControl) -> Self {
        Self {
            ctrl,
            flags: BTreeSet::new(),
            terms_used: 0,
            tail_estimate: 0.0,
            converged: true,
        }
    }

    /// Returns the sample if it respects the magnitude bound; otherwise fails
    /// or flags according to the policy. Non-finite samples are dropped.
    fn guard(&mut self, x: f64, value: f64) -> Result<f64> {
        let bound = self.ctrl.magnitude_bound;
        if value.is_finite() && value.abs() <= bound {
            return Ok(value);
        }
        match self.ctrl.on_divergence {
            DivergencePolicy::Error => Err(QError::GuardTripped { x, value, bound }),
            DivergencePolicy::ReturnPartialWithFlag => {
                self.flags.insert(ResultFlag::GuardTripped);
                self.converged = false;
                Ok(if value.is_finite() { value } else { 0.0 })
            }
        }
    }

    fn diverged(&mut self, tail: Tail, terms: usize, last_term: f64) -> Result<()> {
        match self.ctrl.on_divergence {
            DivergencePolicy::Error => Err(QError::Divergence {
                tail,
                terms,
                last_term,
            }),
            DivergencePolicy::ReturnPartialWithFlag => {
                self.flags.insert(ResultFlag::Partial);
                self.converged = false;
                Ok(())
            }
        }
    }

    /// Folds each group smallest-first (groups are stored in lattice order,
    /// so back to front) into one compensated sum.
    fn fold(groups: &[Vec<f64>]) -> f64 {
        let mut acc = CompensatedSum::new();
        for group in groups {
            for &t in group.iter().rev() {
                acc.add(t);
            }
        }
        acc.value()
    }

    fn finish(self, value: f64) -> IntegralResult {
        IntegralResult {
            value,
            terms_used: self.terms_used,
            tail_estimate: self.tail_estimate,
            converged: self.converged,
            flags: self.flags,
        }
    }
}

/// Smallest `N ≥ 1` with `bound·scale·q^(2N) ≤ tol`.
fn truncation_depth(dp: &DeformationParameter, scale: f64, bound: f64, tol: f64) -> usize {
    let ratio = tol / (bound * scale);
    if ratio >= 1.0 {
        return 1;
    }
    let estimate = (ratio.ln() / (2.0 * dp.q().ln())).ceil();
    let mut n = if estimate.is_finite() && estimate > 1.0 {
        estimate as usize
    } else {
        1
    };
    while bound * scale * dp.q().powi(2 * n as i32) > tol {
        n += 1;
    }
    n
}

/// Weighted terms `(q⁻¹−q)·|s|·q^(2n+1)·f(s·q^(2n+1))` for `n ≥ 0`.
fn small_tail(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    signed_scale: f64,
    tol: f64,
    st: &mut SumState<'_>,
) -> Result<Vec<f64>> {
    let scale = signed_scale.abs();
    let bound = st.ctrl.magnitude_bound;
    let needed = truncation_depth(dp, scale, bound, tol);
    let count = needed.min(st.ctrl.max_terms);
    let factor = dp.weight_factor() * scale;
    let mut terms = Vec::with_capacity(count);
    for n in 0..count {
        let p = dp.odd_power(n as i64);
        if p == 0.0 {
            // the lattice has underflowed; the rest of the tail is zero in binary64
            break;
        }
        let x = signed_scale * p;
        let v = st.guard(x, f.eval(x))?;
        terms.push(factor * p * v);
    }
    st.terms_used += terms.len();
    st.tail_estimate += bound * scale * dp.q().powi(2 * terms.len() as i32);
    if needed > count {
        let last = terms.last().copied().unwrap_or(0.0).abs();
        st.diverged(Tail::Small, count, last)?;
    }
    Ok(terms)
}

fn settled(terms: &[f64], tol: f64) -> Option<f64> {
    if terms.len() < LARGE_TAIL_STALL {
        return None;
    }
    let recent = &terms[terms.len() - LARGE_TAIL_STALL..];
    if recent.iter().any(|t| t.abs() > tol) {
        return None;
    }
    let last = recent[LARGE_TAIL_STALL - 1].abs();
    if last == 0.0 {
        return Some(0.0);
    }
    let ratio = last / recent[LARGE_TAIL_STALL - 2].abs();
    if ratio < 1.0 {
        let estimate = last * ratio / (1.0 - ratio);
        (estimate <= tol).then_some(estimate)
    } else {
        None
    }
}

/// Weighted terms at `sign·q^(−(2m−1))`, `m ≥ 1`.
fn large_tail(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    sign: f64,
    tol: f64,
    st: &mut SumState<'_>,
) -> Result<Vec<f64>> {
    let factor = dp.weight_factor();
    let mut terms = Vec::new();
    let mut estimate = None;
    for m in 1..=st.ctrl.max_terms {
        let p = dp.pow(-(2 * m as i32 - 1));
        if !p.is_finite() {
            break;
        }
        let x = sign * p;
        let v = st.guard(x, f.eval(x))?;
        terms.push(factor * p * v);
        estimate = settled(&terms, tol);
        if estimate.is_some() {
            break;
        }
    }
    st.terms_used += terms.len();
    match estimate {
        Some(e) => st.tail_estimate += e,
        None => {
            st.tail_estimate = f64::INFINITY;
            let last = terms.last().copied().unwrap_or(0.0).abs();
            st.diverged(Tail::Large, terms.len(), last)?;
        }
    }
    Ok(terms)
}

fn check_upper(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(QError::domain(format!(
            "integration limit must be positive and finite, got {b}"
        )))
    }
}

/// `∫₀ᵇ f d_q x`.
pub fn jackson_integral(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    b: f64,
    ctrl: &SummationControl,
) -> Result<IntegralResult> {
    check_upper(b)?;
    let mut st = SumState::new(ctrl);
    let terms = small_tail(f, dp, b, ctrl.tol, &mut st)?;
    let value = SumState::fold(&[terms]);
    Ok(st.finish(value))
}

/// The atoms `(b·q^(2n+1), (q⁻¹−q)·b·q^(2n+1))` that [`jackson_integral`]
/// integrates against under `ctrl`'s truncation.
pub fn finite_measure(
    dp: &DeformationParameter,
    b: f64,
    ctrl: &SummationControl,
) -> Result<PointMeasure> {
    check_upper(b)?;
    let depth = truncation_depth(dp, b, ctrl.magnitude_bound, ctrl.tol).min(ctrl.max_terms);
    let mut m = PointMeasure::default();
    for n in 0..depth {
        let p = dp.odd_power(n as i64);
        if p == 0.0 {
            break;
        }
        m.push(b * p, dp.weight_factor() * b * p);
    }
    Ok(m)
}

/// `∫ₐᵇ f d_q x = ∫₀ᵇ − ∫₀ᵃ`, each side truncated at `tol/2` so the combined
/// tail stays within `tol`. Requires `0 < a ≤ b`.
pub fn jackson_integral_interval(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    a: f64,
    b: f64,
    ctrl: &SummationControl,
) -> Result<IntegralResult> {
    if a.is_nan() || a <= 0.0 {
        return Err(QError::domain(format!(
            "interval integrals need a positive lower limit, got {a}; use the two-sided form for negative ranges"
        )));
    }
    check_upper(b)?;
    if b < a {
        return Err(QError::domain(format!(
            "upper limit {b} is below lower limit {a}"
        )));
    }
    let half = ctrl.with_tol(ctrl.tol / 2.0);
    let upper = jackson_integral(f, dp, b, &half)?;
    let lower = jackson_integral(f, dp, a, &half)?;
    let mut flags = upper.flags;
    flags.extend(lower.flags);
    Ok(IntegralResult {
        value: upper.value - lower.value,
        terms_used: upper.terms_used + lower.terms_used,
        tail_estimate: upper.tail_estimate + lower.tail_estimate,
        converged: upper.converged && lower.converged,
        flags,
    })
}

/// `∫₀^∞ f d_q x = (q⁻¹−q)·Σ_{n∈ℤ} q^(2n+1)·f(q^(2n+1))`.
pub fn jackson_integral_improper(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    ctrl: &SummationControl,
) -> Result<IntegralResult> {
    let mut st = SumState::new(ctrl);
    let share = ctrl.tol / 2.0;
    let small = small_tail(f, dp, 1.0, share, &mut st)?;
    let large = large_tail(f, dp, 1.0, share, &mut st)?;
    let value = SumState::fold(&[small, large]);
    Ok(st.finish(value))
}

/// Two-sided integral over the full lattice `{±q^(2n+1)}`, weights positive on
/// both sides. Each half-line is summed separately and the halves are added
/// last, so odd integrands cancel exactly.
pub fn jackson_integral_real_line(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    ctrl: &SummationControl,
) -> Result<IntegralResult> {
    let mut st = SumState::new(ctrl);
    let share = ctrl.tol / 4.0;
    let neg_small = small_tail(f, dp, -1.0, share, &mut st)?;
    let neg_large = large_tail(f, dp, -1.0, share, &mut st)?;
    let pos_small = small_tail(f, dp, 1.0, share, &mut st)?;
    let pos_large = large_tail(f, dp, 1.0, share, &mut st)?;
    let negative = SumState::fold(&[neg_small, neg_large]);
    let positive = SumState::fold(&[pos_small, pos_large]);
    Ok(st.finish(negative + positive))
}

/// `(q⁻¹−q)·Σ_{n≥0} q^(2n+1)·x·f(q^(2n+1)·x) + constant`, i.e. the finite
/// integral up to `x` shifted by an integration constant.
pub fn antiderivative_at(
    f: &dyn Evaluator,
    dp: &DeformationParameter,
    x: f64,
    constant: f64,
    ctrl: &SummationControl,
) -> Result<f64> {
    Ok(jackson_integral(f, dp, x, ctrl)?.value + constant)
}

/// True iff `|f − g| ≤ tol` at every point `±q^(2n+1)` with `|n| ≤ depth`.
///
/// Functions that agree on the whole lattice have the same Jackson integrals,
/// so this is a finite check of membership in one integration class.
pub fn equivalent_on_lattice(
    f: &dyn Evaluator,
    g: &dyn Evaluator,
    dp: &DeformationParameter,
    depth: usize,
    tol: f64,
) -> Result<bool> {
    if depth < 1 {
        return Err(QError::domain("lattice depth must be at least 1"));
    }
    let d = depth as i64;
    let lattice = lattice_points(dp, 1.0, -d, d, LatticeSign::Both)?;
    let same = lattice
        .locations()
        .all(|x| (f.eval(x) - g.eval(x)).abs() <= tol);
    Ok(same)
}
