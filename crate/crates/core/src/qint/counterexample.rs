use crate::error::{QError, Result};
use crate::evaluator::{Evaluator, Piece, Piecewise};
use crate::qcore::{DeformationParameter, SummationControl};

use super::jackson_integral_interval;

/// Two integrands where pointwise dominance on `[a, b]` does not carry over
/// to the interval Jackson integrals.
pub struct Counterexample {
    pub a: f64,
    pub b: f64,
    /// Dominates `g` pointwise on `[a, b]` (unless swapped).
    pub f: Piecewise,
    pub g: Piecewise,
    pub int_f: f64,
    pub int_g: f64,
    /// Where `g` (or `f`, after [`Counterexample::swapped`]) carries its
    /// off-interval plateau.
    pub plateau: Piece,
    pub swapped: bool,
}

impl Counterexample {
    /// Exchanges the roles: afterwards `f < g` on `[a, b]` yet `∫f > ∫g`.
    pub fn swapped(self) -> Self {
        Self {
            f: self.g,
            g: self.f,
            int_f: self.int_g,
            int_g: self.int_f,
            swapped: !self.swapped,
            ..self
        }
    }

    /// `min (f − g)` over `samples` evenly spaced points of `[a, b]`.
    pub fn min_gap_on_interval(&self, samples: usize) -> f64 {
        grid(self.a, self.b, samples)
            .map(|x| self.f.eval(x) - self.g.eval(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `samples` evenly spaced points covering `[lo, hi]` inclusive.
pub fn grid(lo: f64, hi: f64, samples: usize) -> impl Iterator<Item = f64> {
    let steps = samples.saturating_sub(1).max(1) as f64;
    (0..samples).map(move |i| lo + (hi - lo) * (i as f64) / steps)
}

/// Builds `f ≡ 1` and `g` that vanishes on `[a, b]` but carries a plateau on
/// a neighbourhood of the largest point of the `b`-series `{q^(2k+1)·b}` below
/// `a`. That point has positive weight in `∫₀ᵇ` while the plateau avoids every
/// point of the `a`-series, so `∫ₐᵇ g` is just the plateau's atom.
///
/// `a/b > q²` makes the two series interleave, which leaves room for the
/// plateau.
pub fn monotonicity_counterexample(
    dp: &DeformationParameter,
    a: f64,
    b: f64,
) -> Result<Counterexample> {
    let q = dp.q();
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(QError::domain(format!(
            "need 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    if a / b <= q * q {
        return Err(QError::domain(format!(
            "need a/b > q² for the construction, got a/b = {} and q² = {}",
            a / b,
            q * q
        )));
    }
    // largest b-series point below a: q·b or, failing that, q³·b
    let k = if q * b < a { 0 } else { 1 };
    let spike = dp.odd_power(k) * b;
    let a_below = dp.odd_power(k) * a;
    let a_above = if k == 0 { a } else { q * a };
    let radius = 0.5 * (spike - a_below).min(a_above - spike);
    let weight = dp.weight_factor() * spike;
    let height = f64::max(3.0, (b - a + 1.0) / weight);
    let plateau = Piece {
        lo: spike - radius,
        hi: spike + radius,
        value: height,
    };

    let f = Piecewise::constant(1.0);
    let g = Piecewise::constant(0.0).with_piece(plateau.lo, plateau.hi, plateau.value);
    let ctrl = SummationControl {
        magnitude_bound: height.max(1.0),
        ..SummationControl::default()
    };
    let int_f = jackson_integral_interval(&f, dp, a, b, &ctrl)?.value;
    let int_g = jackson_integral_interval(&g, dp, a, b, &ctrl)?.value;
    Ok(Counterexample {
        a,
        b,
        f,
        g,
        int_f,
        int_g,
        plateau,
        swapped: false,
    })
}
