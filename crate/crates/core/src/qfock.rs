//! q-deformed Fock construction.
//!
//! The vacuum is the constant `ψ₀ ≡ 1`, annihilated by the Jackson derivative.
//! Multiplication by `x̂` creates and `D` annihilates:
//!
//! ```text
//! ψₙ = xⁿ/√([n]_q!)      D ψₙ = √([n]_q)·ψₙ₋₁      x̂ ψₙ = √([n+1]_q)·ψₙ₊₁
//! ```
//!
//! States are formal coefficient vectors over `ψₙ`; no inner product is
//! defined. Two number operators live side by side: the abstract `N` with
//! integer spectrum, which the algebra `aa† − q·a†a = q^(−N)`,
//! `[N, a†] = a†`, `[N, a] = −a` refers to, and `x̂D` with spectrum
//! `[n]_q`. They agree only for n ∈ {0, 1}.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::poly::Polynomial;
use crate::qcore::{q_factorial, DeformationParameter};
use crate::qderiv::jackson_derivative;

/// `max |D ψ₀(x)|` over the samples for the constant vacuum.
pub fn vacuum_check(dp: &DeformationParameter, samples: &[f64]) -> Result<f64> {
    vacuum_check_with(&|_x: f64| 1.0, dp, samples)
}

/// `max |D h(x)|` over the samples for an arbitrary vacuum candidate `h`.
pub fn vacuum_check_with(
    h: &dyn Evaluator,
    dp: &DeformationParameter,
    samples: &[f64],
) -> Result<f64> {
    samples.iter().try_fold(0.0_f64, |worst, &x| {
        if x == 0.0 {
            return Err(QError::domain("vacuum check sample at 0"));
        }
        Ok(worst.max(jackson_derivative(h, dp, x)?.abs()))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockState {
    coeffs: Vec<f64>,
    #[serde(skip)]
    dp: DeformationParameter,
}

impl FockState {
    pub fn new(coeffs: Vec<f64>, dp: DeformationParameter) -> Self {
        Self { coeffs, dp }
    }

    pub fn vacuum(dp: DeformationParameter) -> Self {
        Self::basis(0, dp)
    }

    pub fn basis(n: usize, dp: DeformationParameter) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs, dp }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn dp(&self) -> &DeformationParameter {
        &self.dp
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// The state as a function of x: `Σ cₙ·xⁿ/√([n]_q!)`.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (n, &c) in self.coeffs.iter().enumerate() {
            out.push(c / q_factorial(n as i64, &self.dp)?.sqrt());
        }
        Ok(Polynomial::new(out))
    }
}

/// `ψₙ ↦ √([n]_q)·ψₙ₋₁`, `ψ₀ ↦ 0`.
pub fn apply_lowering(s: &FockState) -> FockState {
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &c)| s.dp.bracket(n as u32).sqrt() * c)
        .collect();
    FockState::new(coeffs, s.dp)
}

/// `ψₙ ↦ √([n+1]_q)·ψₙ₊₁`.
pub fn apply_raising(s: &FockState) -> FockState {
    let mut coeffs = Vec::with_capacity(s.coeffs.len() + 1);
    coeffs.push(0.0);
    coeffs.extend(
        s.coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| s.dp.bracket(n as u32 + 1).sqrt() * c),
    );
    FockState::new(coeffs, s.dp)
}

/// `x̂D`: `ψₙ ↦ [n]_q·ψₙ`.
pub fn apply_q_number(s: &FockState) -> FockState {
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| s.dp.bracket(n as u32) * c)
        .collect();
    FockState::new(coeffs, s.dp)
}

/// Ladder and number operators on `span{ψ₀ … ψ_{dim−1}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperators {
    pub dp: DeformationParameter,
    pub dim: usize,
    /// `a`, entries `√([n]_q)` at `(n−1, n)`.
    pub lowering: DMatrix<f64>,
    /// `a† = aᵀ`
    pub raising: DMatrix<f64>,
    /// `N = diag(0, 1, …, dim−1)`
    pub number: DMatrix<f64>,
    /// `x̂D = diag([0]_q, …, [dim−1]_q)`
    pub q_number: DMatrix<f64>,
}

/// Builds the truncated operators with `√([n]_q)` ladder entries.
pub fn build_truncated(dp: &DeformationParameter, dim: usize) -> Result<TruncatedOperators> {
    build_with_ladder(dp, dim, |n| dp.bracket(n).sqrt())
}

/// Same as [`build_truncated`] with arbitrary ladder entries `entry(n)` at
/// `(n−1, n)`. Handy for comparing against other ladders, e.g. the classical
/// `√n`.
pub fn build_with_ladder(
    dp: &DeformationParameter,
    dim: usize,
    entry: impl Fn(u32) -> f64,
) -> Result<TruncatedOperators> {
    if dim < 2 {
        return Err(QError::domain(format!(
            "truncation dimension must be at least 2, got {dim}"
        )));
    }
    let lowering = DMatrix::from_fn(
        dim,
        dim,
        |i, j| if j == i + 1 { entry(j as u32) } else { 0.0 },
    );
    let raising = lowering.transpose();
    let number = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |i, _| i as f64));
    let q_number = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |i, _| {
        dp.bracket(i as u32)
    }));
    Ok(TruncatedOperators {
        dp: *dp,
        dim,
        lowering,
        raising,
        number,
        q_number,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraResiduals {
    /// `aa† − q·a†a − q^(−N)`
    pub r1: f64,
    /// `[N, a†] − a†`
    pub r2: f64,
    /// `[N, a] + a`
    pub r3: f64,
}

/// Largest entry of `residual` relative to the size of the terms it was
/// built from, over the leading `block × block` submatrix.
fn relative_block_norm(residual: &DMatrix<f64>, scale: &DMatrix<f64>, block: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max(residual[(i, j)].abs() / scale[(i, j)].max(1.0));
        }
    }
    worst
}

/// Residuals of the three defining relations.
///
/// All three are measured on the leading `(dim−1) × (dim−1)` block: the last
/// basis vector is where truncation cuts `aa†` short, and it is excluded.
/// Entries are compared relative to `max(1, Σ|terms|)` because the bracket
/// entries grow like `q^(−n)`, so absolute rounding error grows with them.
pub fn algebra_residuals(ops: &TruncatedOperators) -> AlgebraResiduals {
    let q = ops.dp.q();
    let a = &ops.lowering;
    let ad = &ops.raising;
    let n = &ops.number;
    let block = ops.dim - 1;

    let q_pow_neg_n = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(ops.dim, |i, _| {
        ops.dp.pow(-(i as i32))
    }));
    let a_ad = a * ad;
    let ad_a = ad * a;
    let rel1 = &a_ad - &ad_a * q - &q_pow_neg_n;
    let scale1 = a_ad.abs() + ad_a.abs() * q + q_pow_neg_n.abs();

    let n_ad = n * ad;
    let ad_n = ad * n;
    let rel2 = &n_ad - &ad_n - ad;
    let scale2 = n_ad.abs() + ad_n.abs() + ad.abs();

    let n_a = n * a;
    let a_n = a * n;
    let rel3 = &n_a - &a_n + a;
    let scale3 = n_a.abs() + a_n.abs() + a.abs();

    AlgebraResiduals {
        r1: relative_block_norm(&rel1, &scale1, block),
        r2: relative_block_norm(&rel2, &scale2, block),
        r3: relative_block_norm(&rel3, &scale3, block),
    }
}

/// One row of the `N` versus `x̂D` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenGap {
    pub n: usize,
    pub number: f64,
    pub q_number: f64,
    /// `[n]_q − n`
    pub gap: f64,
}

pub fn eigen_gaps(ops: &TruncatedOperators) -> Vec<EigenGap> {
    (0..ops.dim)
        .map(|n| {
            let number = ops.number[(n, n)];
            let q_number = ops.q_number[(n, n)];
            EigenGap {
                n,
                number,
                q_number,
                gap: q_number - number,
            }
        })
        .collect()
}
