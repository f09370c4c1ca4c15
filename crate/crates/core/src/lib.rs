//! Symmetric q-deformed (Jackson) calculus in binary64.
//!
//! * [`qcore`]: the deformation parameter, q-brackets `[n]_q` and q-factorials.
//! * [`qderiv`]: the Jackson derivative, exact on polynomials, plus
//!   product-rule and commutator diagnostics.
//! * [`qint`]: Jackson integrals as point-measure sums over the q-lattice,
//!   lattice equivalence classes and the monotonicity counterexample.
//! * [`qfock`]: the q-oscillator Fock construction and truncated ladder
//!   matrices.
//! * [`qspecial`]: `E_q`, `S_q`, `C_q` as q-factorial series.
//! * [`qsolve`]: fundamental-theorem identities and lattice recovery of
//!   solutions to `∫₀ᵇ h d_q x = F(b)`.
//!
//! Integral forms ([`qint::RuleRegistry`]) and integrands
//! ([`registry::FunctionRegistry`]) are registered by name so front ends can
//! pick them at runtime.

pub mod error;
pub mod evaluator;
pub mod poly;
pub mod qcore;
pub mod qderiv;
pub mod qfock;
pub mod qint;
pub mod qsolve;
pub mod qspecial;
pub mod registry;
pub mod summation;

pub use error::{QError, Result, Tail};
pub use evaluator::Evaluator;
pub use poly::Polynomial;
pub use qcore::{DeformationParameter, DivergencePolicy, SummationControl};
