//! Real functions that the operators sample.

/// A deterministic real function of one real variable.
///
/// Implementations must be pure: the same input always yields the same
/// output, and evaluation must be safe from several threads at once (hence
/// the `Send + Sync` bound). Points where the function is undefined should
/// return NaN; the lattice sums treat non-finite samples as a guard trip.
pub trait Evaluator: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    /// Free-form note about where the function is undefined, e.g. "undefined at 0".
    fn domain_note(&self) -> Option<&str> {
        None
    }
}

impl<F> Evaluator for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// A closure with a name and an optional domain note attached.
pub struct NamedFn {
    name: String,
    note: Option<String>,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl NamedFn {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            note: None,
            f: Box::new(f),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl Evaluator for NamedFn {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn domain_note(&self) -> Option<&str> {
        self.note.as_deref()
    }
}

impl std::fmt::Debug for NamedFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NamedFn").field("name", &self.name).finish()
    }
}

/// Piecewise-constant overrides on top of a base function.
///
/// `eval(x)` returns the value of the first closed interval `[lo, hi]` that
/// contains `x`, or the base value when none does.
pub struct Piecewise {
    base: Box<dyn Evaluator>,
    pieces: Vec<Piece>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

impl Piecewise {
    pub fn constant(value: f64) -> Self {
        Self::over(move |_| value)
    }

    pub fn over(base: impl Evaluator + 'static) -> Self {
        Self {
            base: Box::new(base),
            pieces: Vec::new(),
        }
    }

    pub fn with_piece(mut self, lo: f64, hi: f64, value: f64) -> Self {
        self.pieces.push(Piece { lo, hi, value });
        self
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }
}

impl Evaluator for Piecewise {
    fn eval(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| p.lo <= x && x <= p.hi)
            .map_or_else(|| self.base.eval(x), |p| p.value)
    }
}

/// Base function plus a perturbation that is added on a closed interval.
pub struct Bump {
    base: Box<dyn Evaluator>,
    lo: f64,
    hi: f64,
    height: f64,
}

impl Bump {
    pub fn new(base: impl Evaluator + 'static, lo: f64, hi: f64, height: f64) -> Self {
        Self {
            base: Box::new(base),
            lo,
            hi,
            height,
        }
    }
}

impl Evaluator for Bump {
    fn eval(&self, x: f64) -> f64 {
        let b = self.base.eval(x);
        if self.lo <= x && x <= self.hi {
            b + self.height
        } else {
            b
        }
    }
}
