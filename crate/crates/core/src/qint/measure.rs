use serde::Serialize;

use crate::evaluator::Evaluator;
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A finite atomic measure `Σ wᵢ·δ_{xᵢ}`.
///
/// Atoms are kept in insertion order; integration folds them back to front,
/// which for lattice measures means smallest weight first.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PointMeasure {
    atoms: Vec<Atom>,
}

impl PointMeasure {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    /// Unit mass at `x0`: integrating against it is point evaluation.
    pub fn delta(x0: f64) -> Self {
        Self::new(vec![Atom {
            location: x0,
            weight: 1.0,
        }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn push(&mut self, location: f64, weight: f64) {
        self.atoms.push(Atom { location, weight });
    }

    pub fn integrate(&self, f: &dyn Evaluator) -> f64 {
        let mut acc = CompensatedSum::new();
        for atom in self.atoms.iter().rev() {
            acc.add(atom.weight * f.eval(atom.location));
        }
        acc.value()
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(&|_x: f64| 1.0)
    }
}

/// `δ_{x0}(f) = f(x0)`.
pub fn delta_eval(f: &dyn Evaluator, x0: f64) -> f64 {
    PointMeasure::delta(x0).integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        assert_eq!(delta_eval(&|x: f64| x * x, 3.0), 9.0);
        assert_eq!(delta_eval(&|_x: f64| 1.0, -7.0), 1.0);
        let m = PointMeasure::new(vec![
            Atom {
                location: 1.0,
                weight: 0.5,
            },
            Atom {
                location: 2.0,
                weight: 0.5,
            },
        ]);
        assert_eq!(m.integrate(&|x: f64| x), 1.5);
        assert_eq!(m.total_mass(), 1.0);
    }
}
