use serde::Serialize;

use crate::error::{QError, Result};
use crate::evaluator::Evaluator;
use crate::qcore::DeformationParameter;

/// Largest |n| accepted when enumerating lattice indices.
pub const MAX_LATTICE_INDEX: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeSign {
    Positive,
    Negative,
    Both,
}

impl LatticeSign {
    fn signs(self) -> &'static [f64] {
        match self {
            LatticeSign::Positive => &[1.0],
            LatticeSign::Negative => &[-1.0],
            LatticeSign::Both => &[1.0, -1.0],
        }
    }
}

impl std::str::FromStr for LatticeSign {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(LatticeSign::Positive),
            "negative" => Ok(LatticeSign::Negative),
            "both" => Ok(LatticeSign::Both),
            other => Err(QError::domain(format!("unknown lattice sign '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint {
    pub n: i64,
    /// +1 or −1
    pub sign: i8,
    pub location: f64,
}

impl LatticePoint {
    /// Jackson weight `(q⁻¹ − q)·|location|` carried by this point.
    pub fn weight(&self, dp: &DeformationParameter) -> f64 {
        dp.weight_factor() * self.location.abs()
    }
}

/// One row of a tabulated lattice sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeRow {
    pub n: i64,
    pub location: f64,
    pub weight: f64,
    pub f_value: f64,
    pub term: f64,
}

/// Points `s·scale·q^(2n+1)` for `n_lo ≤ n ≤ n_hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QLattice {
    #[serde(skip)]
    pub dp: DeformationParameter,
    pub scale: f64,
    pub sign: LatticeSign,
    pub n_lo: i64,
    pub n_hi: i64,
    points: Vec<LatticePoint>,
}

impl QLattice {
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn locations(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.location)
    }

    pub fn table(&self, f: &dyn Evaluator) -> Vec<LatticeRow> {
        self.points
            .iter()
            .map(|p| {
                let weight = p.weight(&self.dp);
                let f_value = f.eval(p.location);
                LatticeRow {
                    n: p.n,
                    location: p.location,
                    weight,
                    f_value,
                    term: weight * f_value,
                }
            })
            .collect()
    }
}

/// Enumerates the lattice in ascending n, positive before negative at each n.
pub fn lattice_points(
    dp: &DeformationParameter,
    scale: f64,
    n_lo: i64,
    n_hi: i64,
    sign: LatticeSign,
) -> Result<QLattice> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(QError::domain(format!(
            "lattice scale must be positive and finite, got {scale}"
        )));
    }
    if n_lo > n_hi {
        return Err(QError::domain(format!(
            "empty index range [{n_lo}, {n_hi}]"
        )));
    }
    if n_lo < -MAX_LATTICE_INDEX || n_hi > MAX_LATTICE_INDEX {
        return Err(QError::domain(format!(
            "lattice indices must lie within ±{MAX_LATTICE_INDEX}"
        )));
    }
    let mut points = Vec::with_capacity(((n_hi - n_lo + 1) as usize) * sign.signs().len());
    for n in n_lo..=n_hi {
        let magnitude = scale * dp.odd_power(n);
        if magnitude == 0.0 || !magnitude.is_finite() {
            return Err(QError::domain(format!(
                "lattice point of index {n} is not representable ({magnitude})"
            )));
        }
        for &s in sign.signs() {
            points.push(LatticePoint {
                n,
                sign: s as i8,
                location: s * magnitude,
            });
        }
    }
    Ok(QLattice {
        dp: *dp,
        scale,
        sign,
        n_lo,
        n_hi,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let dp = DeformationParameter::new(0.5).unwrap();
        let l = lattice_points(&dp, 1.0, 0, 2, LatticeSign::Positive).unwrap();
        assert_eq!(l.locations().collect::<Vec<_>>(), vec![0.5, 0.125, 0.03125]);
        let l = lattice_points(&dp, 1.0, -1, -1, LatticeSign::Positive).unwrap();
        assert_eq!(l.locations().collect::<Vec<_>>(), vec![2.0]);
        assert!(lattice_points(&dp, 0.0, 0, 2, LatticeSign::Positive).is_err());
        assert!(lattice_points(&dp, 1.0, 3, 2, LatticeSign::Positive).is_err());
    }

    #[test]
    fn both_signs_ordering() {
        let dp = DeformationParameter::new(0.5).unwrap();
        let l = lattice_points(&dp, 2.0, -1, 0, LatticeSign::Both).unwrap();
        let locs: Vec<f64> = l.locations().collect();
        assert_eq!(locs, vec![4.0, -4.0, 1.0, -1.0]);
        assert!(l.points().iter().all(|p| p.weight(&dp) > 0.0));
    }

    #[test]
    fn underflow_is_rejected() {
        let dp = DeformationParameter::new(0.01).unwrap();
        assert!(lattice_points(&dp, 1.0, 0, 400, LatticeSign::Positive).is_err());
    }
}
