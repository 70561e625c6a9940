//! Cost functions revealed to the learner, and offline objectives built from them.

use std::fmt::Debug;

use crate::linalg::{dot, RealVector};

/// A convex cost with a subgradient oracle.
pub trait CostFunction: Debug + Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn subgradient(&self, x: &[f64]) -> RealVector;

    /// Coefficients `c` when the cost is `<c, x>`; lets hindsight solvers
    /// take the exact LP path.
    fn linear_coefficients(&self) -> Option<&[f64]> {
        None
    }
}

/// `f(x) = <c, x>`
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCost {
    pub coeffs: RealVector,
}

impl LinearCost {
    pub fn new(coeffs: RealVector) -> Self {
        LinearCost { coeffs }
    }
}

impl CostFunction for LinearCost {
    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x)
    }

    fn subgradient(&self, _x: &[f64]) -> RealVector {
        self.coeffs.clone()
    }

    fn linear_coefficients(&self) -> Option<&[f64]> {
        Some(&self.coeffs)
    }
}

/// `f(x) = weight * ||x - center||^2`
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceCost {
    pub center: RealVector,
    pub weight: f64,
}

impl SquaredDistanceCost {
    pub fn new(center: RealVector, weight: f64) -> Self {
        SquaredDistanceCost { center, weight }
    }
}

impl CostFunction for SquaredDistanceCost {
    fn value(&self, x: &[f64]) -> f64 {
        let d = RealVector::from(x).sub(&self.center);
        self.weight * dot(&d, &d)
    }

    fn subgradient(&self, x: &[f64]) -> RealVector {
        RealVector::from(x).sub(&self.center).scale(2.0 * self.weight)
    }
}

/// `f(x) = sum_k f_k(x)` for a finite family.
#[derive(Debug, Default)]
pub struct SumCost {
    parts: Vec<Box<dyn CostFunction>>,
}

impl SumCost {
    pub fn new(parts: Vec<Box<dyn CostFunction>>) -> Self {
        SumCost { parts }
    }
}

impl CostFunction for SumCost {
    fn value(&self, x: &[f64]) -> f64 {
        self.parts.iter().map(|p| p.value(x)).sum()
    }

    fn subgradient(&self, x: &[f64]) -> RealVector {
        let mut out = RealVector::zeros(x.len());
        for p in &self.parts {
            out = out.add(&p.subgradient(x));
        }
        out
    }
}
