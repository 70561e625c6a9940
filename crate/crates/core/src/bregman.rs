//! Bregman generators and the divergences they induce.
//!
//! Only generators that are both strongly convex and smooth are supported,
//! since every bound downstream is stated in terms of the pair `(sigma, L)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, OcoError, Result};
use crate::linalg::{dot, RealVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `psi(x) = 0.5 * ||x||^2`
    HalfSqEuclidean,
    /// `psi(x) = 0.5 * sum_i w_i x_i^2` with every `w_i > 0`.
    WeightedQuadratic { weights: RealVector },
}

/// A strongly convex, smooth function `psi` together with its moduli.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BregmanGenerator {
    kind: GeneratorKind,
    sigma: f64,
    lipschitz: f64,
}

impl BregmanGenerator {
    pub fn half_sq_euclidean() -> Self {
        BregmanGenerator { kind: GeneratorKind::HalfSqEuclidean, sigma: 1.0, lipschitz: 1.0 }
    }

    pub fn weighted_quadratic(weights: RealVector) -> Result<Self> {
        weights.ensure_finite()?;
        if weights.dim() == 0 || weights.iter().any(|w| *w <= 0.0) {
            return Err(OcoError::InvalidInput(
                "weighted quadratic needs strictly positive weights".into(),
            ));
        }
        let sigma = weights.iter().copied().fold(f64::INFINITY, f64::min);
        let lipschitz = weights.iter().copied().fold(0.0, f64::max);
        Ok(BregmanGenerator {
            kind: GeneratorKind::WeightedQuadratic { weights },
            sigma,
            lipschitz,
        })
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    /// Strong-convexity modulus.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Smoothness modulus.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn is_half_sq_euclidean(&self) -> bool {
        matches!(self.kind, GeneratorKind::HalfSqEuclidean)
    }

    /// Checks that the generator can act on vectors of dimension `n`.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match &self.kind {
            GeneratorKind::HalfSqEuclidean => Ok(()),
            GeneratorKind::WeightedQuadratic { weights } => check_dim(weights.dim(), n),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.kind {
            GeneratorKind::HalfSqEuclidean => 0.5 * dot(x, x),
            GeneratorKind::WeightedQuadratic { weights } => {
                0.5 * x.iter().zip(weights.iter()).map(|(v, w)| w * v * v).sum::<f64>()
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> RealVector {
        match &self.kind {
            GeneratorKind::HalfSqEuclidean => RealVector::from(x),
            GeneratorKind::WeightedQuadratic { weights } => {
                x.iter().zip(weights.iter()).map(|(v, w)| w * v).collect()
            }
        }
    }
}

impl Default for BregmanGenerator {
    fn default() -> Self {
        Self::half_sq_euclidean()
    }
}

/// `B(a, b) = psi(a) - psi(b) - <a - b, grad psi(b)>`
pub fn bregman_divergence(gen: &BregmanGenerator, a: &[f64], b: &[f64]) -> Result<f64> {
    check_dim(a.len(), b.len())?;
    gen.check_dim(a.len())?;
    Ok(divergence_unchecked(gen, a, b))
}

pub(crate) fn divergence_unchecked(gen: &BregmanGenerator, a: &[f64], b: &[f64]) -> f64 {
    let grad_b = gen.gradient(b);
    let lin: f64 = a.iter().zip(b).zip(grad_b.iter()).map(|((x, y), g)| (x - y) * g).sum();
    // rounding can leave a tiny negative value when a ~ b
    (gen.value(a) - gen.value(b) - lin).max(0.0)
}

/// Residual of the three-point identity
/// `B(c,a) + B(a,b) - B(c,b) = <grad psi(b) - grad psi(a), c - a>`.
/// Zero up to rounding for every valid generator.
pub fn three_point_residual(gen: &BregmanGenerator, a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    check_dim(a.len(), b.len())?;
    check_dim(a.len(), c.len())?;
    gen.check_dim(a.len())?;
    let lhs = raw_divergence(gen, c, a) + raw_divergence(gen, a, b) - raw_divergence(gen, c, b);
    let ga = gen.gradient(a);
    let gb = gen.gradient(b);
    let rhs: f64 = gb
        .iter()
        .zip(ga.iter())
        .zip(c.iter().zip(a))
        .map(|((gbi, gai), (ci, ai))| (gbi - gai) * (ci - ai))
        .sum();
    Ok(lhs - rhs)
}

// No clamping here: the identity must be checked on the exact expression.
fn raw_divergence(gen: &BregmanGenerator, a: &[f64], b: &[f64]) -> f64 {
    let grad_b = gen.gradient(b);
    let lin: f64 = a.iter().zip(b).zip(grad_b.iter()).map(|((x, y), g)| (x - y) * g).sum();
    gen.value(a) - gen.value(b) - lin
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_examples() {
        let h = BregmanGenerator::half_sq_euclidean();
        assert_eq!(bregman_divergence(&h, &[3.0, -1.0], &[3.0, -1.0]).unwrap(), 0.0);
        assert_eq!(bregman_divergence(&h, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn weighted_divergence_term_by_term() {
        // psi(a) = 0.5*(2*1 + 1*1) = 1.5, psi(b) = 0, <a-b, grad psi(b)> = 0
        let w = BregmanGenerator::weighted_quadratic(RealVector::from([2.0, 1.0])).unwrap();
        let psi_a = 0.5 * (2.0 * 1.0 * 1.0 + 1.0 * 1.0 * 1.0);
        let psi_b = 0.0;
        let inner = (1.0 - 0.0) * (2.0 * 0.0) + (1.0 - 0.0) * (1.0 * 0.0);
        let expected = psi_a - psi_b - inner;
        assert_eq!(bregman_divergence(&w, &[1.0, 1.0], &[0.0, 0.0]).unwrap(), expected);
        assert_eq!(expected, 1.5);
    }

    #[test]
    fn weighted_moduli() {
        let w = BregmanGenerator::weighted_quadratic(RealVector::from([3.0, 5.0, 0.5])).unwrap();
        assert_eq!(w.sigma(), 0.5);
        assert_eq!(w.lipschitz(), 5.0);
        assert!(BregmanGenerator::weighted_quadratic(RealVector::from([1.0, 0.0])).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let h = BregmanGenerator::half_sq_euclidean();
        assert!(matches!(
            bregman_divergence(&h, &[1.0], &[1.0, 2.0]),
            Err(OcoError::DimensionMismatch { .. })
        ));
        let w = BregmanGenerator::weighted_quadratic(RealVector::from([1.0, 2.0])).unwrap();
        assert!(bregman_divergence(&w, &[1.0], &[1.0]).is_err());
        assert!(three_point_residual(&h, &[1.0], &[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn three_point_trivial_cases() {
        let h = BregmanGenerator::half_sq_euclidean();
        let w = BregmanGenerator::weighted_quadratic(RealVector::from([3.0, 5.0])).unwrap();
        for g in [&h, &w] {
            assert_eq!(three_point_residual(g, &[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        }
        assert_eq!(three_point_residual(&h, &[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let w = BregmanGenerator::weighted_quadratic(RealVector::from([3.0, 5.0])).unwrap();
        let x = [0.7, -1.3];
        let g = w.gradient(&x);
        let h = 1e-6;
        for i in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (w.value(&xp) - w.value(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0));
        }
    }
}
