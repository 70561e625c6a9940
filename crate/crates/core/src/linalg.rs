//! Dense real vectors and the handful of BLAS-1 style helpers the engines need.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, OcoError, Result};

/// A dense vector of reals. Used for primal points, dual multipliers,
/// perturbations and gradients alike.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Self {
        RealVector(entries)
    }

    /// Builds a vector and rejects NaN or infinite entries.
    pub fn try_new(entries: Vec<f64>) -> Result<Self> {
        let v = RealVector(entries);
        v.ensure_finite()?;
        Ok(v)
    }

    pub fn zeros(n: usize) -> Self {
        RealVector(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        RealVector(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn ensure_finite(&self) -> Result<()> {
        match self.0.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(OcoError::InvalidInput(format!(
                "non-finite entry {} at index {i}",
                self.0[i]
            ))),
        }
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn add(&self, other: &[f64]) -> RealVector {
        RealVector(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[f64]) -> RealVector {
        RealVector(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> RealVector {
        RealVector(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &[f64]) -> RealVector {
        RealVector(self.0.iter().zip(other).map(|(a, b)| a + s * b).collect())
    }

    /// Componentwise `[v]^+`.
    pub fn positive_part(&self) -> RealVector {
        RealVector(self.0.iter().map(|&v| positive(v)).collect())
    }

    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Deref for RealVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for RealVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for RealVector {
    fn from(v: Vec<f64>) -> Self {
        RealVector(v)
    }
}

impl From<&[f64]> for RealVector {
    fn from(v: &[f64]) -> Self {
        RealVector(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for RealVector {
    fn from(v: [f64; N]) -> Self {
        RealVector(v.to_vec())
    }
}

impl FromIterator<f64> for RealVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        RealVector(iter.into_iter().collect())
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(OcoError::InvalidInput("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> RealVector {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `Aᵀ y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> RealVector {
        let mut out = vec![0.0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += yi * a;
            }
        }
        RealVector(out)
    }

    /// Spectral-norm upper bound via the Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `max(v, 0)` without producing `-0.0`.
#[inline]
pub fn positive(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn try_new_rejects_nan() {
        assert!(RealVector::try_new(vec![1.0, f64::NAN]).is_err());
        assert!(RealVector::try_new(vec![1.0, f64::INFINITY]).is_err());
        assert!(RealVector::try_new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn matrix_products() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![0.0, -1.0]]).unwrap();
        assert_eq!(a.mul_vec(&[1.0, 1.0]).as_slice(), &[3.0, 7.0, -1.0]);
        assert_eq!(a.tr_mul_vec(&[1.0, 0.0, 2.0]).as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn positive_part_has_no_negative_zero() {
        let p = RealVector::from([-0.0, -3.5, 2.0]).positive_part();
        assert!(p[0].is_sign_positive());
        assert_eq!(p.as_slice(), &[0.0, 0.0, 2.0]);
    }
}
