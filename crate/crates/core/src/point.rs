//! Points of C^N and the handful of Hermitian-space helpers used everywhere.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A point (or tangent vector) of C^N. Serializes as a list of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<C64>);

impl Point {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point must have at least one coordinate".into()));
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    /// Point with real coordinates.
    pub fn real(xs: &[f64]) -> Self {
        Self(xs.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![C64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian product `<self, other> = sum self_j * conj(other_j)`.
    pub fn inner(&self, other: &Point) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: C64) -> Point {
        Point(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_re(&self, s: f64) -> Point {
        Point(self.0.iter().map(|z| z * s).collect())
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self - other).norm()
    }

    /// `t * self + (1 - t) * other`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a * t + b * (1.0 - t)).collect())
    }

    pub fn slice(&self, start: usize, len: usize) -> Point {
        Point(self.0[start..start + len].to_vec())
    }

    pub fn concat(parts: &[Point]) -> Point {
        Point(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.dim() });
        }
        Ok(())
    }
}

impl Index<usize> for Point {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Point {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        self.scale_re(rhs)
    }
}

impl From<Vec<C64>> for Point {
    fn from(v: Vec<C64>) -> Self {
        Point(v)
    }
}
