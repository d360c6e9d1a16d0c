//! Finite commutative C*-algebras realized as complex d-tuples.
//!
//! Every finite-dimensional commutative C*-algebra is isomorphic to `C^d` with
//! pointwise multiplication and conjugation as involution. One coordinate per
//! character (fiber); all order and spectral notions are pointwise.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

pub const DEFAULT_EPS_POS: f64 = 1e-10;
pub const DEFAULT_EPS_NZ: f64 = 1e-8;

/// The algebra `C^d` together with the tolerances used by its order predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Algebra {
    d: usize,
    eps_pos: f64,
    eps_nz: f64,
}

/// An element of a commutative algebra: one complex value per character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement {
    values: Vec<Complex64>,
}

impl Algebra {
    pub fn new(d: usize) -> Result<Self> {
        Self::with_tolerances(d, DEFAULT_EPS_POS, DEFAULT_EPS_NZ)
    }

    pub fn with_tolerances(d: usize, eps_pos: f64, eps_nz: f64) -> Result<Self> {
        if d == 0 {
            return Err(FrameError::BadParameters("algebra needs d >= 1".into()));
        }
        if !(eps_pos > 0.0 && eps_pos.is_finite()) || !(eps_nz > 0.0 && eps_nz.is_finite()) {
            return Err(FrameError::BadParameters(format!(
                "tolerances must be positive and finite (eps_pos={eps_pos}, eps_nz={eps_nz})"
            )));
        }
        Ok(Algebra { d, eps_pos, eps_nz })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn eps_pos(&self) -> f64 {
        self.eps_pos
    }

    pub fn eps_nz(&self) -> f64 {
        self.eps_nz
    }

    pub fn element(&self, values: Vec<Complex64>) -> Result<AlgebraElement> {
        if values.len() != self.d {
            return Err(FrameError::LengthMismatch { expected: self.d, got: values.len() });
        }
        Ok(AlgebraElement { values })
    }

    pub fn real_element(&self, values: &[f64]) -> Result<AlgebraElement> {
        self.element(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { values: vec![Complex64::new(0.0, 0.0); self.d] }
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement { values: vec![Complex64::new(1.0, 0.0); self.d] }
    }

    pub fn contains(&self, a: &AlgebraElement) -> bool {
        a.values.len() == self.d
    }

    /// Positivity up to `eps_pos`, relative to the size of each coordinate.
    pub fn is_positive(&self, a: &AlgebraElement) -> bool {
        a.values.iter().all(|z| {
            let slack = self.eps_pos * (1.0 + z.norm());
            z.im.abs() <= slack && z.re >= -slack
        })
    }

    /// Every coordinate exceeds `eps_nz` in modulus, i.e. `|a|` is invertible.
    pub fn is_strictly_nonzero(&self, a: &AlgebraElement) -> bool {
        a.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min) > self.eps_nz
    }

    /// Principal square root of a positive element.
    pub fn sqrt(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if !self.is_positive(a) {
            return Err(FrameError::NotPositive(format!("{:?}", a.values)));
        }
        Ok(AlgebraElement { values: a.values.iter().map(|z| Complex64::new(z.re.max(0.0).sqrt(), 0.0)).collect() })
    }
}

impl AlgebraElement {
    pub fn from_values(values: Vec<Complex64>) -> Self {
        AlgebraElement { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        AlgebraElement { values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.values[j]
    }

    /// Real parts, one per character.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn star(&self) -> Self {
        AlgebraElement { values: self.values.iter().map(|z| z.conj()).collect() }
    }

    /// `|a| = (a* a)^{1/2}`, computed pointwise as the modulus.
    pub fn abs(&self) -> Self {
        AlgebraElement { values: self.values.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect() }
    }

    pub fn scale(&self, c: f64) -> Self {
        AlgebraElement { values: self.values.iter().map(|z| z * c).collect() }
    }

    /// Sup norm, which is the C*-norm of the diagonal model.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `a x a*` for a self-adjoint-valued middle element; pointwise `|a_j|^2 x_j`.
    pub fn sandwich(&self, middle: &AlgebraElement) -> AlgebraElement {
        self * &(middle * &self.star())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "algebra elements from different algebras");
        AlgebraElement { values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a - b)
    }
}
