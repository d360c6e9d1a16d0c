//! Finite Hilbert modules over the diagonal algebra `C^d`.
//!
//! The module is `H = ⊕_j C^{n_j}` with fiber `j` carrying the weighted form
//! `⟨x, y⟩_j = y_jᴴ W_j x_j`. The inner product is linear in the first slot.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{FrameError, Result};
use crate::spectral::{self, hermitian_residual, min_eigenvalue, CMatrix, CVector};

/// One fiber of the module: its dimension and Hermitian positive-definite weight.
#[derive(Debug, Clone)]
pub struct Fiber {
    weight: CMatrix,
    weight_inv: CMatrix,
    weight_sqrt: CMatrix,
    weight_inv_sqrt: CMatrix,
}

impl PartialEq for Fiber {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
    }
}

impl Fiber {
    pub fn new(weight: CMatrix) -> Result<Self> {
        let n = weight.nrows();
        if n == 0 || weight.ncols() != n {
            return Err(FrameError::BadParameters(format!(
                "fiber weight must be square and nonempty, got {:?}",
                weight.shape()
            )));
        }
        let herm = hermitian_residual(&weight);
        if herm > 1e-12 {
            return Err(FrameError::NotHermitian(herm));
        }
        let weight = spectral::hermitian_part(&weight);
        let lo = min_eigenvalue(&weight);
        if lo.is_nan() || lo <= 0.0 {
            return Err(FrameError::NotDefinite(lo));
        }
        let weight_sqrt = spectral::hermitian_fn(&weight, f64::sqrt);
        let weight_inv_sqrt = spectral::hpd_inv_sqrt(&weight);
        let weight_inv = spectral::hermitian_fn(&weight, |l| 1.0 / l);
        Ok(Fiber { weight, weight_inv, weight_sqrt, weight_inv_sqrt })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Fiber::new(spectral::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.weight.nrows()
    }

    pub fn weight(&self) -> &CMatrix {
        &self.weight
    }

    pub fn weight_inv(&self) -> &CMatrix {
        &self.weight_inv
    }

    pub fn weight_sqrt(&self) -> &CMatrix {
        &self.weight_sqrt
    }

    pub fn weight_inv_sqrt(&self) -> &CMatrix {
        &self.weight_inv_sqrt
    }

    /// `yᴴ W x`.
    pub fn form(&self, x: &CVector, y: &CVector) -> Complex64 {
        (y.adjoint() * &self.weight * x)[(0, 0)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSpace {
    algebra: Algebra,
    fibers: Vec<Fiber>,
}

pub type SpaceRef = Arc<ModuleSpace>;

impl ModuleSpace {
    pub fn new(algebra: Algebra, fibers: Vec<Fiber>) -> Result<SpaceRef> {
        if fibers.len() != algebra.dim() {
            return Err(FrameError::LengthMismatch { expected: algebra.dim(), got: fibers.len() });
        }
        Ok(Arc::new(ModuleSpace { algebra, fibers }))
    }

    /// Identity weights on every fiber.
    pub fn euclidean(algebra: Algebra, dims: &[usize]) -> Result<SpaceRef> {
        let fibers = dims.iter().map(|&n| Fiber::euclidean(n)).collect::<Result<Vec<_>>>()?;
        ModuleSpace::new(algebra, fibers)
    }

    pub fn from_weights(algebra: Algebra, weights: Vec<CMatrix>) -> Result<SpaceRef> {
        let fibers = weights.into_iter().map(Fiber::new).collect::<Result<Vec<_>>>()?;
        ModuleSpace::new(algebra, fibers)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn fiber(&self, j: usize) -> &Fiber {
        &self.fibers[j]
    }

    pub fn num_fibers(&self) -> usize {
        self.fibers.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.fibers.iter().map(Fiber::dim).collect()
    }

    pub fn zero_vector(self: &Arc<Self>) -> ModuleVector {
        ModuleVector { parts: self.fibers.iter().map(|f| CVector::zeros(f.dim())).collect(), space: Arc::clone(self) }
    }

    pub fn vector(self: &Arc<Self>, parts: Vec<CVector>) -> Result<ModuleVector> {
        if parts.len() != self.fibers.len() {
            return Err(FrameError::LengthMismatch { expected: self.fibers.len(), got: parts.len() });
        }
        for (j, (p, f)) in parts.iter().zip(&self.fibers).enumerate() {
            if p.len() != f.dim() {
                return Err(FrameError::SpaceMismatch(format!(
                    "part {j} has length {}, fiber has dimension {}",
                    p.len(),
                    f.dim()
                )));
            }
        }
        Ok(ModuleVector { space: Arc::clone(self), parts })
    }
}

pub fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn require_same(a: &SpaceRef, b: &SpaceRef, what: &str) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(FrameError::SpaceMismatch(what.to_string()))
    }
}

/// A vector of the module: one complex column per fiber.
#[derive(Debug, Clone)]
pub struct ModuleVector {
    space: SpaceRef,
    parts: Vec<CVector>,
}

impl ModuleVector {
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn parts(&self) -> &[CVector] {
        &self.parts
    }

    pub fn part(&self, j: usize) -> &CVector {
        &self.parts[j]
    }

    pub fn into_parts(self) -> Vec<CVector> {
        self.parts
    }

    /// `⟨self, y⟩_A`, fiber `j` equal to `y_jᴴ W_j x_j`.
    pub fn inner_product(&self, y: &ModuleVector) -> Result<AlgebraElement> {
        require_same(&self.space, &y.space, "inner product of vectors from different modules")?;
        Ok(AlgebraElement::from_values(
            self.space.fibers.iter().zip(self.parts.iter().zip(&y.parts)).map(|(f, (x, y))| f.form(x, y)).collect(),
        ))
    }

    /// Left module action `a · x`, fiberwise scalar multiplication.
    pub fn module_action(&self, a: &AlgebraElement) -> Result<ModuleVector> {
        if !self.space.algebra.contains(a) {
            return Err(FrameError::SpaceMismatch(format!(
                "element of length {} acting on a module over C^{}",
                a.len(),
                self.space.algebra.dim()
            )));
        }
        Ok(ModuleVector {
            space: Arc::clone(&self.space),
            parts: self.parts.iter().zip(a.values()).map(|(x, &s)| x * s).collect(),
        })
    }

    /// `‖x‖ = ‖⟨x, x⟩_A‖^{1/2}`, the largest weighted fiber norm.
    pub fn norm(&self) -> f64 {
        self.space.fibers.iter().zip(&self.parts).map(|(f, x)| f.form(x, x).re.max(0.0)).fold(0.0, f64::max).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> ModuleVector {
        ModuleVector { space: Arc::clone(&self.space), parts: self.parts.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &ModuleVector) -> Result<ModuleVector> {
        require_same(&self.space, &other.space, "sum of vectors from different modules")?;
        Ok(ModuleVector {
            space: Arc::clone(&self.space),
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}
