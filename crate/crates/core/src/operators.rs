//! Adjointable operators between fiber-decomposed modules.
//!
//! Over the diagonal algebra an adjointable map is exactly a fiber-preserving
//! linear map, so an operator is one complex block `M_j : C^{n_j} → C^{m_j}`
//! per fiber. Adjoints, norms and positivity are taken with respect to the
//! weighted fiber forms.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::module_space::{require_same, ModuleVector, SpaceRef};
use crate::spectral::{self, c64, fro_norm, hermitian_part, min_eigenvalue, psd_sqrt, singular_values, CMatrix};

/// Relative tolerance used by [`ModuleOperator::classify`] and the commutation checks.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Relative singular-value cutoff for singularity detection.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ModuleOperator {
    domain: SpaceRef,
    codomain: SpaceRef,
    blocks: Vec<CMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatorClass {
    pub selfadjoint: bool,
    pub positive: bool,
    pub invertible: bool,
    pub glplus: bool,
}

impl ModuleOperator {
    pub fn new(domain: SpaceRef, codomain: SpaceRef, blocks: Vec<CMatrix>) -> Result<Self> {
        if domain.num_fibers() != codomain.num_fibers() || domain.algebra() != codomain.algebra() {
            return Err(FrameError::SpaceMismatch("domain and codomain are modules over different algebras".into()));
        }
        if blocks.len() != domain.num_fibers() {
            return Err(FrameError::LengthMismatch { expected: domain.num_fibers(), got: blocks.len() });
        }
        for (j, b) in blocks.iter().enumerate() {
            let want = (codomain.fiber(j).dim(), domain.fiber(j).dim());
            if b.shape() != want {
                return Err(FrameError::SpaceMismatch(format!(
                    "block {j} has shape {:?}, expected {:?}",
                    b.shape(),
                    want
                )));
            }
        }
        Ok(ModuleOperator { domain, codomain, blocks })
    }

    /// Endomorphism of `space` with the given blocks.
    pub fn endo(space: &SpaceRef, blocks: Vec<CMatrix>) -> Result<Self> {
        ModuleOperator::new(Arc::clone(space), Arc::clone(space), blocks)
    }

    pub fn identity(space: &SpaceRef) -> Self {
        ModuleOperator::scalar(space, c64(1.0))
    }

    pub fn zero(space: &SpaceRef) -> Self {
        ModuleOperator::scalar(space, c64(0.0))
    }

    pub fn scalar(space: &SpaceRef, c: Complex64) -> Self {
        let blocks = space.fibers().iter().map(|f| spectral::identity(f.dim()) * c).collect();
        ModuleOperator { domain: Arc::clone(space), codomain: Arc::clone(space), blocks }
    }

    pub fn domain(&self) -> &SpaceRef {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceRef {
        &self.codomain
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    pub fn is_endomorphism(&self) -> bool {
        crate::module_space::same_space(&self.domain, &self.codomain)
    }

    fn require_endo(&self, what: &str) -> Result<()> {
        require_same(&self.domain, &self.codomain, what)
    }

    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        require_same(&self.domain, x.space(), "operator applied to a vector outside its domain")?;
        self.codomain.vector(self.blocks.iter().zip(x.parts()).map(|(m, p)| m * p).collect())
    }

    /// `(T*)_j = W_j⁻¹ M_jᴴ V_j` with `W`, `V` the domain and codomain weights.
    pub fn adjoint(&self) -> ModuleOperator {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(j, m)| self.domain.fiber(j).weight_inv() * m.adjoint() * self.codomain.fiber(j).weight())
            .collect();
        ModuleOperator { domain: Arc::clone(&self.codomain), codomain: Arc::clone(&self.domain), blocks }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleOperator) -> Result<ModuleOperator> {
        require_same(&inner.codomain, &self.domain, "composition of operators with mismatched spaces")?;
        Ok(ModuleOperator {
            domain: Arc::clone(&inner.domain),
            codomain: Arc::clone(&self.codomain),
            blocks: self.blocks.iter().zip(&inner.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn add(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        require_same(&self.domain, &other.domain, "sum of operators with different domains")?;
        require_same(&self.codomain, &other.codomain, "sum of operators with different codomains")?;
        Ok(ModuleOperator {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.add(&other.scale(c64(-1.0)))
    }

    pub fn scale(&self, c: Complex64) -> ModuleOperator {
        ModuleOperator {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&self.codomain),
            blocks: self.blocks.iter().map(|m| m * c).collect(),
        }
    }

    /// `V_j^{1/2} M_j W_j^{-1/2}`: the block in orthonormal coordinates of both fibers.
    pub fn whitened_block(&self, j: usize) -> CMatrix {
        self.codomain.fiber(j).weight_sqrt() * &self.blocks[j] * self.domain.fiber(j).weight_inv_sqrt()
    }

    /// Operator norm for the weighted geometry.
    pub fn norm(&self) -> f64 {
        (0..self.blocks.len()).map(|j| spectral::sigma_max(&self.whitened_block(j))).fold(0.0, f64::max)
    }

    /// Per-fiber operator norms.
    pub fn fiber_norms(&self) -> Vec<f64> {
        (0..self.blocks.len()).map(|j| spectral::sigma_max(&self.whitened_block(j))).collect()
    }

    /// Hermitian form matrix of `x ↦ ⟨Tx, x⟩_j`, i.e. `W_j M_j`.
    pub fn form_block(&self, j: usize) -> CMatrix {
        self.domain.fiber(j).weight() * &self.blocks[j]
    }

    pub fn classify(&self) -> Result<OperatorClass> {
        self.require_endo("classification needs an endomorphism")?;
        let mut selfadjoint = true;
        let mut positive = true;
        let mut invertible = true;
        for (j, m) in self.blocks.iter().enumerate() {
            let wm = self.form_block(j);
            let scale = fro_norm(&wm);
            if fro_norm(&(&wm - wm.adjoint())) > CLASSIFY_TOL * scale {
                selfadjoint = false;
            }
            let herm = hermitian_part(&wm);
            let spectrum_scale = spectral::max_eigenvalue(&herm).abs().max(min_eigenvalue(&herm).abs());
            if min_eigenvalue(&herm) < -CLASSIFY_TOL * spectrum_scale {
                positive = false;
            }
            let s = singular_values(m);
            let (hi, lo) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
            if m.nrows() != m.ncols() || hi == 0.0 || lo <= SINGULAR_RTOL * hi {
                invertible = false;
            }
        }
        let positive = selfadjoint && positive;
        Ok(OperatorClass { selfadjoint, positive, invertible, glplus: positive && invertible })
    }

    /// Principal square root of a positive operator.
    pub fn sqrt(&self) -> Result<ModuleOperator> {
        if !self.classify()?.positive {
            return Err(FrameError::NotPositive("square root of a non-positive operator".into()));
        }
        let blocks = (0..self.blocks.len())
            .map(|j| {
                let f = self.domain.fiber(j);
                let sym = hermitian_part(&self.whitened_block(j));
                f.weight_inv_sqrt() * psd_sqrt(&sym) * f.weight_sqrt()
            })
            .collect();
        Ok(ModuleOperator { domain: Arc::clone(&self.domain), codomain: Arc::clone(&self.codomain), blocks })
    }

    pub fn inverse(&self) -> Result<ModuleOperator> {
        if !self.classify()?.invertible {
            return Err(FrameError::NotInvertible("operator has a singular fiber block".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|m| m.clone().try_inverse().ok_or_else(|| FrameError::NotInvertible("LU failed".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleOperator { domain: Arc::clone(&self.codomain), codomain: Arc::clone(&self.domain), blocks })
    }

    /// Hermitian form matrix of `x ↦ ⟨T*x, T*x⟩_j` on the codomain fiber: `V M W⁻¹ Mᴴ V`.
    pub fn adjoint_gram_form(&self, j: usize) -> CMatrix {
        let v = self.codomain.fiber(j).weight();
        hermitian_part(&(v * &self.blocks[j] * self.domain.fiber(j).weight_inv() * self.blocks[j].adjoint() * v))
    }

    /// Largest `m ≥ 0` with `⟨T*x, T*x⟩ ≥ m ⟨x, x⟩` for every `x`.
    ///
    /// Positive exactly when `T` is surjective. Computed as the squared smallest
    /// singular value of the whitened blocks; values below the singular cutoff
    /// are reported as zero.
    pub fn adjoint_lower_bound(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..self.blocks.len() {
            let w = self.whitened_block(j);
            let s = singular_values(&w);
            let hi = s.first().copied().unwrap_or(0.0);
            let lo = if w.nrows() > w.ncols() { 0.0 } else { s.last().copied().unwrap_or(0.0) };
            let m = if hi == 0.0 || lo <= SINGULAR_RTOL * hi { 0.0 } else { lo * lo };
            best = best.min(m);
        }
        if best.is_finite() {
            best
        } else {
            0.0
        }
    }

    /// `max_j ‖AB − BA‖_F / (‖A‖_F ‖B‖_F)`, zero when either factor vanishes.
    pub fn commutator_residual(&self, other: &ModuleOperator) -> Result<f64> {
        self.require_endo("commutator needs endomorphisms")?;
        other.require_endo("commutator needs endomorphisms")?;
        require_same(&self.domain, &other.domain, "commutator of operators on different modules")?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let scale = fro_norm(a) * fro_norm(b);
                if scale == 0.0 {
                    0.0
                } else {
                    fro_norm(&(a * b - b * a)) / scale
                }
            })
            .fold(0.0, f64::max))
    }

    /// Errors with `NotCommuting` unless the relative commutator residual is within tolerance.
    pub fn check_commutes(&self, other: &ModuleOperator, what: &str) -> Result<()> {
        let residual = self.commutator_residual(other)?;
        if residual > CLASSIFY_TOL {
            return Err(FrameError::NotCommuting { what: what.to_string(), residual });
        }
        Ok(())
    }

    /// Relative distance `max_j ‖A_j − B_j‖_F / max(‖A_j‖_F, ‖B_j‖_F)`.
    pub fn relative_distance(&self, other: &ModuleOperator) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let scale = fro_norm(a).max(fro_norm(b));
                if scale == 0.0 {
                    0.0
                } else {
                    fro_norm(&(a - b)) / scale
                }
            })
            .fold(0.0, f64::max)
    }

    /// Weighted operator norm of `self − other`.
    pub fn distance(&self, other: &ModuleOperator) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::module_space::ModuleSpace;
    use crate::spectral::{real_diag, CVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cm(n: usize, vals: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(n, vals.len() / n, &vals.iter().map(|&v| c64(v)).collect::<Vec<_>>())
    }

    fn one_fiber(weight: CMatrix) -> SpaceRef {
        ModuleSpace::from_weights(Algebra::new(1).unwrap(), vec![weight]).unwrap()
    }

    fn rand_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn rand_hpd(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = rand_matrix(rng, n, n);
        hermitian_part(&(&a * a.adjoint() + spectral::identity(n).scale(0.5)))
    }

    fn rand_space(rng: &mut ChaCha8Rng, dims: &[usize]) -> SpaceRef {
        let weights = dims.iter().map(|&n| rand_hpd(rng, n)).collect();
        ModuleSpace::from_weights(Algebra::new(dims.len()).unwrap(), weights).unwrap()
    }

    fn rand_vector(rng: &mut ChaCha8Rng, h: &SpaceRef) -> ModuleVector {
        h.vector(h.dims().iter().map(|&n| rand_matrix(rng, n, 1).column(0).into_owned()).collect()).unwrap()
    }

    fn rand_op(rng: &mut ChaCha8Rng, h: &SpaceRef) -> ModuleOperator {
        ModuleOperator::endo(h, h.dims().iter().map(|&n| rand_matrix(rng, n, n)).collect()).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let h = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        let id = ModuleOperator::identity(&h);
        assert_eq!(id.adjoint().block(0), id.block(0));
        let n = ModuleOperator::endo(&h, vec![cm(2, &[0.0, 1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(n.adjoint().block(0), &cm(2, &[0.0, 0.0, 1.0, 0.0]));

        // oracle: ⟨Mx, y⟩_V = 3 x ȳ and ⟨x, M*y⟩_W = 2 x conj(a y) force a = 3/2
        let w = one_fiber(real_diag(&[2.0]));
        let v = one_fiber(real_diag(&[1.0]));
        let t = ModuleOperator::new(w, v, vec![cm(1, &[3.0])]).unwrap();
        assert!((t.adjoint().block(0)[(0, 0)] - c64(1.5)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_relation_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = rand_space(&mut rng, &[2, 3]);
        let k = rand_space(&mut rng, &[3, 1]);
        let t =
            ModuleOperator::new(h.clone(), k.clone(), vec![rand_matrix(&mut rng, 3, 2), rand_matrix(&mut rng, 1, 3)])
                .unwrap();
        let ts = t.adjoint();
        for _ in 0..20 {
            let x = rand_vector(&mut rng, &h);
            let y = rand_vector(&mut rng, &k);
            let lhs = t.apply(&x).unwrap().inner_product(&y).unwrap();
            let rhs = x.inner_product(&ts.apply(&y).unwrap()).unwrap();
            for j in 0..2 {
                assert!((lhs.get(j) - rhs.get(j)).norm() < 1e-10 * (1.0 + lhs.get(j).norm()));
            }
        }
        assert!(ts.adjoint().relative_distance(&t) < 1e-12);
    }

    #[test]
    fn compose_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = rand_space(&mut rng, &[2, 2]);
        let (t, u, v) = (rand_op(&mut rng, &h), rand_op(&mut rng, &h), rand_op(&mut rng, &h));
        assert!(t.compose(&ModuleOperator::identity(&h)).unwrap().relative_distance(&t) < 1e-15);
        assert_eq!(t.compose(&ModuleOperator::zero(&h)).unwrap().norm(), 0.0);
        // direct product oracle for associativity
        let left = t.compose(&u).unwrap().compose(&v).unwrap();
        let right = t.compose(&u.compose(&v).unwrap()).unwrap();
        for j in 0..2 {
            let direct = t.block(j) * u.block(j) * v.block(j);
            assert!(fro_norm(&(left.block(j) - &direct)) < 1e-12 * fro_norm(&direct));
            assert!(fro_norm(&(right.block(j) - &direct)) < 1e-12 * fro_norm(&direct));
        }
        let tu_star = t.compose(&u).unwrap().adjoint();
        let us_ts = u.adjoint().compose(&t.adjoint()).unwrap();
        assert!(tu_star.relative_distance(&us_ts) < 1e-12);
        let other = rand_space(&mut rng, &[3, 1]);
        assert!(matches!(t.compose(&rand_op(&mut rng, &other)), Err(FrameError::SpaceMismatch(_))));
    }

    #[test]
    fn norm_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = rand_space(&mut rng, &[3, 2]);
        assert!((ModuleOperator::identity(&h).norm() - 1.0).abs() < 1e-12);
        let e = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        let d = ModuleOperator::endo(&e, vec![real_diag(&[1.0, -2.0])]).unwrap();
        assert!((d.norm() - 2.0).abs() < 1e-14);

        // oracle: maximise ‖Mx‖_V / ‖x‖_W = |x| / (2|x|) over a grid of x
        let t = ModuleOperator::new(one_fiber(real_diag(&[4.0])), one_fiber(real_diag(&[1.0])), vec![cm(1, &[1.0])])
            .unwrap();
        let grid_max = (1..=100)
            .map(|i| {
                let x = i as f64 / 10.0;
                (x * x).sqrt() / (4.0 * x * x).sqrt()
            })
            .fold(0.0, f64::max);
        assert!((t.norm() - grid_max).abs() < 1e-14);
        assert!((t.norm() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn norm_bounds_quadratic_form() {
        // ⟨Tx, Tx⟩ ≤ ‖T‖² ⟨x, x⟩ fiberwise
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let h = rand_space(&mut rng, &[3, 2, 1]);
            let t = rand_op(&mut rng, &h);
            let n2 = t.norm().powi(2);
            for _ in 0..20 {
                let x = rand_vector(&mut rng, &h);
                let tx = t.apply(&x).unwrap();
                let lhs = tx.inner_product(&tx).unwrap();
                let rhs = x.inner_product(&x).unwrap();
                for j in 0..3 {
                    assert!(lhs.get(j).re <= n2 * rhs.get(j).re * (1.0 + 1e-10));
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let e = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        let all = OperatorClass { selfadjoint: true, positive: true, invertible: true, glplus: true };
        assert_eq!(ModuleOperator::identity(&e).classify().unwrap(), all);
        let none = OperatorClass { selfadjoint: false, positive: false, invertible: false, glplus: false };
        let n = ModuleOperator::endo(&e, vec![cm(2, &[0.0, 1.0, 0.0, 0.0])]).unwrap();
        assert_eq!(n.classify().unwrap(), none);
        let d = ModuleOperator::endo(&e, vec![real_diag(&[2.0, 3.0])]).unwrap();
        assert!(d.classify().unwrap().glplus);
        let neg = ModuleOperator::endo(&e, vec![real_diag(&[2.0, -3.0])]).unwrap();
        let c = neg.classify().unwrap();
        assert!(c.selfadjoint && !c.positive && c.invertible && !c.glplus);
    }

    #[test]
    fn classify_respects_weights() {
        // diag(2, 3) is not self-adjoint for a non-diagonal weight
        let w = CMatrix::from_row_slice(2, 2, &[c64(2.0), c64(1.0), c64(1.0), c64(2.0)]);
        let h = one_fiber(w.clone());
        let d = ModuleOperator::endo(&h, vec![real_diag(&[2.0, 3.0])]).unwrap();
        assert!(!d.classify().unwrap().selfadjoint);
        // W⁻¹ P with P Hermitian positive definite is positive in the W geometry
        let p = real_diag(&[1.0, 5.0]);
        let winv = w.clone().try_inverse().unwrap();
        let t = ModuleOperator::endo(&h, vec![&winv * &p]).unwrap();
        assert!(t.classify().unwrap().glplus);
    }

    #[test]
    fn sqrt_examples() {
        let e = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        let id = ModuleOperator::identity(&e);
        assert!(id.sqrt().unwrap().relative_distance(&id) < 1e-14);
        let d = ModuleOperator::endo(&e, vec![real_diag(&[4.0, 9.0])]).unwrap();
        let r = d.sqrt().unwrap();
        assert!(fro_norm(&(r.block(0) - real_diag(&[2.0, 3.0]))) < 1e-14);
        let n = ModuleOperator::endo(&e, vec![cm(2, &[0.0, 1.0, 0.0, 0.0])]).unwrap();
        assert!(matches!(n.sqrt(), Err(FrameError::NotPositive(_))));

        // random HPD 3×3 in a weighted fiber, residual R² − T
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = rand_space(&mut rng, &[3]);
        let p = rand_hpd(&mut rng, 3);
        let t = ModuleOperator::endo(&h, vec![h.fiber(0).weight_inv() * &p]).unwrap();
        let r = t.sqrt().unwrap();
        assert!(r.classify().unwrap().positive);
        let rr = r.compose(&r).unwrap();
        assert!(rr.distance(&t).unwrap() <= 1e-10 * t.norm());
    }

    #[test]
    fn adjoint_lower_bound_examples() {
        let e = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        assert!((ModuleOperator::identity(&e).adjoint_lower_bound() - 1.0).abs() < 1e-14);
        let rank1 = ModuleOperator::endo(&e, vec![cm(2, &[1.0, 2.0, 2.0, 4.0])]).unwrap();
        assert_eq!(rank1.adjoint_lower_bound(), 0.0);
        let d = ModuleOperator::endo(&e, vec![real_diag(&[2.0, 3.0])]).unwrap();
        // oracle: min over random unit x of ‖T*x‖² / ‖x‖²
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let ds = d.adjoint();
        let mut lo = f64::INFINITY;
        for _ in 0..20_000 {
            let x = e.vector(vec![rand_matrix(&mut rng, 2, 1).column(0).into_owned()]).unwrap();
            let tx = ds.apply(&x).unwrap();
            lo = lo.min(tx.inner_product(&tx).unwrap().get(0).re / x.inner_product(&x).unwrap().get(0).re);
        }
        assert!((4.0 - 1e-12..4.0 + 1e-2).contains(&lo));
        assert!((d.adjoint_lower_bound() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn lower_bound_matches_invertibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let h = rand_space(&mut rng, &[3, 2]);
            let mut t = rand_op(&mut rng, &h);
            if trial % 2 == 0 {
                let mut blocks = t.blocks().to_vec();
                let low = rand_matrix(&mut rng, 3, 2) * rand_matrix(&mut rng, 2, 3);
                blocks[0] = low;
                t = ModuleOperator::endo(&h, blocks).unwrap();
            }
            let m = t.adjoint_lower_bound();
            assert_eq!(m > 0.0, t.classify().unwrap().invertible, "trial {trial}");
            for _ in 0..10 {
                let x = rand_vector(&mut rng, &h);
                let y = t.adjoint().apply(&x).unwrap();
                let lhs = y.inner_product(&y).unwrap();
                let rhs = x.inner_product(&x).unwrap();
                for j in 0..2 {
                    assert!(lhs.get(j).re >= m * rhs.get(j).re - 1e-10 * (1.0 + lhs.get(j).re));
                }
            }
        }
    }

    #[test]
    fn apply_checks_space() {
        let e = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[2]).unwrap();
        let f = ModuleSpace::euclidean(Algebra::new(1).unwrap(), &[3]).unwrap();
        let x = f.vector(vec![CVector::zeros(3)]).unwrap();
        assert!(ModuleOperator::identity(&e).apply(&x).is_err());
        assert!(ModuleOperator::endo(&e, vec![CMatrix::zeros(3, 3)]).is_err());
    }
}
