//! Seeded generators for random modules, operators and frame systems.
//!
//! Used by the sampled certificate checks, the randomized verification suites
//! and the benchmarks. Everything is driven by an explicit `ChaCha8Rng` so runs
//! are reproducible across platforms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::Algebra;
use crate::error::Result;
use crate::frames::ControlledFrameSystem;
use crate::module_space::{ModuleSpace, ModuleVector, SpaceRef};
use crate::operators::ModuleOperator;
use crate::spectral::{self, c64, hermitian_part, CMatrix, CVector};
use crate::theorems::HomomorphismSpec;

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn column(rng: &mut impl Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_normal(rng))
}

/// Random Hermitian positive-definite matrix with spectrum inside `[lo, hi]`.
pub fn hpd(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> CMatrix {
    let u = unitary(rng, n);
    let d = spectral::real_diag(&(0..n).map(|_| rng.random_range(lo..=hi)).collect::<Vec<_>>());
    hermitian_part(&(&u * d * u.adjoint()))
}

/// Haar-ish unitary from the QR factorisation of a Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    let qr = matrix(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    // fix the phases so the distribution does not depend on the QR convention
    let phases = DMatrix::from_diagonal(&CVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            c64(1.0)
        } else {
            d / d.norm()
        }
    }));
    q * phases
}

/// How fiber weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Identity,
    /// Positive real diagonal weights.
    Diagonal,
    /// Dense Hermitian positive-definite weights.
    Dense,
}

pub fn space(rng: &mut impl Rng, dims: &[usize], kind: WeightKind) -> Result<SpaceRef> {
    let algebra = Algebra::new(dims.len())?;
    let weights = dims
        .iter()
        .map(|&n| match kind {
            WeightKind::Identity => spectral::identity(n),
            WeightKind::Diagonal => {
                spectral::real_diag(&(0..n).map(|_| rng.random_range(0.25..4.0)).collect::<Vec<_>>())
            }
            WeightKind::Dense => hpd(rng, n, 0.25, 4.0),
        })
        .collect();
    ModuleSpace::from_weights(algebra, weights)
}

pub fn dims(rng: &mut impl Rng, max_d: usize, max_n: usize) -> Vec<usize> {
    let d = rng.random_range(1..=max_d);
    (0..d).map(|_| rng.random_range(1..=max_n)).collect()
}

pub fn vector(rng: &mut impl Rng, h: &SpaceRef) -> ModuleVector {
    h.vector(h.dims().iter().map(|&n| column(rng, n)).collect()).expect("dimensions match by construction")
}

pub fn operator(rng: &mut impl Rng, h: &SpaceRef) -> ModuleOperator {
    ModuleOperator::endo(h, h.dims().iter().map(|&n| matrix(rng, n, n)).collect()).expect("shapes match")
}

/// Random operator whose blocks have rank at most `n_j - 1` (rank 0 on 1-dimensional fibers).
pub fn singular_operator(rng: &mut impl Rng, h: &SpaceRef) -> ModuleOperator {
    let blocks = h
        .dims()
        .iter()
        .map(|&n| {
            let r = n - 1;
            if r == 0 {
                CMatrix::zeros(n, n)
            } else {
                matrix(rng, n, r) * matrix(rng, r, n)
            }
        })
        .collect();
    ModuleOperator::endo(h, blocks).expect("shapes match")
}

/// Real diagonal blocks with entries drawn from `[lo, hi]`.
pub fn real_diagonal(rng: &mut impl Rng, h: &SpaceRef, lo: f64, hi: f64) -> ModuleOperator {
    let blocks = h
        .dims()
        .iter()
        .map(|&n| spectral::real_diag(&(0..n).map(|_| rng.random_range(lo..=hi)).collect::<Vec<_>>()))
        .collect();
    ModuleOperator::endo(h, blocks).expect("shapes match")
}

/// Complex diagonal blocks with moduli in `[lo, hi]` and uniform phases.
pub fn complex_diagonal(rng: &mut impl Rng, h: &SpaceRef, lo: f64, hi: f64) -> ModuleOperator {
    let blocks = h
        .dims()
        .iter()
        .map(|&n| {
            CMatrix::from_diagonal(&CVector::from_fn(n, |_, _| {
                let r = rng.random_range(lo..=hi);
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, t)
            }))
        })
        .collect();
    ModuleOperator::endo(h, blocks).expect("shapes match")
}

/// Positive invertible operator `W^{-1/2} P W^{1/2}` with `P` HPD, spectrum in `[lo, hi]`.
pub fn glplus(rng: &mut impl Rng, h: &SpaceRef, lo: f64, hi: f64) -> ModuleOperator {
    let blocks = h.fibers().iter().map(|f| f.weight_inv_sqrt() * hpd(rng, f.dim(), lo, hi) * f.weight_sqrt()).collect();
    ModuleOperator::endo(h, blocks).expect("shapes match")
}

/// `W^{-1/2} U W^{1/2}` with `U` unitary: an isometry of the weighted fiber.
pub fn weighted_unitary(rng: &mut impl Rng, h: &SpaceRef) -> ModuleOperator {
    let blocks = h.fibers().iter().map(|f| f.weight_inv_sqrt() * unitary(rng, f.dim()) * f.weight_sqrt()).collect();
    ModuleOperator::endo(h, blocks).expect("shapes match")
}

/// Shape limits for [`commuting_system`].
#[derive(Debug, Clone, Copy)]
pub struct SystemShape {
    pub max_d: usize,
    pub max_n: usize,
    pub max_family: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape { max_d: 4, max_n: 6, max_family: 8 }
    }
}

/// How the operator `K` of a random system is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KKind {
    Identity,
    /// Complex diagonal with moduli in `[1, 2]`; commutes with diagonal controls and `Q`.
    Diagonal,
    /// Dense random operator.
    Dense,
    /// Dense with rank deficiency on every fiber of dimension > 1.
    Singular,
}

/// Random system whose controls commute with each other and with every `T_i* T_i`.
///
/// Weights and controls are real diagonal; each `T_i = V_i D_i` with `V_i` a
/// weighted isometry and `D_i` complex diagonal, so `T_i* T_i = D_i* D_i`.
pub fn commuting_system(rng: &mut impl Rng, shape: SystemShape, k_kind: KKind) -> Result<ControlledFrameSystem> {
    let dims = dims(rng, shape.max_d, shape.max_n);
    let h = space(rng, &dims, WeightKind::Diagonal)?;
    let count = rng.random_range(1..=shape.max_family);
    let family = (0..count)
        .map(|_| {
            let v = weighted_unitary(rng, &h);
            let d = complex_diagonal(rng, &h, 0.2, 1.5);
            v.compose(&d)
        })
        .collect::<Result<Vec<_>>>()?;
    let c = real_diagonal(rng, &h, 0.5, 2.0);
    let c_prime = real_diagonal(rng, &h, 0.5, 2.0);
    let k = match k_kind {
        KKind::Identity => ModuleOperator::identity(&h),
        KKind::Diagonal => complex_diagonal(rng, &h, 1.0, 2.0),
        KKind::Dense => operator(rng, &h),
        KKind::Singular => singular_operator(rng, &h),
    };
    ControlledFrameSystem::new(h, family, c, c_prime, k)
}

/// Random homomorphism out of `source` onto `d_target` characters: `σ` uniform,
/// target weights dense, `Θ_k = V_k^{-1/2} U_k W_{σ(k)}^{1/2}` with `U_k` unitary.
pub fn homomorphism(rng: &mut impl Rng, source: &SpaceRef, d_target: usize) -> Result<HomomorphismSpec> {
    let sigma: Vec<usize> = (0..d_target).map(|_| rng.random_range(0..source.num_fibers())).collect();
    let weights: Vec<CMatrix> = sigma.iter().map(|&s| hpd(rng, source.fiber(s).dim(), 0.25, 4.0)).collect();
    let target = ModuleSpace::from_weights(Algebra::new(d_target)?, weights)?;
    let theta = sigma
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let f = source.fiber(s);
            target.fiber(k).weight_inv_sqrt() * unitary(rng, f.dim()) * f.weight_sqrt()
        })
        .collect();
    HomomorphismSpec::new(source.clone(), target, sigma, theta)
}

/// Complex diagonal operator with one zeroed diagonal entry: singular, and
/// commuting with every diagonal operator.
pub fn singular_diagonal(rng: &mut impl Rng, h: &SpaceRef, lo: f64, hi: f64) -> ModuleOperator {
    let d = complex_diagonal(rng, h, lo, hi);
    let j = rng.random_range(0..h.num_fibers());
    let i = rng.random_range(0..h.fiber(j).dim());
    let mut blocks = d.blocks().to_vec();
    blocks[j][(i, i)] = c64(0.0);
    ModuleOperator::endo(h, blocks).expect("shapes match")
}
