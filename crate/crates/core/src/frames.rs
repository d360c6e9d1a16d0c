//! Controlled operator frames: frame operator, analysis and synthesis, and
//! optimal algebra-valued bound certificates.
//!
//! A family `{T_i}` with controls `C, C′ ∈ GL⁺(H)` and an operator `K` is a
//! controlled `K`-frame when there are strictly nonzero `A, B` with
//!
//! ```text
//! A ⟨K*x, K*x⟩ A*  ≤  Σ_i ⟨T_i C x, T_i C′ x⟩  ≤  B ⟨x, x⟩ B*    for all x.
//! ```
//!
//! Over the diagonal algebra both sides split into one Hermitian-form
//! inequality per fiber. With `Φ_j` the form of the middle sum, `Γ_j` the form
//! of `⟨K*x, K*x⟩` and `W_j` the weight, the tightest admissible bounds are
//!
//! ```text
//! |B_j|² = λ_max(Φ_j, W_j),    |A_j|² = inf { xᴴΦ_j x / xᴴΓ_j x : xᴴΓ_j x > 0 }.
//! ```
//!
//! Since `A` and `B` only enter through `A(·)A*` and `B(·)B*`, which depend on
//! `|A_j|²` and `|B_j|²` alone, certificates report the real nonnegative
//! representatives.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{FrameError, Result};
use crate::module_space::{require_same, ModuleVector, SpaceRef};
use crate::operators::{ModuleOperator, CLASSIFY_TOL};
use crate::random;
use crate::spectral::{
    self, c64, fro_norm, hermitian_part, pencil_extremes, restricted_pencil_argmin, CMatrix, CVector,
};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_TIGHT_TOL: f64 = 1e-8;

/// Knobs for [`certify`]: sampling for the residual diagnostics and the tightness tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub tight_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { samples: DEFAULT_SAMPLES, seed: 0, tight_tol: DEFAULT_TIGHT_TOL }
    }
}

/// Which commutation hypotheses hold for a system, with their relative residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutationFlags {
    /// `C C′ = C′ C`.
    pub controls: bool,
    pub controls_residual: f64,
    /// `C` and `C′` commute with every `T_i* T_i`.
    pub grams: bool,
    pub grams_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ControlledFrameSystem {
    space: SpaceRef,
    family: Vec<ModuleOperator>,
    c: ModuleOperator,
    c_prime: ModuleOperator,
    k: ModuleOperator,
    flags: CommutationFlags,
}

impl ControlledFrameSystem {
    pub fn new(
        space: SpaceRef,
        family: Vec<ModuleOperator>,
        c: ModuleOperator,
        c_prime: ModuleOperator,
        k: ModuleOperator,
    ) -> Result<Self> {
        for (i, t) in family.iter().enumerate() {
            require_same(&space, t.domain(), &format!("family member {i} acts on another module"))?;
            require_same(&space, t.codomain(), &format!("family member {i} is not an endomorphism"))?;
        }
        for (name, op) in [("C", &c), ("C'", &c_prime), ("K", &k)] {
            require_same(&space, op.domain(), &format!("{name} acts on another module"))?;
            require_same(&space, op.codomain(), &format!("{name} is not an endomorphism"))?;
        }
        if !c.classify()?.glplus {
            return Err(FrameError::NotGlPlus("C".into()));
        }
        if !c_prime.classify()?.glplus {
            return Err(FrameError::NotGlPlus("C'".into()));
        }
        let flags = commutation_flags(&family, &c, &c_prime)?;
        Ok(ControlledFrameSystem { space, family, c, c_prime, k, flags })
    }

    /// Uncontrolled `*`-operator frame data: `C = C′ = K = I`.
    pub fn plain(space: SpaceRef, family: Vec<ModuleOperator>) -> Result<Self> {
        let id = ModuleOperator::identity(&space);
        ControlledFrameSystem::new(space, family, id.clone(), id.clone(), id)
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn algebra(&self) -> &Algebra {
        self.space.algebra()
    }

    pub fn family(&self) -> &[ModuleOperator] {
        &self.family
    }

    pub fn c(&self) -> &ModuleOperator {
        &self.c
    }

    pub fn c_prime(&self) -> &ModuleOperator {
        &self.c_prime
    }

    pub fn k(&self) -> &ModuleOperator {
        &self.k
    }

    pub fn flags(&self) -> CommutationFlags {
        self.flags
    }

    pub fn with_k(&self, k: ModuleOperator) -> Result<Self> {
        ControlledFrameSystem::new(
            Arc::clone(&self.space),
            self.family.clone(),
            self.c.clone(),
            self.c_prime.clone(),
            k,
        )
    }

    pub fn with_family(&self, family: Vec<ModuleOperator>) -> Result<Self> {
        ControlledFrameSystem::new(
            Arc::clone(&self.space),
            family,
            self.c.clone(),
            self.c_prime.clone(),
            self.k.clone(),
        )
    }

    pub fn with_controls(&self, c: ModuleOperator, c_prime: ModuleOperator) -> Result<Self> {
        ControlledFrameSystem::new(Arc::clone(&self.space), self.family.clone(), c, c_prime, self.k.clone())
    }

    /// Hermitian form of `x ↦ Re Σ_i ⟨T_i C x, T_i C′ x⟩_j` on fiber `j`.
    pub fn middle_form(&self, j: usize) -> CMatrix {
        hermitian_part(&self.middle_form_raw(j))
    }

    /// `Σ_i C′ᴴ T_iᴴ W T_i C`, before symmetrisation.
    fn middle_form_raw(&self, j: usize) -> CMatrix {
        let w = self.space.fiber(j).weight();
        let n = self.space.fiber(j).dim();
        let (c, cp) = (self.c.block(j), self.c_prime.block(j));
        self.family.iter().fold(CMatrix::zeros(n, n), |acc, t| {
            let tb = t.block(j);
            acc + cp.adjoint() * tb.adjoint() * w * tb * c
        })
    }

    /// Hermitian form of `x ↦ ⟨K* x, K* x⟩_j`.
    pub fn k_form(&self, j: usize) -> CMatrix {
        self.k.adjoint_gram_form(j)
    }

    /// Per-fiber form data of the frame inequality.
    pub fn fiber_forms(&self) -> Vec<FiberForms> {
        (0..self.space.num_fibers())
            .map(|j| FiberForms {
                weight: self.space.fiber(j).weight().clone(),
                middle: self.middle_form(j),
                k_gram: self.k_form(j),
            })
            .collect()
    }

    /// The three algebra-valued quantities of the frame inequality at `x`, without bounds:
    /// `(⟨K*x, K*x⟩, Σ_i ⟨T_i C x, T_i C′ x⟩, ⟨x, x⟩)`.
    pub fn evaluate(&self, x: &ModuleVector) -> Result<(AlgebraElement, AlgebraElement, AlgebraElement)> {
        require_same(&self.space, x.space(), "vector outside the system's module")?;
        let kx = self.k.adjoint().apply(x)?;
        let cx = self.c.apply(x)?;
        let cpx = self.c_prime.apply(x)?;
        let mut middle = self.algebra().zero();
        for t in &self.family {
            middle = &middle + &t.apply(&cx)?.inner_product(&t.apply(&cpx)?)?;
        }
        Ok((kx.inner_product(&kx)?, middle, x.inner_product(x)?))
    }
}

fn commutation_flags(
    family: &[ModuleOperator],
    c: &ModuleOperator,
    c_prime: &ModuleOperator,
) -> Result<CommutationFlags> {
    let controls_residual = c.commutator_residual(c_prime)?;
    let mut grams_residual: f64 = 0.0;
    for t in family {
        let gram = t.adjoint().compose(t)?;
        grams_residual = grams_residual.max(c.commutator_residual(&gram)?).max(c_prime.commutator_residual(&gram)?);
    }
    Ok(CommutationFlags {
        controls: controls_residual <= CLASSIFY_TOL,
        controls_residual,
        grams: grams_residual <= CLASSIFY_TOL,
        grams_residual,
    })
}

/// Weight, middle form and `K`-form of one fiber.
#[derive(Debug, Clone)]
pub struct FiberForms {
    pub weight: CMatrix,
    pub middle: CMatrix,
    pub k_gram: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameStatus {
    Frame,
    BesselOnly,
    NotFrame,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameCertificate {
    /// Lower bound `A`, real nonnegative per fiber.
    pub lower: AlgebraElement,
    /// Upper bound `B`, real nonnegative per fiber.
    pub upper: AlgebraElement,
    pub tight: bool,
    pub lower_residual: f64,
    pub upper_residual: f64,
    pub status: FrameStatus,
    /// Fibers on which `⟨K*x, K*x⟩` vanishes identically, so the lower inequality is void there.
    pub vacuous: Vec<bool>,
    pub samples: usize,
    pub seed: u64,
}

/// Optimal lower bound of the frame inequality together with its feasibility.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBound {
    pub value: AlgebraElement,
    pub vacuous: Vec<bool>,
    /// Strictly nonzero on every fiber.
    pub feasible: bool,
}

/// Outcome of the per-fiber bound computation.
#[derive(Debug, Clone)]
pub struct FormBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub vacuous: Vec<bool>,
    pub tight: bool,
    pub status: FrameStatus,
}

fn upper_sq(f: &FiberForms) -> Result<f64> {
    Ok(pencil_extremes(&f.middle, &f.weight)?.lambda_max.max(0.0))
}

/// `|A_j|²` or `None` when the `K`-form vanishes (vacuous fiber).
/// Squared lower bounds below this fraction of `‖Φ_j‖/‖Γ_j‖` are rounding noise.
pub const ZERO_LOWER_RTOL: f64 = 1e-12;

fn lower_sq(f: &FiberForms) -> Result<Option<f64>> {
    let lam = pencil_extremes(&f.middle, &f.weight)?;
    let scale = lam.lambda_max.abs().max(lam.lambda_min.abs());
    if lam.lambda_min < -CLASSIFY_TOL * scale {
        // the middle sum is negative somewhere: no A can sit below it
        return Ok(Some(0.0));
    }
    if fro_norm(&f.k_gram) == 0.0 {
        return Ok(None);
    }
    let middle = psd_clamped(&f.middle);
    let gram = psd_clamped(&f.k_gram);
    // eigen-solver noise of order `ε‖Φ‖/‖Γ‖` would otherwise survive the square root as `√ε`
    let noise = ZERO_LOWER_RTOL * fro_norm(&middle) / fro_norm(&gram);
    match restricted_pencil_argmin(&middle, &gram)? {
        (v, _) if v.is_infinite() => Ok(None),
        (v, _) if v <= noise => Ok(Some(0.0)),
        (v, _) => Ok(Some(v)),
    }
}

/// Projects tiny negative eigenvalues (rounding noise) back to zero.
fn psd_clamped(m: &CMatrix) -> CMatrix {
    spectral::hermitian_fn(m, |l| l.max(0.0))
}

/// Optimal fiberwise bounds from form data alone.
pub fn bounds_from_forms(algebra: &Algebra, forms: &[FiberForms], tight_tol: f64) -> Result<FormBounds> {
    let mut lower = Vec::with_capacity(forms.len());
    let mut upper = Vec::with_capacity(forms.len());
    let mut vacuous = Vec::with_capacity(forms.len());
    let mut tight = true;
    for f in forms {
        let b = upper_sq(f)?.sqrt();
        match lower_sq(f)? {
            Some(a2) => {
                let a = a2.sqrt();
                let residual = fro_norm(&(&f.middle - f.k_gram.scale(a2)));
                if residual > tight_tol * fro_norm(&f.middle).max(f64::MIN_POSITIVE) {
                    tight = false;
                }
                lower.push(a);
                upper.push(b);
                vacuous.push(false);
            }
            None => {
                // no K-direction on this fiber: any A is admissible
                if b <= algebra.eps_nz() {
                    lower.push(1.0);
                    upper.push(1.0);
                } else {
                    lower.push(b);
                    upper.push(b);
                    tight = false;
                }
                vacuous.push(true);
            }
        }
    }
    let a = AlgebraElement::from_real(&lower);
    let b = AlgebraElement::from_real(&upper);
    let status = match (algebra.is_strictly_nonzero(&a), algebra.is_strictly_nonzero(&b)) {
        (true, true) => FrameStatus::Frame,
        (false, true) => FrameStatus::BesselOnly,
        _ => FrameStatus::NotFrame,
    };
    let tight = tight && status == FrameStatus::Frame;
    Ok(FormBounds { lower, upper, vacuous, tight, status })
}

/// Frame operator `S = Σ_i C′ T_i* T_i C`.
pub fn frame_operator(sys: &ControlledFrameSystem) -> Result<ModuleOperator> {
    if sys.family.is_empty() {
        return Err(FrameError::BadParameters("frame operator of an empty family".into()));
    }
    let mut s = ModuleOperator::zero(&sys.space);
    for t in &sys.family {
        let term = sys.c_prime.compose(&t.adjoint().compose(t)?.compose(&sys.c)?)?;
        s = s.add(&term)?;
    }
    Ok(s)
}

fn require_controls_commute(sys: &ControlledFrameSystem) -> Result<()> {
    if !sys.flags.controls {
        return Err(FrameError::NotCommuting { what: "C C' = C' C".into(), residual: sys.flags.controls_residual });
    }
    Ok(())
}

/// `(C C′)^{1/2}`; requires the controls to commute.
pub fn control_root(sys: &ControlledFrameSystem) -> Result<ModuleOperator> {
    require_controls_commute(sys)?;
    sys.c.compose(&sys.c_prime)?.sqrt()
}

/// Analysis map `x ↦ {T_i (C C′)^{1/2} x}_i`.
pub fn analysis(sys: &ControlledFrameSystem, x: &ModuleVector) -> Result<Vec<ModuleVector>> {
    let root = control_root(sys)?;
    let rx = root.apply(x)?;
    sys.family.iter().map(|t| t.apply(&rx)).collect()
}

/// Synthesis map `{a_i} ↦ Σ_i (C C′)^{1/2} T_i* a_i`.
pub fn synthesis(sys: &ControlledFrameSystem, seq: &[ModuleVector]) -> Result<ModuleVector> {
    if seq.len() != sys.family.len() {
        return Err(FrameError::LengthMismatch { expected: sys.family.len(), got: seq.len() });
    }
    let root = control_root(sys)?;
    let mut acc = sys.space.zero_vector();
    for (t, a) in sys.family.iter().zip(seq) {
        acc = acc.add(&t.adjoint().apply(a)?)?;
    }
    root.apply(&acc)
}

/// `⟨a, b⟩ = Σ_i ⟨a_i, b_i⟩_A` on finite sequences.
pub fn sequence_inner_product(a: &[ModuleVector], b: &[ModuleVector]) -> Result<AlgebraElement> {
    if a.len() != b.len() {
        return Err(FrameError::LengthMismatch { expected: a.len(), got: b.len() });
    }
    let first = a.first().ok_or_else(|| FrameError::BadParameters("empty sequence".into()))?;
    let mut acc = first.space().algebra().zero();
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &x.inner_product(y)?;
    }
    Ok(acc)
}

pub fn optimal_upper_bound(sys: &ControlledFrameSystem) -> Result<AlgebraElement> {
    let values = sys.fiber_forms().iter().map(|f| upper_sq(f).map(f64::sqrt)).collect::<Result<Vec<_>>>()?;
    Ok(AlgebraElement::from_real(&values))
}

pub fn optimal_lower_bound(sys: &ControlledFrameSystem) -> Result<LowerBound> {
    let b = bounds_from_forms(sys.algebra(), &sys.fiber_forms(), DEFAULT_TIGHT_TOL)?;
    let value = AlgebraElement::from_real(&b.lower);
    let feasible = sys.algebra().is_strictly_nonzero(&value);
    Ok(LowerBound { value, vacuous: b.vacuous, feasible })
}

/// Optimal certificate with sampled residual diagnostics.
pub fn certify(sys: &ControlledFrameSystem) -> Result<FrameCertificate> {
    certify_with(sys, &CertifyConfig::default())
}

pub fn certify_with(sys: &ControlledFrameSystem, config: &CertifyConfig) -> Result<FrameCertificate> {
    let b = bounds_from_forms(sys.algebra(), &sys.fiber_forms(), config.tight_tol)?;
    let lower = AlgebraElement::from_real(&b.lower);
    let upper = AlgebraElement::from_real(&b.upper);
    let (lower_residual, upper_residual) = sampled_residuals(sys, &lower, &upper, config.samples, config.seed)?;
    Ok(FrameCertificate {
        lower,
        upper,
        tight: b.tight,
        lower_residual,
        upper_residual,
        status: b.status,
        vacuous: b.vacuous,
        samples: config.samples,
        seed: config.seed,
    })
}

/// Worst relative violations of the lower and upper inequality over random vectors.
pub fn sampled_residuals(
    sys: &ControlledFrameSystem,
    lower: &AlgebraElement,
    upper: &AlgebraElement,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let mut rng = random::seeded(seed);
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = random::vector(&mut rng, &sys.space);
        let q = BoundQuantities::at(sys, lower, upper, &x)?;
        for j in 0..q.middle.len() {
            let scale = q.scale(j);
            if scale > 0.0 {
                lo = lo.max((q.lower[j] - q.middle[j]) / scale);
                hi = hi.max((q.middle[j] - q.upper[j]) / scale);
            }
        }
    }
    Ok((lo, hi))
}

/// Real parts of `A⟨K*x,K*x⟩A*`, the middle sum and `B⟨x,x⟩B*` per fiber.
#[derive(Debug, Clone)]
struct BoundQuantities {
    lower: Vec<f64>,
    middle: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundQuantities {
    fn at(sys: &ControlledFrameSystem, a: &AlgebraElement, b: &AlgebraElement, x: &ModuleVector) -> Result<Self> {
        let (kk, mid, xx) = sys.evaluate(x)?;
        Ok(BoundQuantities { lower: a.sandwich(&kk).re(), middle: mid.re(), upper: b.sandwich(&xx).re() })
    }

    fn scale(&self, j: usize) -> f64 {
        self.lower[j].abs().max(self.middle[j].abs()).max(self.upper[j].abs())
    }
}

/// Result of evaluating the frame inequality at one vector.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `Σ⟨T_iCx, T_iC′x⟩ − A⟨K*x,K*x⟩A*`.
    pub lower_slack: AlgebraElement,
    /// `B⟨x,x⟩B* − Σ⟨T_iCx, T_iC′x⟩`.
    pub upper_slack: AlgebraElement,
}

/// Evaluate both inequalities at `x`, with the algebra's positivity tolerance.
pub fn check_at(sys: &ControlledFrameSystem, cert: &FrameCertificate, x: &ModuleVector) -> Result<CheckReport> {
    check_bounds_at(sys, &cert.lower, &cert.upper, x, sys.algebra().eps_pos())
}

/// Evaluate both inequalities at `x` for arbitrary bounds; slack may undershoot
/// zero by `tol` times the largest of the three quantities on each fiber.
pub fn check_bounds_at(
    sys: &ControlledFrameSystem,
    lower: &AlgebraElement,
    upper: &AlgebraElement,
    x: &ModuleVector,
    tol: f64,
) -> Result<CheckReport> {
    let d = sys.algebra().dim();
    if lower.len() != d || upper.len() != d {
        return Err(FrameError::SpaceMismatch("bounds from a different algebra".into()));
    }
    let q = BoundQuantities::at(sys, lower, upper, x)?;
    let mut lower_ok = true;
    let mut upper_ok = true;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for j in 0..d {
        let slack_lo = q.middle[j] - q.lower[j];
        let slack_hi = q.upper[j] - q.middle[j];
        let allowance = tol * q.scale(j);
        lower_ok &= slack_lo >= -allowance;
        upper_ok &= slack_hi >= -allowance;
        lo.push(slack_lo);
        hi.push(slack_hi);
    }
    Ok(CheckReport {
        lower_ok,
        upper_ok,
        lower_slack: AlgebraElement::from_real(&lo),
        upper_slack: AlgebraElement::from_real(&hi),
    })
}

/// Vectors attaining the optimal bounds on one fiber.
#[derive(Debug, Clone)]
pub struct FiberWitness {
    pub fiber: usize,
    /// Attains `B_j`; zero outside fiber `j`.
    pub upper: ModuleVector,
    /// Attains `A_j` when the fiber is not vacuous.
    pub lower: Option<ModuleVector>,
}

/// Extremal generalized eigenvectors attaining the optimal bounds, one set per fiber.
pub fn extremal_witnesses(sys: &ControlledFrameSystem) -> Result<Vec<FiberWitness>> {
    let forms = sys.fiber_forms();
    let mut out = Vec::with_capacity(forms.len());
    for (j, f) in forms.iter().enumerate() {
        let embed = |v: CVector| -> Result<ModuleVector> {
            let mut parts: Vec<CVector> = sys.space.dims().iter().map(|&n| CVector::zeros(n)).collect();
            parts[j] = v;
            sys.space.vector(parts)
        };
        let upper = embed(pencil_extremes(&f.middle, &f.weight)?.vec_max)?;
        let lower = if fro_norm(&f.k_gram) == 0.0 {
            None
        } else {
            match restricted_pencil_argmin(&psd_clamped(&f.middle), &psd_clamped(&f.k_gram))? {
                (_, Some(v)) => Some(embed(v)?),
                _ => None,
            }
        };
        out.push(FiberWitness { fiber: j, upper, lower });
    }
    Ok(out)
}

/// Output of [`reconstruct`] / [`solve_frame_equation`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub direct: ModuleVector,
    /// Richardson iterate, present when `S` is self-adjoint and positive.
    pub iterative: Option<ModuleVector>,
    pub iterations: usize,
    pub converged: bool,
    /// Spectral bounds of `S` used for the relaxation parameter.
    pub lambda_min: f64,
    pub lambda_max: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RichardsonConfig {
    /// Target relative error of the reconstructed vector.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RichardsonConfig {
    fn default() -> Self {
        RichardsonConfig { tol: 1e-9, max_iter: 100_000 }
    }
}

/// Solve `S z = y` directly and with the Richardson iteration
/// `z_{k+1} = z_k + ω (y − S z_k)`, `ω = 2 / (λ_min + λ_max)`.
pub fn solve_frame_equation(
    sys: &ControlledFrameSystem,
    y: &ModuleVector,
    config: RichardsonConfig,
) -> Result<Reconstruction> {
    let s = frame_operator(sys)?;
    let class = s.classify()?;
    if !class.invertible {
        return Err(FrameError::SingularFrameOperator);
    }
    let direct = s.inverse()?.apply(y)?;

    let (mut lambda_min, mut lambda_max) = (f64::INFINITY, 0.0f64);
    for j in 0..sys.space.num_fibers() {
        let r = pencil_extremes(&hermitian_part(&s.form_block(j)), sys.space.fiber(j).weight())?;
        lambda_min = lambda_min.min(r.lambda_min);
        lambda_max = lambda_max.max(r.lambda_max);
    }
    if !class.positive || lambda_min <= 0.0 {
        return Ok(Reconstruction { direct, iterative: None, iterations: 0, converged: false, lambda_min, lambda_max });
    }

    let omega = c64(2.0 / (lambda_min + lambda_max));
    let kappa = lambda_max / lambda_min;
    let target = config.tol * y.norm() / kappa;
    let mut z = sys.space.zero_vector();
    let mut residual = y.clone();
    let mut iterations = 0;
    while residual.norm() > target && iterations < config.max_iter {
        z = z.add(&residual.scale(omega))?;
        residual = y.sub(&s.apply(&z)?)?;
        iterations += 1;
    }
    let converged = residual.norm() <= target;
    Ok(Reconstruction { direct, iterative: Some(z), iterations, converged, lambda_min, lambda_max })
}

/// Recover `x` from `S x`.
pub fn reconstruct(sys: &ControlledFrameSystem, x: &ModuleVector) -> Result<Reconstruction> {
    let y = frame_operator(sys)?.apply(x)?;
    solve_frame_equation(sys, &y, RichardsonConfig::default())
}

/// Worst relative deviation `max_j |a_j − b_j| / max(|a_j|, |b_j|)`.
pub fn relative_gap(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y): (&Complex64, &Complex64)| {
            let scale = x.norm().max(y.norm());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests;
