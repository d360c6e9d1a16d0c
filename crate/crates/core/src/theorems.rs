//! Constructive bound transfers between controlled frame systems.
//!
//! Each transform builds the target system, derives bounds from the source
//! certificate by the classical argument, and verifies them against the target:
//! by exact per-fiber form inequalities and by sampling the frame inequality.
//! The optimal bounds of the target are reported next to the derived ones.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{FrameError, Result};
use crate::frames::{
    certify_with, check_bounds_at, extremal_witnesses, frame_operator, CertifyConfig, ControlledFrameSystem,
    FrameCertificate, FrameStatus,
};
use crate::module_space::{require_same, ModuleVector, SpaceRef};
use crate::operators::{ModuleOperator, CLASSIFY_TOL};
use crate::random;
use crate::spectral::{self, fro_norm, pencil_extremes, pinv, sigma_max, sigma_min, CMatrix, DEFAULT_RTOL};

/// Relative residual allowed for solutions of `T X = T′`.
pub const DOUGLAS_TOL: f64 = 1e-9;
/// Relative residual allowed for the inner-product intertwining of a homomorphism.
pub const INTERTWINING_TOL: f64 = 1e-10;
/// Below this, `adjoint_lower_bound` counts as zero.
pub const SURJECTIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Relative slack allowed in the frame inequality.
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 1000, seed: 0, tol: 1e-9 }
    }
}

/// A named side condition checked by a transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Check {
        Check { name: name.into(), passed: value <= limit, value }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformReport {
    pub transform: String,
    pub derived_lower: AlgebraElement,
    pub derived_upper: AlgebraElement,
    /// Optimal bounds of the target system, for comparison.
    pub optimal_lower: AlgebraElement,
    pub optimal_upper: AlgebraElement,
    pub verified: bool,
    /// Worst relative violation of the derived bounds (zero when none).
    pub residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub checks: Vec<Check>,
    /// Vectors attaining the optimal lower bound of the target, one per non-vacuous fiber.
    #[serde(skip)]
    pub witnesses: Vec<ModuleVector>,
}

/// Worst relative violation of the derived bounds, from the form inequalities
/// `Φ_j − |a_j|² Γ_j ≥ 0` and `λ_max(Φ_j, W_j) ≤ |b_j|²`.
pub fn form_violation(sys: &ControlledFrameSystem, lower: &AlgebraElement, upper: &AlgebraElement) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, f) in sys.fiber_forms().iter().enumerate() {
        let a2 = lower.get(j).norm_sqr();
        let b2 = upper.get(j).norm_sqr();
        let lower_gap = spectral::min_eigenvalue(&(&f.middle - f.k_gram.scale(a2)));
        let scale = fro_norm(&f.middle).max(a2 * fro_norm(&f.k_gram));
        if scale > 0.0 {
            worst = worst.max(-lower_gap / scale);
        }
        let top = pencil_extremes(&f.middle, &f.weight)?.lambda_max;
        let scale = top.abs().max(b2);
        if scale > 0.0 {
            worst = worst.max((top - b2) / scale);
        }
    }
    Ok(worst)
}

/// Worst relative violation of the derived bounds over random vectors.
pub fn sampled_violation(
    sys: &ControlledFrameSystem,
    lower: &AlgebraElement,
    upper: &AlgebraElement,
    config: &VerifyConfig,
) -> Result<(usize, f64)> {
    let mut rng = random::seeded(config.seed);
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..config.samples {
        let x = random::vector(&mut rng, sys.space());
        let r = check_bounds_at(sys, lower, upper, &x, config.tol)?;
        if !(r.lower_ok && r.upper_ok) {
            failures += 1;
        }
        let (kk, mid, xx) = sys.evaluate(&x)?;
        for j in 0..mid.len() {
            let lo = lower.sandwich(&kk).get(j).re;
            let hi = upper.sandwich(&xx).get(j).re;
            let m = mid.get(j).re;
            let scale = lo.abs().max(m.abs()).max(hi.abs());
            if scale > 0.0 {
                worst = worst.max((lo - m) / scale).max((m - hi) / scale);
            }
        }
    }
    Ok((failures, worst))
}

fn report(
    transform: &str,
    target: &ControlledFrameSystem,
    derived_lower: AlgebraElement,
    derived_upper: AlgebraElement,
    config: &VerifyConfig,
    checks: Vec<Check>,
) -> Result<TransformReport> {
    let optimal = certify_with(target, &CertifyConfig { samples: 0, seed: config.seed, ..CertifyConfig::default() })?;
    let form = form_violation(target, &derived_lower, &derived_upper)?;
    let (failures, sampled) = sampled_violation(target, &derived_lower, &derived_upper, config)?;
    let residual = form.max(sampled).max(0.0);
    let verified = failures == 0 && form <= config.tol && checks.iter().all(|c| c.passed);
    let witnesses = extremal_witnesses(target)?.into_iter().filter_map(|w| w.lower).collect();
    Ok(TransformReport {
        transform: transform.into(),
        derived_lower,
        derived_upper,
        optimal_lower: optimal.lower,
        optimal_upper: optimal.upper,
        verified,
        residual,
        tolerance: config.tol,
        samples: config.samples,
        checks,
        witnesses,
    })
}

fn require_frame(cert: &FrameCertificate, what: &str) -> Result<()> {
    if cert.status != FrameStatus::Frame {
        return Err(FrameError::PreconditionUnverified(format!("{what} is not certified as a frame")));
    }
    Ok(())
}

fn require_identity(op: &ModuleOperator, what: &str) -> Result<()> {
    let id = ModuleOperator::identity(op.domain());
    if op.relative_distance(&id) > CLASSIFY_TOL {
        return Err(FrameError::BadParameters(format!("{what} must be the identity")));
    }
    Ok(())
}

/// Solution of `T X = T′` with the smallest norm.
#[derive(Debug, Clone)]
pub struct DouglasSolution {
    pub d: ModuleOperator,
    /// `‖D‖²`, the smallest `λ` with `T′T′* ≤ λ T T*`.
    pub lambda: f64,
    /// `‖T D − T′‖ / ‖T′‖`.
    pub residual: f64,
    /// Worst relative negativity of `λ ⟨T*x,T*x⟩ − ⟨T′*x,T′*x⟩` over fibers.
    pub majorization_gap: f64,
}

/// Factor `T′ = T D` when `R(T′) ⊆ R(T)`.
///
/// Works in orthonormal coordinates of each fiber, where the minimal solution is
/// `M⁺ M′`; its norm is the optimal majorization constant.
pub fn douglas_solve(t: &ModuleOperator, t_prime: &ModuleOperator) -> Result<DouglasSolution> {
    require_same(t.codomain(), t_prime.codomain(), "Douglas factorisation needs a common codomain")?;
    let (e, f) = (t.domain(), t_prime.domain());
    let mut blocks = Vec::with_capacity(t.blocks().len());
    let mut lambda: f64 = 0.0;
    for j in 0..t.blocks().len() {
        let m = t.whitened_block(j);
        let mp = t_prime.whitened_block(j);
        let dw = pinv(&m, DEFAULT_RTOL) * mp;
        lambda = lambda.max(sigma_max(&dw).powi(2));
        blocks.push(e.fiber(j).weight_inv_sqrt() * dw * f.fiber(j).weight_sqrt());
    }
    let d = ModuleOperator::new(Arc::clone(f), Arc::clone(e), blocks)?;
    let scale = t_prime.norm();
    let miss = t.compose(&d)?.distance(t_prime)?;
    let residual = if scale == 0.0 { miss } else { miss / scale };
    if residual > DOUGLAS_TOL {
        return Err(FrameError::NotIncluded { residual });
    }
    let mut majorization_gap: f64 = 0.0;
    for j in 0..t.blocks().len() {
        let big = t.adjoint_gram_form(j).scale(lambda);
        let small = t_prime.adjoint_gram_form(j);
        let scale = fro_norm(&big).max(fro_norm(&small));
        if scale > 0.0 {
            majorization_gap = majorization_gap.max(-spectral::min_eigenvalue(&(big - small)) / scale);
        }
    }
    Ok(DouglasSolution { d, lambda, residual, majorization_gap })
}

/// A frame for `K = I` is a `K`-frame with bounds `(A/‖K‖, B)`.
pub fn derive_k_frame(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    k: &ModuleOperator,
    config: &VerifyConfig,
) -> Result<TransformReport> {
    require_identity(sys.k(), "K of the source system")?;
    require_frame(cert, "source system")?;
    let norm = k.norm();
    if norm == 0.0 {
        return Err(FrameError::ZeroOperator);
    }
    let target = sys.with_k(k.clone())?;
    let checks = vec![Check { name: "norm_k".into(), passed: true, value: norm }];
    report("derive_k_frame", &target, cert.lower.scale(1.0 / norm), cert.upper.clone(), config, checks)
}

/// A `K`-frame with `K` surjective is a frame for `K = I` with bounds `(A√m, B)`,
/// `m` the lower bound of `⟨K*x, K*x⟩ ≥ m ⟨x, x⟩`.
pub fn upgrade_by_surjectivity(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    config: &VerifyConfig,
) -> Result<TransformReport> {
    require_frame(cert, "source system")?;
    let m = sys.k().adjoint_lower_bound();
    if m <= SURJECTIVITY_TOL {
        return Err(FrameError::NotSurjective(m));
    }
    let target = sys.with_k(ModuleOperator::identity(sys.space()))?;
    let checks = vec![Check { name: "adjoint_lower_bound".into(), passed: true, value: m }];
    report("upgrade_by_surjectivity", &target, cert.lower.scale(m.sqrt()), cert.upper.clone(), config, checks)
}

/// Add controls `C, C′` to an uncontrolled frame; bounds become `(A√m, B‖(CC′)^{1/2}‖)`.
///
/// Requires `C C′ = C′ C` and both controls commuting with every `T_i* T_i` and with `K`.
pub fn control_uncontrolled(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    c: &ModuleOperator,
    c_prime: &ModuleOperator,
    config: &VerifyConfig,
) -> Result<TransformReport> {
    require_identity(sys.c(), "C of the source system")?;
    require_identity(sys.c_prime(), "C' of the source system")?;
    require_frame(cert, "source system")?;
    let target = sys.with_controls(c.clone(), c_prime.clone())?;
    c.check_commutes(c_prime, "C C' = C' C")?;
    for (name, op) in [("C", c), ("C'", c_prime)] {
        op.check_commutes(sys.k(), &format!("{name} K = K {name}"))?;
        for (i, t) in sys.family().iter().enumerate() {
            op.check_commutes(&t.adjoint().compose(t)?, &format!("{name} with T_{i}* T_{i}"))?;
        }
    }
    let root = c.compose(c_prime)?.sqrt()?;
    let m = root.adjoint_lower_bound();
    let norm = root.norm();
    let checks = vec![
        Check { name: "control_lower_bound".into(), passed: m > 0.0, value: m },
        Check { name: "control_norm".into(), passed: true, value: norm },
    ];
    report("control_uncontrolled", &target, cert.lower.scale(m.sqrt()), cert.upper.scale(norm), config, checks)
}

/// `{T_i Q}` is a `(Q*K)`-frame with frame operator `Q* S Q` and bounds `(A, B‖Q‖)`.
pub fn compose_with_q(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    q: &ModuleOperator,
    config: &VerifyConfig,
) -> Result<(ControlledFrameSystem, TransformReport)> {
    require_frame(cert, "source system")?;
    q.check_commutes(sys.c(), "Q C = C Q")?;
    q.check_commutes(sys.c_prime(), "Q C' = C' Q")?;
    q.check_commutes(sys.k(), "Q K = K Q")?;
    let family = sys.family().iter().map(|t| t.compose(q)).collect::<Result<Vec<_>>>()?;
    let target = ControlledFrameSystem::new(
        Arc::clone(sys.space()),
        family,
        sys.c().clone(),
        sys.c_prime().clone(),
        q.adjoint().compose(sys.k())?,
    )?;
    let s = frame_operator(sys)?;
    let expected = q.adjoint().compose(&s)?.compose(q)?;
    let s_scale = s.norm();
    let miss = frame_operator(&target)?.distance(&expected)?;
    let identity = if s_scale == 0.0 { miss } else { miss / s_scale };
    let checks = vec![Check::at_most("frame_operator_identity", identity, 1e-10)];
    let r = report("compose_with_q", &target, cert.lower.clone(), cert.upper.scale(q.norm()), config, checks)?;
    Ok((target, r))
}

/// Optimal bounds `M, N` of `{T_i Q}` (same `K`) against the brackets
/// `A‖Q⁻¹‖⁻¹ ≤ M ≤ A‖Q‖` and `A‖Q⁻¹‖⁻¹ ≤ N ≤ B‖Q‖`, fiberwise in modulus.
///
/// The bracket `A‖Q⁻¹‖⁻¹ ≤ N` needs `A ≤ B` on each fiber, which holds when
/// every fiber of `K` has norm at least one but can fail otherwise; each bracket
/// is reported as its own check. The derived bounds `(A‖Q⁻¹‖⁻¹, B‖Q‖)` are verified
/// against the transformed system.
pub fn invertible_q_bounds(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    q: &ModuleOperator,
    config: &VerifyConfig,
) -> Result<(ControlledFrameSystem, TransformReport)> {
    require_frame(cert, "source system")?;
    let q_inv = q.inverse()?;
    q.check_commutes(sys.c(), "Q C = C Q")?;
    q.check_commutes(sys.c_prime(), "Q C' = C' Q")?;
    q_inv.check_commutes(sys.c(), "Q^-1 C = C Q^-1")?;
    q_inv.check_commutes(sys.c_prime(), "Q^-1 C' = C' Q^-1")?;
    q_inv.check_commutes(&sys.k().adjoint(), "Q^-1 K* = K* Q^-1")?;
    let family = sys.family().iter().map(|t| t.compose(q)).collect::<Result<Vec<_>>>()?;
    let target = sys.with_family(family)?;
    let best = certify_with(&target, &CertifyConfig { samples: 0, ..CertifyConfig::default() })?;

    let (qn, qi) = (q.norm(), 1.0 / q_inv.norm());
    let a = cert.lower.re();
    let b = cert.upper.re();
    let m = best.lower.re();
    let n = best.upper.re();
    // relative slack of `lo ≤ x`, negative when violated
    let slack = |lo: f64, x: f64| (x - lo) / lo.abs().max(x.abs()).max(f64::MIN_POSITIVE);
    let mut worst = [f64::INFINITY; 4];
    for j in 0..a.len() {
        worst[0] = worst[0].min(slack(a[j] * qi, m[j]));
        worst[1] = worst[1].min(slack(m[j], a[j] * qn));
        worst[2] = worst[2].min(slack(a[j] * qi, n[j]));
        worst[3] = worst[3].min(slack(n[j], b[j] * qn));
    }
    let names = ["m_lower", "m_upper", "n_lower", "n_upper"];
    let checks = names
        .iter()
        .zip(worst)
        .map(|(name, w)| Check { name: format!("bracket_{name}"), passed: w >= -config.tol, value: w })
        .collect();
    let r = report("invertible_q_bounds", &target, cert.lower.scale(qi), cert.upper.scale(qn), config, checks)?;
    Ok((target, r))
}

/// Index-map homomorphism `φ(a)_k = a_{σ(k)}` between diagonal algebras with
/// a fiberwise map `(θx)_k = Θ_k x_{σ(k)}` satisfying `⟨θx, θy⟩ = φ(⟨x, y⟩)`.
#[derive(Debug, Clone)]
pub struct HomomorphismSpec {
    source: SpaceRef,
    target: SpaceRef,
    sigma: Vec<usize>,
    theta: Vec<CMatrix>,
}

impl HomomorphismSpec {
    /// Validates shapes, the intertwining `Θ_kᴴ V_k Θ_k = W_{σ(k)}` and invertibility of each `Θ_k`.
    pub fn new(source: SpaceRef, target: SpaceRef, sigma: Vec<usize>, theta: Vec<CMatrix>) -> Result<Self> {
        let d_b = target.num_fibers();
        if sigma.len() != d_b {
            return Err(FrameError::LengthMismatch { expected: d_b, got: sigma.len() });
        }
        if theta.len() != d_b {
            return Err(FrameError::LengthMismatch { expected: d_b, got: theta.len() });
        }
        for (k, (&s, th)) in sigma.iter().zip(&theta).enumerate() {
            if s >= source.num_fibers() {
                return Err(FrameError::BadParameters(format!("character {k} maps to missing fiber {s}")));
            }
            let (n_a, n_b) = (source.fiber(s).dim(), target.fiber(k).dim());
            if th.shape() != (n_b, n_a) {
                return Err(FrameError::SpaceMismatch(format!(
                    "theta block {k} is {:?}, expected {:?}",
                    th.shape(),
                    (n_b, n_a)
                )));
            }
            let w = source.fiber(s).weight();
            let pulled = th.adjoint() * target.fiber(k).weight() * th;
            let residual = fro_norm(&(&pulled - w)) / fro_norm(w);
            if residual > INTERTWINING_TOL {
                return Err(FrameError::IntertwiningViolated { fiber: k, residual });
            }
            // with the intertwining in place Θ_k is injective; surjective iff square
            if n_a != n_b {
                return Err(FrameError::NotSurjective(0.0));
            }
        }
        Ok(HomomorphismSpec { source, target, sigma, theta })
    }

    pub fn source(&self) -> &SpaceRef {
        &self.source
    }

    pub fn target(&self) -> &SpaceRef {
        &self.target
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn theta_blocks(&self) -> &[CMatrix] {
        &self.theta
    }

    pub fn phi(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_values(self.sigma.iter().map(|&s| a.get(s)).collect())
    }

    pub fn theta(&self, x: &ModuleVector) -> Result<ModuleVector> {
        require_same(&self.source, x.space(), "theta applied outside its source module")?;
        self.target.vector(self.sigma.iter().zip(&self.theta).map(|(&s, th)| th * x.part(s)).collect())
    }

    /// The operator `T_B` on the target with `θ T = T_B θ`: blocks `Θ_k T_{σ(k)} Θ_k⁻¹`.
    pub fn transport_operator(&self, t: &ModuleOperator) -> Result<ModuleOperator> {
        require_same(&self.source, t.domain(), "operator outside the source module")?;
        require_same(&self.source, t.codomain(), "operator outside the source module")?;
        let blocks = self
            .sigma
            .iter()
            .zip(&self.theta)
            .map(|(&s, th)| {
                let inv = th.clone().try_inverse().ok_or_else(|| FrameError::NotSurjective(sigma_min(th)))?;
                Ok(th * t.block(s) * inv)
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleOperator::endo(&self.target, blocks)
    }

    pub fn transport_system(&self, sys: &ControlledFrameSystem) -> Result<ControlledFrameSystem> {
        let family = sys.family().iter().map(|t| self.transport_operator(t)).collect::<Result<Vec<_>>>()?;
        ControlledFrameSystem::new(
            Arc::clone(&self.target),
            family,
            self.transport_operator(sys.c())?,
            self.transport_operator(sys.c_prime())?,
            self.transport_operator(sys.k())?,
        )
    }
}

/// Move a frame along a homomorphism; bounds become `(φ(A), φ(B))` and
/// `⟨S_B θx, θy⟩ = φ(⟨S_A x, y⟩)`.
pub fn transport(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    hom: &HomomorphismSpec,
    config: &VerifyConfig,
) -> Result<(ControlledFrameSystem, TransformReport)> {
    require_same(hom.source(), sys.space(), "homomorphism source differs from the system's module")?;
    let target = hom.transport_system(sys)?;
    let s_a = frame_operator(sys)?;
    let s_b = frame_operator(&target)?;
    let mut rng = random::seeded(config.seed);
    let (mut intertwining, mut frame_identity, mut commuting): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let rel = |a: &AlgebraElement, b: &AlgebraElement| {
        let scale = a.norm().max(b.norm());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).norm() / scale
        }
    };
    for _ in 0..config.samples.min(100) {
        let x = random::vector(&mut rng, sys.space());
        let y = random::vector(&mut rng, sys.space());
        let (tx, ty) = (hom.theta(&x)?, hom.theta(&y)?);
        intertwining = intertwining.max(rel(&tx.inner_product(&ty)?, &hom.phi(&x.inner_product(&y)?)));
        let lhs = s_b.apply(&tx)?.inner_product(&ty)?;
        let rhs = hom.phi(&s_a.apply(&x)?.inner_product(&y)?);
        frame_identity = frame_identity.max(rel(&lhs, &rhs));
        for (t, tb) in sys.family().iter().zip(target.family()) {
            let a = hom.theta(&t.apply(&x)?)?;
            let b = tb.apply(&tx)?;
            let scale = a.norm().max(b.norm());
            if scale > 0.0 {
                commuting = commuting.max(a.sub(&b)?.norm() / scale);
            }
        }
    }
    let checks = vec![
        Check::at_most("inner_product_intertwining", intertwining, INTERTWINING_TOL),
        Check::at_most("frame_operator_identity", frame_identity, 1e-10),
        Check::at_most("theta_commutes_with_family", commuting, 1e-10),
    ];
    let r = report("transport", &target, hom.phi(&cert.lower), hom.phi(&cert.upper), config, checks)?;
    Ok((target, r))
}

/// `R(U) ⊆ R(K)` turns a `K`-frame into a `U`-frame with bounds `(A/√λ, B)`,
/// where `U U* ≤ λ K K*`.
pub fn range_inclusion_transfer(
    sys: &ControlledFrameSystem,
    cert: &FrameCertificate,
    u: &ModuleOperator,
    config: &VerifyConfig,
) -> Result<(DouglasSolution, TransformReport)> {
    require_frame(cert, "source system")?;
    let sol = douglas_solve(sys.k(), u)?;
    if sol.lambda == 0.0 {
        return Err(FrameError::ZeroOperator);
    }
    let target = sys.with_k(u.clone())?;
    let checks = vec![
        Check::at_most("douglas_residual", sol.residual, DOUGLAS_TOL),
        Check::at_most("majorization_gap", sol.majorization_gap, 1e-10),
    ];
    let r = report(
        "range_inclusion_transfer",
        &target,
        cert.lower.scale(1.0 / sol.lambda.sqrt()),
        cert.upper.clone(),
        config,
        checks,
    )?;
    Ok((sol, r))
}

#[derive(Debug, Clone, Serialize)]
pub struct InvertibilityReport {
    pub invertible: bool,
    /// Smallest singular value of each fiber of `U` in orthonormal coordinates.
    pub min_singular_values: Vec<f64>,
    pub status_u: FrameStatus,
    pub status_u_star: FrameStatus,
}

/// With `K` surjective, frames `{T_i U}` and `{T_i U*}` force `U` to be invertible.
///
/// Builds both systems and certifies them; errors with `PreconditionUnverified`
/// when either fails, which is the expected outcome for a singular `U`.
pub fn invertibility_witness(sys: &ControlledFrameSystem, u: &ModuleOperator) -> Result<InvertibilityReport> {
    let m = sys.k().adjoint_lower_bound();
    if m <= SURJECTIVITY_TOL {
        return Err(FrameError::NotSurjective(m));
    }
    u.check_commutes(sys.c(), "U C = C U")?;
    u.check_commutes(sys.c_prime(), "U C' = C' U")?;
    let u_star = u.adjoint();
    let quick = CertifyConfig { samples: 0, ..CertifyConfig::default() };
    let with = |op: &ModuleOperator| -> Result<FrameStatus> {
        let family = sys.family().iter().map(|t| t.compose(op)).collect::<Result<Vec<_>>>()?;
        Ok(certify_with(&sys.with_family(family)?, &quick)?.status)
    };
    let status_u = with(u)?;
    let status_u_star = with(&u_star)?;
    if status_u != FrameStatus::Frame || status_u_star != FrameStatus::Frame {
        return Err(FrameError::PreconditionUnverified(format!(
            "{{T_i U}} is {status_u:?} and {{T_i U*}} is {status_u_star:?}"
        )));
    }
    let min_singular_values = (0..u.blocks().len()).map(|j| sigma_min(&u.whitened_block(j))).collect();
    Ok(InvertibilityReport { invertible: u.classify()?.invertible, min_singular_values, status_u, status_u_star })
}
