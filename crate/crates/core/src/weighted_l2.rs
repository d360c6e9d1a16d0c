//! Truncated weighted sequence space with odd-coordinate extraction operators.
//!
//! `H = C^N` over the diagonal algebra `C^N`, coordinate `n` (1-based) carrying
//! weight `1/n`, so `⟨a, b⟩ = {a_n b̄_n / n}_n`. For `k ≥ 1` with `2k+1 ≤ N`, `Λ_k`
//! keeps coordinate `2k+1` scaled by `1/√(2k+1)` and zeroes the rest. Controls
//! are `C = α I`, `C′ = β I`.
//!
//! The coordinate extraction `{a_n} ↦ {a_{2k+1}}_k` is not a module map here, so
//! the `K`-side quantity is evaluated from its closed form
//! `⟨K*a, K*a⟩ = {|a_{2k+1}|² / (2k+1)}_k`, and every `k`-indexed sequence is
//! placed on coordinate `n = 2k+1` (zero elsewhere).
//!
//! The closed-form middle sum is `αβ {|a_{2k+1}|² / (2k+1)²}`. A tight lower bound
//! therefore needs `|A_{2k+1}|² = αβ / (2k+1)`; the element `√(αβ){1/√k}` does not
//! satisfy this, and both are reported.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{FrameError, Result};
use crate::frames::{bounds_from_forms, ControlledFrameSystem, FiberForms, FrameStatus, DEFAULT_TIGHT_TOL};
use crate::module_space::{require_same, ModuleSpace, ModuleVector, SpaceRef};
use crate::operators::ModuleOperator;
use crate::random;
use crate::spectral::{c64, CMatrix};

/// Relative tolerance of the closed-form identity.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SequenceExample {
    n: usize,
    alpha: f64,
    beta: f64,
    space: SpaceRef,
    lambdas: Vec<ModuleOperator>,
    c: ModuleOperator,
    c_prime: ModuleOperator,
}

/// Build the truncation of length `n`.
pub fn build_example(n: usize, alpha: f64, beta: f64) -> Result<SequenceExample> {
    if n < 3 {
        return Err(FrameError::BadParameters(format!("truncation length {n} < 3")));
    }
    if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(FrameError::BadParameters(format!("alpha = {alpha} and beta = {beta} must be positive")));
    }
    let algebra = Algebra::new(n)?;
    let weights = (1..=n).map(|i| CMatrix::from_element(1, 1, c64(1.0 / i as f64))).collect();
    let space = ModuleSpace::from_weights(algebra, weights)?;
    let lambdas = (1..=(n - 1) / 2)
        .map(|k| {
            let m = 2 * k + 1;
            let blocks = (1..=n)
                .map(|i| CMatrix::from_element(1, 1, c64(if i == m { 1.0 / (m as f64).sqrt() } else { 0.0 })))
                .collect();
            ModuleOperator::endo(&space, blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    let c = ModuleOperator::scalar(&space, c64(alpha));
    let c_prime = ModuleOperator::scalar(&space, c64(beta));
    Ok(SequenceExample { n, alpha, beta, space, lambdas, c, c_prime })
}

impl SequenceExample {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn lambdas(&self) -> &[ModuleOperator] {
        &self.lambdas
    }

    /// 0-based fiber indices `2k` of the coordinates `n = 2k+1` hit by some `Λ_k`.
    pub fn support(&self) -> Vec<usize> {
        (1..=(self.n - 1) / 2).map(|k| 2 * k).collect()
    }

    /// The family `{Λ_k}` with its controls; `K` is left as the identity and
    /// never used, see [`SequenceExample::k_form`].
    pub fn system(&self) -> Result<ControlledFrameSystem> {
        ControlledFrameSystem::new(
            self.space.clone(),
            self.lambdas.clone(),
            self.c.clone(),
            self.c_prime.clone(),
            ModuleOperator::identity(&self.space),
        )
    }

    /// `⟨K*x, K*x⟩` from its closed form, placed on odd coordinates.
    pub fn k_form(&self, x: &ModuleVector) -> Result<AlgebraElement> {
        require_same(&self.space, x.space(), "vector outside the example module")?;
        Ok(self.on_support(|m, a| a.norm_sqr() / m, x))
    }

    /// `αβ {|x_{2k+1}|² / (2k+1)²}` on odd coordinates.
    pub fn closed_form(&self, x: &ModuleVector) -> Result<AlgebraElement> {
        require_same(&self.space, x.space(), "vector outside the example module")?;
        let ab = self.alpha * self.beta;
        Ok(self.on_support(|m, a| ab * a.norm_sqr() / (m * m), x))
    }

    fn on_support(&self, f: impl Fn(f64, Complex64) -> f64, x: &ModuleVector) -> AlgebraElement {
        let mut values = vec![0.0; self.n];
        for j in self.support() {
            values[j] = f((j + 1) as f64, x.part(j)[0]);
        }
        AlgebraElement::from_real(&values)
    }

    /// The lower bound as printed: `√(αβ)/√k` on coordinate `2k+1`.
    pub fn stated_lower(&self) -> AlgebraElement {
        let r = (self.alpha * self.beta).sqrt();
        let mut values = vec![0.0; self.n];
        for j in self.support() {
            values[j] = r / ((j / 2) as f64).sqrt();
        }
        AlgebraElement::from_real(&values)
    }

    /// `√(αβ/(2k+1))` on coordinate `2k+1`: the value making the lower inequality an equality.
    pub fn exact_lower(&self) -> AlgebraElement {
        let ab = self.alpha * self.beta;
        let mut values = vec![0.0; self.n];
        for j in self.support() {
            values[j] = (ab / (j + 1) as f64).sqrt();
        }
        AlgebraElement::from_real(&values)
    }

    /// Per-fiber forms with the closed-form `K`-side.
    pub fn fiber_forms(&self) -> Result<Vec<FiberForms>> {
        let sys = self.system()?;
        let support = self.support();
        Ok((0..self.n)
            .map(|j| {
                let k_gram = if support.contains(&j) {
                    CMatrix::from_element(1, 1, c64(1.0 / (j + 1) as f64))
                } else {
                    CMatrix::zeros(1, 1)
                };
                FiberForms { weight: self.space.fiber(j).weight().clone(), middle: sys.middle_form(j), k_gram }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SumIdentity {
    /// `Σ_k ⟨Λ_k C x, Λ_k C′ x⟩`, summed term by term.
    pub lhs: AlgebraElement,
    /// `αβ {|x_{2k+1}|² / (2k+1)²}` on odd coordinates.
    pub rhs: AlgebraElement,
    /// Worst per-fiber relative deviation.
    pub residual: f64,
}

pub fn example_sum_identity(es: &SequenceExample, x: &ModuleVector) -> Result<SumIdentity> {
    require_same(&es.space, x.space(), "vector outside the example module")?;
    let cx = es.c.apply(x)?;
    let cpx = es.c_prime.apply(x)?;
    let mut lhs = es.space.algebra().zero();
    for l in &es.lambdas {
        lhs = &lhs + &l.apply(&cx)?.inner_product(&l.apply(&cpx)?)?;
    }
    let rhs = es.closed_form(x)?;
    let residual = relative_deviation(&lhs, &rhs);
    Ok(SumIdentity { lhs, rhs, residual })
}

fn relative_deviation(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| {
            let scale = x.norm().max(y.norm());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleCertificate {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub lambda_count: usize,
    /// Optimal bounds from the per-fiber forms; off-support fibers are vacuous.
    pub lower: AlgebraElement,
    pub upper: AlgebraElement,
    pub status: FrameStatus,
    pub tight: bool,
    pub vacuous: Vec<bool>,
    /// `√(αβ)/√k` on coordinate `2k+1`.
    pub stated_lower: AlgebraElement,
    /// Worst relative gap between `A⟨K*x,K*x⟩A*` and the middle sum for the stated element.
    pub stated_residual: f64,
    /// Fiberwise `√(lhs / ⟨K*x,K*x⟩)`, averaged over samples.
    pub measured_lower: AlgebraElement,
    /// Largest relative spread of the measured ratio across samples.
    pub measured_spread: f64,
    /// Worst relative gap for the measured element.
    pub measured_residual: f64,
    /// The stated element fails the lower equality.
    pub discrepancy: bool,
    /// Worst closed-form identity residual over the samples.
    pub identity_residual: f64,
    /// Smallest relative slack of `lhs ≤ αβ ⟨x,x⟩`.
    pub bessel_slack: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Certificate of the example with both candidate lower-bound elements checked on random vectors.
pub fn example_certificate(es: &SequenceExample, samples: usize, seed: u64) -> Result<ExampleCertificate> {
    let bounds = bounds_from_forms(es.space.algebra(), &es.fiber_forms()?, DEFAULT_TIGHT_TOL)?;
    let support = es.support();
    let stated = es.stated_lower();
    let ab = es.alpha * es.beta;

    let mut rng = random::seeded(seed);
    let mut ratios: Vec<Vec<f64>> = vec![Vec::with_capacity(samples); es.n];
    let mut lhs_kform = Vec::with_capacity(samples);
    let mut identity_residual: f64 = 0.0;
    let mut bessel_slack = f64::INFINITY;
    for _ in 0..samples {
        let x = random::vector(&mut rng, &es.space);
        let id = example_sum_identity(es, &x)?;
        identity_residual = identity_residual.max(id.residual);
        let xx = x.inner_product(&x)?;
        for j in 0..es.n {
            let cap = ab * xx.get(j).re;
            let lhs = id.lhs.get(j).re;
            let slack = (cap - lhs) / cap.abs().max(lhs.abs()).max(f64::MIN_POSITIVE);
            bessel_slack = bessel_slack.min(slack);
        }
        let kf = es.k_form(&x)?;
        for &j in &support {
            ratios[j].push((id.lhs.get(j).re / kf.get(j).re).sqrt());
        }
        lhs_kform.push((id.lhs, kf));
    }

    let mut measured = vec![0.0; es.n];
    let mut measured_spread: f64 = 0.0;
    for &j in &support {
        let r = &ratios[j];
        if r.is_empty() {
            continue;
        }
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        measured[j] = mean;
        measured_spread = measured_spread.max((hi - lo) / mean);
    }
    let measured = AlgebraElement::from_real(&measured);

    let residual_of = |a: &AlgebraElement| {
        lhs_kform.iter().map(|(lhs, kf)| relative_deviation(&a.sandwich(kf), lhs)).fold(0.0, f64::max)
    };
    let stated_residual = residual_of(&stated);
    let measured_residual = residual_of(&measured);
    Ok(ExampleCertificate {
        n: es.n,
        alpha: es.alpha,
        beta: es.beta,
        lambda_count: es.lambdas.len(),
        lower: AlgebraElement::from_real(&bounds.lower),
        upper: AlgebraElement::from_real(&bounds.upper),
        status: bounds.status,
        tight: bounds.tight,
        vacuous: bounds.vacuous,
        stated_lower: stated,
        stated_residual,
        measured_lower: measured,
        measured_spread,
        measured_residual,
        discrepancy: stated_residual > IDENTITY_TOL,
        identity_residual,
        bessel_slack: if samples == 0 { 0.0 } else { bessel_slack },
        samples,
        seed,
    })
}
