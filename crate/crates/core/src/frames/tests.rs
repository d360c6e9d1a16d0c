use super::*;
use crate::module_space::ModuleSpace;
use crate::random::{self, KKind, SystemShape};
use crate::spectral::{identity, real_diag};

fn euclid(dims: &[usize]) -> SpaceRef {
    ModuleSpace::euclidean(Algebra::new(dims.len()).unwrap(), dims).unwrap()
}

fn scalar(h: &SpaceRef, c: f64) -> ModuleOperator {
    ModuleOperator::scalar(h, c64(c))
}

fn parseval(h: &SpaceRef) -> ControlledFrameSystem {
    ControlledFrameSystem::plain(h.clone(), vec![ModuleOperator::identity(h)]).unwrap()
}

fn close(a: &AlgebraElement, b: &[f64], tol: f64) -> bool {
    a.values().iter().zip(b).all(|(x, y)| (x - c64(*y)).norm() <= tol)
}

fn random_systems(count: usize, seed: u64, k: KKind) -> Vec<ControlledFrameSystem> {
    let mut rng = random::seeded(seed);
    (0..count).map(|_| random::commuting_system(&mut rng, SystemShape::default(), k).unwrap()).collect()
}

#[test]
fn rejects_non_glplus_controls() {
    let h = euclid(&[2]);
    let id = ModuleOperator::identity(&h);
    let neg = scalar(&h, -1.0);
    let err = ControlledFrameSystem::new(h.clone(), vec![id.clone()], neg, id.clone(), id.clone()).unwrap_err();
    assert_eq!(err, FrameError::NotGlPlus("C".into()));
    let singular = ModuleOperator::endo(&h, vec![real_diag(&[1.0, 0.0])]).unwrap();
    assert!(matches!(
        ControlledFrameSystem::new(h, vec![id.clone()], id.clone(), singular, id),
        Err(FrameError::NotGlPlus(_))
    ));
}

#[test]
fn rejects_foreign_operators() {
    let h = euclid(&[2]);
    let g = euclid(&[3]);
    let err = ControlledFrameSystem::plain(h, vec![ModuleOperator::identity(&g)]).unwrap_err();
    assert!(matches!(err, FrameError::SpaceMismatch(_)));
}

#[test]
fn frame_operator_examples() {
    let h = euclid(&[2, 3]);
    let s = frame_operator(&parseval(&h)).unwrap();
    assert!(s.distance(&ModuleOperator::identity(&h)).unwrap() < 1e-15);

    let id = ModuleOperator::identity(&h);
    let sys =
        ControlledFrameSystem::new(h.clone(), vec![id.clone(), id.clone()], id.clone(), scalar(&h, 2.0), id).unwrap();
    let s = frame_operator(&sys).unwrap();
    assert!(s.distance(&scalar(&h, 4.0)).unwrap() < 1e-14);

    let empty = ControlledFrameSystem::plain(h, vec![]).unwrap();
    assert!(frame_operator(&empty).is_err());
}

#[test]
fn frame_operator_matches_termwise_sum() {
    let mut rng = random::seeded(11);
    for sys in random_systems(20, 1, KKind::Dense) {
        let s = frame_operator(&sys).unwrap();
        let class = s.classify().unwrap();
        assert!(class.selfadjoint && class.positive);
        for _ in 0..10 {
            let x = random::vector(&mut rng, sys.space());
            let lhs = s.apply(&x).unwrap().inner_product(&x).unwrap();
            let (_, mid, _) = sys.evaluate(&x).unwrap();
            let scale = mid.norm().max(1.0);
            assert!((&lhs - &mid).norm() <= 1e-11 * scale);
        }
    }
}

#[test]
fn analysis_synthesis_examples() {
    let h = euclid(&[2, 1]);
    let sys = parseval(&h);
    let mut rng = random::seeded(3);
    let x = random::vector(&mut rng, &h);
    let a = analysis(&sys, &x).unwrap();
    assert_eq!(a.len(), 1);
    assert!(a[0].sub(&x).unwrap().norm() < 1e-15);
    assert!(synthesis(&sys, std::slice::from_ref(&x)).unwrap().sub(&x).unwrap().norm() < 1e-15);

    let zero = h.zero_vector();
    assert!(analysis(&sys, &zero).unwrap().iter().all(|v| v.norm() == 0.0));
    assert_eq!(synthesis(&sys, &[zero]).unwrap().norm(), 0.0);
    assert!(matches!(synthesis(&sys, &[]), Err(FrameError::LengthMismatch { expected: 1, got: 0 })));
}

#[test]
fn analysis_requires_commuting_controls() {
    let mut rng = random::seeded(5);
    let h = random::space(&mut rng, &[3], random::WeightKind::Identity).unwrap();
    let c = random::glplus(&mut rng, &h, 0.5, 2.0);
    let cp = random::glplus(&mut rng, &h, 0.5, 2.0);
    let id = ModuleOperator::identity(&h);
    let sys = ControlledFrameSystem::new(h.clone(), vec![id.clone()], c, cp, id).unwrap();
    assert!(!sys.flags().controls);
    let x = random::vector(&mut rng, &h);
    assert!(matches!(analysis(&sys, &x), Err(FrameError::NotCommuting { .. })));
}

#[test]
fn analysis_synthesis_consistency() {
    let mut rng = random::seeded(21);
    for sys in random_systems(20, 2, KKind::Identity) {
        let s = frame_operator(&sys).unwrap();
        for _ in 0..5 {
            let x = random::vector(&mut rng, sys.space());
            let a = analysis(&sys, &x).unwrap();
            let sx = s.apply(&x).unwrap();
            let energy = sequence_inner_product(&a, &a).unwrap();
            let direct = sx.inner_product(&x).unwrap();
            assert!((&energy - &direct).norm() <= 1e-10 * direct.norm().max(1.0));
            let back = synthesis(&sys, &a).unwrap();
            assert!(back.sub(&sx).unwrap().norm() <= 1e-10 * sx.norm().max(1.0));

            let seq: Vec<_> = sys.family().iter().map(|_| random::vector(&mut rng, sys.space())).collect();
            let lhs = sequence_inner_product(&a, &seq).unwrap();
            let rhs = x.inner_product(&synthesis(&sys, &seq).unwrap()).unwrap();
            assert!((&lhs - &rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        }
    }
}

#[test]
fn upper_bound_examples() {
    let h = euclid(&[2, 3]);
    assert!(close(&optimal_upper_bound(&parseval(&h)).unwrap(), &[1.0, 1.0], 1e-14));
    let id = ModuleOperator::identity(&h);
    let sys = ControlledFrameSystem::new(h.clone(), vec![id.clone()], scalar(&h, 2.0), scalar(&h, 3.0), id).unwrap();
    let r6 = 6f64.sqrt();
    assert!(close(&optimal_upper_bound(&sys).unwrap(), &[r6, r6], 1e-14));
}

#[test]
fn upper_bound_dominates_sampled_ratios() {
    let mut rng = random::seeded(8);
    for sys in random_systems(5, 3, KKind::Identity) {
        let b = optimal_upper_bound(&sys).unwrap().re();
        let mut best = vec![0.0f64; b.len()];
        for _ in 0..20_000 {
            let x = random::vector(&mut rng, sys.space());
            let (_, mid, xx) = sys.evaluate(&x).unwrap();
            for (j, v) in best.iter_mut().enumerate() {
                *v = v.max((mid.get(j).re / xx.get(j).re).sqrt());
            }
        }
        for (v, b) in best.iter().zip(&b) {
            assert!(*v <= b * (1.0 + 1e-9));
            assert!(*v >= 0.5 * b);
        }
    }
}

#[test]
fn lower_bound_examples() {
    let h = euclid(&[2, 1]);
    let lb = optimal_lower_bound(&parseval(&h)).unwrap();
    assert!(lb.feasible && close(&lb.value, &[1.0, 1.0], 1e-14));

    let p = ModuleOperator::endo(&h, vec![real_diag(&[1.0, 0.0]), identity(1)]).unwrap();
    let sys = ControlledFrameSystem::plain(h, vec![p]).unwrap();
    let lb = optimal_lower_bound(&sys).unwrap();
    assert!(!lb.feasible);
    assert_eq!(certify(&sys).unwrap().status, FrameStatus::BesselOnly);
}

#[test]
fn lower_bound_respects_kernel_coupling() {
    // middle form [[1,1],[1,1]] and K-form diag(1,0): the ratio reaches 0 along (1,-1)
    let h = euclid(&[2]);
    let t = ModuleOperator::endo(&h, vec![CMatrix::from_row_slice(2, 2, &[c64(1.0), c64(1.0), c64(0.0), c64(0.0)])])
        .unwrap();
    let k = ModuleOperator::endo(&h, vec![real_diag(&[1.0, 0.0])]).unwrap();
    let sys = ControlledFrameSystem::plain(h, vec![t]).unwrap().with_k(k).unwrap();
    let lb = optimal_lower_bound(&sys).unwrap();
    assert!(lb.value.get(0).norm() < 1e-7);
    assert_eq!(certify(&sys).unwrap().status, FrameStatus::BesselOnly);
}

#[test]
fn random_k_lower_bound_holds_on_samples() {
    let mut rng = random::seeded(9);
    for sys in random_systems(10, 4, KKind::Dense) {
        let cert = certify(&sys).unwrap();
        assert_eq!(cert.status, FrameStatus::Frame);
        for _ in 0..1000 {
            let x = random::vector(&mut rng, sys.space());
            let r = check_bounds_at(&sys, &cert.lower, &cert.upper, &x, 1e-9).unwrap();
            assert!(r.lower_ok && r.upper_ok);
        }
    }
}

#[test]
fn certify_examples() {
    let h = euclid(&[3, 2]);
    let cert = certify(&parseval(&h)).unwrap();
    assert_eq!(cert.status, FrameStatus::Frame);
    assert!(cert.tight);
    assert!(close(&cert.lower, &[1.0, 1.0], 1e-14) && close(&cert.upper, &[1.0, 1.0], 1e-14));
    assert!(cert.lower_residual <= 1e-12 && cert.upper_residual <= 1e-12);

    let zero = ControlledFrameSystem::plain(h.clone(), vec![ModuleOperator::zero(&h)]).unwrap();
    assert_eq!(certify(&zero).unwrap().status, FrameStatus::NotFrame);
}

#[test]
fn certify_singular_k_uses_range_restriction() {
    for sys in random_systems(10, 5, KKind::Singular) {
        let cert = certify(&sys).unwrap();
        assert_eq!(cert.status, FrameStatus::Frame);
        // the restricted bound can only beat the one for K replaced by a full-rank operator
        for (j, f) in sys.fiber_forms().iter().enumerate() {
            if cert.vacuous[j] {
                assert!(f.k_gram.iter().all(|z| z.norm() == 0.0));
                continue;
            }
            let a2 = cert.lower.get(j).re.powi(2);
            let gap = spectral::min_eigenvalue(&(&f.middle - f.k_gram.scale(a2)));
            assert!(gap >= -1e-9 * fro_norm(&f.middle));
        }
        assert!(cert.lower_residual <= 1e-9 && cert.upper_residual <= 1e-9);
    }
}

#[test]
fn vacuous_fibers_are_flagged() {
    let h = euclid(&[1, 1]);
    let k = ModuleOperator::endo(&h, vec![identity(1), CMatrix::zeros(1, 1)]).unwrap();
    let t = ModuleOperator::endo(&h, vec![identity(1).scale(2.0), CMatrix::zeros(1, 1)]).unwrap();
    let sys = ControlledFrameSystem::plain(h.clone(), vec![t]).unwrap().with_k(k.clone()).unwrap();
    let cert = certify(&sys).unwrap();
    assert_eq!(cert.vacuous, vec![false, true]);
    // both sides vanish on the second fiber, so any bound works there
    assert_eq!(cert.status, FrameStatus::Frame);
    assert!(close(&cert.lower, &[2.0, 1.0], 1e-14) && close(&cert.upper, &[2.0, 1.0], 1e-14));

    let t = ModuleOperator::endo(&h, vec![identity(1).scale(2.0), identity(1).scale(3.0)]).unwrap();
    let sys = ControlledFrameSystem::plain(h, vec![t]).unwrap().with_k(k).unwrap();
    let cert = certify(&sys).unwrap();
    assert_eq!(cert.status, FrameStatus::Frame);
    assert!(close(&cert.lower, &[2.0, 3.0], 1e-14));
    assert!(!cert.tight);
}

#[test]
fn tightness_detection() {
    let h = euclid(&[2, 2]);
    let t = scalar(&h, 2.0);
    let sys = ControlledFrameSystem::plain(h.clone(), vec![t]).unwrap();
    let cert = certify(&sys).unwrap();
    assert!(cert.tight && close(&cert.lower, &[2.0, 2.0], 1e-14));

    let t = ModuleOperator::endo(&h, vec![real_diag(&[1.0, 2.0]), identity(2)]).unwrap();
    let cert = certify(&ControlledFrameSystem::plain(h, vec![t]).unwrap()).unwrap();
    assert!(!cert.tight);
    assert!(close(&cert.lower, &[1.0, 1.0], 1e-14) && close(&cert.upper, &[2.0, 1.0], 1e-14));
}

#[test]
fn check_at_examples() {
    let h = euclid(&[2, 3]);
    let sys = parseval(&h);
    let cert = certify(&sys).unwrap();
    let r = check_at(&sys, &cert, &h.zero_vector()).unwrap();
    assert!(r.lower_ok && r.upper_ok);
    assert_eq!(r.lower_slack.norm(), 0.0);
    assert_eq!(r.upper_slack.norm(), 0.0);

    let mut rng = random::seeded(1);
    let x = random::vector(&mut rng, &h);
    let r = check_at(&sys, &cert, &x).unwrap();
    assert!(r.lower_ok && r.upper_ok);
    assert!(r.lower_slack.norm() < 1e-14 && r.upper_slack.norm() < 1e-14);

    let too_big = AlgebraElement::from_real(&[1.5, 1.0]);
    let r = check_bounds_at(&sys, &too_big, &cert.upper, &x, 1e-9).unwrap();
    assert!(!r.lower_ok && r.upper_ok);
    let other = euclid(&[2]);
    assert!(check_at(&sys, &cert, &other.zero_vector()).is_err());
}

#[test]
fn certificates_pass_sampled_checks() {
    let mut rng = random::seeded(13);
    for sys in random_systems(10, 6, KKind::Dense) {
        let cert = certify(&sys).unwrap();
        for _ in 0..1000 {
            let x = random::vector(&mut rng, sys.space());
            let r = check_at(&sys, &cert, &x).unwrap();
            assert!(r.lower_ok && r.upper_ok);
        }
    }
}

#[test]
fn witnesses_attain_bounds() {
    for sys in random_systems(10, 7, KKind::Dense) {
        let cert = certify(&sys).unwrap();
        for w in extremal_witnesses(&sys).unwrap() {
            let j = w.fiber;
            let (kk, mid, xx) = sys.evaluate(&w.upper).unwrap();
            let b = cert.upper.get(j).re;
            assert!((mid.get(j).re - b * b * xx.get(j).re).abs() <= 1e-9 * mid.get(j).re.abs());
            let lw = w.lower.expect("dense K has no vacuous fibers");
            let (kk2, mid2, _) = sys.evaluate(&lw).unwrap();
            let a = cert.lower.get(j).re;
            assert!((mid2.get(j).re - a * a * kk2.get(j).re).abs() <= 1e-8 * mid2.get(j).re.abs());
            let _ = kk;
        }
    }
}

#[test]
fn scaling_covariance() {
    for sys in random_systems(10, 8, KKind::Dense) {
        let cert = certify(&sys).unwrap();
        let scaled: Vec<_> = sys.family().iter().map(|t| t.scale(c64(3.0))).collect();
        let cert3 = certify(&sys.with_family(scaled).unwrap()).unwrap();
        assert!(relative_gap(&cert3.lower, &cert.lower.scale(3.0)) < 1e-8);
        assert!(relative_gap(&cert3.upper, &cert.upper.scale(3.0)) < 1e-10);
    }
}

#[test]
fn plain_system_matches_operator_frame_bounds() {
    let mut rng = random::seeded(17);
    let h = random::space(&mut rng, &[3, 2], random::WeightKind::Dense).unwrap();
    let family: Vec<_> = (0..3).map(|_| random::operator(&mut rng, &h)).collect();
    let sys = ControlledFrameSystem::plain(h.clone(), family).unwrap();
    let cert = certify(&sys).unwrap();
    // with C = C' = K = I both bounds come from the spectrum of S relative to the weight
    let s = frame_operator(&sys).unwrap();
    for j in 0..2 {
        let r = pencil_extremes(&hermitian_part(&s.form_block(j)), h.fiber(j).weight()).unwrap();
        assert!((cert.lower.get(j).re - r.lambda_min.sqrt()).abs() < 1e-9);
        assert!((cert.upper.get(j).re - r.lambda_max.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn certify_is_deterministic_for_fixed_seed() {
    let sys = &random_systems(1, 9, KKind::Dense)[0];
    let cfg = CertifyConfig { samples: 200, seed: 4, tight_tol: DEFAULT_TIGHT_TOL };
    let a = certify_with(sys, &cfg).unwrap();
    let b = certify_with(sys, &cfg).unwrap();
    assert_eq!(a.lower_residual.to_bits(), b.lower_residual.to_bits());
    assert_eq!(a.upper_residual.to_bits(), b.upper_residual.to_bits());
}

#[test]
fn reconstruct_examples() {
    let h = euclid(&[2, 3]);
    let mut rng = random::seeded(2);
    let x = random::vector(&mut rng, &h);
    let r = reconstruct(&parseval(&h), &x).unwrap();
    assert!(r.direct.sub(&x).unwrap().norm() < 1e-14);
    assert!(r.iterative.unwrap().sub(&x).unwrap().norm() < 1e-14);
    assert_eq!(r.iterations, 1);

    let sys = ControlledFrameSystem::plain(h.clone(), vec![scalar(&h, 2f64.sqrt())]).unwrap();
    let r = reconstruct(&sys, &x).unwrap();
    assert!(r.direct.sub(&x).unwrap().norm() < 1e-14);
    let half = solve_frame_equation(&sys, &x, RichardsonConfig::default()).unwrap();
    assert!(half.direct.sub(&x.scale(c64(0.5))).unwrap().norm() < 1e-14);

    let zero = ControlledFrameSystem::plain(h.clone(), vec![ModuleOperator::zero(&h)]).unwrap();
    assert_eq!(reconstruct(&zero, &x).unwrap_err(), FrameError::SingularFrameOperator);
}

#[test]
fn richardson_meets_classical_iteration_bound() {
    let mut rng = random::seeded(31);
    for sys in random_systems(20, 10, KKind::Identity) {
        let x = random::vector(&mut rng, sys.space());
        let r = reconstruct(&sys, &x).unwrap();
        assert!(r.direct.sub(&x).unwrap().norm() <= 1e-9 * x.norm());
        let z = r.iterative.expect("commuting systems have positive S");
        assert!(r.converged);
        assert!(z.sub(&x).unwrap().norm() <= 1e-9 * x.norm());
        let kappa = r.lambda_max / r.lambda_min;
        let rate = (kappa - 1.0) / (kappa + 1.0);
        let bound = if rate == 0.0 { 1.0 } else { ((1e-9 / kappa).ln() / rate.ln()).ceil() + 1.0 };
        assert!(r.iterations as f64 <= bound, "{} > {}", r.iterations, bound);
    }
}
