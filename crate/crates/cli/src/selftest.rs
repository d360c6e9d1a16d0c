//! Deterministic battery of randomized checks driven by `--seed` and `--samples`.

use cframe::random::{self, KKind, SystemShape};
use cframe::{
    build_example, certify_with, compose_with_q, douglas_solve, example_certificate, invertibility_witness, transport,
    CertifyConfig, FrameError, FrameStatus, ModuleOperator, VerifyConfig,
};
use serde::Serialize;

use crate::{CliError, Outcome, RunConfig};

const TRIALS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub trials: usize,
    pub failures: usize,
    /// Worst measured value over the trials; compare against `limit`.
    pub worst: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<SelfCheck>,
}

struct Tally {
    name: &'static str,
    limit: f64,
    trials: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, limit: f64) -> Self {
        Tally { name, limit, trials: 0, failures: 0, worst: 0.0 }
    }

    /// Record a measured value that must not exceed the limit.
    fn value(&mut self, v: f64) {
        self.trials += 1;
        self.worst = self.worst.max(v);
        if v.is_nan() || v > self.limit {
            self.failures += 1;
        }
    }

    /// Record a pass/fail outcome.
    fn outcome(&mut self, ok: bool) {
        self.value(if ok { 0.0 } else { 1.0 });
    }

    fn finish(self) -> SelfCheck {
        SelfCheck {
            name: self.name,
            passed: self.failures == 0 && self.trials > 0,
            trials: self.trials,
            failures: self.failures,
            worst: self.worst,
            limit: self.limit,
        }
    }
}

pub fn battery(samples: usize, seed: u64) -> Result<SelftestReport, FrameError> {
    let mut rng = random::seeded(seed);
    let shape = SystemShape::default();
    let certify_cfg = CertifyConfig { samples, seed, ..CertifyConfig::default() };
    let verify_cfg = VerifyConfig { samples, seed, ..VerifyConfig::default() };
    let mut checks = Vec::new();

    let es = build_example(101, 2.0, 3.0)?;
    let ex = example_certificate(&es, samples.min(100), seed)?;
    let mut t = Tally::new("example_identity", 1e-12);
    t.value(ex.identity_residual);
    checks.push(t.finish());
    let mut t = Tally::new("example_bessel", 1e-12);
    t.value(-ex.bessel_slack);
    checks.push(t.finish());

    let mut t = Tally::new("certificate_residuals", 1e-9);
    for _ in 0..TRIALS {
        let sys = random::commuting_system(&mut rng, shape, KKind::Dense)?;
        let cert = certify_with(&sys, &certify_cfg)?;
        t.value(cert.lower_residual.max(cert.upper_residual));
    }
    checks.push(t.finish());

    let mut t = Tally::new("frame_operator_identity", 1e-10);
    for _ in 0..TRIALS {
        let sys = random::commuting_system(&mut rng, shape, KKind::Diagonal)?;
        let q = random::complex_diagonal(&mut rng, sys.space(), 0.5, 2.0);
        let cert = certify_with(&sys, &CertifyConfig { samples: 0, ..certify_cfg })?;
        let (_, r) = compose_with_q(&sys, &cert, &q, &verify_cfg)?;
        for c in r.checks.iter().filter(|c| c.name == "frame_operator_identity") {
            t.value(c.value);
        }
    }
    checks.push(t.finish());

    let mut included = Tally::new("douglas_included", 1e-10);
    let mut escape = Tally::new("douglas_escape", 0.0);
    for _ in 0..TRIALS {
        let dims = random::dims(&mut rng, 4, 6);
        let h = random::space(&mut rng, &dims, random::WeightKind::Dense)?;
        let op = random::operator(&mut rng, &h);
        let d = random::operator(&mut rng, &h);
        let sol = douglas_solve(&op, &op.compose(&d)?)?;
        included.value(sol.residual.max(sol.majorization_gap));
        let singular = random::singular_operator(&mut rng, &h);
        let target = random::operator(&mut rng, &h);
        escape.outcome(matches!(douglas_solve(&singular, &target), Err(FrameError::NotIncluded { .. })));
    }
    checks.push(included.finish());
    checks.push(escape.finish());

    let mut t = Tally::new("transport", 0.0);
    for _ in 0..TRIALS {
        let sys = random::commuting_system(&mut rng, shape, KKind::Dense)?;
        let d_target = 1 + sys.space().num_fibers().div_ceil(2);
        let hom = random::homomorphism(&mut rng, sys.space(), d_target)?;
        let cert = certify_with(&sys, &CertifyConfig { samples: 0, ..certify_cfg })?;
        let (_, r) = transport(&sys, &cert, &hom, &verify_cfg)?;
        t.outcome(r.verified);
    }
    checks.push(t.finish());

    let mut inv = Tally::new("invertibility_positive", 0.0);
    let mut sing = Tally::new("invertibility_contrapositive", 0.0);
    for _ in 0..TRIALS {
        let sys = random::commuting_system(&mut rng, shape, KKind::Diagonal)?;
        let u = random::complex_diagonal(&mut rng, sys.space(), 0.5, 2.0);
        inv.outcome(invertibility_witness(&sys, &u).is_ok_and(|r| r.invertible));
        let s: ModuleOperator = random::singular_diagonal(&mut rng, sys.space(), 0.5, 2.0);
        sing.outcome(matches!(invertibility_witness(&sys, &s), Err(FrameError::PreconditionUnverified(_))));
    }
    checks.push(inv.finish());
    checks.push(sing.finish());

    let mut t = Tally::new("frame_status", 0.0);
    for _ in 0..TRIALS {
        let sys = random::commuting_system(&mut rng, shape, KKind::Identity)?;
        t.outcome(certify_with(&sys, &CertifyConfig { samples: 0, ..certify_cfg })?.status == FrameStatus::Frame);
    }
    checks.push(t.finish());

    let passed = checks.iter().all(|c| c.passed);
    Ok(SelftestReport { passed, checks })
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = battery(config.samples, config.seed)?;
    let positive = report.passed;
    Ok(Outcome { result: serde_json::to_value(&report).expect("reports serialize"), positive })
}
