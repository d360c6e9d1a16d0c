//! Subcommand implementations; each returns the `result` body of a report.

use std::path::Path;

use cframe::{
    certify_with, compose_with_q, douglas_solve, example_certificate, frame_operator, invertible_q_bounds,
    optimal_lower_bound, optimal_upper_bound, range_inclusion_transfer, transport, AlgebraElement, CertifyConfig,
    FrameCertificate, FrameStatus, ModuleOperator, OperatorClass, TransformReport, VerifyConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::description::{parse_system, to_matrix, Loaded, Matrix};
use crate::{selftest, CliError, Command, Outcome, RunConfig, TransformKind};

/// Largest closed-form identity residual accepted by `example`.
pub const EXAMPLE_TOL: f64 = 1e-12;

pub fn dispatch(command: &Command, config: &mut RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Certify { file } => certify(&load(file, config)?, config),
        Command::Bounds { file } => bounds(&load(file, config)?),
        Command::FrameOperator { file } => frame_op(&load(file, config)?),
        Command::Transform { kind, file } => transform(*kind, &load(file, config)?, config),
        Command::Example { n, alpha, beta } => example(*n, *alpha, *beta, config),
        Command::Selftest => selftest::run(config),
    }
}

/// Load a file and record the tolerances it ends up using.
fn load(file: &Path, config: &mut RunConfig) -> Result<Loaded, CliError> {
    let loaded = parse_system(file, config.eps_override)?;
    let algebra = loaded.space.algebra();
    config.eps_pos = algebra.eps_pos();
    config.eps_nz = algebra.eps_nz();
    Ok(loaded)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn certify_config(config: &RunConfig) -> CertifyConfig {
    CertifyConfig { samples: config.samples, seed: config.seed, tight_tol: config.tight_tol }
}

fn verify_config(config: &RunConfig) -> VerifyConfig {
    VerifyConfig { samples: config.samples, seed: config.seed, tol: config.verify_tol }
}

fn certify(l: &Loaded, config: &RunConfig) -> Result<Outcome, CliError> {
    let cert = certify_with(&l.system, &certify_config(config))?;
    let positive = cert.status == FrameStatus::Frame;
    Ok(Outcome { result: json!({ "certificate": cert, "commutation": l.system.flags() }), positive })
}

fn bounds(l: &Loaded) -> Result<Outcome, CliError> {
    let upper = optimal_upper_bound(&l.system)?;
    let lower = optimal_lower_bound(&l.system)?;
    let positive = lower.feasible && l.space.algebra().is_strictly_nonzero(&upper);
    Ok(Outcome {
        result: json!({ "lower": lower.value, "upper": upper, "vacuous": lower.vacuous, "feasible": positive }),
        positive,
    })
}

#[derive(Serialize)]
struct OperatorReport {
    blocks: Vec<Matrix>,
    class: OperatorClass,
    norm: f64,
}

fn operator_report(op: &ModuleOperator) -> Result<OperatorReport, CliError> {
    Ok(OperatorReport { blocks: op.blocks().iter().map(to_matrix).collect(), class: op.classify()?, norm: op.norm() })
}

fn frame_op(l: &Loaded) -> Result<Outcome, CliError> {
    let s = frame_operator(&l.system)?;
    Ok(Outcome { result: to_value(&operator_report(&s)?), positive: true })
}

/// Certificate of the source, which every bound transfer starts from.
fn source_certificate(l: &Loaded, config: &RunConfig) -> Result<FrameCertificate, CliError> {
    Ok(certify_with(&l.system, &CertifyConfig { samples: 0, ..certify_config(config) })?)
}

fn transform_outcome(report: TransformReport, extra: Value) -> Outcome {
    let positive = report.verified;
    let mut result = to_value(&report);
    if let (Value::Object(map), Value::Object(more)) = (&mut result, extra) {
        map.extend(more);
    }
    Outcome { result, positive }
}

fn transform(kind: TransformKind, l: &Loaded, config: &RunConfig) -> Result<Outcome, CliError> {
    let task = l.task();
    let verify = verify_config(config);
    match kind {
        TransformKind::Q => {
            let q = l.task_operator(&task.q, "task.q")?;
            let cert = source_certificate(l, config)?;
            let (_, r) = compose_with_q(&l.system, &cert, &q, &verify)?;
            Ok(transform_outcome(r, json!({ "source": bound_pair(&cert) })))
        }
        TransformKind::Invq => {
            let q = l.task_operator(&task.q, "task.q")?;
            let cert = source_certificate(l, config)?;
            let (_, r) = invertible_q_bounds(&l.system, &cert, &q, &verify)?;
            Ok(transform_outcome(r, json!({ "source": bound_pair(&cert) })))
        }
        TransformKind::Hom => {
            let hom = l.homomorphism()?;
            let cert = source_certificate(l, config)?;
            let (_, r) = transport(&l.system, &cert, &hom, &verify)?;
            Ok(transform_outcome(r, json!({ "source": bound_pair(&cert), "sigma": hom.sigma() })))
        }
        TransformKind::Douglas => {
            let t = match &task.t {
                Some(_) => l.task_operator(&task.t, "task.t")?,
                None => l.system.k().clone(),
            };
            let t_prime = match (&task.t_prime, &task.u) {
                (Some(_), _) => l.task_operator(&task.t_prime, "task.t_prime")?,
                (None, Some(_)) => l.task_operator(&task.u, "task.u")?,
                (None, None) => {
                    return Err(CliError::Validation("task.t_prime or task.u is required for this command".into()))
                }
            };
            let sol = douglas_solve(&t, &t_prime)?;
            Ok(Outcome {
                result: json!({
                    "included": true,
                    "lambda": sol.lambda,
                    "residual": sol.residual,
                    "majorization_gap": sol.majorization_gap,
                    "solution": operator_report(&sol.d)?,
                }),
                positive: true,
            })
        }
        TransformKind::Range => {
            let u = l.task_operator(&task.u, "task.u")?;
            let cert = source_certificate(l, config)?;
            let (sol, r) = range_inclusion_transfer(&l.system, &cert, &u, &verify)?;
            Ok(transform_outcome(r, json!({ "source": bound_pair(&cert), "lambda": sol.lambda })))
        }
    }
}

fn bound_pair(cert: &FrameCertificate) -> Value {
    json!({ "lower": cert.lower, "upper": cert.upper, "status": cert.status })
}

fn example(n: usize, alpha: f64, beta: f64, config: &RunConfig) -> Result<Outcome, CliError> {
    let es = cframe::build_example(n, alpha, beta).map_err(|e| CliError::Usage(e.to_string()))?;
    let cert = example_certificate(&es, config.samples, config.seed)?;
    let residual = cert.identity_residual;
    let positive = residual <= EXAMPLE_TOL && cert.status == FrameStatus::Frame;
    let exact: AlgebraElement = es.exact_lower();
    Ok(Outcome { result: json!({ "residual": residual, "certificate": cert, "exact_lower": exact }), positive })
}
