//! JSON system descriptions.
//!
//! Complex scalars are `[re, im]` (a bare number is accepted as a real scalar),
//! matrices are row-major nested arrays, and an operator is a list of fiber
//! blocks. Controls and `K` default to the identity when omitted.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use cframe::{
    Algebra, CMatrix, Complex64, ControlledFrameSystem, HomomorphismSpec, ModuleOperator, ModuleSpace, SpaceRef,
    DEFAULT_EPS_NZ, DEFAULT_EPS_POS,
};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

/// A complex scalar written as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar(pub Complex64);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a pair [re, im]")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Ok(Scalar(Complex64::new(v, 0.0)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar(Complex64::new(v as f64, 0.0)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar(Complex64::new(v as f64, 0.0)))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Scalar, A::Error> {
                let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Scalar(Complex64::new(re, im)))
            }
        }

        d.deserialize_any(ScalarVisitor)
    }
}

pub type Matrix = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub d: usize,
    #[serde(default = "default_eps_pos")]
    pub eps_pos: f64,
    #[serde(default = "default_eps_nz")]
    pub eps_nz: f64,
}

fn default_eps_pos() -> f64 {
    DEFAULT_EPS_POS
}

fn default_eps_nz() -> f64 {
    DEFAULT_EPS_NZ
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlock {
    pub dims: Vec<usize>,
    /// Fiber weights; identity weights when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Matrix>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameBlock {
    pub family: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomBlock {
    pub sigma: Vec<usize>,
    /// Target fiber weights; `W_{σ(k)}` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_weights: Option<Vec<Matrix>>,
    /// `Θ_k` blocks; identities when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Matrix>>,
}

/// Parameters for the `transform` subcommands.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskBlock {
    /// Operator name for `transform q` and `transform invq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// Operator name for `transform range`, and the default right-hand side of `transform douglas`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    /// Left factor of `transform douglas`; the frame's `K` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    /// Right-hand side of `transform douglas`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<HomBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub algebra: AlgebraBlock,
    pub space: SpaceBlock,
    pub operators: BTreeMap<String, Vec<Matrix>>,
    pub frame: FrameBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskBlock>,
}

/// A validated description with its module objects built.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub description: SystemDescription,
    pub space: SpaceRef,
    pub operators: BTreeMap<String, ModuleOperator>,
    pub system: ControlledFrameSystem,
}

/// Read, parse and validate a description file; `eps_pos` overrides the file's positivity tolerance.
pub fn parse_system(path: &Path, eps_pos: Option<f64>) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text, eps_pos)
}

pub fn parse_str(text: &str, eps_pos: Option<f64>) -> Result<Loaded, CliError> {
    let mut description: SystemDescription = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if let Some(eps) = eps_pos {
        description.algebra.eps_pos = eps;
    }
    build(description)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn matrix(m: &Matrix, rows: usize, cols: usize, what: &str) -> Result<CMatrix, CliError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        let got_cols = m.first().map_or(0, |r| r.len());
        return Err(invalid(format!("{what} must be {rows}x{cols}, got {}x{got_cols}", m.len())));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| m[i][j].0))
}

pub fn to_matrix(m: &CMatrix) -> Matrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Scalar(m[(i, j)])).collect()).collect()
}

fn build(description: SystemDescription) -> Result<Loaded, CliError> {
    let a = &description.algebra;
    let dims = &description.space.dims;
    if dims.len() != a.d {
        return Err(invalid(format!("space.dims has {} fibers but algebra.d = {}", dims.len(), a.d)));
    }
    let algebra = Algebra::with_tolerances(a.d, a.eps_pos, a.eps_nz).map_err(|e| invalid(format!("algebra: {e}")))?;
    let weights = match &description.space.weights {
        Some(ws) => {
            if ws.len() != a.d {
                return Err(invalid(format!("space.weights has {} entries, expected {}", ws.len(), a.d)));
            }
            ws.iter()
                .zip(dims)
                .enumerate()
                .map(|(j, (w, &n))| matrix(w, n, n, &format!("space.weights[{j}]")))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => dims.iter().map(|&n| CMatrix::identity(n, n)).collect(),
    };
    let space = ModuleSpace::from_weights(algebra, weights).map_err(|e| invalid(format!("space: {e}")))?;

    let mut operators = BTreeMap::new();
    for (name, blocks) in &description.operators {
        if blocks.len() != a.d {
            return Err(invalid(format!("operator '{name}' has {} blocks, expected {}", blocks.len(), a.d)));
        }
        let blocks = blocks
            .iter()
            .zip(dims)
            .enumerate()
            .map(|(j, (b, &n))| matrix(b, n, n, &format!("operator '{name}' block {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        let op = ModuleOperator::endo(&space, blocks).map_err(|e| invalid(format!("operator '{name}': {e}")))?;
        operators.insert(name.clone(), op);
    }

    let lookup = |name: &str, field: &str| {
        operators.get(name).cloned().ok_or_else(|| invalid(format!("{field} refers to unknown operator '{name}'")))
    };
    let optional = |name: &Option<String>, field: &str| match name {
        Some(n) => lookup(n, field),
        None => Ok(ModuleOperator::identity(&space)),
    };
    let f = &description.frame;
    if f.family.is_empty() {
        return Err(invalid("frame.family is empty"));
    }
    let family = f
        .family
        .iter()
        .enumerate()
        .map(|(i, n)| lookup(n, &format!("frame.family[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let c = optional(&f.c, "frame.c")?;
    let c_prime = optional(&f.c_prime, "frame.c_prime")?;
    let k = optional(&f.k, "frame.k")?;
    if let Some(task) = &description.task {
        for (field, name) in
            [("task.q", &task.q), ("task.u", &task.u), ("task.t", &task.t), ("task.t_prime", &task.t_prime)]
        {
            if let Some(n) = name {
                lookup(n, field)?;
            }
        }
    }
    let system =
        ControlledFrameSystem::new(space.clone(), family, c, c_prime, k).map_err(|e| invalid(format!("frame: {e}")))?;
    Ok(Loaded { description, space, operators, system })
}

impl Loaded {
    pub fn task(&self) -> TaskBlock {
        self.description.task.clone().unwrap_or_default()
    }

    /// Operator named in the task block, or an error naming the missing field.
    pub fn task_operator(&self, name: &Option<String>, field: &str) -> Result<ModuleOperator, CliError> {
        let n = name.as_ref().ok_or_else(|| invalid(format!("{field} is required for this command")))?;
        self.operators.get(n).cloned().ok_or_else(|| invalid(format!("{field} refers to unknown operator '{n}'")))
    }

    pub fn homomorphism(&self) -> Result<HomomorphismSpec, CliError> {
        let hom = self.task().hom.ok_or_else(|| invalid("task.hom is required for this command"))?;
        let source = &self.space;
        for (k, &s) in hom.sigma.iter().enumerate() {
            if s >= source.num_fibers() {
                return Err(invalid(format!("task.hom.sigma[{k}] = {s} is not a fiber of the source")));
            }
        }
        let dim = |k: usize| source.fiber(hom.sigma[k]).dim();
        let weights = match &hom.target_weights {
            Some(ws) => {
                if ws.len() != hom.sigma.len() {
                    return Err(invalid("task.hom.target_weights must have one entry per sigma entry"));
                }
                ws.iter()
                    .enumerate()
                    .map(|(k, w)| matrix(w, dim(k), dim(k), &format!("task.hom.target_weights[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => hom.sigma.iter().map(|&s| source.fiber(s).weight().clone()).collect(),
        };
        let theta = match &hom.theta {
            Some(ts) => {
                if ts.len() != hom.sigma.len() {
                    return Err(invalid("task.hom.theta must have one entry per sigma entry"));
                }
                ts.iter()
                    .enumerate()
                    .map(|(k, t)| matrix(t, dim(k), dim(k), &format!("task.hom.theta[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => (0..hom.sigma.len()).map(|k| CMatrix::identity(dim(k), dim(k))).collect(),
        };
        let algebra = Algebra::with_tolerances(hom.sigma.len(), source.algebra().eps_pos(), source.algebra().eps_nz())
            .map_err(|e| invalid(format!("task.hom: {e}")))?;
        let target = ModuleSpace::from_weights(algebra, weights).map_err(|e| invalid(format!("task.hom: {e}")))?;
        Ok(HomomorphismSpec::new(source.clone(), target, hom.sigma.clone(), theta)?)
    }
}
