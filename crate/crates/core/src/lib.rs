//! Controlled operator frames on finite Hilbert modules over commutative C*-algebras.
//!
//! The algebra is `C^d` with pointwise operations; a module is a direct sum of
//! weighted complex fibers, one per character, and every adjointable operator is
//! block diagonal. Algebra-valued inequalities therefore split into one
//! Hermitian-form inequality per fiber, which is how all bounds are computed.

pub mod algebra;
pub mod error;
pub mod frames;
pub mod module_space;
pub mod operators;
pub mod random;
pub mod spectral;
pub mod theorems;
pub mod weighted_l2;

pub use algebra::{Algebra, AlgebraElement, DEFAULT_EPS_NZ, DEFAULT_EPS_POS};
pub use error::{FrameError, Result};
pub use frames::{
    analysis, certify, certify_with, check_at, check_bounds_at, extremal_witnesses, frame_operator,
    optimal_lower_bound, optimal_upper_bound, reconstruct, sequence_inner_product, solve_frame_equation, synthesis,
    CertifyConfig, CheckReport, CommutationFlags, ControlledFrameSystem, FrameCertificate, FrameStatus, LowerBound,
    Reconstruction, RichardsonConfig,
};
pub use module_space::{Fiber, ModuleSpace, ModuleVector, SpaceRef};
pub use num_complex::Complex64;
pub use operators::{ModuleOperator, OperatorClass};
pub use spectral::{CMatrix, CVector};
pub use theorems::{
    compose_with_q, control_uncontrolled, derive_k_frame, douglas_solve, invertibility_witness, invertible_q_bounds,
    range_inclusion_transfer, transport, upgrade_by_surjectivity, Check, DouglasSolution, HomomorphismSpec,
    InvertibilityReport, TransformReport, VerifyConfig,
};
pub use weighted_l2::{
    build_example, example_certificate, example_sum_identity, ExampleCertificate, SequenceExample, SumIdentity,
};
