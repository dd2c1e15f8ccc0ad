//! Echo-state-network hand-waving classifier.
//!
//! Inputs per frame are neck-relative, shoulder-scaled keypoints followed by
//! the mean intensity of a fingertip crop. A sparse random reservoir with
//! leaky tanh units is driven by the sequence and a ridge-regression readout
//! on the post-washout states decides waving vs. not waving.

mod esn;
mod features;
mod readout;
pub mod synth;

pub use esn::{spectral_radius, Esn, EsnConfig};
pub use features::{
    feature_vector, fingertip_energy, normalize_skeleton, FingertipPatch, Joint, SkeletonFrame,
    FEATURE_DIM, JOINT_ORDER,
};
pub use readout::{
    classify, collect_states, evaluate, fit_readout, ridge_solve, Classification, Evaluation,
    Label, LabeledSequence,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EsnError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("missing joint {0:?}")]
    MissingJoint(Joint),
    #[error("shoulder distance {0} px is too small to normalize")]
    DegenerateScale(f64),
    #[error("non-finite or out-of-range value: {0}")]
    NonFinite(String),
    #[error("fingertip patch is empty")]
    EmptyPatch,
    #[error("reservoir matrix is nilpotent after repeated resampling")]
    ZeroSpectralRadius,
    #[error("readout system is singular (pivot {pivot})")]
    SingularSystem { pivot: usize },
    #[error("training data has no {0:?} sequence")]
    MissingClass(Label),
    #[error("model has no trained readout")]
    UntrainedModel,
    #[error("sequence has no frames")]
    EmptySequence,
    #[error("model/dataset format: {0}")]
    Format(String),
}
