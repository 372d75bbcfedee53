//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("coefficient fields do not match")]
    FieldMismatch,
    #[error("monomial orders do not match")]
    OrderMismatch,
    #[error("values belong to different rings")]
    RingMismatch,
    #[error("exponent overflow (bound 2^32)")]
    ExponentOverflow,
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("degree cap {cap} exceeded during basis computation")]
    DegreeCapExceeded { cap: u64 },
    #[error("saturation did not stabilize within {bound} iterations")]
    SaturationBound { bound: u32 },
    #[error("map is not well-defined: {detail}")]
    NotWellDefined { detail: String },
    #[error("nonzerodivisor witness failed for `{elem}`: (0 : {elem}) is nonzero")]
    NonzerodivisorWitness { elem: String },
    #[error("domain-model assertion required for this operation")]
    DomainModelRequired,
    #[error("presentation is not weighted-homogeneous")]
    Inhomogeneous,
    #[error("involution axiom `{axiom}` failed: {detail}")]
    StarAxiom { axiom: &'static str, detail: String },
    #[error("certificate invalid: {which}")]
    CertificateInvalid { which: &'static str },
    #[error("all generators are zero in the quotient ring")]
    AllGeneratorsZero,
    #[error("shape mismatch: {detail}")]
    ShapeMismatch { detail: String },
    #[error("duality target does not match the computed Hom module")]
    HomTargetMismatch,
    #[error("size bound exceeded: {detail}")]
    SizeBound { detail: String },
    #[error("internal consistency failure: {detail}")]
    Internal { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
