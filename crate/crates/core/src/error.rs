use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Contract violations raised by the library.
///
/// Variant names double as the stable error names reported by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point arity {found} does not match scaffold arity {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("operation unsupported at scaffold depth {0}")]
    DepthUnsupported(usize),
    #[error("{y} is not a predecessor of {x}")]
    NotAPredecessor { x: String, y: String },
    #[error("coordinate arithmetic overflowed")]
    Overflow,
    #[error("sample of size {size} exceeds the scheme's maximum input {max}")]
    SampleTooLarge { size: usize, max: usize },
    #[error("side information value {value} does not fit in {bits} bits")]
    InvalidSideInfo { value: u64, bits: u32 },
    #[error("sample not supported by this scheme: {0}")]
    UnsupportedSample(String),
    #[error("enumeration of {count} items exceeds the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("scheme family has no member for sample size {0}")]
    FamilyGap(u64),
    #[error("every pool element is reachable by some reconstruction")]
    NoFreshElement,
    #[error("contract violated: {0}")]
    ContractViolated(String),
    #[error("concept class is empty")]
    EmptyClass,
    #[error("hypothesis is not a member of the class: {0}")]
    NotInClass(String),
    #[error("no class member contains the reconstruction union")]
    NoDominatingConcept,
    #[error("concept class is not union bounded")]
    NotUnionBounded,
    #[error("removal process stalled at size {size}, above the bound {bound}")]
    SizeBoundExceeded { size: usize, bound: usize },
    #[error("counting bound requires r = p (got r = {r}, p = {p})")]
    RNotP { r: usize, p: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// The variant name, e.g. `"CapExceeded"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::DepthUnsupported(_) => "DepthUnsupported",
            Error::NotAPredecessor { .. } => "NotAPredecessor",
            Error::Overflow => "Overflow",
            Error::SampleTooLarge { .. } => "SampleTooLarge",
            Error::InvalidSideInfo { .. } => "InvalidSideInfo",
            Error::UnsupportedSample(_) => "UnsupportedSample",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::FamilyGap(_) => "FamilyGap",
            Error::NoFreshElement => "NoFreshElement",
            Error::ContractViolated(_) => "ContractViolated",
            Error::EmptyClass => "EmptyClass",
            Error::NotInClass(_) => "NotInClass",
            Error::NoDominatingConcept => "NoDominatingConcept",
            Error::NotUnionBounded => "NotUnionBounded",
            Error::SizeBoundExceeded { .. } => "SizeBoundExceeded",
            Error::RNotP { .. } => "RNotP",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
