use thiserror::Error;

use crate::lattice::SiteId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice must contain at least one site")]
    EmptyLattice,
    #[error("lattice site indices must be strictly increasing (found {0} after {1})")]
    UnorderedLattice(SiteId, SiteId),
    #[error("a field site may not sit at the origin; site 0 is reserved for a system qubit")]
    FieldAtOrigin,
    #[error("site {0} is not in the lattice")]
    UnknownSite(SiteId),
    #[error("no single-site state given for site {0}")]
    MissingSiteAssignment(SiteId),
    #[error("state for site {site} is not normalized (norm² = {norm_sqr})")]
    UnnormalizedSite { site: SiteId, norm_sqr: f64 },
    #[error("amplitudes are not normalized (norm² = {0})")]
    Unnormalized(f64),
    #[error("basis string {0} appears more than once")]
    DuplicateBasis(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("no terms given")]
    NoTerms,
    #[error("basis string has length {found}, lattice has {expected} sites")]
    BasisLength { expected: usize, found: usize },
    #[error("invalid basis string {0:?}: only '0' and '1' are allowed")]
    InvalidBasis(String),
    #[error("states live on different lattices")]
    LatticeMismatch,
    #[error("gate pair must name two distinct sites (got {0} twice)")]
    PairNotDistinct(SiteId),
    #[error("matrix for gate {name} is not unitary (max |U†U - I| = {deviation:e})")]
    NotUnitary { name: String, deviation: f64 },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("site {site} is used by two gates in step {step}")]
    OverlappingSupports { step: usize, site: SiteId },
    #[error("subsystem of {requested} sites exceeds the dense limit of {limit}")]
    SubsystemTooLarge { requested: usize, limit: usize },
    #[error("subsystem is empty")]
    EmptySubsystem,
    #[error("site {0} appears twice in a subsystem")]
    RepeatedSite(SiteId),
    #[error("regions overlap at site {0}")]
    Overlap(SiteId),
    #[error("measurement settings must address distinct sites (got {0} twice)")]
    SameSite(SiteId),
    #[error("no rotation given for site {0}")]
    MissingRotation(SiteId),
    #[error("density matrix is invalid: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("TOML error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
