//! Everything measured on states.

pub mod branches;
pub mod correlation;
pub mod density;
pub mod measurement;

pub use branches::{branch_decompose, extended_branch_clusters, site_purities, Assignment, Branch, BranchClusters, BranchDecomposition, Cluster};
pub use correlation::{chsh, chsh_scan, correlation, ChshGridRow, ChshScan, ChshSettings, CorrelationTensor, MeasurementSetting};
pub use density::{
    change_basis, coherence, entanglement_entropy, entropy_of_spectrum, is_decohered, mutual_information, purity, reduced_density_matrix,
    region_spectrum, von_neumann_entropy, DensityMatrix, MAX_DENSE_SITES,
};
pub use measurement::{outcome_probabilities, sample_measurement};
