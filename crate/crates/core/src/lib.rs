//! Exact simulation of decoherence-driven wavefunction branching on a
//! one-dimensional lattice of qubits and spins.
//!
//! A run starts from a [`PureState`] on a [`Lattice`], applies a [`Schedule`]
//! of local two-site gates one time step at a time, and analyses each step:
//! reduced density matrices, decoherence, branch decompositions, branch
//! clusters, mutual information and CHSH correlations.
//!
//! ```
//! use branching_lattice::{scenario_single, branch_decompose};
//! use num_complex::Complex64;
//!
//! let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
//! let run = scenario_single(h, h, 4).unwrap();
//! let states = run.run().unwrap();
//! let branches = branch_decompose(&states[3], run.tolerance).unwrap();
//! assert_eq!(branches.len(), 2);
//! ```

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod gates;
pub mod lattice;
pub mod numfmt;
pub mod oracle;
pub mod report;
pub mod scenario;
pub mod schedule;
pub mod state;
pub mod verify;

pub use analysis::*;
pub use config::{AnalysisSpec, ConfigFile};
pub use error::{Error, Result};
pub use gates::{apply_gate1, apply_gate2, gate_by_name, gate_field_copy, gate_field_swap, gate_system_field, identity2, rotation_gate, Gate1, Gate2, NamedGate};
pub use lattice::{BasisString, Lattice, Site, SiteId, SiteKind};
pub use scenario::{
    catalogue, scenario_bidirectional, scenario_collision, scenario_collision_with, scenario_epr, scenario_epr_with, scenario_single, scenario_single_with,
    FieldGate, ScenarioConfig, DEFAULT_TOLERANCE,
};
pub use schedule::{run_schedule, GateApplication, Schedule};
pub use state::{basis_vector, PureState, NORM_TOLERANCE, PRUNE_THRESHOLD};
