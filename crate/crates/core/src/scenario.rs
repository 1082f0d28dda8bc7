//! Canonical branching scenarios and their run configuration.
//!
//! * `single`: one qubit at the origin recorded by a field on `1..=n`.
//! * `bidirectional`: as `single`, then the qubit also touches a spin at −1.
//! * `collision`: unentangled qubits at both ends of a symmetric field.
//! * `epr`: as `collision` but the qubits start anticorrelated and entangled.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::config::AnalysisSpec;
use crate::error::{Error, Result};
use crate::gates::{gate_field_copy, gate_field_swap, gate_system_field, Gate2};
use crate::lattice::{BasisString, Lattice, SiteId, SiteKind};
use crate::schedule::{run_schedule, GateApplication, Schedule};
use crate::state::{basis_vector, PureState};

/// Default tolerance for decoherence and branch decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: String,
    pub initial: PureState,
    pub schedule: Schedule,
    pub horizon: usize,
    pub analyses: Vec<AnalysisSpec>,
    pub tolerance: f64,
    /// Non-fatal notes raised while building the scenario.
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn lattice(&self) -> &Lattice {
        self.initial.lattice()
    }

    pub fn run(&self) -> Result<Vec<PureState>> {
        run_schedule(&self.initial, &self.schedule, self.horizon)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_analyses(mut self, analyses: Vec<AnalysisSpec>) -> Self {
        self.analyses = analyses;
        self
    }
}

/// Which field–field interaction carries the record along the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldGate {
    Copy,
    Swap,
}

impl FieldGate {
    fn gate(self) -> Gate2 {
        match self {
            FieldGate::Copy => gate_field_copy(),
            FieldGate::Swap => gate_field_swap(),
        }
    }
}

fn qubit_vector(alpha: Complex64, beta: Complex64) -> Result<[Complex64; 2]> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized(n));
    }
    let s = 1.0 / n.sqrt();
    Ok([alpha * s, beta * s])
}

fn product_with_system(lattice: &Lattice, system: [Complex64; 2]) -> Result<PureState> {
    let sites: BTreeMap<SiteId, [Complex64; 2]> = lattice
        .sites()
        .iter()
        .map(|s| (s.index, if s.kind == SiteKind::System { system } else { basis_vector(0) }))
        .collect();
    PureState::product(lattice.clone(), &sites)
}

/// Qubit `α|0⟩ + β|1⟩` at 0, field ↑ on `1..=n_sites`; step 0 records the
/// qubit on site 1, step t ≥ 1 copies site t onto t+1.
pub fn scenario_single(alpha: Complex64, beta: Complex64, n_sites: usize) -> Result<ScenarioConfig> {
    scenario_single_with(alpha, beta, n_sites, FieldGate::Copy)
}

pub fn scenario_single_with(alpha: Complex64, beta: Complex64, n_sites: usize, field: FieldGate) -> Result<ScenarioConfig> {
    if n_sites == 0 {
        return Err(Error::InvalidArgument("n_sites must be at least 1".into()));
    }
    let qubit = qubit_vector(alpha, beta)?;
    let n = n_sites as i64;
    let lattice = Lattice::with_systems(0, n, &[0])?;
    let initial = product_with_system(&lattice, qubit)?;
    let mut schedule = Schedule::new().with(0, GateApplication::pair(0, 1, gate_system_field()));
    for t in 1..n {
        schedule.push(t as usize, GateApplication::pair(t, t + 1, field.gate()));
    }
    Ok(ScenarioConfig {
        name: "single".into(),
        initial,
        schedule,
        horizon: n_sites,
        analyses: Vec::new(),
        tolerance: DEFAULT_TOLERANCE,
        warnings: Vec::new(),
    })
}

/// Equal-weight qubit recorded rightwards for three steps; at step 3 it
/// instead interacts with a spin at −1, after which the rightward copy
/// chain resumes from site 3.
pub fn scenario_bidirectional(n_right: usize) -> Result<ScenarioConfig> {
    if n_right < 3 {
        return Err(Error::InvalidArgument("bidirectional scenario needs n_right >= 3".into()));
    }
    let n = n_right as i64;
    let lattice = Lattice::with_systems(-1, n, &[0])?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let initial = product_with_system(&lattice, [h, h])?;
    let mut schedule = Schedule::new()
        .with(0, GateApplication::pair(0, 1, gate_system_field()))
        .with(1, GateApplication::pair(1, 2, gate_field_copy()))
        .with(2, GateApplication::pair(2, 3, gate_field_copy()))
        .with(3, GateApplication::pair(0, -1, gate_system_field()));
    for t in 4..=n {
        schedule.push(t as usize, GateApplication::pair(t - 1, t, gate_field_copy()));
    }
    Ok(ScenarioConfig {
        name: "bidirectional".into(),
        initial,
        schedule,
        horizon: n_right + 1,
        analyses: Vec::new(),
        tolerance: DEFAULT_TOLERANCE,
        warnings: Vec::new(),
    })
}

/// Two-qubit schedule shared by the collision and EPR scenarios: both qubits
/// record onto their neighbours, then swap gates move the records inwards
/// until they meet.
fn two_sided_schedule(n_field: usize) -> (Schedule, Vec<String>) {
    let n = n_field as i64;
    let right = n + 1;
    let mut warnings = Vec::new();
    if n_field % 2 == 1 {
        let msg = format!("odd field length {n_field}: the two record fronts cannot meet symmetrically");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let mut schedule = Schedule::new().with(0, GateApplication::pair(0, 1, gate_system_field()));
    if right - 1 != 1 {
        schedule.push(0, GateApplication::pair(right, right - 1, gate_system_field()));
    }
    let mut s = 1;
    while s < n {
        let left = (s, s + 1);
        let mirrored = (right - s, right - s - 1);
        let t = s as usize;
        if left.0 == mirrored.1 && left.1 == mirrored.0 {
            schedule.push(t, GateApplication::pair(left.0, left.1, gate_field_swap()));
            break;
        }
        if mirrored.1 <= left.1 {
            // fronts collide on a shared site; only the left one advances
            schedule.push(t, GateApplication::pair(left.0, left.1, gate_field_swap()));
            break;
        }
        schedule.push(t, GateApplication::pair(left.0, left.1, gate_field_swap()));
        schedule.push(t, GateApplication::pair(mirrored.0, mirrored.1, gate_field_swap()));
        s += 1;
    }
    (schedule, warnings)
}

/// Two independent equal-weight qubits at 0 and 5 with four ↑ spins between.
pub fn scenario_collision() -> Result<ScenarioConfig> {
    scenario_collision_with(4)
}

pub fn scenario_collision_with(n_field: usize) -> Result<ScenarioConfig> {
    if n_field == 0 {
        return Err(Error::InvalidArgument("collision needs at least one field site".into()));
    }
    let right = n_field as i64 + 1;
    let lattice = Lattice::with_systems(0, right, &[0, right])?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let initial = product_with_system(&lattice, [h, h])?;
    let (schedule, warnings) = two_sided_schedule(n_field);
    let horizon = schedule.len();
    Ok(ScenarioConfig {
        name: "collision".into(),
        initial,
        schedule,
        horizon,
        analyses: Vec::new(),
        tolerance: DEFAULT_TOLERANCE,
        warnings,
    })
}

/// Qubits at 0 and 5 in `(|0⟩…|1⟩ + |1⟩…|0⟩)/√2`, field ↑ between.
pub fn scenario_epr() -> Result<ScenarioConfig> {
    scenario_epr_with(4)
}

pub fn scenario_epr_with(n_field: usize) -> Result<ScenarioConfig> {
    if n_field == 0 {
        return Err(Error::InvalidArgument("epr needs at least one field site".into()));
    }
    let right = n_field as i64 + 1;
    let lattice = Lattice::with_systems(0, right, &[0, right])?;
    let len = lattice.len();
    let mut a = BasisString::zeros(len);
    a.set(len - 1, 1);
    let mut b = BasisString::zeros(len);
    b.set(0, 1);
    let one = Complex64::new(1.0, 0.0);
    let initial = PureState::entangled(lattice, vec![(a, one), (b, one)])?;
    let (schedule, warnings) = two_sided_schedule(n_field);
    let horizon = schedule.len();
    Ok(ScenarioConfig {
        name: "epr".into(),
        initial,
        schedule,
        horizon,
        analyses: Vec::new(),
        tolerance: DEFAULT_TOLERANCE,
        warnings,
    })
}

/// Names and one-line descriptions of the built-in scenarios.
pub fn catalogue() -> &'static [(&'static str, &'static str)] {
    &[
        ("single", "one qubit at 0 recorded by a field on 1..n (params: alpha, beta, n_sites, field_gate)"),
        ("bidirectional", "single-qubit record chain that also touches a spin at -1 at step 3 (params: n_right)"),
        ("collision", "two unentangled qubits whose record fronts meet mid-field (params: n_field)"),
        ("epr", "two anticorrelated entangled qubits with meeting record fronts (params: n_field)"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_schedule_shape() {
        let cfg = scenario_single(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), 4).unwrap();
        assert_eq!(cfg.lattice().len(), 5);
        assert_eq!(cfg.schedule.len(), 4);
        assert_eq!(cfg.schedule.step(0)[0].gate_name(), "U_si");
        assert_eq!(cfg.schedule.step(3)[0].support(), vec![SiteId(3), SiteId(4)]);
        assert!(cfg.schedule.non_local().is_empty());
    }

    #[test]
    fn unnormalized_qubit_is_rejected() {
        assert!(matches!(scenario_single(c(1.0), c(1.0), 3), Err(Error::Unnormalized(_))));
        assert!(scenario_single(c(1.0), c(0.0), 0).is_err());
        assert!(scenario_bidirectional(2).is_err());
    }

    #[test]
    fn collision_schedule_matches_the_meeting_pattern() {
        let cfg = scenario_collision().unwrap();
        let supports: Vec<Vec<Vec<SiteId>>> = cfg
            .schedule
            .steps()
            .iter()
            .map(|s| s.iter().map(|a| a.support()).collect())
            .collect();
        let ids = |v: &[i64]| v.iter().map(|&i| SiteId(i)).collect::<Vec<_>>();
        assert_eq!(
            supports,
            vec![
                vec![ids(&[0, 1]), ids(&[5, 4])],
                vec![ids(&[1, 2]), ids(&[4, 3])],
                vec![ids(&[2, 3])],
            ]
        );
        assert_eq!(cfg.horizon, 3);
        assert!(cfg.warnings.is_empty());
    }

    #[test]
    fn odd_field_lengths_warn_but_run() {
        let cfg = scenario_collision_with(3).unwrap();
        assert_eq!(cfg.warnings.len(), 1);
        let states = cfg.run().unwrap();
        assert!(states.iter().all(|s| (s.norm() - 1.0).abs() < 1e-12));
        let even = scenario_epr_with(6).unwrap();
        assert!(even.warnings.is_empty());
        assert_eq!(even.horizon, 4);
    }

    #[test]
    fn epr_initial_state() {
        let cfg = scenario_epr().unwrap();
        let psi = &cfg.initial;
        assert_eq!(psi.num_terms(), 2);
        assert!((psi.amplitude(&"000001".parse().unwrap()).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((psi.amplitude(&"100000".parse().unwrap()).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
