//! Discrete-time gate schedules.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gates::{apply_gate1, apply_gate2, Gate1, Gate2};
use crate::lattice::{Lattice, SiteId};
use crate::state::PureState;

#[derive(Debug, Clone, PartialEq)]
pub enum GateApplication {
    /// Two-site gate; its first tensor factor acts on `sites.0`.
    Pair { sites: (SiteId, SiteId), gate: Gate2 },
    Single { site: SiteId, gate: Gate1 },
}

impl GateApplication {
    pub fn pair(a: i64, b: i64, gate: Gate2) -> Self {
        GateApplication::Pair { sites: (SiteId(a), SiteId(b)), gate }
    }

    pub fn single(site: i64, gate: Gate1) -> Self {
        GateApplication::Single { site: SiteId(site), gate }
    }

    pub fn support(&self) -> Vec<SiteId> {
        match self {
            GateApplication::Pair { sites, .. } => vec![sites.0, sites.1],
            GateApplication::Single { site, .. } => vec![*site],
        }
    }

    /// Nearest-neighbour (or single-site) application.
    pub fn is_local(&self) -> bool {
        match self {
            GateApplication::Pair { sites, .. } => (sites.0 .0 - sites.1 .0).abs() == 1,
            GateApplication::Single { .. } => true,
        }
    }

    pub fn gate_name(&self) -> &str {
        match self {
            GateApplication::Pair { gate, .. } => gate.name(),
            GateApplication::Single { gate, .. } => gate.name(),
        }
    }

    fn lowest_site(&self) -> SiteId {
        self.support().into_iter().min().expect("nonempty support")
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        match self {
            GateApplication::Pair { sites, gate } => apply_gate2(state, gate, *sites),
            GateApplication::Single { site, gate } => apply_gate1(state, gate, *site),
        }
    }
}

/// Steps of pairwise-disjoint gate applications. Step `t` takes the state
/// at time `t` to time `t + 1`; steps past the end are empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    steps: Vec<Vec<GateApplication>>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn push(&mut self, time: usize, app: GateApplication) {
        if self.steps.len() <= time {
            self.steps.resize_with(time + 1, Vec::new);
        }
        let step = &mut self.steps[time];
        step.push(app);
        step.sort_by_key(GateApplication::lowest_site);
    }

    pub fn with(mut self, time: usize, app: GateApplication) -> Self {
        self.push(time, app);
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step(&self, time: usize) -> &[GateApplication] {
        self.steps.get(time).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn steps(&self) -> &[Vec<GateApplication>] {
        &self.steps
    }

    /// Checks that every site exists, pairs are distinct and no site is
    /// touched twice within a step.
    pub fn validate(&self, lattice: &Lattice) -> Result<()> {
        for (t, step) in self.steps.iter().enumerate() {
            let mut used = BTreeSet::new();
            for app in step {
                if let GateApplication::Pair { sites, .. } = app {
                    if sites.0 == sites.1 {
                        return Err(Error::PairNotDistinct(sites.0));
                    }
                }
                for site in app.support() {
                    lattice.require(site)?;
                    if !used.insert(site) {
                        return Err(Error::OverlappingSupports { step: t, site });
                    }
                }
            }
        }
        Ok(())
    }

    /// `(time, application)` for every non-nearest-neighbour pair gate.
    pub fn non_local(&self) -> Vec<(usize, &GateApplication)> {
        self.steps
            .iter()
            .enumerate()
            .flat_map(|(t, step)| step.iter().filter(|a| !a.is_local()).map(move |a| (t, a)))
            .collect()
    }
}

/// States at times `0..=horizon`.
pub fn run_schedule(state: &PureState, schedule: &Schedule, horizon: usize) -> Result<Vec<PureState>> {
    schedule.validate(state.lattice())?;
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(state.clone());
    for t in 0..horizon {
        let mut next = out[t].clone();
        for app in schedule.step(t) {
            next = app.apply(&next)?;
        }
        out.push(next);
    }
    Ok(out)
}
