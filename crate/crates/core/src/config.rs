//! Scenario configuration files.
//!
//! A config is a TOML document. It either names a built-in scenario:
//!
//! ```toml
//! horizon = 3
//! [scenario]
//! kind = "epr"
//! [[analysis]]
//! name = "branches"
//! ```
//!
//! or spells the run out with `[[lattice]]`, `[init]` and `[[schedule]]`
//! sections:
//!
//! ```toml
//! [[lattice]]
//! index = 0
//! kind = "system"
//! [[lattice]]
//! index = 1
//! kind = "field"
//!
//! [init]
//! product = [ { site = 0, state = [0.7071067811865476, 0.7071067811865476] } ]
//!
//! [[schedule]]
//! time = 0
//! pair = [0, 1]
//! gate = "U_si"
//! ```
//!
//! Amplitudes are either a real number or `[re, im]`. Sites omitted from
//! `init.product` start in `|0⟩`/↑. Schedule entries take a library gate name
//! (`gate`), an inline 4×4 `matrix`, or a single `site` with a one-site gate
//! such as `"rot(0.5)"`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{gate_by_name, Gate2, NamedGate};
use crate::lattice::{BasisString, Lattice, Site, SiteId};
use crate::scenario::{
    scenario_bidirectional, scenario_collision_with, scenario_epr_with, scenario_single_with, FieldGate, ScenarioConfig, DEFAULT_TOLERANCE,
};
use crate::schedule::{GateApplication, Schedule};
use crate::state::{basis_vector, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amp {
    Real(f64),
    Complex([f64; 2]),
}

impl Amp {
    pub fn value(self) -> Complex64 {
        match self {
            Amp::Real(r) => Complex64::new(r, 0.0),
            Amp::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Analyses evaluated at every step of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AnalysisSpec {
    Rdm { sites: Vec<SiteId> },
    SiteMetrics {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sites: Option<Vec<SiteId>>,
    },
    Branches,
    Clusters,
    MutualInformation { a: Vec<SiteId>, b: Vec<SiteId> },
    Entropy { region: Vec<SiteId> },
    Correlation { site_a: SiteId, theta_a: f64, site_b: SiteId, theta_b: f64 },
    Chsh { site_a: SiteId, site_b: SiteId, settings: [f64; 4] },
}

impl AnalysisSpec {
    pub fn sites(&self) -> Vec<SiteId> {
        match self {
            AnalysisSpec::Rdm { sites } => sites.clone(),
            AnalysisSpec::SiteMetrics { sites } => sites.clone().unwrap_or_default(),
            AnalysisSpec::Branches | AnalysisSpec::Clusters => Vec::new(),
            AnalysisSpec::MutualInformation { a, b } => a.iter().chain(b).copied().collect(),
            AnalysisSpec::Entropy { region } => region.clone(),
            AnalysisSpec::Correlation { site_a, site_b, .. } | AnalysisSpec::Chsh { site_a, site_b, .. } => vec![*site_a, *site_b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NamedScenario {
    Single {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Amp>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Amp>,
        n_sites: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field_gate: Option<String>,
    },
    Bidirectional { n_right: usize },
    Collision {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_field: Option<usize>,
    },
    Epr {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_field: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub site: SiteId,
    pub state: [Amp; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub basis: String,
    pub amplitude: Amp,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InitSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub product: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub time: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[SiteId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<SiteId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Amp>>>,
}

/// Parsed config file, kept verbatim for echoing into reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<NamedScenario>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattice: Vec<Site>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedule: Vec<ScheduleEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub analysis: Vec<AnalysisSpec>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        ConfigFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Builds the runnable scenario.
    pub fn build(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.scenario {
            Some(named) => {
                if !self.lattice.is_empty() || self.init.is_some() || !self.schedule.is_empty() {
                    return Err(Error::Config("a named scenario cannot be combined with lattice/init/schedule sections".into()));
                }
                build_named(named)?
            }
            None => self.build_explicit()?,
        };
        if let Some(name) = &self.name {
            cfg.name = name.clone();
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::Config(format!("tolerance {tol} outside (0, 1)")));
            }
            cfg.tolerance = tol;
        }
        for spec in &self.analysis {
            for site in spec.sites() {
                if !cfg.lattice().contains(site) {
                    return Err(Error::Config(format!("analysis refers to unknown site {site}")));
                }
            }
        }
        cfg.analyses = self.analysis.clone();
        cfg.schedule.validate(cfg.lattice())?;
        for (t, app) in cfg.schedule.non_local() {
            let msg = format!("step {t}: {} acts on non-adjacent sites {:?}", app.gate_name(), app.support());
            log::warn!("{msg}");
            cfg.warnings.push(msg);
        }
        Ok(cfg)
    }

    fn build_explicit(&self) -> Result<ScenarioConfig> {
        if self.lattice.is_empty() {
            return Err(Error::Config("missing [[lattice]] section (or a [scenario])".into()));
        }
        let mut sites = self.lattice.clone();
        sites.sort_by_key(|s| s.index);
        let lattice = Lattice::new(sites)?;
        let init = self.init.clone().unwrap_or_default();
        let initial = match (init.product.is_empty(), init.terms.is_empty()) {
            (false, false) => return Err(Error::Config("init takes either product or terms, not both".into())),
            (_, false) => {
                let terms = init
                    .terms
                    .iter()
                    .map(|t| Ok((t.basis.parse::<BasisString>()?, t.amplitude.value())))
                    .collect::<Result<Vec<_>>>()?;
                PureState::entangled(lattice, terms)?
            }
            _ => {
                let mut map: BTreeMap<SiteId, [Complex64; 2]> = lattice.site_ids().map(|s| (s, basis_vector(0))).collect();
                for p in &init.product {
                    if !lattice.contains(p.site) {
                        return Err(Error::UnknownSite(p.site));
                    }
                    map.insert(p.site, [p.state[0].value(), p.state[1].value()]);
                }
                PureState::product(lattice, &map)?
            }
        };
        let mut schedule = Schedule::new();
        for entry in &self.schedule {
            schedule.push(entry.time, schedule_application(entry)?);
        }
        let horizon = schedule.len();
        Ok(ScenarioConfig {
            name: "custom".into(),
            initial,
            schedule,
            horizon,
            analyses: Vec::new(),
            tolerance: DEFAULT_TOLERANCE,
            warnings: Vec::new(),
        })
    }
}

fn schedule_application(entry: &ScheduleEntry) -> Result<GateApplication> {
    let t = entry.time;
    match (entry.pair, entry.site) {
        (Some(pair), None) => {
            let gate = match (&entry.gate, &entry.matrix) {
                (Some(name), None) => match gate_by_name(name)? {
                    NamedGate::Two(g) => g,
                    NamedGate::One(_) => return Err(Error::Config(format!("step {t}: {name} is a single-site gate"))),
                },
                (None, Some(rows)) => inline_gate(rows, t)?,
                _ => return Err(Error::Config(format!("step {t}: give exactly one of gate or matrix"))),
            };
            Ok(GateApplication::Pair { sites: (pair[0], pair[1]), gate })
        }
        (None, Some(site)) => {
            let name = entry.gate.as_ref().ok_or_else(|| Error::Config(format!("step {t}: single-site entry needs a gate")))?;
            match gate_by_name(name)? {
                NamedGate::One(gate) => Ok(GateApplication::Single { site, gate }),
                NamedGate::Two(_) => Err(Error::Config(format!("step {t}: {name} needs a pair"))),
            }
        }
        _ => Err(Error::Config(format!("step {t}: give exactly one of pair or site"))),
    }
}

fn inline_gate(rows: &[Vec<Amp>], t: usize) -> Result<Gate2> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::Config(format!("step {t}: inline matrix must be 4×4")));
    }
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            m[i][j] = a.value();
        }
    }
    Gate2::new(format!("inline@{t}"), m)
}

fn field_gate(name: Option<&str>) -> Result<FieldGate> {
    match name {
        None | Some("U_copy") => Ok(FieldGate::Copy),
        Some("U_swap") => Ok(FieldGate::Swap),
        Some(other) => Err(Error::Config(format!("field_gate must be U_copy or U_swap, got {other:?}"))),
    }
}

fn build_named(named: &NamedScenario) -> Result<ScenarioConfig> {
    let h = Amp::Real(std::f64::consts::FRAC_1_SQRT_2);
    match named {
        NamedScenario::Single { alpha, beta, n_sites, field_gate: fg } => {
            scenario_single_with(alpha.unwrap_or(h).value(), beta.unwrap_or(h).value(), *n_sites, field_gate(fg.as_deref())?)
        }
        NamedScenario::Bidirectional { n_right } => scenario_bidirectional(*n_right),
        NamedScenario::Collision { n_field } => scenario_collision_with(n_field.unwrap_or(4)),
        NamedScenario::Epr { n_field } => scenario_epr_with(n_field.unwrap_or(4)),
    }
}

/// Starter config for a built-in scenario, with a representative set of
/// analyses.
pub fn template(kind: &str) -> Option<ConfigFile> {
    let (scenario, analysis) = match kind {
        "single" => (
            NamedScenario::Single { alpha: None, beta: None, n_sites: 4, field_gate: None },
            vec![AnalysisSpec::Rdm { sites: vec![SiteId(0)] }, AnalysisSpec::Branches, AnalysisSpec::Clusters],
        ),
        "bidirectional" => (NamedScenario::Bidirectional { n_right: 4 }, vec![AnalysisSpec::Branches, AnalysisSpec::Clusters]),
        "collision" => (
            NamedScenario::Collision { n_field: None },
            vec![
                AnalysisSpec::Branches,
                AnalysisSpec::Clusters,
                AnalysisSpec::MutualInformation { a: vec![SiteId(0)], b: vec![SiteId(5)] },
            ],
        ),
        "epr" => (
            NamedScenario::Epr { n_field: None },
            vec![
                AnalysisSpec::Branches,
                AnalysisSpec::Clusters,
                AnalysisSpec::Correlation { site_a: SiteId(0), theta_a: 0.0, site_b: SiteId(5), theta_b: 0.0 },
            ],
        ),
        _ => return None,
    };
    Some(ConfigFile { name: Some(kind.to_string()), scenario: Some(scenario), analysis, ..ConfigFile::default() })
}
