//! Running a configured scenario and writing its outputs.
//!
//! [`RunReport::generate`] evolves the initial state through the schedule and
//! evaluates the configured analyses at every step. [`RunReport::write`]
//! produces three files in the output directory:
//!
//! * `report.json`: the config echo, engine metadata and per-step records,
//! * `timeseries.csv`: per-site coherence, purity and entropy per step,
//!   together with the branch and cluster counts,
//! * `correlations.csv`: every correlation and CHSH value requested.
//!
//! The JSON and CSV files depend only on the config, so repeated runs are
//! byte-identical. Wall-clock time is kept on the report value itself.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::{
    branch_decompose, chsh, coherence, correlation, extended_branch_clusters, mutual_information, purity, reduced_density_matrix, region_spectrum,
    entropy_of_spectrum, von_neumann_entropy, BranchClusters, BranchDecomposition, ChshSettings, DensityMatrix, MeasurementSetting,
};
use crate::config::{AnalysisSpec, ConfigFile};
use crate::error::Result;
use crate::lattice::{Site, SiteId};
use crate::numfmt::{scalar_text, Exact, Scalar};
use crate::scenario::ScenarioConfig;
use crate::state::{PureState, NORM_TOLERANCE, PRUNE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteMetrics {
    pub site: SiteId,
    pub coherence: f64,
    pub purity: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisOutcome {
    Rdm(DensityMatrix),
    SiteMetrics(Vec<SiteMetrics>),
    Branches(BranchDecomposition),
    Clusters(BranchClusters),
    MutualInformation { a: Vec<SiteId>, b: Vec<SiteId>, value: f64 },
    Entropy { region: Vec<SiteId>, value: f64 },
    Correlation { a: MeasurementSetting, b: MeasurementSetting, value: f64 },
    Chsh { site_a: SiteId, site_b: SiteId, settings: ChshSettings, value: f64 },
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: usize,
    pub state: PureState,
    pub sites: Vec<SiteMetrics>,
    pub branch_count: usize,
    pub cluster_count: usize,
    pub analyses: Vec<AnalysisOutcome>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub config: Option<ConfigFile>,
    pub tolerance: f64,
    pub warnings: Vec<String>,
    pub steps: Vec<StepRecord>,
    pub wall_time: Duration,
}

pub fn site_metrics(state: &PureState, site: SiteId) -> Result<SiteMetrics> {
    let rho = reduced_density_matrix(state, &[site])?;
    Ok(SiteMetrics { site, coherence: coherence(&rho), purity: purity(&rho), entropy: von_neumann_entropy(&rho) })
}

pub fn evaluate(state: &PureState, spec: &AnalysisSpec, tolerance: f64) -> Result<AnalysisOutcome> {
    Ok(match spec {
        AnalysisSpec::Rdm { sites } => AnalysisOutcome::Rdm(reduced_density_matrix(state, sites)?),
        AnalysisSpec::SiteMetrics { sites } => {
            let sites: Vec<SiteId> = match sites {
                Some(s) => s.clone(),
                None => state.lattice().site_ids().collect(),
            };
            AnalysisOutcome::SiteMetrics(sites.into_iter().map(|s| site_metrics(state, s)).collect::<Result<_>>()?)
        }
        AnalysisSpec::Branches => AnalysisOutcome::Branches(branch_decompose(state, tolerance)?),
        AnalysisSpec::Clusters => AnalysisOutcome::Clusters(extended_branch_clusters(state, tolerance)?),
        AnalysisSpec::MutualInformation { a, b } => {
            AnalysisOutcome::MutualInformation { a: a.clone(), b: b.clone(), value: mutual_information(state, a, b)? }
        }
        AnalysisSpec::Entropy { region } => {
            AnalysisOutcome::Entropy { region: region.clone(), value: entropy_of_spectrum(&region_spectrum(state, region)?) }
        }
        AnalysisSpec::Correlation { site_a, theta_a, site_b, theta_b } => {
            let a = MeasurementSetting::new(*site_a, *theta_a);
            let b = MeasurementSetting::new(*site_b, *theta_b);
            AnalysisOutcome::Correlation { a, b, value: correlation(state, a, b)? }
        }
        AnalysisSpec::Chsh { site_a, site_b, settings } => {
            let settings = ChshSettings::new(settings[0], settings[1], settings[2], settings[3]);
            AnalysisOutcome::Chsh { site_a: *site_a, site_b: *site_b, settings, value: chsh(state, *site_a, *site_b, settings)? }
        }
    })
}

impl RunReport {
    pub fn generate(scenario: &ScenarioConfig, config: Option<&ConfigFile>) -> Result<RunReport> {
        let start = Instant::now();
        let states = scenario.run()?;
        let mut steps = Vec::with_capacity(states.len());
        for (t, state) in states.into_iter().enumerate() {
            let sites = state.lattice().site_ids().map(|s| site_metrics(&state, s)).collect::<Result<Vec<_>>>()?;
            let branch_count = branch_decompose(&state, scenario.tolerance)?.len();
            let cluster_count = extended_branch_clusters(&state, scenario.tolerance)?.len();
            let analyses = scenario.analyses.iter().map(|a| evaluate(&state, a, scenario.tolerance)).collect::<Result<Vec<_>>>()?;
            log::debug!("step {t}: {} terms, {branch_count} branches, {cluster_count} clusters", state.num_terms());
            steps.push(StepRecord { t, state, sites, branch_count, cluster_count, analyses });
        }
        Ok(RunReport {
            name: scenario.name.clone(),
            config: config.cloned(),
            tolerance: scenario.tolerance,
            warnings: scenario.warnings.clone(),
            steps,
            wall_time: start.elapsed(),
        })
    }

    pub fn final_state(&self) -> &PureState {
        &self.steps.last().expect("a run has at least the initial step").state
    }

    pub fn to_json(&self) -> String {
        let doc = ReportDoc {
            engine: EngineDoc {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                tolerance: Scalar(self.tolerance),
                prune_threshold: Scalar(PRUNE_THRESHOLD),
                norm_tolerance: Scalar(NORM_TOLERANCE),
            },
            scenario: &self.name,
            config: self.config.as_ref(),
            lattice: self.steps.first().map(|s| s.state.lattice().sites()).unwrap_or(&[]),
            warnings: &self.warnings,
            steps: self.steps.iter().map(step_doc).collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn timeseries_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["step", "site", "coherence", "purity", "entropy", "branch_count", "cluster_count"])?;
        for step in &self.steps {
            for m in &step.sites {
                w.write_record([
                    step.t.to_string(),
                    m.site.to_string(),
                    scalar_text(m.coherence),
                    scalar_text(m.purity),
                    scalar_text(m.entropy),
                    step.branch_count.to_string(),
                    step.cluster_count.to_string(),
                ])?;
            }
        }
        csv_text(w)
    }

    pub fn correlations_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["step", "kind", "site_a", "site_b", "angles", "value"])?;
        for step in &self.steps {
            for outcome in &step.analyses {
                let (kind, sa, sb, angles, value) = match outcome {
                    AnalysisOutcome::Correlation { a, b, value } => ("correlation", a.site, b.site, vec![a.theta, b.theta], *value),
                    AnalysisOutcome::Chsh { site_a, site_b, settings, value } => ("chsh", *site_a, *site_b, settings.as_array().to_vec(), *value),
                    _ => continue,
                };
                let angles = angles.into_iter().map(scalar_text).collect::<Vec<_>>().join(";");
                w.write_record([step.t.to_string(), kind.into(), sa.to_string(), sb.to_string(), angles, scalar_text(value)])?;
            }
        }
        csv_text(w)
    }

    /// Writes `report.json`, `timeseries.csv` and `correlations.csv`.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        fs::create_dir_all(out_dir)?;
        fs::write(out_dir.join("report.json"), self.to_json())?;
        fs::write(out_dir.join("timeseries.csv"), self.timeseries_csv()?)?;
        fs::write(out_dir.join("correlations.csv"), self.correlations_csv()?)?;
        Ok(())
    }
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    engine: EngineDoc,
    scenario: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a ConfigFile>,
    lattice: &'a [Site],
    warnings: &'a [String],
    steps: Vec<StepDoc<'a>>,
}

#[derive(Serialize)]
struct EngineDoc {
    name: &'static str,
    version: &'static str,
    tolerance: Scalar,
    prune_threshold: Scalar,
    norm_tolerance: Scalar,
}

#[derive(Serialize)]
struct TermDoc {
    basis: String,
    re: Exact,
    im: Exact,
}

#[derive(Serialize)]
struct StepDoc<'a> {
    t: usize,
    num_terms: usize,
    norm: Exact,
    branch_count: usize,
    cluster_count: usize,
    terms: Vec<TermDoc>,
    analyses: Vec<OutcomeDoc<'a>>,
}

#[derive(Serialize)]
struct SiteDoc {
    site: SiteId,
    coherence: Scalar,
    purity: Scalar,
    entropy: Scalar,
}

#[derive(Serialize)]
struct BranchDoc {
    weight: Scalar,
    assignment: Vec<(SiteId, u8)>,
}

#[derive(Serialize)]
struct ClusterDoc<'a> {
    sites: &'a BTreeSet<SiteId>,
    branches: Vec<BranchDoc>,
}

#[derive(Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
enum OutcomeDoc<'a> {
    Rdm { sites: &'a [SiteId], matrix: Vec<Vec<[Exact; 2]>>, coherence: Scalar, purity: Scalar, entropy: Scalar },
    SiteMetrics { sites: Vec<SiteDoc> },
    Branches { basis: &'a str, unbranched: &'a BTreeSet<SiteId>, branches: Vec<BranchDoc> },
    Clusters { clusters: Vec<ClusterDoc<'a>> },
    MutualInformation { a: &'a [SiteId], b: &'a [SiteId], value: Scalar },
    Entropy { region: &'a [SiteId], value: Scalar },
    Correlation { site_a: SiteId, theta_a: Scalar, site_b: SiteId, theta_b: Scalar, value: Scalar },
    Chsh { site_a: SiteId, site_b: SiteId, settings: [Scalar; 4], value: Scalar },
}

fn site_doc(m: &SiteMetrics) -> SiteDoc {
    SiteDoc { site: m.site, coherence: Scalar(m.coherence), purity: Scalar(m.purity), entropy: Scalar(m.entropy) }
}

fn branch_doc(weight: f64, assignment: &crate::analysis::Assignment) -> BranchDoc {
    BranchDoc { weight: Scalar(weight), assignment: assignment.iter().map(|(s, b)| (*s, *b)).collect() }
}

fn outcome_doc(outcome: &AnalysisOutcome) -> OutcomeDoc<'_> {
    match outcome {
        AnalysisOutcome::Rdm(rho) => OutcomeDoc::Rdm {
            sites: rho.sites(),
            matrix: rho.rows().into_iter().map(|row| row.into_iter().map(|[re, im]| [Exact(re), Exact(im)]).collect()).collect(),
            coherence: Scalar(coherence(rho)),
            purity: Scalar(purity(rho)),
            entropy: Scalar(von_neumann_entropy(rho)),
        },
        AnalysisOutcome::SiteMetrics(ms) => OutcomeDoc::SiteMetrics { sites: ms.iter().map(site_doc).collect() },
        AnalysisOutcome::Branches(d) => OutcomeDoc::Branches {
            basis: &d.basis,
            unbranched: &d.unbranched,
            branches: d.branches.iter().map(|b| branch_doc(b.weight, &b.assignment)).collect(),
        },
        AnalysisOutcome::Clusters(c) => OutcomeDoc::Clusters {
            clusters: c
                .clusters
                .iter()
                .map(|cl| ClusterDoc { sites: &cl.sites, branches: cl.branches.iter().map(|(w, a)| branch_doc(*w, a)).collect() })
                .collect(),
        },
        AnalysisOutcome::MutualInformation { a, b, value } => OutcomeDoc::MutualInformation { a, b, value: Scalar(*value) },
        AnalysisOutcome::Entropy { region, value } => OutcomeDoc::Entropy { region, value: Scalar(*value) },
        AnalysisOutcome::Correlation { a, b, value } => OutcomeDoc::Correlation {
            site_a: a.site,
            theta_a: Scalar(a.theta),
            site_b: b.site,
            theta_b: Scalar(b.theta),
            value: Scalar(*value),
        },
        AnalysisOutcome::Chsh { site_a, site_b, settings, value } => OutcomeDoc::Chsh {
            site_a: *site_a,
            site_b: *site_b,
            settings: settings.as_array().map(Scalar),
            value: Scalar(*value),
        },
    }
}

fn step_doc(step: &StepRecord) -> StepDoc<'_> {
    StepDoc {
        t: step.t,
        num_terms: step.state.num_terms(),
        norm: Exact(step.state.norm()),
        branch_count: step.branch_count,
        cluster_count: step.cluster_count,
        terms: step
            .state
            .amplitudes()
            .iter()
            .map(|(k, a)| TermDoc { basis: k.to_string(), re: Exact(a.re), im: Exact(a.im) })
            .collect(),
        analyses: step.analyses.iter().map(outcome_doc).collect(),
    }
}
