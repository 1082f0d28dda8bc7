//! Reduced density matrices and scalar measures on them.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::Gate1;
use crate::lattice::{BasisString, SiteId};
use crate::state::PureState;

/// Largest subsystem for which a dense matrix is materialized.
pub const MAX_DENSE_SITES: usize = 12;

/// Dense density matrix over an ordered list of sites; the first site is the
/// most significant bit of the row/column index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    sites: Vec<SiteId>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity, unit trace and positivity.
    pub fn new(sites: Vec<SiteId>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << sites.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidDensityMatrix(format!("expected {dim}×{dim}")));
        }
        let rho = DensityMatrix { sites, matrix };
        if rho.hermiticity_deviation() > 1e-12 {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        if (rho.trace() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("trace {}", rho.trace())));
        }
        if rho.eigenvalues().iter().any(|&l| l < -1e-10) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue".into()));
        }
        Ok(rho)
    }

    /// Diagonal matrix, mostly for tests and examples.
    pub fn diagonal(sites: Vec<SiteId>, probabilities: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = probabilities.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v));
        DensityMatrix::new(sites, m)
    }

    pub fn sites(&self) -> &[SiteId] {
        &self.sites
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Expectation value `tr(ρ O)` of an operator on the same sites.
    pub fn expectation(&self, operator: &DMatrix<Complex64>) -> Complex64 {
        (&self.matrix * operator).trace()
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Row-major `[re, im]` entries.
    pub fn rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect()
    }
}

pub(crate) fn check_region(state: &PureState, region: &[SiteId], limit: Option<usize>) -> Result<Vec<usize>> {
    if region.is_empty() {
        return Err(Error::EmptySubsystem);
    }
    if let Some(limit) = limit {
        if region.len() > limit {
            return Err(Error::SubsystemTooLarge { requested: region.len(), limit });
        }
    }
    let mut seen = BTreeSet::new();
    region
        .iter()
        .map(|&s| {
            if !seen.insert(s) {
                return Err(Error::RepeatedSite(s));
            }
            state.lattice().require(s)
        })
        .collect()
}

/// Groups the state's amplitudes by the environment (everything outside
/// `positions`) and indexes the kept part as an integer, first position most
/// significant.
fn group_by_environment(state: &PureState, positions: &[usize]) -> BTreeMap<BasisString, Vec<(usize, Complex64)>> {
    let k = positions.len();
    let mut groups: BTreeMap<BasisString, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (key, amp) in state.amplitudes() {
        let idx = positions.iter().enumerate().fold(0usize, |acc, (i, &p)| acc | ((key.get(p) as usize) << (k - 1 - i)));
        groups.entry(key.cleared(positions)).or_default().push((idx, *amp));
    }
    groups
}

/// Partial trace of the global state over everything except `keep`.
pub fn reduced_density_matrix(state: &PureState, keep: &[SiteId]) -> Result<DensityMatrix> {
    let positions = check_region(state, keep, Some(MAX_DENSE_SITES))?;
    let dim = 1usize << positions.len();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for members in group_by_environment(state, &positions).values() {
        for &(i, ai) in members {
            for &(j, aj) in members {
                m[(i, j)] += ai * aj.conj();
            }
        }
    }
    Ok(DensityMatrix { sites: keep.to_vec(), matrix: m })
}

/// Nonzero spectrum of the reduced state of `region`, computed on the span
/// of the kept basis strings that actually occur. No size limit on the
/// region; cost scales with the number of stored terms.
pub fn region_spectrum(state: &PureState, region: &[SiteId]) -> Result<Vec<f64>> {
    let positions = check_region(state, region, None)?;
    let mut local_index: BTreeMap<BasisString, usize> = BTreeMap::new();
    let mut groups: BTreeMap<BasisString, Vec<(usize, Complex64)>> = BTreeMap::new();
    let len = state.lattice().len();
    let outside: Vec<usize> = (0..len).filter(|p| !positions.contains(p)).collect();
    for (key, amp) in state.amplitudes() {
        let kept = key.cleared(&outside);
        let next = local_index.len();
        let i = *local_index.entry(kept).or_insert(next);
        groups.entry(key.cleared(&positions)).or_default().push((i, *amp));
    }
    let d = local_index.len();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for members in groups.values() {
        for &(i, ai) in members {
            for &(j, aj) in members {
                m[(i, j)] += ai * aj.conj();
            }
        }
    }
    if d == 1 {
        return Ok(vec![m[(0, 0)].re]);
    }
    Ok(m.symmetric_eigenvalues().iter().copied().collect())
}

/// `−Σ λ ln λ`, with `0 ln 0 = 0` and tiny negative eigenvalues clipped.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum()
}

/// Sum of off-diagonal moduli in the matrix's own basis.
pub fn coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += rho.matrix[(i, j)].norm();
            }
        }
    }
    acc
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn gate1_matrix(g: &Gate1) -> DMatrix<Complex64> {
    let m = g.matrix();
    DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}

/// `(⊗U)† ρ (⊗U)`: the matrix expressed in the basis formed by the columns
/// of each site's unitary.
pub fn change_basis(rho: &DensityMatrix, rotations: &BTreeMap<SiteId, Gate1>) -> Result<DensityMatrix> {
    let mut u = DMatrix::<Complex64>::identity(1, 1);
    for site in &rho.sites {
        let g = rotations.get(site).ok_or(Error::MissingRotation(*site))?;
        u = kron(&u, &gate1_matrix(g));
    }
    let matrix = u.adjoint() * &rho.matrix * &u;
    Ok(DensityMatrix { sites: rho.sites.clone(), matrix })
}

/// A site is decohered when its reduced state is diagonal in the pointer
/// basis and also genuinely mixed, i.e. entangled rather than merely
/// prepared in a basis state.
pub fn is_decohered(state: &PureState, site: SiteId, tolerance: f64) -> Result<bool> {
    if tolerance < 0.0 {
        return Err(Error::InvalidArgument("tolerance must be non-negative".into()));
    }
    let rho = reduced_density_matrix(state, &[site])?;
    Ok(coherence(&rho) <= tolerance && purity(&rho) < 1.0 - tolerance)
}

/// Von Neumann entropy of a region, in nats.
pub fn entanglement_entropy(state: &PureState, region: &[SiteId]) -> Result<f64> {
    check_region(state, region, Some(MAX_DENSE_SITES))?;
    Ok(entropy_of_spectrum(&region_spectrum(state, region)?))
}

/// `S(a) + S(b) − S(a∪b)` in nats, from dense reduced matrices.
pub fn mutual_information(state: &PureState, a: &[SiteId], b: &[SiteId]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubsystem);
    }
    if let Some(s) = a.iter().find(|s| b.contains(s)) {
        return Err(Error::Overlap(*s));
    }
    let joint: Vec<SiteId> = a.iter().chain(b).copied().collect();
    let rho_ab = reduced_density_matrix(state, &joint)?;
    let rho_a = reduced_density_matrix(state, a)?;
    let rho_b = reduced_density_matrix(state, b)?;
    Ok(von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b) - von_neumann_entropy(&rho_ab))
}

/// Mutual information from support spectra; no dense size limit.
pub(crate) fn mutual_information_sparse(state: &PureState, a: &[SiteId], b: &[SiteId]) -> Result<f64> {
    let joint: Vec<SiteId> = a.iter().chain(b).copied().collect();
    let sa = entropy_of_spectrum(&region_spectrum(state, a)?);
    let sb = entropy_of_spectrum(&region_spectrum(state, b)?);
    let sab = entropy_of_spectrum(&region_spectrum(state, &joint)?);
    Ok(sa + sb - sab)
}
