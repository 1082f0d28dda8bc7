//! Dense reference engine.
//!
//! Holds the full `2^n` amplitude vector and re-implements gate application,
//! partial trace, correlations and branch reading by direct index
//! arithmetic. It shares no gate or trace code with the sparse engine so the
//! two can be checked against each other.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::density::DensityMatrix;
use crate::analysis::MeasurementSetting;
use crate::error::{Error, Result};
use crate::gates::{Gate1, Gate2};
use crate::lattice::{BasisString, Lattice, SiteId};
use crate::state::PureState;

/// Largest lattice the dense engine accepts.
pub const MAX_DENSE_LATTICE: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    lattice: Arc<Lattice>,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn n(&self) -> usize {
        self.lattice.len()
    }

    /// Bit mask of lattice position `pos` in the flat index.
    fn mask(&self, pos: usize) -> usize {
        1 << (self.n() - 1 - pos)
    }

    fn position(&self, site: SiteId) -> Result<usize> {
        self.lattice.require(site)
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &DenseState) -> Result<Complex64> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }
}

pub fn densify(state: &PureState) -> Result<DenseState> {
    let n = state.lattice().len();
    if n > MAX_DENSE_LATTICE {
        return Err(Error::SubsystemTooLarge { requested: n, limit: MAX_DENSE_LATTICE });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (key, amp) in state.amplitudes() {
        let index = key.bits().fold(0usize, |acc, b| (acc << 1) | b as usize);
        amplitudes[index] = *amp;
    }
    Ok(DenseState { lattice: Arc::new(state.lattice().clone()), amplitudes })
}

pub fn sparsify(dense: &DenseState) -> PureState {
    let n = dense.n();
    let map: BTreeMap<BasisString, Complex64> = dense
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(i, a)| {
            let bits: Vec<u8> = (0..n).map(|p| ((i >> (n - 1 - p)) & 1) as u8).collect();
            (BasisString::from_bits(&bits), *a)
        })
        .collect();
    PureState::from_parts(Arc::new(dense.lattice.as_ref().clone()), map)
}

/// Strided application of a two-site gate, first factor on `pair.0`.
pub fn dense_apply(state: &DenseState, gate: &Gate2, pair: (SiteId, SiteId)) -> Result<DenseState> {
    let pa = state.position(pair.0)?;
    let pb = state.position(pair.1)?;
    if pa == pb {
        return Err(Error::PairNotDistinct(pair.0));
    }
    let (ma, mb) = (state.mask(pa), state.mask(pb));
    let m = gate.matrix();
    let mut out = state.amplitudes.clone();
    for base in 0..state.amplitudes.len() {
        if base & (ma | mb) != 0 {
            continue;
        }
        let idx = [base, base | mb, base | ma, base | ma | mb];
        let v = idx.map(|i| state.amplitudes[i]);
        for (r, &target) in idx.iter().enumerate() {
            out[target] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
    Ok(DenseState { lattice: state.lattice.clone(), amplitudes: out })
}

pub fn dense_apply1(state: &DenseState, gate: &Gate1, site: SiteId) -> Result<DenseState> {
    let mask = state.mask(state.position(site)?);
    let m = gate.matrix();
    let mut out = state.amplitudes.clone();
    for base in 0..state.amplitudes.len() {
        if base & mask != 0 {
            continue;
        }
        let (a0, a1) = (state.amplitudes[base], state.amplitudes[base | mask]);
        out[base] = m[0][0] * a0 + m[0][1] * a1;
        out[base | mask] = m[1][0] * a0 + m[1][1] * a1;
    }
    Ok(DenseState { lattice: state.lattice.clone(), amplitudes: out })
}

/// Partial trace as `ρ = Ψ Ψ†`, where `Ψ[kept][env]` reshapes the vector.
pub fn dense_rdm(state: &DenseState, keep: &[SiteId]) -> Result<DensityMatrix> {
    let n = state.n();
    let kept_pos: Vec<usize> = keep.iter().map(|&s| state.position(s)).collect::<Result<_>>()?;
    let env_pos: Vec<usize> = (0..n).filter(|p| !kept_pos.contains(p)).collect();
    let k = kept_pos.len();
    let mut psi = DMatrix::<Complex64>::zeros(1 << k, 1 << env_pos.len());
    for (i, amp) in state.amplitudes.iter().enumerate() {
        let bit = |p: usize| (i >> (n - 1 - p)) & 1;
        let row = kept_pos.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
        let col = env_pos.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
        psi[(row, col)] = *amp;
    }
    DensityMatrix::new(keep.to_vec(), &psi * psi.adjoint())
}

pub fn dense_entropy(state: &DenseState, region: &[SiteId]) -> Result<f64> {
    let rho = dense_rdm(state, region)?;
    Ok(rho.eigenvalues().into_iter().filter(|&l| l > 0.0).map(|l| -l * l.ln()).sum())
}

/// `⟨ψ| σ(θ₁) ⊗ σ(θ₂) |ψ⟩` by applying the observables to the vector.
pub fn dense_correlation(state: &DenseState, s1: MeasurementSetting, s2: MeasurementSetting) -> Result<f64> {
    let obs = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
        Gate1::new("sigma", [[c, s], [s, -c]]).expect("reflection is unitary")
    };
    let applied = dense_apply1(&dense_apply1(state, &obs(s1.theta), s1.site)?, &obs(s2.theta), s2.site)?;
    Ok(state.inner_product(&applied)?.re)
}

/// Branch weight with its value on every non-pure site.
pub type DenseBranch = (f64, Vec<(SiteId, u8)>);

/// Branches read from the dense vector: `(weight, assignment)` pairs over the
/// non-pure sites, plus the set of pure sites.
pub fn dense_branches(state: &DenseState, tolerance: f64) -> Result<(Vec<DenseBranch>, BTreeSet<SiteId>)> {
    let n = state.n();
    let mut pure = BTreeSet::new();
    for s in state.lattice.site_ids() {
        let rho = dense_rdm(state, &[s])?;
        let p: f64 = rho.matrix().iter().map(|z| z.norm_sqr()).sum();
        if p >= 1.0 - tolerance {
            pure.insert(s);
        }
    }
    let mixed: Vec<(usize, SiteId)> =
        state.lattice.site_ids().enumerate().filter(|(_, s)| !pure.contains(s)).collect();
    let mut weights: BTreeMap<Vec<(SiteId, u8)>, f64> = BTreeMap::new();
    for (i, amp) in state.amplitudes.iter().enumerate() {
        let w = amp.norm_sqr();
        if w > tolerance {
            let key = mixed.iter().map(|&(p, s)| (s, ((i >> (n - 1 - p)) & 1) as u8)).collect();
            *weights.entry(key).or_default() += w;
        }
    }
    let total: f64 = weights.values().sum();
    Ok((weights.into_iter().map(|(k, w)| (w / total, k)).collect(), pure))
}
