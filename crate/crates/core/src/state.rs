//! Sparse pure states over a lattice.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BasisString, Lattice, Site, SiteId};
use crate::numfmt::Exact;

/// Amplitudes with modulus below this are dropped after every update.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance for normalization checks on inputs.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A global wavefunction stored as a sparse map from basis strings to
/// amplitudes. Values are immutable; every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    lattice: Arc<Lattice>,
    amplitudes: BTreeMap<BasisString, Complex64>,
}

pub(crate) fn prune(amplitudes: &mut BTreeMap<BasisString, Complex64>) {
    amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
}

impl PureState {
    /// Tensor product of one single-site vector per lattice site.
    pub fn product(lattice: Lattice, site_states: &BTreeMap<SiteId, [Complex64; 2]>) -> Result<Self> {
        for site in site_states.keys() {
            lattice.require(*site)?;
        }
        let mut terms: Vec<(Vec<u8>, Complex64)> = vec![(Vec::with_capacity(lattice.len()), Complex64::new(1.0, 0.0))];
        for site in lattice.site_ids() {
            let v = site_states.get(&site).ok_or(Error::MissingSiteAssignment(site))?;
            let norm_sqr = v[0].norm_sqr() + v[1].norm_sqr();
            if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::UnnormalizedSite { site, norm_sqr });
            }
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (bits, amp) in &terms {
                for (bit, c) in v.iter().enumerate() {
                    if c.norm() >= PRUNE_THRESHOLD {
                        let mut b = bits.clone();
                        b.push(bit as u8);
                        next.push((b, amp * c));
                    }
                }
            }
            terms = next;
        }
        let mut amplitudes: BTreeMap<_, _> =
            terms.into_iter().map(|(b, a)| (BasisString::from_bits(&b), a)).collect();
        prune(&mut amplitudes);
        Ok(PureState { lattice: Arc::new(lattice), amplitudes })
    }

    /// Normalized superposition of explicit basis terms.
    pub fn entangled(lattice: Lattice, terms: Vec<(BasisString, Complex64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NoTerms);
        }
        let mut amplitudes = BTreeMap::new();
        for (basis, amp) in terms {
            if basis.len() != lattice.len() {
                return Err(Error::BasisLength { expected: lattice.len(), found: basis.len() });
            }
            let key = basis.to_string();
            if amplitudes.insert(basis, amp).is_some() {
                return Err(Error::DuplicateBasis(key));
            }
        }
        let norm_sqr: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / norm_sqr.sqrt();
        for a in amplitudes.values_mut() {
            *a *= scale;
        }
        prune(&mut amplitudes);
        if amplitudes.is_empty() {
            return Err(Error::ZeroNorm);
        }
        Ok(PureState { lattice: Arc::new(lattice), amplitudes })
    }

    /// Like [`PureState::entangled`] with basis strings given as text.
    pub fn from_terms(lattice: Lattice, terms: &[(&str, Complex64)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(s, a)| Ok((s.parse::<BasisString>()?, *a)))
            .collect::<Result<Vec<_>>>()?;
        PureState::entangled(lattice, parsed)
    }

    pub(crate) fn from_parts(lattice: Arc<Lattice>, mut amplitudes: BTreeMap<BasisString, Complex64>) -> Self {
        prune(&mut amplitudes);
        PureState { lattice, amplitudes }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub(crate) fn lattice_arc(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &BTreeMap<BasisString, Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, basis: &BasisString) -> Complex64 {
        self.amplitudes.get(basis).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.amplitudes.len()
    }

    /// Σ |amplitude|².
    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Every amplitude multiplied by `factor`. The result is not normalized
    /// unless `|factor| = 1`.
    pub fn scaled(&self, factor: Complex64) -> PureState {
        let amplitudes = self.amplitudes.iter().map(|(k, a)| (k.clone(), a * factor)).collect();
        PureState::from_parts(self.lattice.clone(), amplitudes)
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let (small, large, flip) = if self.amplitudes.len() <= other.amplitudes.len() {
            (&self.amplitudes, &other.amplitudes, false)
        } else {
            (&other.amplitudes, &self.amplitudes, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in small {
            if let Some(b) = large.get(k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// |⟨self|other⟩|, i.e. equality up to global phase when both are normalized.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    /// Sites whose bit differs between at least two stored terms.
    pub fn varying_sites(&self) -> BTreeSet<SiteId> {
        let mut out = BTreeSet::new();
        let mut iter = self.amplitudes.keys();
        if let Some(first) = iter.next() {
            for k in iter {
                for (p, site) in self.lattice.sites().iter().enumerate() {
                    if k.get(p) != first.get(p) {
                        out.insert(site.index);
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = StateDocument {
            sites: self.lattice.sites().to_vec(),
            terms: self
                .amplitudes
                .iter()
                .map(|(k, a)| TermOut { basis: k.to_string(), re: Exact(a.re), im: Exact(a.im) })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("state document serializes")
    }

    /// Parses a state document. The amplitudes are taken verbatim; the
    /// document must already be normalized.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDocumentIn = serde_json::from_str(text)?;
        let lattice = Lattice::new(doc.sites)?;
        let mut amplitudes = BTreeMap::new();
        for t in doc.terms {
            let basis: BasisString = t.basis.parse()?;
            if basis.len() != lattice.len() {
                return Err(Error::BasisLength { expected: lattice.len(), found: basis.len() });
            }
            if amplitudes.insert(basis, Complex64::new(t.re, t.im)).is_some() {
                return Err(Error::DuplicateBasis(t.basis));
            }
        }
        let state = PureState { lattice: Arc::new(lattice), amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized(norm));
        }
        Ok(state)
    }

    /// Human-readable ket, e.g. `0.70710678 |0⟩↓↑ + 0.70710678 |1⟩↑↑`.
    pub fn pretty(&self) -> String {
        let sites = self.lattice.sites();
        self.amplitudes
            .iter()
            .map(|(k, a)| {
                let ket: String = sites.iter().enumerate().map(|(p, s)| s.kind.label(k.get(p))).collect();
                if a.im.abs() < 1e-15 {
                    format!("{:.8} {}", a.re, ket)
                } else {
                    format!("({:.8}{:+.8}i) {}", a.re, a.im, ket)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Serialize)]
struct TermOut {
    basis: String,
    re: Exact,
    im: Exact,
}

#[derive(Serialize)]
struct StateDocument {
    sites: Vec<Site>,
    terms: Vec<TermOut>,
}

#[derive(Deserialize)]
struct TermIn {
    basis: String,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct StateDocumentIn {
    sites: Vec<Site>,
    terms: Vec<TermIn>,
}

/// Single-site vectors used throughout: `|0⟩`/↑ and `|1⟩`/↓.
pub fn basis_vector(bit: u8) -> [Complex64; 2] {
    if bit == 0 {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    } else {
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
    }
}
