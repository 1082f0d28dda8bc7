//! Sites, lattices and the canonical product basis.
//!
//! A lattice is a finite, ordered run of sites along one axis. Each site holds
//! a two-level degree of freedom: system sites use the qubit basis
//! `{|0⟩, |1⟩}`, field sites the spin basis `{↑, ↓}`. Both are encoded as a
//! single bit, `0 ↔ |0⟩/↑` and `1 ↔ |1⟩/↓`, and a basis string lists one bit
//! per site in lattice order (leftmost site = most significant digit).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signed lattice coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteId(pub i64);

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for SiteId {
    fn from(i: i64) -> Self {
        SiteId(i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    System,
    Field,
}

impl SiteKind {
    /// Label of a basis value at a site of this kind.
    pub fn label(self, bit: u8) -> &'static str {
        match (self, bit) {
            (SiteKind::System, 0) => "|0⟩",
            (SiteKind::System, _) => "|1⟩",
            (SiteKind::Field, 0) => "↑",
            (SiteKind::Field, _) => "↓",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub index: SiteId,
    pub kind: SiteKind,
}

/// A bounded one-dimensional lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    sites: Vec<Site>,
}

impl Lattice {
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyLattice);
        }
        for w in sites.windows(2) {
            if w[1].index <= w[0].index {
                return Err(Error::UnorderedLattice(w[1].index, w[0].index));
            }
        }
        if sites.iter().any(|s| s.index == SiteId(0) && s.kind == SiteKind::Field) {
            return Err(Error::FieldAtOrigin);
        }
        Ok(Lattice { sites })
    }

    /// Builds a lattice from `(index, kind)` pairs, sorting by index.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, SiteKind)>,
    {
        let mut sites: Vec<Site> = pairs
            .into_iter()
            .map(|(i, kind)| Site { index: SiteId(i), kind })
            .collect();
        sites.sort_by_key(|s| s.index);
        Lattice::new(sites)
    }

    /// System qubits at `systems`, field spins at every other index of
    /// `lo..=hi`.
    pub fn with_systems(lo: i64, hi: i64, systems: &[i64]) -> Result<Self> {
        Lattice::from_pairs((lo..=hi).map(|i| {
            let kind = if systems.contains(&i) { SiteKind::System } else { SiteKind::Field };
            (i, kind)
        }))
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site_ids(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.sites.iter().map(|s| s.index)
    }

    /// Position of `site` in lattice order.
    pub fn position(&self, site: SiteId) -> Option<usize> {
        self.sites.binary_search_by_key(&site, |s| s.index).ok()
    }

    pub fn require(&self, site: SiteId) -> Result<usize> {
        self.position(site).ok_or(Error::UnknownSite(site))
    }

    pub fn kind(&self, site: SiteId) -> Option<SiteKind> {
        self.position(site).map(|p| self.sites[p].kind)
    }

    pub fn contains(&self, site: SiteId) -> bool {
        self.position(site).is_some()
    }
}

const WORD: usize = 64;

/// One bit per site, packed so that the derived ordering is lexicographic
/// in lattice order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisString {
    words: Vec<u64>,
    len: usize,
}

impl BasisString {
    pub fn zeros(len: usize) -> Self {
        BasisString { words: vec![0; len.div_ceil(WORD)], len }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut s = BasisString::zeros(bits.len());
        for (p, &b) in bits.iter().enumerate() {
            s.set(p, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn mask(pos: usize) -> (usize, u64) {
        (pos / WORD, 1u64 << (WORD - 1 - pos % WORD))
    }

    /// Bit at lattice position `pos`.
    #[inline]
    pub fn get(&self, pos: usize) -> u8 {
        debug_assert!(pos < self.len);
        let (w, m) = Self::mask(pos);
        (self.words[w] & m != 0) as u8
    }

    #[inline]
    pub fn set(&mut self, pos: usize, bit: u8) {
        debug_assert!(pos < self.len);
        let (w, m) = Self::mask(pos);
        if bit != 0 {
            self.words[w] |= m;
        } else {
            self.words[w] &= !m;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |p| self.get(p))
    }

    /// Copy with the given positions cleared.
    pub fn cleared(&self, positions: &[usize]) -> Self {
        let mut s = self.clone();
        for &p in positions {
            s.set(p, 0);
        }
        s
    }
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for BasisString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidBasis(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(BasisString::from_bits(&bits))
    }
}
