//! Branch structure read off the global state.
//!
//! A *subsystem branch* is one pointer-basis value of a decohered site. An
//! *extended branch* joins subsystem branches across sites that are
//! correlated with one another. Both are read from the canonical product
//! basis, which the gate set singles out; to decompose in another basis,
//! rotate the state first.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::density::{mutual_information_sparse, purity, reduced_density_matrix};
use crate::error::{Error, Result};
use crate::lattice::SiteId;
use crate::state::PureState;

pub type Assignment = BTreeMap<SiteId, u8>;

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Born weight, renormalized over retained branches.
    pub weight: f64,
    pub assignment: Assignment,
    pub support: BTreeSet<SiteId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchDecomposition {
    pub basis: String,
    pub branches: Vec<Branch>,
    /// Sites whose reduced state is pure: they factor out of every branch.
    pub unbranched: BTreeSet<SiteId>,
}

impl BranchDecomposition {
    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn branched_sites(&self) -> BTreeSet<SiteId> {
        self.branches.first().map(|b| b.support.clone()).unwrap_or_default()
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} outside (0, 1)")));
    }
    Ok(())
}

/// Single-site purities for every lattice site.
pub fn site_purities(state: &PureState) -> Result<BTreeMap<SiteId, f64>> {
    state
        .lattice()
        .site_ids()
        .map(|s| Ok((s, purity(&reduced_density_matrix(state, &[s])?))))
        .collect()
}

/// Expands the state in the product basis and merges basis strings that
/// agree on every branched site.
pub fn branch_decompose(state: &PureState, tolerance: f64) -> Result<BranchDecomposition> {
    check_tolerance(tolerance)?;
    let purities = site_purities(state)?;
    let unbranched: BTreeSet<SiteId> = purities.iter().filter(|(_, &p)| p >= 1.0 - tolerance).map(|(&s, _)| s).collect();
    let support: BTreeSet<SiteId> = purities.keys().filter(|s| !unbranched.contains(s)).copied().collect();
    let positions: Vec<(SiteId, usize)> = state
        .lattice()
        .sites()
        .iter()
        .enumerate()
        .filter(|(_, s)| support.contains(&s.index))
        .map(|(p, s)| (s.index, p))
        .collect();

    let mut merged: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
    for (key, amp) in state.amplitudes() {
        let w = amp.norm_sqr();
        if w <= tolerance {
            continue;
        }
        let bits: Vec<u8> = positions.iter().map(|&(_, p)| key.get(p)).collect();
        *merged.entry(bits).or_default() += w;
    }
    let total: f64 = merged.values().sum();
    let branches = merged
        .into_iter()
        .map(|(bits, w)| Branch {
            weight: w / total,
            assignment: positions.iter().map(|&(s, _)| s).zip(bits).collect(),
            support: support.clone(),
        })
        .collect();
    Ok(BranchDecomposition { basis: "product".into(), branches, unbranched })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub sites: BTreeSet<SiteId>,
    /// Extended branches on this cluster: marginal assignments with weights.
    pub branches: Vec<(f64, Assignment)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchClusters {
    pub clusters: Vec<Cluster>,
}

impl BranchClusters {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn partition(&self) -> Vec<BTreeSet<SiteId>> {
        self.clusters.iter().map(|c| c.sites.clone()).collect()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Partitions the branched sites into extended-branch clusters.
///
/// Sites are joined when their pairwise mutual information exceeds
/// `tolerance`. Components are then merged while any two of them still share
/// mutual information as blocks; this catches correlations that only show up
/// jointly, such as two qubits that are each tied to one half of a field
/// pair.
pub fn extended_branch_clusters(state: &PureState, tolerance: f64) -> Result<BranchClusters> {
    let decomposition = branch_decompose(state, tolerance)?;
    let sites: Vec<SiteId> = decomposition.branched_sites().into_iter().collect();
    let n = sites.len();
    let mut sets = DisjointSets::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if mutual_information_sparse(state, &[sites[i]], &[sites[j]])? > tolerance {
                sets.union(i, j);
            }
        }
    }
    loop {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = sets.find(i);
            groups.entry(r).or_default().push(i);
        }
        let comps: Vec<Vec<SiteId>> = groups.values().map(|g| g.iter().map(|&i| sites[i]).collect()).collect();
        let roots: Vec<usize> = groups.keys().copied().collect();
        let mut merged = false;
        'outer: for a in 0..comps.len() {
            for b in (a + 1)..comps.len() {
                if mutual_information_sparse(state, &comps[a], &comps[b])? > tolerance {
                    sets.union(roots[a], roots[b]);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut groups: BTreeMap<usize, BTreeSet<SiteId>> = BTreeMap::new();
    for (i, &s) in sites.iter().enumerate() {
        let r = sets.find(i);
        groups.entry(r).or_default().insert(s);
    }
    let mut clusters: Vec<Cluster> = groups
        .into_values()
        .map(|cluster_sites| {
            let mut marginal: BTreeMap<Vec<(SiteId, u8)>, f64> = BTreeMap::new();
            for b in &decomposition.branches {
                let key: Vec<(SiteId, u8)> = cluster_sites.iter().map(|s| (*s, b.assignment[s])).collect();
                *marginal.entry(key).or_default() += b.weight;
            }
            Cluster {
                sites: cluster_sites,
                branches: marginal.into_iter().map(|(k, w)| (w, k.into_iter().collect())).collect(),
            }
        })
        .collect();
    clusters.sort_by_key(|c| c.sites.iter().next().copied());
    Ok(BranchClusters { clusters })
}
