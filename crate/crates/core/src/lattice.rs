//! The lattice of enumerated families and its Hasse diagram.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::enumerate::EnumerationResult;
use crate::error::{Error, Result};
use crate::family::IdealFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeNode {
    /// [`IdealFamily::fingerprint`] of the payload.
    pub id: u64,
    pub family: IdealFamily,
    /// Sum of the entry sizes.
    pub height: usize,
}

/// Families ordered by pointwise inclusion, with the cover relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGraph {
    pub nodes: Vec<LatticeNode>,
    /// `(lower, upper)` node indices, sorted.
    pub cover_edges: Vec<(usize, usize)>,
    pub bottom: usize,
    pub top: usize,
}

impl LatticeGraph {
    pub fn index_of(&self, family: &IdealFamily) -> Option<usize> {
        self.nodes.iter().position(|n| n.family == *family)
    }

    /// The node of `a ∩ b`.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.index_of(&self.nodes[a].family.intersection(&self.nodes[b].family))
    }

    /// The least node above both `a` and `b`.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let bound = self.nodes[a].family.union(&self.nodes[b].family);
        let upper: Vec<usize> = (0..self.nodes.len())
            .filter(|&c| bound.is_subfamily(&self.nodes[c].family))
            .collect();
        let least = *upper.iter().min_by_key(|&&c| self.nodes[c].height)?;
        upper
            .iter()
            .all(|&c| self.nodes[least].family.is_subfamily(&self.nodes[c].family))
            .then_some(least)
    }
}

/// Builds the Hasse diagram of `result`, checking that it is closed under pointwise meets.
pub fn build_lattice(result: &EnumerationResult) -> Result<LatticeGraph> {
    if result.families.is_empty() {
        return Err(Error::EmptyEnumeration);
    }
    let nodes: Vec<LatticeNode> = result
        .families
        .iter()
        .map(|f| LatticeNode {
            id: f.fingerprint(),
            family: f.clone(),
            height: f.height(),
        })
        .collect();
    let index: BTreeMap<&IdealFamily, usize> = nodes.iter().enumerate().map(|(i, n)| (&n.family, i)).collect();
    if index.len() != nodes.len() {
        return Err(Error::Inconsistent("duplicate families in enumeration".into()));
    }

    let mut bottom = nodes[0].family.clone();
    for (a, na) in nodes.iter().enumerate() {
        bottom = bottom.intersection(&na.family);
        for nb in &nodes[a + 1..] {
            let m = na.family.intersection(&nb.family);
            if !index.contains_key(&m) {
                return Err(Error::Inconsistent(format!(
                    "meet {m:?} of {:?} and {:?} was not enumerated",
                    na.family, nb.family
                )));
            }
        }
    }
    let bottom = index[&bottom];
    let top = nodes
        .iter()
        .fold(nodes[0].family.clone(), |acc, n| acc.union(&n.family));
    let top = *index
        .get(&top)
        .ok_or_else(|| Error::Inconsistent(format!("union of all families {top:?} was not enumerated")))?;

    // Covers of a are the minimal elements of its strict up-set. Scanning the
    // up-set by height, c is minimal iff no cover found so far lies below it.
    let mut by_height: Vec<usize> = (0..nodes.len()).collect();
    by_height.sort_by_key(|&i| (nodes[i].height, i));
    let mut cover_edges = Vec::new();
    for (a, na) in nodes.iter().enumerate() {
        let mut covers: Vec<usize> = Vec::new();
        for &c in &by_height {
            let nc = &nodes[c];
            if c == a || nc.height <= na.height || !na.family.is_subfamily(&nc.family) {
                continue;
            }
            if !covers.iter().any(|&m| nodes[m].family.is_subfamily(&nc.family)) {
                covers.push(c);
            }
        }
        cover_edges.extend(covers.into_iter().map(|c| (a, c)));
    }
    cover_edges.sort_unstable();
    Ok(LatticeGraph {
        nodes,
        cover_edges,
        bottom,
        top,
    })
}
