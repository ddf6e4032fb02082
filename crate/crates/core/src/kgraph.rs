//! Row-finite higher-rank graphs, stored as their coloured adjacency skeleton.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{check_direction, check_set, pull_back, DirectionModel};
use crate::sets::{MultiDegree, VertexSet, MAX_RANK, MAX_VERTICES};

/// `k` pairwise-commuting nonnegative integer matrices over a finite vertex set.
///
/// `adjacency[i][v][w]` counts the paths of degree `e_{i+1}` with range `v` and
/// source `w`. Only supports enter `Φ_i`; multiplicities are kept as given.
/// For rank 3 and above a commuting skeleton need not come from an actual
/// k-graph, so such models are skeleton-level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGraphSkeleton {
    names: Vec<String>,
    adjacency: Vec<Vec<Vec<u64>>>,
    // successors[i][v] = s(v Λ^{e_i})
    successors: Vec<Vec<VertexSet>>,
}

impl KGraphSkeleton {
    pub fn new(names: Vec<String>, adjacency: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n));
        }
        for (pos, name) in names.iter().enumerate() {
            if names[..pos].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let rank = adjacency.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::BadRank(rank));
        }
        for (i, m) in adjacency.iter().enumerate() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::MatrixShape {
                    direction: i + 1,
                    size: n,
                });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                let ij = product(&adjacency[i], &adjacency[j]).ok_or(Error::CountOverflow { i: i + 1, j: j + 1 })?;
                let ji = product(&adjacency[j], &adjacency[i]).ok_or(Error::CountOverflow { i: i + 1, j: j + 1 })?;
                for v in 0..n {
                    for w in 0..n {
                        if ij[v][w] != ji[v][w] {
                            return Err(Error::NonCommutingMatrices {
                                i: i + 1,
                                j: j + 1,
                                range_vertex: names[v].clone(),
                                source_vertex: names[w].clone(),
                                ij_paths: ij[v][w],
                                ji_paths: ji[v][w],
                            });
                        }
                    }
                }
            }
        }
        let successors = adjacency
            .iter()
            .map(|m| {
                m.iter()
                    .map(|row| row.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, _)| w).collect())
                    .collect()
            })
            .collect();
        Ok(KGraphSkeleton {
            names,
            adjacency,
            successors,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn adjacency(&self) -> &[Vec<Vec<u64>>] {
        &self.adjacency
    }

    /// True for rank ≥ 3, where commuting matrices are accepted without
    /// checking that a k-graph realises them.
    pub fn is_skeleton_level(&self) -> bool {
        self.rank() >= 3
    }

    /// `s(v Λ^{e_i})` for the 0-based direction `i`.
    pub fn successors(&self, v: usize, direction: usize) -> Result<VertexSet> {
        check_direction(self, direction)?;
        if v >= self.vertex_count() {
            return Err(Error::VertexIndexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(self.successors[direction][v])
    }

    /// `{v : s(v Λ^{e_i}) ⊆ H}`, checked.
    pub fn phi_generator(&self, direction: usize, set: VertexSet) -> Result<VertexSet> {
        check_direction(self, direction)?;
        check_set(self, set)?;
        Ok(self.phi(direction, set))
    }

    /// `s(v Λ^n)`, read off the support of row `v` of `Π M_i^{n_i}`.
    ///
    /// This goes through matrix products rather than `Φ`, so it can cross-check
    /// composed operators.
    pub fn degree_sources(&self, v: usize, degree: &MultiDegree) -> Result<VertexSet> {
        if degree.rank() != self.rank() {
            return Err(Error::DegreeRankMismatch {
                expected: self.rank(),
                found: degree.rank(),
            });
        }
        if v >= self.vertex_count() {
            return Err(Error::VertexIndexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            });
        }
        // A boolean row vector pushed through each colour in turn.
        let mut row = VertexSet::singleton(v);
        for (i, &e) in degree.exponents().iter().enumerate() {
            for _ in 0..e {
                row = row.iter().fold(VertexSet::EMPTY, |acc, u| acc | self.successors[i][u]);
            }
        }
        Ok(row)
    }
}

impl DirectionModel for KGraphSkeleton {
    fn rank(&self) -> usize {
        self.adjacency.len()
    }

    fn vertex_count(&self) -> usize {
        self.names.len()
    }

    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet {
        pull_back(&self.successors[direction], set)
    }
}

fn product(a: &[Vec<u64>], b: &[Vec<u64>]) -> Option<Vec<Vec<u128>>> {
    let n = a.len();
    let mut out = alloc::vec![alloc::vec![0u128; n]; n];
    for v in 0..n {
        for u in 0..n {
            if a[v][u] == 0 {
                continue;
            }
            for w in 0..n {
                let term = u128::from(a[v][u]).checked_mul(u128::from(b[u][w]))?;
                out[v][w] = out[v][w].checked_add(term)?;
            }
        }
    }
    Some(out)
}
