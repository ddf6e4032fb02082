//! C*-dynamical systems over `c0(V)` for a finite point set `V`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{check_direction, check_set, pull_back, DirectionModel};
use crate::sets::{VertexSet, MAX_RANK, MAX_VERTICES};

/// `d` pairwise-commuting partial self-maps `T_1, .., T_d` of a finite point set.
///
/// The endomorphism for direction `i` is `α_i(f) = f ∘ T_i` on `dom(T_i)` and `0`
/// off it, so `α_i(δ_v)` is the indicator of `T_i^{-1}(v)`. Commuting generators
/// determine the whole action of `Z_+^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMapSystem {
    names: Vec<String>,
    maps: Vec<Vec<Option<usize>>>,
    // preimages[i][v] = T_i^{-1}(v)
    preimages: Vec<Vec<VertexSet>>,
}

impl PartialMapSystem {
    pub fn new(names: Vec<String>, maps: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n));
        }
        for (pos, name) in names.iter().enumerate() {
            if names[..pos].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let rank = maps.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::BadRank(rank));
        }
        for (i, map) in maps.iter().enumerate() {
            if map.len() != n {
                return Err(Error::MapShape {
                    direction: i + 1,
                    expected: n,
                    found: map.len(),
                });
            }
            if let Some(&target) = map.iter().flatten().find(|&&t| t >= n) {
                return Err(Error::VertexIndexOutOfRange {
                    vertex: target,
                    vertex_count: n,
                });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                for v in 0..n {
                    let ij = maps[j][v].and_then(|x| maps[i][x]);
                    let ji = maps[i][v].and_then(|x| maps[j][x]);
                    if ij != ji {
                        return Err(Error::NonCommutingMaps {
                            i: i + 1,
                            j: j + 1,
                            point: names[v].clone(),
                        });
                    }
                }
            }
        }
        let preimages = maps
            .iter()
            .map(|map| {
                let mut pre = alloc::vec![VertexSet::EMPTY; n];
                for (w, target) in map.iter().enumerate() {
                    if let Some(v) = target {
                        pre[*v].insert(w);
                    }
                }
                pre
            })
            .collect();
        Ok(PartialMapSystem { names, maps, preimages })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `maps()[i][v]` is `T_{i+1}(v)`.
    pub fn maps(&self) -> &[Vec<Option<usize>>] {
        &self.maps
    }

    pub fn image(&self, direction: usize, point: usize) -> Option<usize> {
        self.maps[direction][point]
    }

    /// `{v : T_i^{-1}(v) ⊆ H}`, the point set of `α_i^{-1}(I_H)`, checked.
    pub fn endo_inverse(&self, direction: usize, set: VertexSet) -> Result<VertexSet> {
        check_direction(self, direction)?;
        check_set(self, set)?;
        Ok(self.phi(direction, set))
    }
}

impl DirectionModel for PartialMapSystem {
    fn rank(&self) -> usize {
        self.maps.len()
    }

    fn vertex_count(&self) -> usize {
        self.names.len()
    }

    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet {
        pull_back(&self.preimages[direction], set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn commuting_maps_load() {
        // v2 -> v1 in both directions, v1 undefined.
        let a = PartialMapSystem::new(names(&["v1", "v2"]), vec![vec![None, Some(0)]; 2]).unwrap();
        assert_eq!(a.endo_inverse(0, VertexSet::EMPTY).unwrap(), VertexSet::singleton(1));
        // identity and the constant map onto q.
        let b =
            PartialMapSystem::new(names(&["p", "q"]), vec![vec![Some(0), Some(1)], vec![Some(1), Some(1)]]).unwrap();
        assert_eq!(
            b.endo_inverse(1, VertexSet::singleton(0)).unwrap(),
            VertexSet::singleton(0)
        );
        assert_eq!(b.endo_inverse(1, b.universe()).unwrap(), b.universe());
    }

    #[test]
    fn asymmetric_domains_do_not_commute() {
        // T1: a -> b, T2: a -> c; T2(T1(a)) = T2(b) undefined but T1(T2(a)) = T1(c) = c.
        let err = PartialMapSystem::new(
            names(&["a", "b", "c"]),
            vec![vec![Some(1), None, Some(2)], vec![Some(2), None, None]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::NonCommutingMaps {
                i: 1,
                j: 2,
                point: "a".to_string()
            }
        );
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(
            PartialMapSystem::new(names(&["a"]), vec![vec![Some(3)]]),
            Err(Error::VertexIndexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            PartialMapSystem::new(names(&["a", "b"]), vec![vec![None]]),
            Err(Error::MapShape { .. })
        ));
    }
}
