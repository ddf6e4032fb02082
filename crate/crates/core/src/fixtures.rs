//! Small named models used throughout the tests and shipped as example files.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dynsys::PartialMapSystem;
use crate::family::IdealFamily;
use crate::kgraph::KGraphSkeleton;
use crate::sets::{SubsetMask, VertexSet};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// One vertex with one loop of each of two colours. Every `Φ_i` is the identity.
pub fn k1() -> KGraphSkeleton {
    KGraphSkeleton::new(names(&["v"]), vec![vec![vec![1]]; 2]).expect("k1 commutes")
}

/// Vertices `u, w`; in both colours `u` and `w` each receive one edge from `w`.
pub fn k2() -> KGraphSkeleton {
    KGraphSkeleton::new(names(&["u", "w"]), vec![vec![vec![0, 1], vec![0, 1]]; 2]).expect("k2 commutes")
}

/// The first colour of [`k2`] as a 1-graph: `s(uΛ^1) = s(wΛ^1) = {w}`.
pub fn k2_one_colour() -> KGraphSkeleton {
    KGraphSkeleton::new(names(&["u", "w"]), vec![vec![vec![0, 1], vec![0, 1]]]).expect("rank one")
}

/// A single edge with range `u` and source `w`; `w` receives nothing.
pub fn single_edge() -> KGraphSkeleton {
    KGraphSkeleton::new(names(&["u", "w"]), vec![vec![vec![0, 1], vec![0, 0]]]).expect("rank one")
}

/// One vertex, one loop.
pub fn single_loop() -> KGraphSkeleton {
    KGraphSkeleton::new(names(&["v"]), vec![vec![vec![1]]]).expect("rank one")
}

/// `A = C ⊕ C` with both generators `(b, b') ↦ (0, b)`.
///
/// As partial maps: `T_1 = T_2 : v2 ↦ v1`, undefined on `v1`, so `ker α = {v2}`.
pub fn ds_a() -> PartialMapSystem {
    PartialMapSystem::new(names(&["v1", "v2"]), vec![vec![None, Some(0)]; 2]).expect("ds_a commutes")
}

/// The unitisation `A = C ⊕ C` with `α_(m,n)(b, λ) = (0, λ)` for `n ≥ 1`.
///
/// In the atom coordinates `p = b + λ`, `q = λ` the second generator becomes
/// `(x, y) ↦ (y, y)`, i.e. `T_2 : p ↦ q, q ↦ q`, and `T_1` is the identity.
/// `B ⊕ {0}` corresponds to `{p}`.
pub fn ds_b() -> PartialMapSystem {
    PartialMapSystem::new(names(&["p", "q"]), vec![vec![Some(0), Some(1)], vec![Some(1), Some(1)]])
        .expect("ds_b commutes")
}

/// `L_{1,2} = B ⊕ {0} = {p}` and every other entry empty. Inside `I`, but not a T-family.
pub fn ds_b_family_l() -> IdealFamily {
    let mut l = IdealFamily::empty(2);
    l.set(SubsetMask::full(2), VertexSet::singleton(0));
    l
}
