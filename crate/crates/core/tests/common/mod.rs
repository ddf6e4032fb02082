#![allow(dead_code)]

use gauge_ideals::{IdealFamily, KGraphSkeleton, PartialMapSystem, VertexSet};
use proptest::prelude::*;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|v| format!("v{v}")).collect()
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|v| (0..n).map(|w| (0..n).map(|u| a[v][u] * b[u][w]).sum()).collect())
        .collect()
}

/// `p(M)` for a coefficient list `p = [c0, c1, c2, ..]`.
pub fn polynomial(m: &[Vec<u64>], coefficients: &[u64]) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut power: Vec<Vec<u64>> = (0..n).map(|v| (0..n).map(|w| u64::from(v == w)).collect()).collect();
    let mut out = vec![vec![0u64; n]; n];
    for &c in coefficients {
        for v in 0..n {
            for w in 0..n {
                out[v][w] += c * power[v][w];
            }
        }
        power = mat_mul(&power, m);
    }
    out
}

pub fn compose_power(f: &[Option<usize>], exponent: u32) -> Vec<Option<usize>> {
    (0..f.len()).map(|v| (0..exponent).try_fold(v, |x, _| f[x])).collect()
}

/// Commuting skeletons: polynomials in one random matrix.
pub fn kgraph_strategy(max_vertices: usize, max_rank: usize) -> impl Strategy<Value = KGraphSkeleton> {
    (1..=max_vertices, 1..=max_rank).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(proptest::collection::vec(0u64..3, n), n),
            proptest::collection::vec(proptest::collection::vec(0u64..2, 3), k),
        )
            .prop_map(move |(m, polys)| {
                let adjacency = polys.iter().map(|p| polynomial(&m, p)).collect();
                KGraphSkeleton::new(names(n), adjacency).expect("polynomials in one matrix commute")
            })
    })
}

/// Commuting partial maps: powers of one random partial map.
pub fn dynsys_strategy(max_vertices: usize, max_rank: usize) -> impl Strategy<Value = PartialMapSystem> {
    (1..=max_vertices, 1..=max_rank).prop_flat_map(|(n, k)| {
        (
            proptest::collection::vec(proptest::option::of(0..n), n),
            proptest::collection::vec(0u32..4, k),
        )
            .prop_map(move |(f, exps)| {
                let maps = exps.iter().map(|&e| compose_power(&f, e)).collect();
                PartialMapSystem::new(names(n), maps).expect("powers of one map commute")
            })
    })
}

/// Every candidate family of a model with `n` vertices and rank `k`.
pub fn all_families(n: usize, k: usize) -> impl Iterator<Item = IdealFamily> {
    let slots = 1usize << k;
    let total = 1u64 << (n * slots);
    let mask = (1u64 << n) - 1;
    (0..total).map(move |code| {
        let sets = (0..slots)
            .map(|s| VertexSet::from_bits((code >> (n * s)) & mask))
            .collect();
        IdealFamily::from_sets(k, sets).unwrap()
    })
}
