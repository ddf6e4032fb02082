//! Independent oracles for the fixed-point constructions and the enumeration.

mod common;

use common::all_families;
use gauge_ideals::calculus::{i_family, largest_perp_invariant, lim_set, phi_n};
use gauge_ideals::enumerate::{enumerate_relative_o, enumerate_t_families};
use gauge_ideals::{fixtures, Budget, DirectionModel, IdealFamily, Model, MultiDegree, SubsetMask, VertexSet};

/// `Φ_i` straight from the raw model data.
fn naive_phi(model: &Model, i: usize, h: VertexSet) -> VertexSet {
    let n = model.vertex_count();
    (0..n)
        .filter(|&v| match model {
            Model::KGraph(g) => (0..n).all(|w| g.adjacency()[i][v][w] == 0 || h.contains(w)),
            Model::DynSys(s) => (0..n).all(|w| s.maps()[i][w] != Some(v) || h.contains(w)),
        })
        .collect()
}

/// T-equation tested entry by entry, without the library's checker.
fn brute_force_t(model: &Model, l: &IdealFamily) -> bool {
    let k = model.rank();
    (0..1u32 << k).map(SubsetMask::from_bits).all(|f| {
        (0..k)
            .filter(|&i| !f.contains(i))
            .all(|i| l.get(f) == naive_phi(model, i, l.get(f)) & l.get(f.with(i)))
    })
}

fn brute_force_count(model: &Model, lower: &IdealFamily) -> usize {
    all_families(model.vertex_count(), model.rank())
        .filter(|l| brute_force_t(model, l) && lower.is_subfamily(l))
        .count()
}

#[test]
fn enumeration_counts_match_brute_force() {
    let k1 = Model::from(fixtures::k1());
    let uw = Model::from(fixtures::k2_one_colour());
    let edge = Model::from(fixtures::single_edge());
    let lp = Model::from(fixtures::single_loop());
    assert_eq!(brute_force_count(&k1, &IdealFamily::empty(2)), 6);
    assert_eq!(brute_force_count(&uw, &IdealFamily::empty(1)), 6);
    assert_eq!(brute_force_count(&edge, &IdealFamily::empty(1)), 4);
    assert_eq!(brute_force_count(&lp, &IdealFamily::empty(1)), 3);
    assert_eq!(brute_force_count(&lp, &i_family(&lp)), 2);
    assert_eq!(brute_force_count(&k1, &IdealFamily::constant(2, k1.universe())), 1);

    let b = Budget::default();
    for (model, expected) in [(&uw, 6), (&edge, 4), (&lp, 3)] {
        assert_eq!(enumerate_t_families(model, b).unwrap().count(), expected);
    }
    assert_eq!(enumerate_t_families(&k1, b).unwrap().count(), 6);
    assert_eq!(enumerate_relative_o(&lp, &i_family(&lp), b).unwrap().count(), 2);
}

#[test]
fn enumeration_matches_brute_force_on_fixtures() {
    let models: Vec<Model> = vec![
        fixtures::k1().into(),
        fixtures::k2().into(),
        fixtures::ds_a().into(),
        fixtures::ds_b().into(),
    ];
    for m in &models {
        let expected: Vec<IdealFamily> = all_families(m.vertex_count(), m.rank())
            .filter(|l| brute_force_t(m, l))
            .collect();
        let mut got = enumerate_t_families(m, Budget::default()).unwrap().families;
        got.sort();
        let mut expected = expected;
        expected.sort();
        assert_eq!(got, expected);
    }
}

/// `⋂{Φ_n(K0) : n ⊥ F, n_i ≤ |V|}`.
pub fn bounded_intersection(model: &impl DirectionModel, k0: VertexSet, f: SubsetMask) -> VertexSet {
    let k = model.rank();
    let bound = model.vertex_count() as u32;
    let perp: Vec<usize> = (0..k).filter(|&i| !f.contains(i)).collect();
    let mut acc = model.universe();
    let mut exps = vec![0u32; perp.len()];
    loop {
        let mut degree = vec![0u32; k];
        for (slot, &i) in perp.iter().enumerate() {
            degree[i] = exps[slot];
        }
        acc &= phi_n(model, k0, &MultiDegree::new(degree)).unwrap();
        if !odometer(&mut exps, bound) {
            return acc;
        }
    }
}

fn odometer(digits: &mut [u32], max: u32) -> bool {
    for d in digits.iter_mut() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Vertices `v` with some `n ⊥ F` such that `v ∈ Φ_m(H)` for every `m ≥ n`, `m ⊥ F`.
///
/// Along any one direction the orbit of a set has preperiod plus period at most
/// `B = 2^|V|`, so it suffices to look at `n ≤ B` and `n ≤ m ≤ 2B`.
pub fn eventual_containment(model: &impl DirectionModel, h: VertexSet, f: SubsetMask) -> VertexSet {
    let k = model.rank();
    let b = 1u32 << model.vertex_count();
    let perp: Vec<usize> = (0..k).filter(|&i| !f.contains(i)).collect();
    let r = perp.len();
    let side = (2 * b + 1) as usize;
    let cells = side.pow(r as u32);
    // table[m] = Φ_m(H) for m in [0, 2B]^r, indexed in mixed radix.
    let mut table = vec![VertexSet::EMPTY; cells];
    for (cell, slot) in table.iter_mut().enumerate() {
        let mut degree = vec![0u32; k];
        let mut rest = cell;
        for &i in &perp {
            degree[i] = (rest % side) as u32;
            rest /= side;
        }
        *slot = phi_n(model, h, &MultiDegree::new(degree)).unwrap();
    }
    let coords = |cell: usize| -> Vec<usize> {
        let mut rest = cell;
        (0..r)
            .map(|_| {
                let c = rest % side;
                rest /= side;
                c
            })
            .collect()
    };
    let mut result = VertexSet::EMPTY;
    for n in 0..cells {
        let nc = coords(n);
        if nc.iter().any(|&c| c > b as usize) {
            continue;
        }
        let always = (0..cells)
            .filter(|&m| coords(m).iter().zip(&nc).all(|(a, b)| a >= b))
            .fold(model.universe(), |acc, m| acc & table[m]);
        result |= always;
    }
    result
}

#[test]
fn lim_set_confirmed_on_ds_a() {
    let a = fixtures::ds_a();
    let f = SubsetMask::single(0);
    assert_eq!(eventual_containment(&a, VertexSet::EMPTY, f), a.universe());
    assert_eq!(lim_set(&a, VertexSet::EMPTY, f).unwrap(), a.universe());
}

fn small_models() -> Vec<Model> {
    vec![
        fixtures::k1().into(),
        fixtures::k2().into(),
        fixtures::ds_a().into(),
        fixtures::ds_b().into(),
        gauge_ideals::PartialMapSystem::new(
            common::names(3),
            vec![
                vec![Some(1), Some(2), Some(0)],
                vec![Some(2), Some(0), Some(1)],
                vec![Some(0), Some(1), Some(2)],
            ],
        )
        .unwrap()
        .into(),
        gauge_ideals::PartialMapSystem::new(
            common::names(4),
            vec![
                vec![Some(1), Some(0), Some(3), None],
                vec![Some(0), Some(1), None, None],
            ],
        )
        .unwrap()
        .into(),
    ]
}

#[test]
fn lim_and_perp_invariant_agree_with_bounded_oracles() {
    for m in small_models() {
        let k = m.rank();
        for f in (0..1u32 << k).map(SubsetMask::from_bits) {
            for h in m.universe().subsets() {
                assert_eq!(
                    largest_perp_invariant(&m, h, f),
                    bounded_intersection(&m, h, f),
                    "{m:?} {f:?} {h:?}"
                );
                if !f.is_empty() && f != SubsetMask::full(k) {
                    assert_eq!(
                        lim_set(&m, h, f).unwrap(),
                        eventual_containment(&m, h, f),
                        "{m:?} {f:?} {h:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn largest_perp_invariant_is_maximal() {
    for m in small_models() {
        let k = m.rank();
        for f in (0..1u32 << k).map(SubsetMask::from_bits) {
            for k0 in m.universe().subsets() {
                let got = largest_perp_invariant(&m, k0, f);
                let best = k0
                    .subsets()
                    .filter(|s| (0..k).filter(|&i| !f.contains(i)).all(|i| s.is_subset(m.phi(i, *s))))
                    .fold(VertexSet::EMPTY, |acc, s| acc | s);
                assert_eq!(got, best);
            }
        }
    }
}
