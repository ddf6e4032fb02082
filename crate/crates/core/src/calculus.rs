//! The direction calculus: composed inverse images `Φ_n`, the canonical families
//! `J` and `I`, and the auxiliary sets used by the NT conditions.
//!
//! Every ideal of `c0(V)` is `span{δ_v : v ∈ H}` for a unique `H ⊆ V`, so all of
//! the constructions below are set operations. Annihilators become complements.

use crate::error::{Error, Result};
use crate::family::IdealFamily;
use crate::model::{check_direction, check_mask, check_set, DirectionModel};
use crate::sets::{MultiDegree, SubsetMask, VertexSet};

/// `Φ_n(H) = Φ_1^{n_1} ∘ .. ∘ Φ_k^{n_k}(H)`.
pub fn phi_n<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, degree: &MultiDegree) -> Result<VertexSet> {
    check_set(model, set)?;
    if degree.rank() != model.rank() {
        return Err(Error::DegreeRankMismatch {
            expected: model.rank(),
            found: degree.rank(),
        });
    }
    Ok(phi_exponents(model, set, degree.exponents()))
}

pub(crate) fn phi_exponents<M: DirectionModel + ?Sized>(model: &M, mut set: VertexSet, exponents: &[u32]) -> VertexSet {
    for (i, &e) in exponents.iter().enumerate() {
        for _ in 0..e {
            set = model.phi(i, set);
        }
    }
    set
}

/// Vertex set of `ker φ_i`, which is `Φ_i(∅)`.
pub fn ker_phi<M: DirectionModel + ?Sized>(model: &M, direction: usize) -> Result<VertexSet> {
    check_direction(model, direction)?;
    Ok(model.phi(direction, VertexSet::EMPTY))
}

/// `J_F = (⋂_{i∈F} ker φ_i)^⊥`, with `J_∅ = ∅`.
pub fn j_set<M: DirectionModel + ?Sized>(model: &M, f: SubsetMask) -> VertexSet {
    if f.is_empty() {
        return VertexSet::EMPTY;
    }
    let kernel = f
        .directions()
        .fold(model.universe(), |acc, i| acc & model.phi(i, VertexSet::EMPTY));
    kernel.complement(model.vertex_count())
}

pub fn j_family<M: DirectionModel + ?Sized>(model: &M) -> IdealFamily {
    IdealFamily::from_fn(model.rank(), |f| j_set(model, f))
}

/// The largest `S ⊆ K0` with `S ⊆ Φ_i(S)` for every `i ∉ F`.
///
/// This is the greatest fixed point of `S ↦ K0 ∩ ⋂_{i∉F} Φ_i(S)`, reached by
/// decreasing iteration from `K0` in at most `|V|` strict steps. It equals
/// `⋂_{n⊥F} Φ_n(K0)`.
pub fn largest_perp_invariant<M: DirectionModel + ?Sized>(model: &M, k0: VertexSet, f: SubsetMask) -> VertexSet {
    let perp = f.complement(model.rank());
    let mut current = k0;
    loop {
        let next = perp.directions().fold(current, |acc, i| acc & model.phi(i, current));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// `I_F`: the largest `F^⊥`-invariant subset of `J_F`.
pub fn i_family<M: DirectionModel + ?Sized>(model: &M) -> IdealFamily {
    IdealFamily::from_fn(model.rank(), |f| largest_perp_invariant(model, j_set(model, f), f))
}

/// `X_F^{-1}(H) = ⋂{Φ_n(H) : 0 ≠ n ≤ 1_F}`.
pub fn xf_inverse<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> Result<VertexSet> {
    check_set(model, set)?;
    check_mask(model, f)?;
    if f.is_empty() {
        return Err(Error::EmptySubset { op: "xf_inverse" });
    }
    Ok(xf_inverse_unchecked(model, set, f))
}

pub(crate) fn xf_inverse_unchecked<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> VertexSet {
    if f.bits() < 64 {
        let mut images = [VertexSet::EMPTY; 64];
        xf_inverse_into(model, set, f, &mut images)
    } else {
        let mut images = alloc::vec![VertexSet::EMPTY; f.index() + 1];
        xf_inverse_into(model, set, f, &mut images)
    }
}

// images[m] = Φ_{1_m}(H) for the submasks m of F, built one direction at a time.
fn xf_inverse_into<M: DirectionModel + ?Sized>(
    model: &M,
    set: VertexSet,
    f: SubsetMask,
    images: &mut [VertexSet],
) -> VertexSet {
    let mut acc = model.universe();
    images[0] = set;
    for m in f.nonempty_subsets() {
        let low = m.bits().trailing_zeros() as usize;
        let rest = m.bits() & (m.bits() - 1);
        let image = model.phi(low, images[rest as usize]);
        images[m.index()] = image;
        acc &= image;
    }
    acc
}

/// `J_F(H) = {v : δ_v X_F^{-1}(H) ⊆ H} = (V \ X_F^{-1}(H)) ∪ H`.
pub fn jf_of<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> Result<VertexSet> {
    let preimage = xf_inverse(model, set, f)?;
    Ok(preimage.complement(model.vertex_count()) | set)
}

pub(crate) fn jf_of_unchecked<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> VertexSet {
    xf_inverse_unchecked(model, set, f).complement(model.vertex_count()) | set
}

fn check_proper<M: DirectionModel + ?Sized>(model: &M, f: SubsetMask, op: &'static str) -> Result<()> {
    check_mask(model, f)?;
    if f.is_empty() {
        Err(Error::EmptySubset { op })
    } else if f == SubsetMask::full(model.rank()) {
        Err(Error::FullSubset { op })
    } else {
        Ok(())
    }
}

/// `L_{inv,F} = ⋂_{n⊥F} Φ_n(⋂_{F⊊D} L_D)`.
pub fn inv_set<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily, f: SubsetMask) -> Result<VertexSet> {
    family.check_against(model)?;
    check_proper(model, f, "inv_set")?;
    Ok(inv_set_unchecked(model, family, f))
}

pub(crate) fn inv_set_unchecked<M: DirectionModel + ?Sized>(
    model: &M,
    family: &IdealFamily,
    f: SubsetMask,
) -> VertexSet {
    let full = SubsetMask::full(model.rank());
    let above = (0..=full.bits())
        .map(SubsetMask::from_bits)
        .filter(|d| f.is_subset(*d) && *d != f)
        .fold(model.universe(), |acc, d| acc & family.get(d));
    largest_perp_invariant(model, above, f)
}

/// `L_{lim,F}` for `L_F = H`: the vertices `v` with `v ∈ Φ_m(H)` for all large enough `m ⊥ F`.
pub fn lim_set<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> Result<VertexSet> {
    check_set(model, set)?;
    check_proper(model, f, "lim_set")?;
    Ok(lim_set_unchecked(model, set, f))
}

pub(crate) fn lim_set_unchecked<M: DirectionModel + ?Sized>(model: &M, set: VertexSet, f: SubsetMask) -> VertexSet {
    // With K = ⋂_{m⊥F} Φ_m(H), intersection-preservation gives
    // ⋂_{m≥n, m⊥F} Φ_m(H) = Φ_n(K). K ⊆ Φ_i(K) for i ∉ F makes (Φ_n(K))_{n⊥F}
    // directed upwards, so its union is the least fixed point of
    // S ↦ K ∪ ⋃_{i∉F} Φ_i(S), reached by increasing iteration from K.
    let perp = f.complement(model.rank());
    let base = largest_perp_invariant(model, set, f);
    let mut current = base;
    loop {
        let next = perp.directions().fold(current, |acc, i| acc | model.phi(i, current));
        if next == current {
            return current;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn phi_n_on_ds_b() {
        let m = fixtures::ds_b();
        let p = VertexSet::singleton(0);
        assert_eq!(phi_n(&m, VertexSet::EMPTY, &MultiDegree::new(vec![0, 1])).unwrap(), p);
        assert_eq!(phi_n(&m, VertexSet::EMPTY, &MultiDegree::new(vec![0, 2])).unwrap(), p);
        let q = VertexSet::singleton(1);
        assert_eq!(phi_n(&m, q, &MultiDegree::zero(2)).unwrap(), q);
        assert!(matches!(
            phi_n(&m, q, &MultiDegree::zero(3)),
            Err(Error::DegreeRankMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(
            phi_n(&m, VertexSet::singleton(2), &MultiDegree::zero(2)),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn kernels() {
        assert_eq!(ker_phi(&fixtures::ds_a(), 0).unwrap(), VertexSet::singleton(1));
        assert_eq!(ker_phi(&fixtures::k1(), 0).unwrap(), VertexSet::EMPTY);
        assert_eq!(ker_phi(&fixtures::k2(), 1).unwrap(), VertexSet::EMPTY);
        assert!(ker_phi(&fixtures::k2(), 2).is_err());
    }

    #[test]
    fn j_families() {
        let a = j_family(&fixtures::ds_a());
        assert_eq!(a.get(SubsetMask::single(0)), VertexSet::singleton(0));
        assert_eq!(a.get(SubsetMask::EMPTY), VertexSet::EMPTY);
        let b = j_family(&fixtures::ds_b());
        assert_eq!(b.get(SubsetMask::single(1)), VertexSet::singleton(1));
        assert_eq!(j_family(&fixtures::k2()).get(SubsetMask::EMPTY), VertexSet::EMPTY);
    }

    #[test]
    fn largest_perp_invariant_examples() {
        let b = fixtures::ds_b();
        assert_eq!(
            largest_perp_invariant(&b, b.universe(), SubsetMask::single(0)),
            b.universe()
        );
        let k2 = fixtures::k2();
        let u = VertexSet::singleton(0);
        assert_eq!(largest_perp_invariant(&k2, u, SubsetMask::full(2)), u);
        assert_eq!(largest_perp_invariant(&k2, u, SubsetMask::single(0)), VertexSet::EMPTY);
    }

    #[test]
    fn i_family_of_ds_b() {
        let b = fixtures::ds_b();
        let i = i_family(&b);
        assert_eq!(i.get(SubsetMask::EMPTY), VertexSet::EMPTY);
        assert_eq!(i.get(SubsetMask::single(0)), b.universe());
        assert_eq!(i.get(SubsetMask::full(2)), b.universe());
        assert_eq!(i.get(SubsetMask::single(1)), VertexSet::singleton(1));
        assert_eq!(i_family(&fixtures::k2()).get(SubsetMask::EMPTY), VertexSet::EMPTY);
    }

    #[test]
    fn xf_inverse_examples() {
        let k2 = fixtures::k2();
        assert_eq!(
            xf_inverse(&k2, VertexSet::EMPTY, SubsetMask::single(0)).unwrap(),
            VertexSet::EMPTY
        );
        assert_eq!(
            xf_inverse(&k2, k2.universe(), SubsetMask::full(2)).unwrap(),
            k2.universe()
        );
        let b = fixtures::ds_b();
        assert_eq!(
            xf_inverse(&b, VertexSet::EMPTY, SubsetMask::full(2)).unwrap(),
            VertexSet::EMPTY
        );
        assert_eq!(
            xf_inverse(&b, VertexSet::EMPTY, SubsetMask::EMPTY),
            Err(Error::EmptySubset { op: "xf_inverse" })
        );
    }

    #[test]
    fn jf_of_examples() {
        let g = fixtures::k2_one_colour();
        assert_eq!(
            jf_of(&g, VertexSet::EMPTY, SubsetMask::single(0)).unwrap(),
            g.universe()
        );
        let w = VertexSet::singleton(1);
        assert_eq!(jf_of(&g, w, SubsetMask::single(0)).unwrap(), w);
        assert_eq!(jf_of(&g, g.universe(), SubsetMask::single(0)).unwrap(), g.universe());
        assert!(jf_of(&g, w, SubsetMask::EMPTY).is_err());
    }

    #[test]
    fn inv_set_examples() {
        let b = fixtures::ds_b();
        let l = fixtures::ds_b_family_l();
        assert_eq!(inv_set(&b, &l, SubsetMask::single(0)).unwrap(), VertexSet::singleton(0));
        let all = IdealFamily::constant(2, b.universe());
        assert_eq!(inv_set(&b, &all, SubsetMask::single(1)).unwrap(), b.universe());
        let k2 = fixtures::k2();
        assert_eq!(
            inv_set(&k2, &IdealFamily::empty(2), SubsetMask::single(0)).unwrap(),
            VertexSet::EMPTY
        );
        assert_eq!(
            inv_set(&k2, &IdealFamily::empty(2), SubsetMask::full(2)),
            Err(Error::FullSubset { op: "inv_set" })
        );
        assert!(inv_set(&k2, &IdealFamily::empty(1), SubsetMask::single(0)).is_err());
    }

    #[test]
    fn lim_set_examples() {
        let k2 = fixtures::k2();
        assert_eq!(
            lim_set(&k2, VertexSet::singleton(1), SubsetMask::single(0)).unwrap(),
            k2.universe()
        );
        assert_eq!(
            lim_set(&k2, k2.universe(), SubsetMask::single(1)).unwrap(),
            k2.universe()
        );
        // Φ_2(∅) = {v2}, Φ_2({v2}) = {v1, v2}; confirmed by the bounded-degree oracle in tests/oracles.rs.
        let a = fixtures::ds_a();
        assert_eq!(
            lim_set(&a, VertexSet::EMPTY, SubsetMask::single(0)).unwrap(),
            a.universe()
        );
        assert_eq!(
            lim_set(&a, VertexSet::EMPTY, SubsetMask::EMPTY),
            Err(Error::EmptySubset { op: "lim_set" })
        );
    }
}
