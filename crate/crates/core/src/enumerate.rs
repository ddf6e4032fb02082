//! Exhaustive enumeration of T-families and relative O-families, plus meet and join.
//!
//! The search assigns `L_F` from `F = [k]` down to `F = ∅`. Once every
//! `L_{F∪{i}}` is fixed, a valid `L_F` is a fixed point of
//! `G(S) = ⋂_{i∉F} (Φ_i(S) ∩ L_{F∪{i}})`, so it lies below `gfp(G)`; the
//! subsets of `gfp(G)` are tested against each equation separately.

use alloc::vec::Vec;

use crate::checks::{is_nt_tuple, is_partially_ordered, is_t_family};
use crate::error::{Error, Result};
use crate::family::{sort_canonical, IdealFamily};
use crate::model::DirectionModel;
use crate::sets::{canonical_masks, SubsetMask, VertexSet};

/// Which families an [`EnumerationResult`] lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    T,
    O,
    RelativeO,
    Nt,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::T => "T",
            Mode::O => "O",
            Mode::RelativeO => "relative_O",
            Mode::Nt => "NT",
        }
    }
}

/// Families in canonical order, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub mode: Mode,
    pub families: Vec<IdealFamily>,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.families.len()
    }
}

/// Upper bound on the number of candidate sets a search may test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(1 << 26)
    }
}

/// Counters from a finished or aborted search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub tested: u64,
    pub found: usize,
}

struct Search<'a, M: ?Sized> {
    model: &'a M,
    lower: &'a IdealFamily,
    order: Vec<SubsetMask>,
    current: Vec<VertexSet>,
    found: Vec<IdealFamily>,
    tested: u64,
    budget: u64,
}

impl<M: DirectionModel + ?Sized> Search<'_, M> {
    fn spend(&mut self) -> Result<()> {
        self.tested += 1;
        if self.tested > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                tested: self.tested - 1,
                found: self.found.len(),
            });
        }
        Ok(())
    }

    fn descend(&mut self, depth: usize) -> Result<()> {
        let Some(&f) = self.order.get(depth) else {
            let family = IdealFamily::from_sets(self.model.rank(), self.current.clone())?;
            self.found.push(family);
            return Ok(());
        };
        let rank = self.model.rank();
        let floor = self.lower.get(f);
        let perp = f.complement(rank);
        let ceiling = perp
            .directions()
            .fold(self.model.universe(), |acc, i| acc & self.current[f.with(i).index()]);
        let mut bound = ceiling;
        loop {
            let next = perp.directions().fold(bound, |acc, i| acc & self.model.phi(i, bound));
            if next == bound {
                break;
            }
            bound = next;
        }
        if !floor.is_subset(bound) {
            return Ok(());
        }
        for extra in bound.difference(floor).subsets() {
            self.spend()?;
            let candidate = floor | extra;
            let fixed = perp
                .directions()
                .all(|i| self.model.phi(i, candidate) & self.current[f.with(i).index()] == candidate);
            if fixed {
                self.current[f.index()] = candidate;
                self.descend(depth + 1)?;
            }
        }
        Ok(())
    }
}

fn search<M: DirectionModel + ?Sized>(
    model: &M,
    lower: &IdealFamily,
    top: Option<VertexSet>,
    budget: Budget,
) -> Result<(Vec<IdealFamily>, SearchStats)> {
    lower.check_against(model)?;
    let rank = model.rank();
    let full = SubsetMask::full(rank);
    let mut order = canonical_masks(rank);
    order.reverse();
    let mut s = Search {
        model,
        lower,
        current: alloc::vec![VertexSet::EMPTY; 1 << rank],
        order,
        found: Vec::new(),
        tested: 0,
        budget: budget.0,
    };
    match top {
        Some(top) => {
            crate::model::check_set(model, top)?;
            s.spend()?;
            if lower.get(full).is_subset(top) {
                s.current[full.index()] = top;
                s.descend(1)?;
            }
        }
        None => s.descend(0)?,
    }
    let stats = SearchStats {
        tested: s.tested,
        found: s.found.len(),
    };
    Ok((s.found, stats))
}

/// Every T-family of `model`.
pub fn enumerate_t_families<M: DirectionModel + ?Sized>(model: &M, budget: Budget) -> Result<EnumerationResult> {
    let lower = IdealFamily::empty(model.rank());
    let (mut families, _) = search(model, &lower, None, budget)?;
    sort_canonical(&mut families);
    Ok(EnumerationResult {
        mode: Mode::T,
        families,
    })
}

/// Every T-family containing `k`; with `k = I` these are the O-families.
pub fn enumerate_relative_o<M: DirectionModel + ?Sized>(
    model: &M,
    k: &IdealFamily,
    budget: Budget,
) -> Result<EnumerationResult> {
    let (mut families, _) = search(model, k, None, budget)?;
    sort_canonical(&mut families);
    let mode = if *k == crate::calculus::i_family(model) {
        Mode::O
    } else {
        Mode::RelativeO
    };
    Ok(EnumerationResult { mode, families })
}

/// The part of a relative enumeration whose `L_{[k]}` equals `top`, unsorted.
///
/// Searches for distinct tops are independent, so callers may run them in parallel
/// and merge with [`sort_canonical`].
pub fn enumerate_with_top<M: DirectionModel + ?Sized>(
    model: &M,
    k: &IdealFamily,
    top: VertexSet,
    budget: Budget,
) -> Result<(Vec<IdealFamily>, SearchStats)> {
    search(model, k, Some(top), budget)
}

/// Every NT-tuple, found by testing each partially ordered candidate family with
/// [`is_nt_tuple`]. Independent of the T-family search.
pub fn enumerate_nt_tuples<M: DirectionModel + ?Sized>(model: &M, budget: Budget) -> Result<EnumerationResult> {
    let rank = model.rank();
    let order = canonical_masks(rank);
    let mut families = Vec::new();
    let mut tested = 0u64;
    let mut family = IdealFamily::empty(rank);
    nt_fill(model, &order, 0, &mut family, &mut families, &mut tested, budget.0)?;
    sort_canonical(&mut families);
    Ok(EnumerationResult {
        mode: Mode::Nt,
        families,
    })
}

// Assigns entries in increasing subset order, each containing the entries below it.
fn nt_fill<M: DirectionModel + ?Sized>(
    model: &M,
    order: &[SubsetMask],
    depth: usize,
    family: &mut IdealFamily,
    out: &mut Vec<IdealFamily>,
    tested: &mut u64,
    budget: u64,
) -> Result<()> {
    let Some(&f) = order.get(depth) else {
        *tested += 1;
        if *tested > budget {
            return Err(Error::BudgetExceeded {
                budget,
                tested: *tested - 1,
                found: out.len(),
            });
        }
        debug_assert!(is_partially_ordered(family).verdict());
        if is_nt_tuple(model, family)?.verdict() {
            out.push(family.clone());
        }
        return Ok(());
    };
    let floor = f.directions().fold(VertexSet::EMPTY, |acc, i| {
        acc | family.get(SubsetMask::from_bits(f.bits() & !(1 << i)))
    });
    for extra in model.universe().difference(floor).subsets() {
        family.set(f, floor | extra);
        nt_fill(model, order, depth + 1, family, out, tested, budget)?;
    }
    Ok(())
}

/// Pointwise intersection of two T-families, checked to be a T-family again.
pub fn meet<M: DirectionModel + ?Sized>(model: &M, a: &IdealFamily, b: &IdealFamily) -> Result<IdealFamily> {
    require_t(model, a, "first")?;
    require_t(model, b, "second")?;
    let m = a.intersection(b);
    if !is_t_family(model, &m)?.verdict() {
        return Err(Error::Inconsistent(alloc::format!("meet {m:?} is not a T-family")));
    }
    Ok(m)
}

/// The least T-family containing both `a` and `b`.
pub fn join<M: DirectionModel + ?Sized>(
    model: &M,
    a: &IdealFamily,
    b: &IdealFamily,
    budget: Budget,
) -> Result<IdealFamily> {
    require_t(model, a, "first")?;
    require_t(model, b, "second")?;
    let bound = a.union(b);
    let upper = enumerate_relative_o(model, &bound, budget)?;
    least_element(&upper.families)
        .cloned()
        .ok_or_else(|| Error::Inconsistent(alloc::format!("no least T-family above {bound:?}")))
}

/// The join of `a` and `b` inside an already enumerated, meet-closed set of families.
pub fn join_within<'a>(families: &'a [IdealFamily], a: &IdealFamily, b: &IdealFamily) -> Option<&'a IdealFamily> {
    let bound = a.union(b);
    let upper: Vec<&IdealFamily> = families.iter().filter(|f| bound.is_subfamily(f)).collect();
    let candidate = upper.iter().min_by_key(|f| f.height())?;
    upper.iter().all(|f| candidate.is_subfamily(f)).then_some(*candidate)
}

fn least_element(families: &[IdealFamily]) -> Option<&IdealFamily> {
    let candidate = families.iter().min_by_key(|f| f.height())?;
    families.iter().all(|f| candidate.is_subfamily(f)).then_some(candidate)
}

fn require_t<M: DirectionModel + ?Sized>(model: &M, f: &IdealFamily, which: &'static str) -> Result<()> {
    if is_t_family(model, f)?.verdict() {
        Ok(())
    } else {
        Err(Error::NotTFamily { which })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::i_family;
    use crate::fixtures;

    #[test]
    fn known_counts() {
        let b = Budget::default();
        assert_eq!(enumerate_t_families(&fixtures::k1(), b).unwrap().count(), 6);
        assert_eq!(enumerate_t_families(&fixtures::k2_one_colour(), b).unwrap().count(), 6);
        assert_eq!(enumerate_t_families(&fixtures::single_edge(), b).unwrap().count(), 4);
        assert_eq!(enumerate_t_families(&fixtures::single_loop(), b).unwrap().count(), 3);
    }

    #[test]
    fn relative_counts() {
        let k1 = fixtures::k1();
        let b = Budget::default();
        let all = IdealFamily::constant(2, k1.universe());
        let only_top = enumerate_relative_o(&k1, &all, b).unwrap();
        assert_eq!(only_top.families, [all]);
        assert_eq!(only_top.mode, Mode::RelativeO);
        assert_eq!(enumerate_relative_o(&k1, &IdealFamily::empty(2), b).unwrap().count(), 6);
        // I of the single loop is (∅, V), which drops (∅, ∅) from the three T-families.
        let g = fixtures::single_loop();
        let o = enumerate_relative_o(&g, &i_family(&g), b).unwrap();
        assert_eq!(o.mode, Mode::O);
        assert_eq!(o.count(), 2);
    }

    #[test]
    fn single_loop_chain_in_canonical_order() {
        let g = fixtures::single_loop();
        let v = VertexSet::singleton(0);
        let fams = enumerate_t_families(&g, Budget::default()).unwrap().families;
        let keys: Vec<Vec<u64>> = fams.iter().map(IdealFamily::canonical_key).collect();
        assert_eq!(keys, [[0, 0], [0, v.bits()], [v.bits(), v.bits()]]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = enumerate_t_families(&fixtures::k1(), Budget(3)).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                budget: 3,
                tested: 3,
                ..
            }
        ));
    }

    #[test]
    fn nt_enumeration_matches_t() {
        for m in [fixtures::ds_a(), fixtures::ds_b()] {
            let t = enumerate_t_families(&m, Budget::default()).unwrap();
            let nt = enumerate_nt_tuples(&m, Budget::default()).unwrap();
            assert_eq!(t.families, nt.families);
        }
    }

    #[test]
    fn meet_and_join_on_k1() {
        let k1 = fixtures::k1();
        let v = VertexSet::singleton(0);
        // The two families generated by a single direction: L_F = V iff 1 ∈ F (resp. 2 ∈ F).
        let first = IdealFamily::from_fn(2, |f| if f.contains(0) { v } else { VertexSet::EMPTY });
        let second = IdealFamily::from_fn(2, |f| if f.contains(1) { v } else { VertexSet::EMPTY });
        assert_eq!(meet(&k1, &first, &second).unwrap(), first.intersection(&second));
        assert_eq!(
            join(&k1, &first, &second, Budget::default()).unwrap(),
            first.union(&second)
        );
        let empty = IdealFamily::empty(2);
        assert_eq!(meet(&k1, &empty, &first).unwrap(), empty);
        assert_eq!(join(&k1, &empty, &first, Budget::default()).unwrap(), first);
        let fams = enumerate_t_families(&k1, Budget::default()).unwrap().families;
        assert_eq!(join_within(&fams, &first, &second), Some(&first.union(&second)));
    }

    #[test]
    fn meet_rejects_non_t_inputs() {
        let b = fixtures::ds_b();
        let l = fixtures::ds_b_family_l();
        assert_eq!(
            meet(&b, &l, &IdealFamily::empty(2)).unwrap_err(),
            Error::NotTFamily { which: "first" }
        );
        assert!(join(&b, &IdealFamily::empty(2), &l, Budget::default()).is_err());
    }
}
