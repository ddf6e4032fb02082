//! Membership checks for invariant, partially ordered, T-, NT- and relative O-families.
//!
//! Each check reports the first violation in canonical order: subsets `F` by
//! (size, value), then directions increasing, then vertices increasing.

use crate::calculus::{inv_set_unchecked, jf_of_unchecked, largest_perp_invariant, lim_set_unchecked};
use crate::error::Result;
use crate::family::IdealFamily;
use crate::model::DirectionModel;
use crate::sets::{canonical_masks, SubsetMask, VertexSet};

/// Which defining condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `L_F ⊆ Φ_i(L_F)` for `i ∉ F`.
    Invariance,
    /// `L_{F1} ⊆ L_{F2}` for `F1 ⊆ F2`.
    PartialOrder,
    /// `L_F ⊆ J_F(L_∅)` for `F ≠ ∅`.
    ConditionI,
    /// `L_F = Φ_i(L_F) ∩ L_{F∪{i}}`.
    TEquation,
    /// The proper-case absorption condition on `L_inv,F` and `L_lim,F`.
    NtConditionIv,
    /// `K_F ⊆ L_F` for the relative family `K`.
    Containment,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::Invariance => "invariance",
            Condition::PartialOrder => "partial_order",
            Condition::ConditionI => "condition_i",
            Condition::TEquation => "t_equation",
            Condition::NtConditionIv => "nt_condition_iv",
            Condition::Containment => "containment",
        }
    }
}

/// The first violation found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `vertex ∈ L_F \ Φ_direction(L_F)`.
    Invariance {
        f: SubsetMask,
        direction: usize,
        vertex: usize,
    },
    /// `vertex ∈ L_lower \ L_upper` with `upper = lower ∪ {i}`.
    PartialOrder {
        lower: SubsetMask,
        upper: SubsetMask,
        vertex: usize,
    },
    /// `vertices = L_F \ J_F(L_∅)`.
    ConditionI { f: SubsetMask, vertices: VertexSet },
    /// `vertices = L_F △ (Φ_direction(L_F) ∩ L_{F∪{direction}})`.
    TEquation {
        f: SubsetMask,
        direction: usize,
        vertices: VertexSet,
    },
    /// Vertices of the left-hand side of condition (iv) missing from `L_F`.
    NtConditionIv { f: SubsetMask, vertices: VertexSet },
    /// `vertices = K_F \ L_F`.
    Containment { f: SubsetMask, vertices: VertexSet },
}

impl Witness {
    pub fn condition(&self) -> Condition {
        match self {
            Witness::Invariance { .. } => Condition::Invariance,
            Witness::PartialOrder { .. } => Condition::PartialOrder,
            Witness::ConditionI { .. } => Condition::ConditionI,
            Witness::TEquation { .. } => Condition::TEquation,
            Witness::NtConditionIv { .. } => Condition::NtConditionIv,
            Witness::Containment { .. } => Condition::Containment,
        }
    }
}

/// Outcome of a membership check. Passes exactly when `witness` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub witness: Option<Witness>,
    /// Set by [`is_nt_tuple`] when an earlier failure left condition (iv) unevaluated.
    pub not_evaluated: Option<Condition>,
}

impl CheckReport {
    pub const PASS: CheckReport = CheckReport {
        witness: None,
        not_evaluated: None,
    };

    fn fail(witness: Witness) -> Self {
        CheckReport {
            witness: Some(witness),
            not_evaluated: None,
        }
    }

    fn from_witness(witness: Option<Witness>) -> Self {
        CheckReport {
            witness,
            not_evaluated: None,
        }
    }

    pub fn verdict(&self) -> bool {
        self.witness.is_none()
    }

    pub fn violated_condition(&self) -> Option<Condition> {
        self.witness.as_ref().map(Witness::condition)
    }
}

fn invariance_witness<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> Option<Witness> {
    let rank = model.rank();
    for f in canonical_masks(rank) {
        let set = family.get(f);
        for i in f.perpendicular(rank) {
            if let Some(vertex) = set.difference(model.phi(i, set)).first() {
                return Some(Witness::Invariance {
                    f,
                    direction: i,
                    vertex,
                });
            }
        }
    }
    None
}

/// `L_F ⊆ Φ_i(L_F)` for every `F` and `i ∉ F`; this covers all `n ⊥ F` by composition.
pub fn is_invariant<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> Result<CheckReport> {
    family.check_against(model)?;
    Ok(CheckReport::from_witness(invariance_witness(model, family)))
}

fn partial_order_witness(family: &IdealFamily) -> Option<Witness> {
    let rank = family.rank();
    for lower in canonical_masks(rank) {
        for i in lower.perpendicular(rank) {
            let upper = lower.with(i);
            if let Some(vertex) = family.get(lower).difference(family.get(upper)).first() {
                return Some(Witness::PartialOrder { lower, upper, vertex });
            }
        }
    }
    None
}

/// Monotone over the subset lattice; checking the covering pairs `F ⊂ F ∪ {i}` suffices.
pub fn is_partially_ordered(family: &IdealFamily) -> CheckReport {
    CheckReport::from_witness(partial_order_witness(family))
}

fn t_equation_witness<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> Option<Witness> {
    let rank = model.rank();
    let full = SubsetMask::full(rank);
    for f in canonical_masks(rank) {
        if f == full {
            continue;
        }
        let set = family.get(f);
        for i in f.perpendicular(rank) {
            let rhs = model.phi(i, set) & family.get(f.with(i));
            if rhs != set {
                return Some(Witness::TEquation {
                    f,
                    direction: i,
                    vertices: set.symmetric_difference(rhs),
                });
            }
        }
    }
    None
}

/// `L_F = Φ_i(L_F) ∩ L_{F∪{i}}` for all `F ⊊ [k]` and `i ∉ F`.
///
/// "Consists of ideals" holds automatically: every vertex set is an ideal of `c0(V)`.
pub fn is_t_family<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> Result<CheckReport> {
    family.check_against(model)?;
    Ok(CheckReport::from_witness(t_equation_witness(model, family)))
}

/// NT conditions (i)-(iii) of the general definition and the proper-case form of (iv),
/// evaluated in that order.
///
/// (iv) is only evaluated once (i)-(iii) hold; otherwise the report marks it as
/// not evaluated.
pub fn is_nt_tuple<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> Result<CheckReport> {
    family.check_against(model)?;
    Ok(nt_report(model, family))
}

fn nt_report<M: DirectionModel + ?Sized>(model: &M, family: &IdealFamily) -> CheckReport {
    let rank = model.rank();
    let full = SubsetMask::full(rank);
    let bottom = family.get(SubsetMask::EMPTY);
    let skipped = |witness| CheckReport {
        witness: Some(witness),
        not_evaluated: Some(Condition::NtConditionIv),
    };

    // (i)
    for f in canonical_masks(rank).into_iter().skip(1) {
        let outside = family.get(f).difference(jf_of_unchecked(model, bottom, f));
        if !outside.is_empty() {
            return skipped(Witness::ConditionI { f, vertices: outside });
        }
    }
    // (ii)
    if let Some(w) = invariance_witness(model, family) {
        return skipped(w);
    }
    // (iii)
    if let Some(w) = partial_order_witness(family) {
        return skipped(w);
    }
    // (iv)
    for f in canonical_masks(rank) {
        if f.is_empty() || f == full {
            continue;
        }
        let jf = jf_of_unchecked(model, bottom, f);
        let lhs = largest_perp_invariant(model, jf, f)
            & inv_set_unchecked(model, family, f)
            & lim_set_unchecked(model, family.get(f), f);
        let outside = lhs.difference(family.get(f));
        if !outside.is_empty() {
            return CheckReport::fail(Witness::NtConditionIv { f, vertices: outside });
        }
    }
    CheckReport::PASS
}

fn containment_witness(lower: &IdealFamily, family: &IdealFamily) -> Option<Witness> {
    canonical_masks(family.rank()).into_iter().find_map(|f| {
        let missing = lower.get(f).difference(family.get(f));
        (!missing.is_empty()).then_some(Witness::Containment { f, vertices: missing })
    })
}

/// A T-family containing `k`. With `k = i_family(model)` this is the O-family check.
pub fn is_relative_o_family<M: DirectionModel + ?Sized>(
    model: &M,
    family: &IdealFamily,
    k: &IdealFamily,
) -> Result<CheckReport> {
    family.check_against(model)?;
    k.check_against(model)?;
    if let Some(w) = t_equation_witness(model, family) {
        return Ok(CheckReport::fail(w));
    }
    Ok(CheckReport::from_witness(containment_witness(k, family)))
}
