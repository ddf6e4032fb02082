//! Bitmask newtypes for vertex sets, direction subsets and multidegrees.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest vertex count a [`VertexSet`] can hold.
pub const MAX_VERTICES: usize = 64;

/// Largest supported rank. Families have `2^rank` entries.
pub const MAX_RANK: usize = 16;

/// A subset of the vertex set `{0, .., |V| - 1}`, stored as a 64-bit mask.
///
/// Through the duality `H <-> span{delta_v : v in H}` a vertex set stands for an
/// ideal of `c0(V)`, and set complement stands for the annihilator ideal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// The whole vertex set of a model with `n` vertices.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & (1u64 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub const fn symmetric_difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ other.0)
    }

    /// Complement inside a vertex set of size `n`.
    pub const fn complement(self, n: usize) -> VertexSet {
        VertexSet(!self.0 & VertexSet::full(n).0)
    }

    /// True when every member is below `n`.
    pub const fn fits(self, n: usize) -> bool {
        self.is_subset(VertexSet::full(n))
    }

    /// Smallest member.
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All subsets of `self`, starting with the empty set and ending with `self`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        self.intersection(rhs)
    }
}

impl BitAndAssign for VertexSet {
    fn bitand_assign(&mut self, rhs: VertexSet) {
        self.0 &= rhs.0;
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        self.union(rhs)
    }
}

impl BitOrAssign for VertexSet {
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        self.difference(rhs)
    }
}

/// Iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Carry-rippler iteration over the subsets of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct Subsets {
    set: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let current = self.next?;
        let following = current.wrapping_sub(self.set) & self.set;
        self.next = if following == 0 { None } else { Some(following) };
        Some(VertexSet(current))
    }
}

/// A subset `F` of the directions `{1, .., k}`; bit `i` stands for direction `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u32) -> Self {
        SubsetMask(bits)
    }

    /// `[k]` itself.
    pub const fn full(rank: usize) -> Self {
        SubsetMask(((1u64 << rank) - 1) as u32)
    }

    /// `{i + 1}` for the 0-based direction `i`.
    pub const fn single(direction: usize) -> Self {
        SubsetMask(1 << direction)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// Position of this subset inside a family's storage.
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn contains(self, direction: usize) -> bool {
        self.0 & (1 << direction) != 0
    }

    pub const fn with(self, direction: usize) -> Self {
        SubsetMask(self.0 | (1 << direction))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn complement(self, rank: usize) -> SubsetMask {
        SubsetMask(!self.0 & SubsetMask::full(rank).0)
    }

    pub const fn fits(self, rank: usize) -> bool {
        self.is_subset(SubsetMask::full(rank))
    }

    /// 0-based directions in this subset, increasing.
    pub fn directions(self) -> impl Iterator<Item = usize> + Clone {
        Members(self.0 as u64)
    }

    /// Directions of `[k]` outside this subset, i.e. the ones a degree `n ⊥ F` may use.
    pub fn perpendicular(self, rank: usize) -> impl Iterator<Item = usize> + Clone {
        self.complement(rank).directions()
    }

    /// Nonempty subsets of `self`, by increasing numeric value.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = SubsetMask> {
        Subsets {
            set: self.0 as u64,
            next: Some(0),
        }
        .skip(1)
        .map(|s| SubsetMask(s.0 as u32))
    }
}

impl fmt::Display for SubsetMask {
    /// Comma-joined 1-based directions, `""` for the empty subset.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (pos, d) in self.directions().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", d + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

/// All subsets of `[k]` ordered by (size, numeric value).
pub fn canonical_masks(rank: usize) -> Vec<SubsetMask> {
    let mut masks: Vec<SubsetMask> = (0..1u32 << rank).map(SubsetMask).collect();
    masks.sort_by_key(|m| (m.len(), m.0));
    masks
}

/// A degree `n = (n_1, .., n_k)` in `Z_+^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiDegree(exponents)
    }

    pub fn zero(rank: usize) -> Self {
        MultiDegree(alloc::vec![0; rank])
    }

    /// `1_F`.
    pub fn indicator(rank: usize, f: SubsetMask) -> Self {
        MultiDegree((0..rank).map(|i| u32::from(f.contains(i))).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> SubsetMask {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(SubsetMask::EMPTY, |m, (i, _)| m.with(i))
    }

    /// `n ⊥ F`: no direction of `F` is used by `n`.
    pub fn is_perpendicular(&self, f: SubsetMask) -> bool {
        self.support().bits() & f.bits() == 0
    }

    /// Componentwise sum; panics on rank mismatch.
    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        assert_eq!(self.rank(), other.rank(), "degree rank mismatch");
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        self.rank() == other.rank() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}
