use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::DirectionModel;
use crate::sets::{canonical_masks, SubsetMask, VertexSet, MAX_RANK};

/// A `2^k`-tuple `{L_F}` of vertex sets, one for every `F ⊆ [k]`.
///
/// Entries are stored by the numeric value of `F`'s mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealFamily {
    rank: usize,
    sets: Vec<VertexSet>,
}

impl IdealFamily {
    /// Every entry equal to `set`.
    pub fn constant(rank: usize, set: VertexSet) -> Self {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        IdealFamily {
            rank,
            sets: vec![set; 1 << rank],
        }
    }

    pub fn empty(rank: usize) -> Self {
        Self::constant(rank, VertexSet::EMPTY)
    }

    /// Builds a family from entries indexed by mask value; `sets.len()` must be `2^rank`.
    pub fn from_sets(rank: usize, sets: Vec<VertexSet>) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::BadRank(rank));
        }
        if sets.len() != 1 << rank {
            return Err(Error::FamilyRankMismatch {
                expected: rank,
                found: sets.len(),
            });
        }
        Ok(IdealFamily { rank, sets })
    }

    /// Builds a family by evaluating `f` on every subset.
    pub fn from_fn(rank: usize, mut f: impl FnMut(SubsetMask) -> VertexSet) -> Self {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        IdealFamily {
            rank,
            sets: (0..1u32 << rank).map(|b| f(SubsetMask::from_bits(b))).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, f: SubsetMask) -> VertexSet {
        self.sets[f.index()]
    }

    pub fn set(&mut self, f: SubsetMask, value: VertexSet) {
        self.sets[f.index()] = value;
    }

    /// Entries indexed by mask value.
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn sets_mut(&mut self) -> &mut [VertexSet] {
        &mut self.sets
    }

    /// Pointwise `self ⊆ other`.
    pub fn is_subfamily(&self, other: &IdealFamily) -> bool {
        self.rank == other.rank && self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(*b))
    }

    pub fn intersection(&self, other: &IdealFamily) -> IdealFamily {
        self.zip_with(other, VertexSet::intersection)
    }

    pub fn union(&self, other: &IdealFamily) -> IdealFamily {
        self.zip_with(other, VertexSet::union)
    }

    fn zip_with(&self, other: &IdealFamily, op: fn(VertexSet, VertexSet) -> VertexSet) -> IdealFamily {
        assert_eq!(self.rank, other.rank, "family rank mismatch");
        IdealFamily {
            rank: self.rank,
            sets: self.sets.iter().zip(&other.sets).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    /// Sum of the entry sizes; the lattice layout height.
    pub fn height(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// Entries listed in canonical subset order, the family's sort key.
    pub fn canonical_key(&self) -> Vec<u64> {
        canonical_masks(self.rank)
            .into_iter()
            .map(|f| self.get(f).bits())
            .collect()
    }

    /// FNV-1a hash of the rank and the canonical key; stable across runs and platforms.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        let mut feed = |bytes: &[u8]| {
            for b in bytes {
                hash ^= u64::from(*b);
                hash = hash.wrapping_mul(PRIME);
            }
        };
        feed(&(self.rank as u64).to_le_bytes());
        for word in self.canonical_key() {
            feed(&word.to_le_bytes());
        }
        hash
    }

    pub(crate) fn check_against<M: DirectionModel + ?Sized>(&self, model: &M) -> Result<()> {
        if self.rank != model.rank() {
            return Err(Error::FamilyRankMismatch {
                expected: model.rank(),
                found: self.rank,
            });
        }
        for s in &self.sets {
            crate::model::check_set(model, *s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for IdealFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for mask in canonical_masks(self.rank) {
            map.entry(&mask, &self.get(mask));
        }
        map.finish()
    }
}

/// Sorts families by canonical key and drops duplicates.
pub fn sort_canonical(families: &mut Vec<IdealFamily>) {
    families.sort_by_cached_key(IdealFamily::canonical_key);
    families.dedup();
}
