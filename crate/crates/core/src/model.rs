//! The direction interface shared by the graph and dynamical-system backends.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dynsys::PartialMapSystem;
use crate::error::{Error, Result};
use crate::kgraph::KGraphSkeleton;
use crate::sets::{SubsetMask, VertexSet};

/// A rank-`k` system of commuting inverse-image operators `Φ_1, .., Φ_k` on the
/// subsets of a finite vertex set.
///
/// `Φ_i(H)` is the vertex set of `X_i^{-1}(I_H)`. Implementations must keep each
/// operator monotone and intersection-preserving, and the operators must commute
/// pairwise. Directions are 0-based.
pub trait DirectionModel {
    fn rank(&self) -> usize;

    fn vertex_count(&self) -> usize;

    /// `Φ_direction(set)`. Callers guarantee `direction < rank` and that `set` fits.
    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet;

    fn universe(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }
}

impl<M: DirectionModel + ?Sized> DirectionModel for &M {
    fn rank(&self) -> usize {
        (**self).rank()
    }
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet {
        (**self).phi(direction, set)
    }
}

/// `{v : neighbourhood[v] ⊆ set}`, the common shape of both backends' `Φ_i`.
///
/// A vertex with an empty neighbourhood is always included.
pub(crate) fn pull_back(neighbourhoods: &[VertexSet], set: VertexSet) -> VertexSet {
    neighbourhoods
        .iter()
        .enumerate()
        .filter(|(_, n)| n.is_subset(set))
        .map(|(v, _)| v)
        .collect()
}

pub(crate) fn check_set<M: DirectionModel + ?Sized>(model: &M, set: VertexSet) -> Result<()> {
    if set.fits(model.vertex_count()) {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange {
            bits: set.bits(),
            vertex_count: model.vertex_count(),
        })
    }
}

pub(crate) fn check_direction<M: DirectionModel + ?Sized>(model: &M, direction: usize) -> Result<()> {
    if direction < model.rank() {
        Ok(())
    } else {
        Err(Error::DirectionOutOfRange {
            direction,
            rank: model.rank(),
        })
    }
}

pub(crate) fn check_mask<M: DirectionModel + ?Sized>(model: &M, f: SubsetMask) -> Result<()> {
    if f.fits(model.rank()) {
        Ok(())
    } else {
        Err(Error::MaskOutOfRange {
            mask: f.bits(),
            rank: model.rank(),
        })
    }
}

/// `Φ_i` tabulated over every subset, for models small enough that `2^|V|` lookups fit.
///
/// Sweeps evaluate the same operators millions of times; a table turns each
/// evaluation into an index.
#[derive(Clone, Debug)]
pub struct TabulatedModel {
    vertex_count: usize,
    tables: Vec<Vec<VertexSet>>,
}

impl TabulatedModel {
    pub const MAX_VERTICES: usize = 16;

    /// `None` when the model has more than [`Self::MAX_VERTICES`] vertices.
    pub fn new<M: DirectionModel + ?Sized>(model: &M) -> Option<Self> {
        let n = model.vertex_count();
        if n > Self::MAX_VERTICES {
            return None;
        }
        let tables = (0..model.rank())
            .map(|i| {
                (0..1u64 << n)
                    .map(|bits| model.phi(i, VertexSet::from_bits(bits)))
                    .collect()
            })
            .collect();
        Some(TabulatedModel {
            vertex_count: n,
            tables,
        })
    }
}

impl DirectionModel for TabulatedModel {
    fn rank(&self) -> usize {
        self.tables.len()
    }

    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet {
        self.tables[direction][set.bits() as usize]
    }
}

/// Which backend a [`Model`] wraps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    KGraph,
    DynSys,
}

/// Either backend, with its vertex names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    KGraph(KGraphSkeleton),
    DynSys(PartialMapSystem),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::KGraph(_) => ModelKind::KGraph,
            Model::DynSys(_) => ModelKind::DynSys,
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            Model::KGraph(g) => g.names(),
            Model::DynSys(s) => s.names(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names().iter().position(|n| n == name)
    }
}

impl DirectionModel for Model {
    fn rank(&self) -> usize {
        match self {
            Model::KGraph(g) => g.rank(),
            Model::DynSys(s) => s.rank(),
        }
    }

    fn vertex_count(&self) -> usize {
        match self {
            Model::KGraph(g) => g.vertex_count(),
            Model::DynSys(s) => s.vertex_count(),
        }
    }

    fn phi(&self, direction: usize, set: VertexSet) -> VertexSet {
        match self {
            Model::KGraph(g) => g.phi(direction, set),
            Model::DynSys(s) => s.phi(direction, set),
        }
    }
}

impl From<KGraphSkeleton> for Model {
    fn from(g: KGraphSkeleton) -> Self {
        Model::KGraph(g)
    }
}

impl From<PartialMapSystem> for Model {
    fn from(s: PartialMapSystem) -> Self {
        Model::DynSys(s)
    }
}
