use alloc::string::String;

use crate::sets::{MAX_RANK, MAX_VERTICES};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rank must be between 1 and {MAX_RANK}, got {0}")]
    BadRank(usize),
    #[error("a model needs between 1 and {MAX_VERTICES} vertices, got {0}")]
    BadVertexCount(usize),
    #[error("duplicate vertex name {0:?}")]
    DuplicateName(String),
    #[error("vertex set {bits:#x} has members outside 0..{vertex_count}")]
    VertexOutOfRange { bits: u64, vertex_count: usize },
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexIndexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("direction {direction} out of range for rank {rank}")]
    DirectionOutOfRange { direction: usize, rank: usize },
    #[error("direction subset {mask:#b} out of range for rank {rank}")]
    MaskOutOfRange { mask: u32, rank: usize },
    #[error("degree has rank {found}, model has rank {expected}")]
    DegreeRankMismatch { expected: usize, found: usize },
    #[error("family has rank {found}, model has rank {expected}")]
    FamilyRankMismatch { expected: usize, found: usize },
    #[error("{op} needs a nonempty direction subset")]
    EmptySubset { op: &'static str },
    #[error("{op} needs a proper direction subset")]
    FullSubset { op: &'static str },
    #[error("expected {expected} adjacency matrices, got {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("adjacency matrix {direction} is not {size}x{size}")]
    MatrixShape { direction: usize, size: usize },
    #[error("path counts overflow in the product of matrices {i} and {j}")]
    CountOverflow { i: usize, j: usize },
    #[error(
        "adjacency matrices {i} and {j} do not commute at ({range_vertex:?}, {source_vertex:?}): \
         (M{i}M{j}) = {ij_paths}, (M{j}M{i}) = {ji_paths}"
    )]
    NonCommutingMatrices {
        i: usize,
        j: usize,
        range_vertex: String,
        source_vertex: String,
        ij_paths: u128,
        ji_paths: u128,
    },
    #[error("expected {expected} partial maps, got {found}")]
    MapCount { expected: usize, found: usize },
    #[error("partial map {direction} has {found} entries for {expected} points")]
    MapShape {
        direction: usize,
        expected: usize,
        found: usize,
    },
    #[error("partial maps {i} and {j} do not commute at point {point:?}")]
    NonCommutingMaps { i: usize, j: usize, point: String },
    #[error(
        "search budget of {budget} candidate tests exhausted after {tested} tests \
         ({found} families found)"
    )]
    BudgetExceeded { budget: u64, tested: u64, found: usize },
    #[error("{which} family is not a T-family")]
    NotTFamily { which: &'static str },
    #[error("enumeration result is empty")]
    EmptyEnumeration,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
