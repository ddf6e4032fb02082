//! Seeded random models and exhaustive model classes.

use gauge_ideals::{KGraphSkeleton, Model, ModelKind, PartialMapSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};

/// How commuting directions are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Polynomials in one matrix, or powers of one partial map. Always commutes.
    #[default]
    Powers,
    /// Independent draws, retried until they commute.
    Rejection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Kgraph,
    Dynsys,
}

impl From<ModelKind> for KindName {
    fn from(kind: ModelKind) -> Self {
        match kind {
            ModelKind::KGraph => KindName::Kgraph,
            ModelKind::DynSys => KindName::Dynsys,
        }
    }
}

/// Parameters of [`random_model`]; together they reproduce the model exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomParams {
    pub kind: KindName,
    pub rank: usize,
    pub vertices: usize,
    pub seed: u64,
    pub max_mult: u64,
    pub strategy: Strategy,
    pub retries: u64,
}

impl RandomParams {
    pub const DEFAULT_RETRIES: u64 = 10_000;
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|v| format!("v{v}")).collect()
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n)
        .map(|v| (0..n).map(|w| (0..n).map(|u| a[v][u] * b[u][w]).sum()).collect())
        .collect()
}

fn polynomial(m: &[Vec<u64>], coefficients: &[u64]) -> Vec<Vec<u64>> {
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

fn compose_power(f: &[Option<usize>], exponent: u32) -> Vec<Option<usize>> {
    (0..f.len()).map(|v| (0..exponent).try_fold(v, |x, _| f[x])).collect()
}

// Entries are zero half the time so supports vary.
fn random_matrix(rng: &mut ChaCha8Rng, n: usize, max_mult: u64) -> Vec<Vec<u64>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        0
                    } else {
                        rng.random_range(1..=max_mult)
                    }
                })
                .collect()
        })
        .collect()
}

// Each point is undefined with probability 1/(n+1), otherwise uniform.
fn random_map(rng: &mut ChaCha8Rng, n: usize) -> Vec<Option<usize>> {
    (0..n)
        .map(|_| {
            let t = rng.random_range(0..=n);
            (t < n).then_some(t)
        })
        .collect()
}

/// A deterministic random model. Vertices are named `v0, v1, ..`.
///
/// `Powers` draws one matrix `M` and sets `M_i = p_i(M)` for nonzero polynomials of
/// degree at most 2 with 0/1 coefficients, or draws one partial map `f` and sets
/// `T_i = f^{a_i}` with `a_i ≤ 3`. `Rejection` draws the directions independently
/// and retries up to `retries` times.
pub fn random_model(params: &RandomParams) -> Result<Model> {
    let RandomParams {
        kind,
        rank,
        vertices: n,
        seed,
        max_mult,
        strategy,
        retries,
    } = *params;
    if rank == 0 || n == 0 {
        return Err(ToolError::invalid(
            "random models need rank and vertex count at least 1",
        ));
    }
    if kind == KindName::Kgraph && max_mult == 0 {
        return Err(ToolError::invalid("max-mult must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (kind, strategy) {
        (KindName::Kgraph, Strategy::Powers) => {
            let m = random_matrix(&mut rng, n, max_mult);
            let adjacency = (0..rank)
                .map(|_| {
                    let mut p: Vec<u64> = (0..3).map(|_| rng.random_range(0..=1)).collect();
                    if p.iter().all(|&c| c == 0) {
                        p[1] = 1;
                    }
                    polynomial(&m, &p)
                })
                .collect();
            Ok(KGraphSkeleton::new(names(n), adjacency)?.into())
        }
        (KindName::Dynsys, Strategy::Powers) => {
            let f = random_map(&mut rng, n);
            let maps = (0..rank).map(|_| compose_power(&f, rng.random_range(0..=3))).collect();
            Ok(PartialMapSystem::new(names(n), maps)?.into())
        }
        (_, Strategy::Rejection) => {
            for _ in 0..retries {
                let attempt = match kind {
                    KindName::Kgraph => {
                        let adjacency = (0..rank).map(|_| random_matrix(&mut rng, n, max_mult)).collect();
                        KGraphSkeleton::new(names(n), adjacency).map(Model::from)
                    }
                    KindName::Dynsys => {
                        let maps = (0..rank).map(|_| random_map(&mut rng, n)).collect();
                        PartialMapSystem::new(names(n), maps).map(Model::from)
                    }
                };
                if let Ok(model) = attempt {
                    return Ok(model);
                }
            }
            Err(ToolError::invalid(format!(
                "no commuting {} found in {retries} attempts",
                if kind == KindName::Kgraph { "matrices" } else { "maps" }
            )))
        }
    }
}

/// Number of raw candidates an exhaustive class walks before the commutation filter.
pub fn exhaustive_class_size(kind: KindName, rank: usize, max_vertices: usize, max_mult: u64) -> u128 {
    (1..=max_vertices)
        .map(|n| {
            let (base, slots) = match kind {
                KindName::Kgraph => (u128::from(max_mult) + 1, n * n * rank),
                KindName::Dynsys => (n as u128 + 1, n * rank),
            };
            base.checked_pow(slots as u32).unwrap_or(u128::MAX)
        })
        .fold(0u128, u128::saturating_add)
}

/// Every commuting model of the class: all `rank`-tuples of partial maps, or of
/// matrices with entries in `0..=max_mult`, on `1..=max_vertices` points.
pub fn exhaustive_models(kind: KindName, rank: usize, max_vertices: usize, max_mult: u64) -> Vec<Model> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let (base, slots) = match kind {
            KindName::Kgraph => (max_mult + 1, n * n * rank),
            KindName::Dynsys => (n as u64 + 1, n * rank),
        };
        let mut digits = vec![0u64; slots];
        loop {
            let model = match kind {
                KindName::Kgraph => {
                    let adjacency = digits
                        .chunks(n * n)
                        .map(|m| m.chunks(n).map(<[u64]>::to_vec).collect())
                        .collect();
                    KGraphSkeleton::new(names(n), adjacency).map(Model::from)
                }
                KindName::Dynsys => {
                    let maps = digits
                        .chunks(n)
                        .map(|m| m.iter().map(|&d| (d < n as u64).then_some(d as usize)).collect())
                        .collect();
                    PartialMapSystem::new(names(n), maps).map(Model::from)
                }
            };
            if let Ok(model) = model {
                out.push(model);
            }
            if !odometer(&mut digits, base) {
                break;
            }
        }
    }
    out
}

/// Every 1-graph support on `1..=max_vertices` vertices, i.e. every 0/1 matrix.
///
/// Φ of a 1-graph only sees which entries are nonzero, so each support stands for
/// all `max_mult^|support|` matrices sharing it.
pub fn one_graph_supports(max_vertices: usize) -> Vec<Model> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for bits in 0..1u64 << (n * n) {
            let m = (0..n)
                .map(|v| (0..n).map(|w| (bits >> (v * n + w)) & 1).collect())
                .collect();
            out.push(
                KGraphSkeleton::new(names(n), vec![m])
                    .expect("rank one needs no commutation")
                    .into(),
            );
        }
    }
    out
}

pub(crate) fn odometer(digits: &mut [u64], base: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
