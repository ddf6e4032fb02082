//! Corpus sweeps comparing the checkers against each other and against
//! independent oracles.
//!
//! Every claim here is a function of the `Φ_i` tables alone, so the corpus is
//! deduplicated by those tables before any sweep runs.

use std::collections::{BTreeMap, HashSet};

use gauge_ideals::calculus::{i_family, j_set, jf_of, largest_perp_invariant, lim_set, xf_inverse};
use gauge_ideals::checks::{is_invariant, is_nt_tuple, is_partially_ordered, is_relative_o_family, is_t_family};
use gauge_ideals::enumerate::{enumerate_relative_o, enumerate_t_families, join_within};
use gauge_ideals::family::sort_canonical;
use gauge_ideals::lattice::build_lattice;
use gauge_ideals::sets::canonical_masks;
use gauge_ideals::{
    Budget, DirectionModel, EnumerationResult, IdealFamily, Mode, Model, SubsetMask, TabulatedModel, VertexSet,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToolError};
use crate::formats::{model_fingerprint, set_names, FamilyDocument, ModelDocument};
use crate::generate::{exhaustive_class_size, exhaustive_models, random_model, KindName, RandomParams, Strategy};

/// One exhaustively enumerated model class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustiveClass {
    pub kind: KindName,
    pub rank: usize,
    pub max_vertices: usize,
    /// Largest matrix entry; ignored for dynamical systems.
    #[serde(default = "default_mult")]
    pub max_mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCorpus {
    pub count: usize,
    pub kinds: Vec<KindName>,
    pub min_rank: usize,
    pub max_rank: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    #[serde(default = "default_mult")]
    pub max_mult: u64,
    pub seed: u64,
    #[serde(default)]
    pub strategy: Strategy,
}

fn default_mult() -> u64 {
    2
}

/// Corpus description, read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusSpec {
    /// Include the built-in fixtures.
    pub fixtures: bool,
    pub exhaustive: Vec<ExhaustiveClass>,
    pub random: Option<RandomCorpus>,
    /// Largest raw model count an exhaustive class may walk.
    pub model_ceiling: u64,
    /// Models with more candidate families than this are sampled instead of swept.
    pub candidate_ceiling: u64,
    /// Candidates drawn per sampled model.
    pub candidate_samples: usize,
    /// Seed for candidate and pair sampling.
    pub seed: u64,
    /// Search budget for every enumeration.
    pub budget: u64,
    /// Lattices up to this size get every pair and a naive transitive reduction.
    pub lattice_exhaustive_nodes: usize,
    /// Lattices up to this size are built and their meet closure checked in full.
    pub lattice_build_nodes: usize,
    /// Pairs drawn from lattices above `lattice_exhaustive_nodes`.
    pub lattice_pair_samples: usize,
    /// Family comparisons allowed for the join scans of one sampled lattice; each
    /// pair costs a pass over every node.
    pub lattice_scan_budget: u64,
    /// Models with at most this many vertices get the limit oracles.
    pub oracle_vertices: usize,
    /// Reports kept per model and claim.
    pub max_reports: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            fixtures: true,
            exhaustive: Vec::new(),
            random: None,
            model_ceiling: 1 << 20,
            candidate_ceiling: 1 << 24,
            candidate_samples: 20_000,
            seed: 0,
            budget: Budget::default().0,
            lattice_exhaustive_nodes: 300,
            lattice_build_nodes: 1500,
            lattice_pair_samples: 2000,
            lattice_scan_budget: 200_000_000,
            oracle_vertices: 4,
            max_reports: 100,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ToolError::invalid(msg));
        for c in &self.exhaustive {
            if c.rank == 0 || c.max_vertices == 0 {
                return bad(format!("exhaustive class {c:?} needs positive rank and vertex bound"));
            }
            if c.kind == KindName::Kgraph && c.max_mult == 0 {
                return bad(format!("exhaustive class {c:?} needs max_mult at least 1"));
            }
            let size = exhaustive_class_size(c.kind, c.rank, c.max_vertices, c.max_mult);
            if size > u128::from(self.model_ceiling) {
                return bad(format!(
                    "exhaustive class {c:?} walks {size} models, above the ceiling {}",
                    self.model_ceiling
                ));
            }
        }
        if let Some(r) = &self.random {
            if r.kinds.is_empty() {
                return bad("random corpus needs at least one kind".into());
            }
            if r.min_rank == 0 || r.min_vertices == 0 || r.max_mult == 0 {
                return bad("random corpus bounds must be positive".into());
            }
            if r.min_rank > r.max_rank || r.min_vertices > r.max_vertices {
                return bad("random corpus has an empty range".into());
            }
            if r.max_rank > 8 || r.max_vertices > TabulatedModel::MAX_VERTICES {
                return bad(format!(
                    "random corpus bounds too large (rank ≤ 8, vertices ≤ {})",
                    TabulatedModel::MAX_VERTICES
                ));
            }
        }
        if self.candidate_ceiling == 0 || self.budget == 0 {
            return bad("candidate_ceiling and budget must be positive".into());
        }
        Ok(())
    }
}

/// Where a corpus model came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Origin {
    Fixture { name: String },
    Exhaustive { class: usize },
    Random(RandomParams),
    File,
}

impl Origin {
    fn seed(&self) -> Option<u64> {
        match self {
            Origin::Random(p) => Some(p.seed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub model: Model,
    pub origin: Origin,
    pub fingerprint: String,
}

impl CorpusEntry {
    pub fn new(model: Model, origin: Origin) -> Self {
        let fingerprint = model_fingerprint(&model);
        CorpusEntry {
            model,
            origin,
            fingerprint,
        }
    }
}

pub fn fixture_entries() -> Vec<CorpusEntry> {
    use gauge_ideals::fixtures as fx;
    let named: [(&str, Model); 7] = [
        ("k1", fx::k1().into()),
        ("k2", fx::k2().into()),
        ("uw", fx::k2_one_colour().into()),
        ("single_edge", fx::single_edge().into()),
        ("single_loop", fx::single_loop().into()),
        ("ds_a", fx::ds_a().into()),
        ("ds_b", fx::ds_b().into()),
    ];
    named
        .into_iter()
        .map(|(name, m)| CorpusEntry::new(m, Origin::Fixture { name: name.into() }))
        .collect()
}

/// Parameters of successive random models, drawn from one stream seeded by `corpus.seed`.
pub fn random_params(corpus: &RandomCorpus) -> impl Iterator<Item = RandomParams> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(corpus.seed);
    std::iter::repeat_with(move || RandomParams {
        kind: *corpus.kinds.choose(&mut rng).expect("kinds checked nonempty"),
        rank: rng.random_range(corpus.min_rank..=corpus.max_rank),
        vertices: rng.random_range(corpus.min_vertices..=corpus.max_vertices),
        seed: rng.random(),
        max_mult: corpus.max_mult,
        strategy: corpus.strategy,
        retries: RandomParams::DEFAULT_RETRIES,
    })
}

/// `(name, Φ table)` signature; two models with the same one agree on every claim.
fn signature(model: &Model) -> (Vec<String>, Vec<u64>) {
    let n = model.vertex_count();
    let tables = (0..model.rank())
        .flat_map(|i| (0..1u64 << n).map(move |bits| model.phi(i, VertexSet::from_bits(bits)).bits()))
        .collect();
    (model.names().to_vec(), tables)
}

/// Drops every entry whose `Φ` tables repeat an earlier one.
pub fn dedupe(entries: Vec<CorpusEntry>) -> Vec<CorpusEntry> {
    let mut seen = HashSet::new();
    entries
        .into_iter()
        .filter(|e| seen.insert(signature(&e.model)))
        .collect()
}

/// Random draws allowed per requested model before giving up on finding new ones.
const DRAWS_PER_MODEL: usize = 100;

/// All models described by `spec`, deduplicated by their `Φ` tables. The random
/// part keeps drawing until it has added `count` models not seen before.
pub fn build_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusEntry>> {
    spec.validate()?;
    let mut entries = Vec::new();
    if spec.fixtures {
        entries.extend(fixture_entries());
    }
    for (class, c) in spec.exhaustive.iter().enumerate() {
        entries.extend(
            exhaustive_models(c.kind, c.rank, c.max_vertices, c.max_mult)
                .into_iter()
                .map(|m| CorpusEntry::new(m, Origin::Exhaustive { class })),
        );
    }
    let mut entries = dedupe(entries);
    if let Some(r) = &spec.random {
        let mut seen: HashSet<_> = entries.iter().map(|e| signature(&e.model)).collect();
        let mut added = 0;
        for p in random_params(r).take(r.count.saturating_mul(DRAWS_PER_MODEL)) {
            if added == r.count {
                break;
            }
            let model = random_model(&p)?;
            if seen.insert(signature(&model)) {
                entries.push(CorpusEntry::new(model, Origin::Random(p)));
                added += 1;
            }
        }
        if added < r.count {
            return Err(ToolError::invalid(format!(
                "random corpus found only {added} distinct models of the {} requested",
                r.count
            )));
        }
    }
    Ok(entries)
}

/// The statements a sweep checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    TEqualsNt,
    OEqualsNo,
    KatsuraEqualsT,
    JPassDown,
    TFamilyInvariant,
    TFamilyPartiallyOrdered,
    TFamilyConditionI,
    QuotientIdeal,
    MeetClosed,
    JoinUnique,
    HasseReduction,
    IFamilyMinimum,
    PerpInvariantOracle,
    LimitOracle,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::TEqualsNt => "t_equals_nt",
            Claim::OEqualsNo => "o_equals_no",
            Claim::KatsuraEqualsT => "katsura_equals_t",
            Claim::JPassDown => "j_pass_down",
            Claim::TFamilyInvariant => "t_family_invariant",
            Claim::TFamilyPartiallyOrdered => "t_family_partially_ordered",
            Claim::TFamilyConditionI => "t_family_condition_i",
            Claim::QuotientIdeal => "quotient_ideal",
            Claim::MeetClosed => "meet_closed",
            Claim::JoinUnique => "join_unique",
            Claim::HasseReduction => "hasse_reduction",
            Claim::IFamilyMinimum => "i_family_minimum",
            Claim::PerpInvariantOracle => "perp_invariant_oracle",
            Claim::LimitOracle => "limit_oracle",
        }
    }
}

/// One failed instance of a claim, with enough data to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub fingerprint: String,
    pub claim: Claim,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub origin: Origin,
    pub model: ModelDocument,
}

/// Reports plus how many instances of each claim were checked.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub reports: Vec<DiscrepancyReport>,
    pub checked: BTreeMap<Claim, u64>,
    pub models: usize,
    /// Models whose candidates were sampled rather than swept.
    pub sampled_models: usize,
    /// Lattices too large for the full contract; only sampled pairs were checked.
    pub capped_lattices: usize,
}

impl Outcome {
    pub fn is_clean(&self) -> bool {
        self.reports.is_empty()
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.reports.extend(other.reports);
        for (claim, n) in other.checked {
            *self.checked.entry(claim).or_default() += n;
        }
        self.models += other.models;
        self.sampled_models += other.sampled_models;
        self.capped_lattices += other.capped_lattices;
        self
    }

    pub fn to_json_lines(&self) -> String {
        self.reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("reports serialize") + "\n")
            .collect()
    }

    pub fn summary(&self) -> String {
        let checked: Vec<String> = self
            .checked
            .iter()
            .map(|(c, n)| format!("{}={n}", c.as_str()))
            .collect();
        format!(
            "{} models ({} sampled, {} capped lattices), {} discrepancies; checked {}",
            self.models,
            self.sampled_models,
            self.capped_lattices,
            self.reports.len(),
            checked.join(" ")
        )
    }
}

/// Per-model accumulator.
struct Recorder<'a> {
    entry: &'a CorpusEntry,
    max_reports: usize,
    out: Outcome,
    per_claim: BTreeMap<Claim, usize>,
}

impl<'a> Recorder<'a> {
    fn new(entry: &'a CorpusEntry, max_reports: usize) -> Self {
        Recorder {
            entry,
            max_reports,
            out: Outcome {
                models: 1,
                ..Outcome::default()
            },
            per_claim: BTreeMap::new(),
        }
    }

    fn check(&mut self, claim: Claim, holds: bool, detail: impl FnOnce() -> String, family: Option<&IdealFamily>) {
        *self.out.checked.entry(claim).or_default() += 1;
        if holds {
            return;
        }
        let kept = self.per_claim.entry(claim).or_default();
        if *kept >= self.max_reports {
            return;
        }
        *kept += 1;
        let model = &self.entry.model;
        self.out.reports.push(DiscrepancyReport {
            fingerprint: self.entry.fingerprint.clone(),
            claim,
            detail: detail(),
            family: family.map(|f| FamilyDocument::from_family(model, f)),
            seed: self.entry.origin.seed(),
            origin: self.entry.origin.clone(),
            model: ModelDocument::from_model(model),
        });
    }
}

/// The three verdicts compared by the sweep. The harness self-test swaps in a faulty one.
pub trait Verdicts: Sync {
    fn t_family(&self, model: &TabulatedModel, family: &IdealFamily) -> bool;
    fn nt_tuple(&self, model: &TabulatedModel, family: &IdealFamily) -> bool;
    fn relative_o(&self, model: &TabulatedModel, family: &IdealFamily, k: &IdealFamily) -> bool;
}

/// The library's checkers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Library;

impl Verdicts for Library {
    fn t_family(&self, model: &TabulatedModel, family: &IdealFamily) -> bool {
        is_t_family(model, family).expect("candidates fit the model").verdict()
    }
    fn nt_tuple(&self, model: &TabulatedModel, family: &IdealFamily) -> bool {
        is_nt_tuple(model, family).expect("candidates fit the model").verdict()
    }
    fn relative_o(&self, model: &TabulatedModel, family: &IdealFamily, k: &IdealFamily) -> bool {
        is_relative_o_family(model, family, k)
            .expect("candidates fit the model")
            .verdict()
    }
}

fn tabulate(model: &Model) -> Result<TabulatedModel> {
    TabulatedModel::new(model)
        .ok_or_else(|| ToolError::invalid(format!("sweeps need at most {} vertices", TabulatedModel::MAX_VERTICES)))
}

/// Number of candidate families, `(2^|V|)^(2^k)`, saturating.
pub fn candidate_count(model: &impl DirectionModel) -> u128 {
    let bits = model.vertex_count() as u32 * (1u32 << model.rank());
    1u128.checked_shl(bits).filter(|_| bits < 128).unwrap_or(u128::MAX)
}

fn decode(code: u64, n: usize, family: &mut IdealFamily) {
    let mask = (1u64 << n) - 1;
    for (slot, set) in family.sets_mut().iter_mut().enumerate() {
        *set = VertexSet::from_bits((code >> (n * slot)) & mask);
    }
}

fn sampling_rng(spec: &CorpusSpec, entry: &CorpusEntry, salt: u64) -> ChaCha8Rng {
    let fp = u64::from_str_radix(&entry.fingerprint, 16).unwrap_or(0);
    ChaCha8Rng::seed_from_u64(spec.seed ^ fp ^ salt.rotate_left(32))
}

fn random_subset(rng: &mut ChaCha8Rng, universe: VertexSet, p: f64) -> VertexSet {
    universe.iter().filter(|_| rng.random_bool(p)).collect()
}

/// Seeded candidates for models above the exhaustive ceiling: a quarter each of
/// T-families, one-vertex perturbations of T-families, random partially ordered
/// families and uniform families.
pub fn sample_candidates(
    model: &TabulatedModel,
    t_families: &[IdealFamily],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<IdealFamily> {
    let rank = model.rank();
    let universe = model.universe();
    let n = model.vertex_count();
    let quarter = count / 4;
    let mut out = Vec::with_capacity(count);
    if t_families.len() <= quarter {
        out.extend_from_slice(t_families);
    } else {
        out.extend(t_families.choose_multiple(rng, quarter).cloned());
    }
    let slots = 1usize << rank;
    for _ in 0..quarter {
        let Some(base) = t_families.choose(rng) else { break };
        let mut f = base.clone();
        let slot = rng.random_range(0..slots);
        let v = rng.random_range(0..n);
        f.sets_mut()[slot] = f.sets()[slot].symmetric_difference(VertexSet::singleton(v));
        out.push(f);
    }
    let order = canonical_masks(rank);
    for _ in 0..quarter {
        let mut f = IdealFamily::empty(rank);
        for &mask in &order {
            let floor = mask.directions().fold(VertexSet::EMPTY, |acc, i| {
                acc | f.get(SubsetMask::from_bits(mask.bits() & !(1 << i)))
            });
            f.set(mask, floor | random_subset(rng, universe, 0.25));
        }
        out.push(f);
    }
    while out.len() < count {
        out.push(IdealFamily::from_fn(rank, |_| random_subset(rng, universe, 0.5)));
    }
    out
}

/// Sweep of one model: `T ⟺ NT` and `O ⟺ (NT ∧ I ⊆ L)` on every candidate, or on a
/// seeded sample above the candidate ceiling.
pub fn theorem_a_model<V: Verdicts>(entry: &CorpusEntry, spec: &CorpusSpec, verdicts: &V) -> Result<Outcome> {
    let model = tabulate(&entry.model)?;
    let i = i_family(&model);
    let mut rec = Recorder::new(entry, spec.max_reports);
    let compare = |rec: &mut Recorder, f: &IdealFamily| {
        let t = verdicts.t_family(&model, f);
        let nt = verdicts.nt_tuple(&model, f);
        rec.check(
            Claim::TEqualsNt,
            t == nt,
            || format!("T-check says {t}, NT-check says {nt}"),
            Some(f),
        );
        let o = verdicts.relative_o(&model, f, &i);
        let no = nt && i.is_subfamily(f);
        rec.check(
            Claim::OEqualsNo,
            o == no,
            || format!("O-check says {o}, NO says {no}"),
            Some(f),
        );
    };
    let total = candidate_count(&model);
    if total <= u128::from(spec.candidate_ceiling) {
        let n = model.vertex_count();
        const CHUNK: u64 = 1 << 14;
        let total = total as u64;
        let chunks: Vec<Outcome> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut rec = Recorder::new(entry, spec.max_reports);
                let mut family = IdealFamily::empty(model.rank());
                for code in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    decode(code, n, &mut family);
                    compare(&mut rec, &family);
                }
                rec.out.models = 0;
                rec.out
            })
            .collect();
        rec.out = chunks.into_iter().fold(rec.out, Outcome::merge);
    } else {
        let t = enumerate_t_families(&model, Budget(spec.budget))?;
        let mut rng = sampling_rng(spec, entry, 1);
        for f in sample_candidates(&model, &t.families, spec.candidate_samples, &mut rng) {
            compare(&mut rec, &f);
        }
        rec.out.sampled_models = 1;
    }
    // Chunks each apply their own cap; reapply it for the model as a whole.
    let mut kept: BTreeMap<Claim, usize> = BTreeMap::new();
    rec.out.reports.retain(|r| {
        let k = kept.entry(r.claim).or_default();
        *k += 1;
        *k <= spec.max_reports
    });
    Ok(rec.out)
}

/// Katsura's T-pairs `(H_∅, H_1)`: `H_∅ ⊆ Φ(H_∅)` and `H_∅ ⊆ H_1 ⊆ J_{1}(H_∅)`.
///
/// The compactness part of Katsura's `J(I, X)` always holds for these finite proper
/// systems and is not tested.
pub fn katsura_oracle(model: &impl DirectionModel) -> Result<EnumerationResult> {
    if model.rank() != 1 {
        return Err(ToolError::invalid(format!(
            "the T-pair oracle needs rank 1, got {}",
            model.rank()
        )));
    }
    let one = SubsetMask::single(0);
    let mut families = Vec::new();
    for h0 in model.universe().subsets() {
        if !h0.is_subset(model.phi(0, h0)) {
            continue;
        }
        let cap = jf_of(model, h0, one)?;
        if !h0.is_subset(cap) {
            continue;
        }
        for extra in cap.difference(h0).subsets() {
            families.push(IdealFamily::from_sets(1, vec![h0, h0 | extra])?);
        }
    }
    sort_canonical(&mut families);
    Ok(EnumerationResult {
        mode: Mode::T,
        families,
    })
}

pub fn katsura_model(entry: &CorpusEntry, spec: &CorpusSpec) -> Result<Outcome> {
    let mut rec = Recorder::new(entry, spec.max_reports);
    let pairs = katsura_oracle(&entry.model)?;
    let t = enumerate_t_families(&entry.model, Budget(spec.budget))?;
    let holds = pairs == t;
    rec.check(
        Claim::KatsuraEqualsT,
        holds,
        || format!("{} T-pairs against {} T-families", pairs.count(), t.count()),
        pairs
            .families
            .iter()
            .find(|f| !t.families.contains(f))
            .or_else(|| t.families.iter().find(|f| !pairs.families.contains(f))),
    );
    Ok(rec.out)
}

/// The pass-down inclusion for `J`, the three consequences of the T-equation on
/// every T-family, and `X_F^{-1}(H) ∩ J_F(H) = H` on every invariant `H`.
pub fn property_model(entry: &CorpusEntry, spec: &CorpusSpec) -> Result<Outcome> {
    let model = tabulate(&entry.model)?;
    let rank = model.rank();
    let mut rec = Recorder::new(entry, spec.max_reports);
    let masks = canonical_masks(rank);
    let full = SubsetMask::full(rank);

    for &f in &masks {
        if f == full {
            continue;
        }
        for i in f.perpendicular(rank) {
            let fi = f.with(i);
            let extra = model.phi(i, j_set(&model, f)) & j_set(&model, fi);
            let outside = extra.difference(j_set(&model, f));
            rec.check(
                Claim::JPassDown,
                outside.is_empty(),
                || format!("F={f}, i={}: {:?} escape J_F", i + 1, set_names(&entry.model, outside)),
                None,
            );
        }
    }

    let t = enumerate_t_families(&model, Budget(spec.budget))?;
    for l in &t.families {
        let inv = is_invariant(&model, l)?;
        rec.check(Claim::TFamilyInvariant, inv.verdict(), || format!("{inv:?}"), Some(l));
        let po = is_partially_ordered(l);
        rec.check(
            Claim::TFamilyPartiallyOrdered,
            po.verdict(),
            || format!("{po:?}"),
            Some(l),
        );
        let bottom = l.get(SubsetMask::EMPTY);
        for &f in &masks[1..] {
            let outside = l.get(f).difference(jf_of(&model, bottom, f)?);
            rec.check(
                Claim::TFamilyConditionI,
                outside.is_empty(),
                || format!("F={f}: {:?} outside J_F(L_∅)", set_names(&entry.model, outside)),
                Some(l),
            );
        }
    }

    let universe = model.universe();
    for h in universe.subsets() {
        if !(0..rank).all(|i| h.is_subset(model.phi(i, h))) {
            continue;
        }
        for &f in &masks[1..] {
            let got = xf_inverse(&model, h, f)? & jf_of(&model, h, f)?;
            rec.check(
                Claim::QuotientIdeal,
                got == h,
                || {
                    format!(
                        "H={:?}, F={f}: got {:?}",
                        set_names(&entry.model, h),
                        set_names(&entry.model, got)
                    )
                },
                None,
            );
        }
    }
    Ok(rec.out)
}

/// Least upper bounds of `a ∪ b` among `families`, found by a plain scan.
///
/// Anything strictly below an upper bound has smaller height, so scanning by height
/// and keeping what lies above no kept element yields exactly the minimal ones.
fn minimal_upper_bounds<'a>(families: &'a [IdealFamily], bound: &IdealFamily) -> Vec<&'a IdealFamily> {
    let mut upper: Vec<&IdealFamily> = families.iter().filter(|f| bound.is_subfamily(f)).collect();
    upper.sort_by_key(|f| f.height());
    let mut minimal: Vec<&IdealFamily> = Vec::new();
    for c in upper {
        if !minimal.iter().any(|m| m.is_subfamily(c)) {
            minimal.push(c);
        }
    }
    minimal
}

fn strictly_below(a: &IdealFamily, b: &IdealFamily) -> bool {
    a != b && a.is_subfamily(b)
}

/// Meet closure, unique joins and the Hasse diagram on the T-families, plus
/// minimality of `I` among the O-families.
pub fn lattice_model(entry: &CorpusEntry, spec: &CorpusSpec) -> Result<Outcome> {
    let model = tabulate(&entry.model)?;
    let mut rec = Recorder::new(entry, spec.max_reports);
    let t = enumerate_t_families(&model, Budget(spec.budget))?;
    let families = &t.families;
    let count = families.len();
    let index: HashSet<&IdealFamily> = families.iter().collect();
    let mut rng = sampling_rng(spec, entry, 2);

    let exhaustive = count <= spec.lattice_exhaustive_nodes;
    let build = exhaustive || count <= spec.lattice_build_nodes;
    rec.out.capped_lattices = usize::from(!build);
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..count).flat_map(|a| (a..count).map(move |b| (a, b))).collect()
    } else {
        (0..spec.lattice_pair_samples)
            .map(|_| (rng.random_range(0..count), rng.random_range(0..count)))
            .collect()
    };
    let join_pairs = if exhaustive {
        pairs.len()
    } else {
        (spec.lattice_scan_budget / count as u64).clamp(16, pairs.len() as u64) as usize
    };
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let (fa, fb) = (&families[a], &families[b]);
        let m = fa.intersection(fb);
        rec.check(
            Claim::MeetClosed,
            index.contains(&m),
            || format!("meet of #{a} and #{b} missing"),
            Some(&m),
        );
        if p >= join_pairs {
            continue;
        }
        let bound = fa.union(fb);
        let minimal = minimal_upper_bounds(families, &bound);
        let computed = join_within(families, fa, fb);
        let holds = minimal.len() == 1 && computed == Some(minimal[0]);
        rec.check(
            Claim::JoinUnique,
            holds,
            || {
                format!(
                    "#{a} and #{b}: {} minimal upper bounds, join {computed:?}",
                    minimal.len()
                )
            },
            Some(&bound),
        );
    }
    if build {
        let lattice = match build_lattice(&t) {
            Ok(l) => Some(l),
            Err(e) => {
                rec.check(Claim::MeetClosed, false, || format!("lattice builder: {e}"), None);
                None
            }
        };
        if let Some(lattice) = lattice {
            let edges: HashSet<(usize, usize)> = lattice.cover_edges.iter().copied().collect();
            let is_cover = |u: usize, v: usize| {
                strictly_below(&families[u], &families[v])
                    && !(0..count).any(|w| {
                        strictly_below(&families[u], &families[w]) && strictly_below(&families[w], &families[v])
                    })
            };
            if exhaustive {
                let naive: HashSet<(usize, usize)> = (0..count)
                    .flat_map(|u| (0..count).map(move |v| (u, v)))
                    .filter(|&(u, v)| is_cover(u, v))
                    .collect();
                rec.check(
                    Claim::HasseReduction,
                    naive == edges,
                    || format!("{} naive covers against {} exported edges", naive.len(), edges.len()),
                    None,
                );
            } else {
                for &(u, v) in &lattice.cover_edges {
                    rec.check(
                        Claim::HasseReduction,
                        is_cover(u, v),
                        || format!("edge #{u} -> #{v} is not a cover"),
                        None,
                    );
                }
                for _ in 0..spec.lattice_pair_samples {
                    let (u, v) = (rng.random_range(0..count), rng.random_range(0..count));
                    let holds = is_cover(u, v) == edges.contains(&(u, v));
                    rec.check(
                        Claim::HasseReduction,
                        holds,
                        || format!("pair #{u}, #{v} disagrees"),
                        None,
                    );
                }
            }
            let top_ok = families[lattice.top] == IdealFamily::constant(model.rank(), model.universe());
            rec.check(
                Claim::HasseReduction,
                top_ok,
                || "top is not the all-V family".into(),
                None,
            );
        }
    }

    let i = i_family(&model);
    let o = enumerate_relative_o(&model, &i, Budget(spec.budget))?;
    let holds = o.families.contains(&i) && o.families.iter().all(|f| i.is_subfamily(f));
    rec.check(
        Claim::IFamilyMinimum,
        holds,
        || "I is not the least O-family".into(),
        Some(&i),
    );
    Ok(rec.out)
}

/// `⋂{Φ_n(K0) : n ⊥ F, n_i ≤ |V|}` by an odometer over degrees.
pub fn bounded_intersection(model: &impl DirectionModel, k0: VertexSet, f: SubsetMask) -> VertexSet {
    let perp: Vec<usize> = f.perpendicular(model.rank()).collect();
    let bound = model.vertex_count() as u64 + 1;
    let mut digits = vec![0u64; perp.len()];
    let mut acc = model.universe();
    loop {
        let mut s = k0;
        for (&i, &d) in perp.iter().zip(&digits) {
            for _ in 0..d {
                s = model.phi(i, s);
            }
        }
        acc &= s;
        if !crate::generate::odometer(&mut digits, bound) {
            return acc;
        }
    }
}

/// Vertices lying in `Φ_m(H)` for every `m ≥ n`, `m ⊥ F`, for some `n ⊥ F`.
///
/// Along one direction a set's orbit has preperiod plus period at most `B = 2^|V|`,
/// so it is enough to take `n ≤ B` and `m ≤ 2B` coordinatewise. Suffix
/// intersections over the box are built backwards one coordinate at a time.
pub fn eventual_containment(model: &impl DirectionModel, h: VertexSet, f: SubsetMask) -> VertexSet {
    let perp: Vec<usize> = f.perpendicular(model.rank()).collect();
    let b = 1usize << model.vertex_count();
    let side = 2 * b + 1;
    let r = perp.len();
    let cells = side.pow(r as u32);
    let stride = |d: usize| side.pow(d as u32);
    let coord = |cell: usize, d: usize| (cell / stride(d)) % side;
    // table[m] = Φ_m(H), filled in increasing cell order.
    let mut table = vec![VertexSet::EMPTY; cells];
    for cell in 0..cells {
        table[cell] = match (0..r).find(|&d| coord(cell, d) > 0) {
            None => h,
            Some(d) => model.phi(perp[d], table[cell - stride(d)]),
        };
    }
    // suffix[n] = ⋂{table[m] : n ≤ m ≤ 2B}.
    let mut suffix = table;
    for d in 0..r {
        for cell in (0..cells).rev() {
            if coord(cell, d) + 1 < side {
                suffix[cell] = suffix[cell] & suffix[cell + stride(d)];
            }
        }
    }
    (0..cells)
        .filter(|&cell| (0..r).all(|d| coord(cell, d) <= b))
        .fold(VertexSet::EMPTY, |acc, cell| acc | suffix[cell])
}

/// The perp-invariant and limit constructions against the bounded oracles, for every
/// `H` and `F`.
pub fn limit_model(entry: &CorpusEntry, spec: &CorpusSpec) -> Result<Outcome> {
    let model = tabulate(&entry.model)?;
    let rank = model.rank();
    let mut rec = Recorder::new(entry, spec.max_reports);
    let full = SubsetMask::full(rank);
    for f in (0..=full.bits()).map(SubsetMask::from_bits) {
        for h in model.universe().subsets() {
            let got = largest_perp_invariant(&model, h, f);
            let want = bounded_intersection(&model, h, f);
            rec.check(
                Claim::PerpInvariantOracle,
                got == want,
                || format!("F={f}, H={h:?}: {got:?} against {want:?}"),
                None,
            );
            if !f.is_empty() && f != full {
                let got = lim_set(&model, h, f)?;
                let want = eventual_containment(&model, h, f);
                rec.check(
                    Claim::LimitOracle,
                    got == want,
                    || format!("F={f}, H={h:?}: {got:?} against {want:?}"),
                    None,
                );
            }
        }
    }
    Ok(rec.out)
}

/// Which checks [`crosscheck`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Suites {
    pub theorem_a: bool,
    pub katsura: bool,
    pub properties: bool,
    pub lattice: bool,
    pub limits: bool,
}

impl Suites {
    pub const ALL: Suites = Suites {
        theorem_a: true,
        katsura: true,
        properties: true,
        lattice: true,
        limits: true,
    };
    pub const NONE: Suites = Suites {
        theorem_a: false,
        katsura: false,
        properties: false,
        lattice: false,
        limits: false,
    };
}

fn run_one<V: Verdicts>(entry: &CorpusEntry, spec: &CorpusSpec, suites: Suites, verdicts: &V) -> Result<Outcome> {
    let mut out = Outcome {
        models: 1,
        ..Outcome::default()
    };
    let mut add = |o: Outcome| {
        let models = out.models;
        out = std::mem::take(&mut out).merge(o);
        out.models = models;
    };
    if suites.theorem_a {
        add(theorem_a_model(entry, spec, verdicts)?);
    }
    if suites.katsura && entry.model.rank() == 1 {
        add(katsura_model(entry, spec)?);
    }
    if suites.properties {
        add(property_model(entry, spec)?);
    }
    if suites.lattice {
        add(lattice_model(entry, spec)?);
    }
    if suites.limits && entry.model.vertex_count() <= spec.oracle_vertices {
        add(limit_model(entry, spec)?);
    }
    Ok(out)
}

/// Runs the selected suites on every entry, in parallel over models, with reports
/// ordered by fingerprint and then corpus position.
pub fn crosscheck_with<V: Verdicts>(
    corpus: &[CorpusEntry],
    spec: &CorpusSpec,
    suites: Suites,
    verdicts: &V,
) -> Result<Outcome> {
    let outcomes: Vec<Outcome> = corpus
        .par_iter()
        .map(|entry| run_one(entry, spec, suites, verdicts))
        .collect::<Result<_>>()?;
    let mut total = outcomes.into_iter().fold(Outcome::default(), Outcome::merge);
    total.reports.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
    Ok(total)
}

pub fn crosscheck(corpus: &[CorpusEntry], spec: &CorpusSpec, suites: Suites) -> Result<Outcome> {
    crosscheck_with(corpus, spec, suites, &Library)
}
