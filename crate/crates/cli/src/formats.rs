//! JSON documents for models, families, reports and lattices, and DOT export.
//!
//! Vertex names appear in every document; indices stay internal. Object keys are
//! emitted in sorted order and sets list vertices by model order, so output is
//! byte-stable for a given input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gauge_ideals::checks::{CheckReport, Witness};
use gauge_ideals::lattice::LatticeGraph;
use gauge_ideals::sets::canonical_masks;
use gauge_ideals::{
    DirectionModel, EnumerationResult, IdealFamily, KGraphSkeleton, Model, PartialMapSystem, SubsetMask, VertexSet,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Result, ToolError};

/// On-disk model document, tagged by `"kind"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDocument {
    Kgraph {
        rank: usize,
        vertices: Vec<String>,
        /// `adjacency[i][v][w] = |v Λ^{e_{i+1}} w|`.
        adjacency: Vec<Vec<Vec<i64>>>,
    },
    Dynsys {
        rank: usize,
        points: Vec<String>,
        /// `maps[i][p]` is `T_{i+1}(p)`; `null` or absent means undefined.
        maps: Vec<BTreeMap<String, Option<String>>>,
    },
}

impl ModelDocument {
    pub fn into_model(self) -> Result<Model> {
        match self {
            ModelDocument::Kgraph {
                rank,
                vertices,
                adjacency,
            } => {
                if adjacency.len() != rank {
                    return Err(ToolError::invalid(format!(
                        "rank is {rank} but {} adjacency matrices were given",
                        adjacency.len()
                    )));
                }
                let mut counts = Vec::with_capacity(rank);
                for (i, m) in adjacency.into_iter().enumerate() {
                    let mut rows = Vec::with_capacity(m.len());
                    for (v, row) in m.into_iter().enumerate() {
                        let mut out = Vec::with_capacity(row.len());
                        for (w, c) in row.into_iter().enumerate() {
                            let c = u64::try_from(c).map_err(|_| {
                                ToolError::invalid(format!("negative entry {c} at adjacency[{i}][{v}][{w}]"))
                            })?;
                            out.push(c);
                        }
                        rows.push(out);
                    }
                    counts.push(rows);
                }
                Ok(KGraphSkeleton::new(vertices, counts)?.into())
            }
            ModelDocument::Dynsys { rank, points, maps } => {
                if maps.len() != rank {
                    return Err(ToolError::invalid(format!(
                        "rank is {rank} but {} maps were given",
                        maps.len()
                    )));
                }
                let index = |name: &str, i: usize| {
                    points
                        .iter()
                        .position(|p| p == name)
                        .ok_or_else(|| ToolError::invalid(format!("map {} mentions unknown point {name:?}", i + 1)))
                };
                let mut tables = Vec::with_capacity(rank);
                for (i, map) in maps.iter().enumerate() {
                    let mut table = vec![None; points.len()];
                    for (from, to) in map {
                        let from = index(from, i)?;
                        table[from] = match to {
                            Some(to) => Some(index(to, i)?),
                            None => None,
                        };
                    }
                    tables.push(table);
                }
                Ok(PartialMapSystem::new(points, tables)?.into())
            }
        }
    }

    pub fn from_model(model: &Model) -> Self {
        match model {
            Model::KGraph(g) => ModelDocument::Kgraph {
                rank: g.rank(),
                vertices: g.names().to_vec(),
                adjacency: g
                    .adjacency()
                    .iter()
                    .map(|m| m.iter().map(|row| row.iter().map(|&c| c as i64).collect()).collect())
                    .collect(),
            },
            Model::DynSys(s) => ModelDocument::Dynsys {
                rank: s.rank(),
                points: s.names().to_vec(),
                maps: s
                    .maps()
                    .iter()
                    .map(|map| {
                        map.iter()
                            .enumerate()
                            .map(|(p, t)| (s.names()[p].clone(), t.map(|t| s.names()[t].clone())))
                            .collect()
                    })
                    .collect(),
            },
        }
    }
}

pub fn parse_model(text: &str) -> Result<Model> {
    serde_json::from_str::<ModelDocument>(text)?.into_model()
}

pub fn model_to_json(model: &Model) -> String {
    serde_json::to_string(&ModelDocument::from_model(model)).expect("model documents serialize")
}

/// FNV-1a of the compact model document.
pub fn model_fingerprint(model: &Model) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in model_to_json(model).bytes() {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// Key of `F` in family documents: comma-joined sorted 1-based directions.
pub fn mask_key(f: SubsetMask) -> String {
    f.to_string()
}

pub fn parse_mask_key(key: &str, rank: usize) -> Result<SubsetMask> {
    if key.is_empty() {
        return Ok(SubsetMask::EMPTY);
    }
    let mut mask = SubsetMask::EMPTY;
    let mut last = 0usize;
    for part in key.split(',') {
        let d: usize = part
            .parse()
            .map_err(|_| ToolError::invalid(format!("bad direction {part:?} in family key {key:?}")))?;
        if d == 0 || d > rank {
            return Err(ToolError::invalid(format!(
                "direction {d} out of range 1..={rank} in key {key:?}"
            )));
        }
        if d <= last {
            return Err(ToolError::invalid(format!(
                "family key {key:?} is not strictly increasing"
            )));
        }
        last = d;
        mask = mask.with(d - 1);
    }
    Ok(mask)
}

pub fn set_names(model: &Model, set: VertexSet) -> Vec<String> {
    set.iter().map(|v| model.names()[v].clone()).collect()
}

fn set_from_names(model: &Model, names: &[String], key: &str) -> Result<VertexSet> {
    let mut set = VertexSet::EMPTY;
    for name in names {
        let v = model
            .index_of(name)
            .ok_or_else(|| ToolError::invalid(format!("unknown vertex {name:?} in entry {key:?}")))?;
        if set.contains(v) {
            return Err(ToolError::invalid(format!("vertex {name:?} repeated in entry {key:?}")));
        }
        set.insert(v);
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub rank: usize,
    pub sets: BTreeMap<String, Vec<String>>,
}

impl FamilyDocument {
    pub fn from_family(model: &Model, family: &IdealFamily) -> Self {
        FamilyDocument {
            rank: family.rank(),
            sets: (0..1u32 << family.rank())
                .map(SubsetMask::from_bits)
                .map(|f| (mask_key(f), set_names(model, family.get(f))))
                .collect(),
        }
    }

    pub fn into_family(self, model: &Model) -> Result<IdealFamily> {
        let rank = model.rank();
        if self.rank != rank {
            return Err(ToolError::invalid(format!(
                "family has rank {}, model has rank {rank}",
                self.rank
            )));
        }
        let mut sets: Vec<Option<VertexSet>> = vec![None; 1 << rank];
        for (key, names) in &self.sets {
            let f = parse_mask_key(key, rank)?;
            sets[f.index()] = Some(set_from_names(model, names, key)?);
        }
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(bits, s)| {
                s.ok_or_else(|| {
                    ToolError::invalid(format!(
                        "family is missing key {:?}",
                        mask_key(SubsetMask::from_bits(bits as u32))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealFamily::from_sets(rank, sets)?)
    }
}

pub fn parse_family(model: &Model, text: &str) -> Result<IdealFamily> {
    serde_json::from_str::<FamilyDocument>(text)?.into_family(model)
}

pub fn family_value(model: &Model, family: &IdealFamily) -> Value {
    serde_json::to_value(FamilyDocument::from_family(model, family)).expect("family documents serialize")
}

pub fn witness_value(model: &Model, witness: &Witness) -> Value {
    let name = |v: usize| model.names()[v].clone();
    match *witness {
        Witness::Invariance { f, direction, vertex } => {
            json!({"F": mask_key(f), "i": direction + 1, "vertex": name(vertex)})
        }
        Witness::PartialOrder { lower, upper, vertex } => {
            json!({"lower": mask_key(lower), "upper": mask_key(upper), "vertex": name(vertex)})
        }
        Witness::TEquation { f, direction, vertices } => {
            json!({"F": mask_key(f), "i": direction + 1, "vertices": set_names(model, vertices)})
        }
        Witness::ConditionI { f, vertices }
        | Witness::NtConditionIv { f, vertices }
        | Witness::Containment { f, vertices } => {
            json!({"F": mask_key(f), "vertices": set_names(model, vertices)})
        }
    }
}

pub fn report_value(model: &Model, report: &CheckReport) -> Value {
    json!({
        "verdict": report.verdict(),
        "violated_condition": report.violated_condition().map(|c| c.as_str()),
        "witness": report.witness.as_ref().map(|w| witness_value(model, w)),
        "not_evaluated": report.not_evaluated.map(|c| c.as_str()),
    })
}

pub fn enumeration_value(model: &Model, result: &EnumerationResult) -> Value {
    json!({
        "mode": result.mode.as_str(),
        "count": result.count(),
        "families": result.families.iter().map(|f| family_value(model, f)).collect::<Vec<_>>(),
    })
}

fn node_id(id: u64) -> String {
    format!("{id:016x}")
}

pub fn lattice_value(model: &Model, lattice: &LatticeGraph) -> Value {
    let id = |i: usize| node_id(lattice.nodes[i].id);
    json!({
        "nodes": lattice.nodes.iter().map(|n| json!({
            "id": node_id(n.id),
            "height": n.height,
            "family": family_value(model, &n.family),
        })).collect::<Vec<_>>(),
        "cover_edges": lattice.cover_edges.iter().map(|&(a, b)| json!([id(a), id(b)])).collect::<Vec<_>>(),
        "bottom": id(lattice.bottom),
        "top": id(lattice.top),
    })
}

/// Compact label `F:{v,..}` per entry in canonical subset order, `∅` for the empty key.
pub fn family_label(model: &Model, family: &IdealFamily) -> String {
    if family.sets().iter().all(|s| s.is_empty()) {
        return "all-empty".to_string();
    }
    canonical_masks(family.rank())
        .into_iter()
        .map(|f| {
            let key = if f.is_empty() { "∅".to_string() } else { mask_key(f) };
            format!("{key}:{{{}}}", set_names(model, family.get(f)).join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph with edges from lower to upper and one rank per height.
pub fn lattice_to_dot(model: &Model, lattice: &LatticeGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for n in &lattice.nodes {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\"];",
            node_id(n.id),
            dot_escape(&family_label(model, &n.family))
        );
    }
    let mut heights: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    let ids: Vec<String> = lattice.nodes.iter().map(|n| node_id(n.id)).collect();
    for (n, id) in lattice.nodes.iter().zip(&ids) {
        heights.entry(n.height).or_default().push(id);
    }
    for members in heights.values() {
        let list: Vec<String> = members.iter().map(|id| format!("\"{id}\";")).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", list.join(" "));
    }
    for &(a, b) in &lattice.cover_edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", ids[a], ids[b]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauge_ideals::fixtures;

    #[test]
    fn mask_keys_round_trip() {
        assert_eq!(parse_mask_key("", 2).unwrap(), SubsetMask::EMPTY);
        assert_eq!(parse_mask_key("1,2", 2).unwrap(), SubsetMask::full(2));
        assert!(parse_mask_key("2,1", 2).is_err());
        assert!(parse_mask_key("3", 2).is_err());
        assert!(parse_mask_key("1,1", 2).is_err());
        assert!(parse_mask_key("x", 2).is_err());
    }

    #[test]
    fn family_document_requires_every_key() {
        let m: Model = fixtures::ds_b().into();
        let err = parse_family(&m, r#"{"rank":2,"sets":{"":[],"1":[],"2":[]}}"#).unwrap_err();
        assert!(err.to_string().contains("missing key \"1,2\""), "{err}");
        let err = parse_family(&m, r#"{"rank":2,"sets":{"":["z"],"1":[],"2":[],"1,2":[]}}"#).unwrap_err();
        assert!(err.to_string().contains("unknown vertex"));
        assert!(parse_family(&m, r#"{"rank":1,"sets":{"":[],"1":[]}}"#).is_err());
        let l = parse_family(&m, r#"{"rank":2,"sets":{"":[],"1":[],"2":[],"1,2":["p"]}}"#).unwrap();
        assert_eq!(l, fixtures::ds_b_family_l());
    }

    #[test]
    fn model_documents_validate() {
        let neg = r#"{"kind":"kgraph","rank":1,"vertices":["a"],"adjacency":[[[-1]]]}"#;
        assert!(parse_model(neg).unwrap_err().to_string().contains("negative entry"));
        let wrong_rank = r#"{"kind":"kgraph","rank":2,"vertices":["a"],"adjacency":[[[1]]]}"#;
        assert!(parse_model(wrong_rank).is_err());
        let unknown = r#"{"kind":"dynsys","rank":1,"points":["p"],"maps":[{"p":"q"}]}"#;
        assert!(parse_model(unknown).unwrap_err().to_string().contains("unknown point"));
        let extra = r#"{"kind":"dynsys","rank":1,"points":["p"],"maps":[{}],"colour":1}"#;
        assert!(parse_model(extra).is_err());
        let ok = r#"{"kind":"dynsys","rank":2,"points":["p","q"],"maps":[{"p":"p","q":"q"},{"p":"q","q":"q"}]}"#;
        assert_eq!(parse_model(ok).unwrap(), Model::from(fixtures::ds_b()));
    }

    #[test]
    fn models_round_trip() {
        for m in [Model::from(fixtures::k2()), Model::from(fixtures::ds_a())] {
            assert_eq!(parse_model(&model_to_json(&m)).unwrap(), m);
        }
    }

    #[test]
    fn labels() {
        let m: Model = fixtures::ds_b().into();
        assert_eq!(family_label(&m, &IdealFamily::empty(2)), "all-empty");
        assert_eq!(family_label(&m, &fixtures::ds_b_family_l()), "∅:{} 1:{} 2:{} 1,2:{p}");
    }
}
