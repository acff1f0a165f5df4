//! JSON documents: a kind tag, a schema version and a payload.
//!
//! Simplices are named by identifier everywhere, level by level, in
//! identifier order, so serialization is canonical and
//! `serialize(parse(text)) == text` for serialized documents.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sgpd::{GroupoidAction, SimplicialGroupoid};
use crate::sset::{SimplicialMap, TruncatedSimplicialSet};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sset,
    Map,
    Groupoid,
    Action,
    Certificate,
    Completion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub kind: Kind,
    pub version: u32,
    pub payload: serde_json::Value,
}

/// `faces[n]["d{i}"][x]` names `d_i` of the x-th simplex of level n, and
/// `degeneracies[n]["s{i}"][x]` its `s_i`; level 0 has no faces and the top
/// level no degeneracies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsetDoc {
    pub max_dim: usize,
    pub levels: Vec<Vec<String>>,
    pub faces: Vec<BTreeMap<String, Vec<String>>>,
    pub degeneracies: Vec<BTreeMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub domain: SsetDoc,
    pub codomain: SsetDoc,
    /// Image of each domain simplex, level by level.
    pub assign: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: SsetDoc,
    pub arrows: SsetDoc,
    pub source: Vec<Vec<String>>,
    pub target: Vec<Vec<String>>,
    pub unit: Vec<Vec<String>>,
    pub inverse: Vec<Vec<String>>,
    /// `[g, h, g then h]` for every composable pair, level by level.
    pub compose: Vec<Vec<[String; 3]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub groupoid: GroupoidDoc,
    pub carrier: SsetDoc,
    pub anchor: Vec<Vec<String>>,
    /// `[g, x, g·x]` for every acting pair, level by level.
    pub act: Vec<Vec<[String; 3]>>,
}

pub fn parse(text: &str) -> Result<Document> {
    let doc: Document =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("document: {e}")))?;
    if doc.version != VERSION {
        return Err(Error::Invalid(format!(
            "unsupported schema version {} (this build reads version {VERSION})",
            doc.version
        )));
    }
    Ok(doc)
}

pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn document<T: Serialize>(kind: Kind, payload: &T) -> Document {
    Document {
        kind,
        version: VERSION,
        payload: serde_json::to_value(payload).expect("payloads serialize"),
    }
}

/// The payload, after checking the kind.
pub fn payload<T: DeserializeOwned>(doc: &Document, kind: Kind) -> Result<T> {
    if doc.kind != kind {
        return Err(Error::Invalid(
            format!("expected a {kind:?} document, found {:?}", doc.kind).to_lowercase(),
        ));
    }
    serde_json::from_value(doc.payload.clone()).map_err(|e| Error::Invalid(format!("payload: {e}")))
}

fn names(s: &TruncatedSimplicialSet, n: usize, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| s.id(n, x).to_string()).collect()
}

pub fn sset_doc(s: &TruncatedSimplicialSet) -> SsetDoc {
    let top = s.max_dim();
    let faces = (0..=top)
        .map(|n| match n {
            0 => BTreeMap::new(),
            _ => (0..=n)
                .map(|i| (format!("d{i}"), names(s, n - 1, s.face_table(n, i))))
                .collect(),
        })
        .collect();
    let degeneracies = (0..=top)
        .map(|n| match n == top {
            true => BTreeMap::new(),
            false => (0..=n)
                .map(|i| (format!("s{i}"), names(s, n + 1, s.degen_table(n, i))))
                .collect(),
        })
        .collect();
    SsetDoc {
        max_dim: top,
        levels: (0..=top).map(|n| s.ids(n).to_vec()).collect(),
        faces,
        degeneracies,
    }
}

fn resolve(
    s: &TruncatedSimplicialSet,
    n: usize,
    ids: &[String],
    field: &str,
) -> Result<Vec<usize>> {
    ids.iter()
        .map(|id| {
            s.index_of(n, id).ok_or_else(|| {
                Error::Invalid(format!("{field}: unknown identifier '{id}' at level {n}"))
            })
        })
        .collect()
}

fn resolve_levels(
    s: &TruncatedSimplicialSet,
    tables: &[Vec<String>],
    field: &str,
) -> Result<Vec<Vec<usize>>> {
    if tables.len() != s.max_dim() + 1 {
        return Err(Error::Invalid(format!(
            "{field}: expected {} levels",
            s.max_dim() + 1
        )));
    }
    tables
        .iter()
        .enumerate()
        .map(|(n, t)| resolve(s, n, t, &format!("{field}[{n}]")))
        .collect()
}

/// Reads a simplicial set; the simplicial identities are not checked here.
pub fn read_sset(doc: &SsetDoc) -> Result<TruncatedSimplicialSet> {
    let top = doc.max_dim;
    if doc.levels.len() != top + 1 {
        return Err(Error::Invalid(format!(
            "levels: expected {} levels for max_dim {top}",
            top + 1
        )));
    }
    for (field, len) in [
        ("faces", doc.faces.len()),
        ("degeneracies", doc.degeneracies.len()),
    ] {
        if len != top + 1 {
            return Err(Error::Invalid(format!(
                "{field}: expected {} levels for max_dim {top}",
                top + 1
            )));
        }
    }
    let ids = doc.levels.clone();
    let lookup: Vec<HashMap<&str, usize>> = ids
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(i, id)| (id.as_str(), i))
                .collect()
        })
        .collect();
    let table = |n: usize, at: usize, field: String, t: &Vec<String>| -> Result<Vec<usize>> {
        if t.len() != ids[n].len() {
            return Err(Error::Invalid(format!(
                "{field}: expected {} entries",
                ids[n].len()
            )));
        }
        t.iter()
            .map(|id| {
                lookup[at].get(id.as_str()).copied().ok_or_else(|| {
                    Error::Invalid(format!("{field}: unknown identifier '{id}' at level {at}"))
                })
            })
            .collect()
    };
    // `letter{i}` for i < count, in order, and nothing else
    let operators =
        |map: &BTreeMap<String, Vec<String>>, letter: char, count: usize, field: String| {
            if map.len() != count || (0..count).any(|i| !map.contains_key(&format!("{letter}{i}")))
            {
                let want: Vec<String> = (0..count).map(|i| format!("{letter}{i}")).collect();
                return Err(Error::Invalid(format!("{field}: expected keys {want:?}")));
            }
            Ok((0..count)
                .map(|i| {
                    (
                        format!("{field}.{letter}{i}"),
                        map[&format!("{letter}{i}")].clone(),
                    )
                })
                .collect::<Vec<_>>())
        };
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for n in 0..=top {
        let count = if n == 0 { 0 } else { n + 1 };
        faces.push(
            operators(&doc.faces[n], 'd', count, format!("faces[{n}]"))?
                .iter()
                .map(|(field, t)| table(n, n - 1, field.clone(), t))
                .collect::<Result<Vec<_>>>()?,
        );
        let count = if n < top { n + 1 } else { 0 };
        degens.push(
            operators(
                &doc.degeneracies[n],
                's',
                count,
                format!("degeneracies[{n}]"),
            )?
            .iter()
            .map(|(field, t)| table(n, n + 1, field.clone(), t))
            .collect::<Result<Vec<_>>>()?,
        );
    }
    TruncatedSimplicialSet::from_tables(top, ids, faces, degens)
        .map_err(|e| Error::Invalid(format!("levels: {e}")))
}

fn image_levels(map: &SimplicialMap) -> Vec<Vec<String>> {
    (0..=map.dom().max_dim())
        .map(|n| names(map.cod(), n, map.level(n)))
        .collect()
}

pub fn map_doc(map: &SimplicialMap) -> MapDoc {
    MapDoc {
        domain: sset_doc(map.dom()),
        codomain: sset_doc(map.cod()),
        assign: image_levels(map),
    }
}

/// Reads a map; only table shapes are checked (see `SimplicialMap::validate`).
pub fn read_map(doc: &MapDoc) -> Result<SimplicialMap> {
    let dom = Arc::new(read_sset(&doc.domain).map_err(|e| prefix("domain", e))?);
    let cod = Arc::new(read_sset(&doc.codomain).map_err(|e| prefix("codomain", e))?);
    let assign = resolve_levels(&cod, &doc.assign, "assign")?;
    SimplicialMap::new_unchecked(dom, cod, assign).map_err(|e| prefix("assign", e))
}

fn prefix(field: &str, e: Error) -> Error {
    match e {
        Error::Invalid(m) => Error::Invalid(format!("{field}.{m}")),
        other => other,
    }
}

pub fn groupoid_doc(g: &SimplicialGroupoid) -> GroupoidDoc {
    let compose = (0..=g.max_dim())
        .map(|n| {
            (0..g.composable.sset.level_len(n))
                .map(|w| {
                    let (a, b) = g.composable.pair(n, w);
                    let c = g.compose.apply(n, w);
                    [
                        g.ar.id(n, a).to_string(),
                        g.ar.id(n, b).to_string(),
                        g.ar.id(n, c).to_string(),
                    ]
                })
                .collect()
        })
        .collect();
    GroupoidDoc {
        objects: sset_doc(&g.ob),
        arrows: sset_doc(&g.ar),
        source: image_levels(&g.source),
        target: image_levels(&g.target),
        unit: image_levels(&g.unit),
        inverse: image_levels(&g.inverse),
        compose,
    }
}

/// Triples `[a, b, c]` as a lookup from `(a, b)` to `c`, per level.
fn triples(
    left: &TruncatedSimplicialSet,
    right: &TruncatedSimplicialSet,
    out: &TruncatedSimplicialSet,
    levels: &[Vec<[String; 3]>],
    field: &str,
) -> Result<Vec<HashMap<(usize, usize), usize>>> {
    if levels.len() != out.max_dim() + 1 {
        return Err(Error::Invalid(format!(
            "{field}: expected {} levels",
            out.max_dim() + 1
        )));
    }
    levels
        .iter()
        .enumerate()
        .map(|(n, level)| {
            level
                .iter()
                .map(|[a, b, c]| {
                    let at = |s: &TruncatedSimplicialSet, id: &str| {
                        s.index_of(n, id).ok_or_else(|| {
                            Error::Invalid(format!("{field}[{n}]: unknown identifier '{id}'"))
                        })
                    };
                    Ok(((at(left, a)?, at(right, b)?), at(out, c)?))
                })
                .collect()
        })
        .collect()
}

pub fn read_groupoid(doc: &GroupoidDoc) -> Result<SimplicialGroupoid> {
    let ob = Arc::new(read_sset(&doc.objects).map_err(|e| prefix("objects", e))?);
    let ar = Arc::new(read_sset(&doc.arrows).map_err(|e| prefix("arrows", e))?);
    let source = resolve_levels(&ob, &doc.source, "source")?;
    let target = resolve_levels(&ob, &doc.target, "target")?;
    let unit = resolve_levels(&ar, &doc.unit, "unit")?;
    let inverse = resolve_levels(&ar, &doc.inverse, "inverse")?;
    let table = triples(&ar, &ar, &ar, &doc.compose, "compose")?;
    SimplicialGroupoid::from_parts(ob, ar.clone(), source, target, unit, inverse, |n, a, b| {
        table[n].get(&(a, b)).copied()
    })
    .map_err(|e| prefix("compose", e))
}

pub fn action_doc(a: &GroupoidAction) -> ActionDoc {
    let act = (0..=a.max_dim())
        .map(|n| {
            (0..a.acting.sset.level_len(n))
                .map(|w| {
                    let (g, x) = a.acting.pair(n, w);
                    [
                        a.groupoid.ar.id(n, g).to_string(),
                        a.carrier.id(n, x).to_string(),
                        a.carrier.id(n, a.act.apply(n, w)).to_string(),
                    ]
                })
                .collect()
        })
        .collect();
    ActionDoc {
        groupoid: groupoid_doc(&a.groupoid),
        carrier: sset_doc(&a.carrier),
        anchor: image_levels(&a.anchor),
        act,
    }
}

pub fn read_action(doc: &ActionDoc) -> Result<GroupoidAction> {
    let g = Arc::new(read_groupoid(&doc.groupoid).map_err(|e| prefix("groupoid", e))?);
    let carrier = Arc::new(read_sset(&doc.carrier).map_err(|e| prefix("carrier", e))?);
    let anchor = resolve_levels(&g.ob, &doc.anchor, "anchor")?;
    let table = triples(&g.ar, &carrier, &carrier, &doc.act, "act")?;
    GroupoidAction::from_fn(g, carrier, anchor, |n, a, x| table[n].get(&(a, x)).copied())
        .map_err(|e| prefix("act", e))
}
