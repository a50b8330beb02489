//! JSON instance files: named objects and named 1-cells of one instance.
//!
//! Cells refer to objects by name and to elements by label, so files are
//! readable and diff cleanly. Writing a model and reading it back yields an
//! identical model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bicat::Instance;
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::finset::FinSet;
use crate::label::{self, KEY_SEP};
use crate::prof::Profunctor;
use crate::rel::RelCell;
use crate::span::SpanCell;

/// Named objects and cells of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Named<O, C> {
    pub objects: BTreeMap<String, O>,
    pub cells: BTreeMap<String, C>,
}

impl<O: PartialEq + Clone, C> Named<O, C> {
    pub fn object_name(&self, o: &O) -> Option<&str> {
        self.objects
            .iter()
            .find(|(_, v)| *v == o)
            .map(|(k, _)| k.as_str())
    }

    /// Names every endpoint of `cells`, `prefix0`, `prefix1`, … in order of
    /// first appearance.
    pub fn from_cells(prefix: &str, cells: Vec<(String, C)>, ends: impl Fn(&C) -> (O, O)) -> Self {
        let mut objects: Vec<O> = Vec::new();
        for (_, c) in &cells {
            let (s, t) = ends(c);
            for o in [s, t] {
                if !objects.contains(&o) {
                    objects.push(o);
                }
            }
        }
        Named {
            objects: objects
                .into_iter()
                .enumerate()
                .map(|(i, o)| (format!("{prefix}{i}"), o))
                .collect(),
            cells: cells.into_iter().collect(),
        }
    }
}

/// A parsed and validated instance file.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceFile {
    Rel(Named<FinSet, RelCell>),
    Span(Named<FinSet, SpanCell>),
    Prof(Named<FinCat, Profunctor>),
}

impl InstanceFile {
    pub fn instance(&self) -> Instance {
        match self {
            InstanceFile::Rel(_) => Instance::Rel,
            InstanceFile::Span(_) => Instance::Span,
            InstanceFile::Prof(_) => Instance::Prof,
        }
    }

    pub fn rel(cells: Vec<(String, RelCell)>) -> Self {
        InstanceFile::Rel(Named::from_cells("A", cells, |c| {
            (c.src.clone(), c.tgt.clone())
        }))
    }

    pub fn span(cells: Vec<(String, SpanCell)>) -> Self {
        InstanceFile::Span(Named::from_cells("A", cells, |c| {
            (c.src.clone(), c.tgt.clone())
        }))
    }

    pub fn prof(cells: Vec<(String, Profunctor)>) -> Self {
        InstanceFile::Prof(Named::from_cells("C", cells, |c| {
            (c.src.clone(), c.tgt.clone())
        }))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let syntax = |e: serde_json::Error| Error::Invalid {
            what: "instance file",
            detail: e.to_string(),
        };
        let header: Header = serde_json::from_str(text).map_err(syntax)?;
        let raw = match header.instance.as_str() {
            "rel" => {
                let f: SetsFile<RawRel> = serde_json::from_str(text).map_err(syntax)?;
                RawFile::Rel {
                    sets: f.sets,
                    cells: f.cells,
                }
            }
            "span" => {
                let f: SetsFile<RawSpan> = serde_json::from_str(text).map_err(syntax)?;
                RawFile::Span {
                    sets: f.sets,
                    cells: f.cells,
                }
            }
            "prof" => {
                let f: ProfFile = serde_json::from_str(text).map_err(syntax)?;
                RawFile::Prof {
                    categories: f.categories,
                    cells: f.cells,
                }
            }
            other => {
                return Err(at(
                    "instance",
                    format!("unknown instance {other:?}; expected rel, span or prof"),
                ))
            }
        };
        raw.resolve()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RawFile::from_model(self)).expect("instance files serialize")
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&RawFile::from_model(self)).expect("instance files serialize")
    }

    pub fn cell_names(&self) -> Vec<String> {
        match self {
            InstanceFile::Rel(n) => n.cells.keys().cloned().collect(),
            InstanceFile::Span(n) => n.cells.keys().cloned().collect(),
            InstanceFile::Prof(n) => n.cells.keys().cloned().collect(),
        }
    }
}

#[derive(Deserialize)]
struct Header {
    instance: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetsFile<C> {
    #[allow(dead_code)]
    instance: String,
    sets: BTreeMap<String, Vec<String>>,
    #[serde(default = "BTreeMap::new")]
    cells: BTreeMap<String, C>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfFile {
    #[allow(dead_code)]
    instance: String,
    categories: BTreeMap<String, RawCat>,
    #[serde(default)]
    cells: BTreeMap<String, RawProf>,
}

#[derive(Serialize)]
#[serde(tag = "instance", rename_all = "lowercase")]
enum RawFile {
    Rel {
        sets: BTreeMap<String, Vec<String>>,
        cells: BTreeMap<String, RawRel>,
    },
    Span {
        sets: BTreeMap<String, Vec<String>>,
        cells: BTreeMap<String, RawSpan>,
    },
    Prof {
        categories: BTreeMap<String, RawCat>,
        cells: BTreeMap<String, RawProf>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRel {
    src: String,
    tgt: String,
    pairs: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpan {
    src: String,
    tgt: String,
    apex: Vec<String>,
    leg_src: BTreeMap<String, String>,
    leg_tgt: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    label: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCat {
    objects: Vec<String>,
    morphisms: Vec<RawMorphism>,
    identities: BTreeMap<String, String>,
    comp: BTreeMap<String, String>,
}

type ActionTable = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProf {
    src: String,
    tgt: String,
    #[serde(default)]
    sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    lact: ActionTable,
    #[serde(default)]
    ract: ActionTable,
}

fn at(path: &str, detail: impl std::fmt::Display) -> Error {
    Error::Invalid {
        what: "instance file",
        detail: format!("{path}: {detail}"),
    }
}

fn finset(path: &str, labels: &[String]) -> Result<FinSet> {
    for l in labels {
        label::check_user_label(l).map_err(|e| at(path, e))?;
    }
    FinSet::new(labels.iter().cloned()).map_err(|e| at(path, e))
}

fn lookup<'a, O>(objects: &'a BTreeMap<String, O>, path: &str, name: &str) -> Result<&'a O> {
    objects
        .get(name)
        .ok_or_else(|| at(path, format!("unresolved reference to object {name:?}")))
}

fn element(set: &FinSet, path: &str, l: &str) -> Result<usize> {
    set.index_of(l)
        .ok_or_else(|| at(path, format!("unresolved reference to element {l:?}")))
}

fn split_key(path: &str, key: &str, parts: usize) -> Result<Vec<String>> {
    let v: Vec<String> = key.split(KEY_SEP).map(str::to_string).collect();
    if v.len() != parts {
        return Err(at(
            path,
            format!("key {key:?} should have {parts} parts separated by {KEY_SEP:?}"),
        ));
    }
    Ok(v)
}

fn key(parts: &[&str]) -> String {
    parts.join(&KEY_SEP.to_string())
}

fn sets_of(raw: &BTreeMap<String, Vec<String>>) -> Result<BTreeMap<String, FinSet>> {
    raw.iter()
        .map(|(n, ls)| Ok((n.clone(), finset(&format!("sets.{n}"), ls)?)))
        .collect()
}

impl RawFile {
    fn resolve(&self) -> Result<InstanceFile> {
        match self {
            RawFile::Rel { sets, cells } => {
                let objects = sets_of(sets)?;
                let mut out = BTreeMap::new();
                for (name, c) in cells {
                    let path = format!("cells.{name}");
                    let src = lookup(&objects, &format!("{path}.src"), &c.src)?;
                    let tgt = lookup(&objects, &format!("{path}.tgt"), &c.tgt)?;
                    let mut pairs = Vec::with_capacity(c.pairs.len());
                    for (i, [a, b]) in c.pairs.iter().enumerate() {
                        let p = format!("{path}.pairs[{i}]");
                        pairs.push((element(src, &p, a)?, element(tgt, &p, b)?));
                    }
                    out.insert(
                        name.clone(),
                        RelCell::new(src.clone(), tgt.clone(), pairs).map_err(|e| at(&path, e))?,
                    );
                }
                Ok(InstanceFile::Rel(Named {
                    objects,
                    cells: out,
                }))
            }
            RawFile::Span { sets, cells } => {
                let objects = sets_of(sets)?;
                let mut out = BTreeMap::new();
                for (name, c) in cells {
                    let path = format!("cells.{name}");
                    let src = lookup(&objects, &format!("{path}.src"), &c.src)?;
                    let tgt = lookup(&objects, &format!("{path}.tgt"), &c.tgt)?;
                    let apex = finset(&format!("{path}.apex"), &c.apex)?;
                    let leg = |field: &str,
                               map: &BTreeMap<String, String>,
                               end: &FinSet|
                     -> Result<Vec<usize>> {
                        let p = format!("{path}.{field}");
                        for x in map.keys() {
                            element(&apex, &p, x)?;
                        }
                        apex.labels()
                            .iter()
                            .map(|x| {
                                let y = map.get(x).ok_or_else(|| {
                                    at(&p, format!("no image for apex element {x:?}"))
                                })?;
                                element(end, &format!("{p}.{x}"), y)
                            })
                            .collect()
                    };
                    let ls = leg("leg_src", &c.leg_src, src)?;
                    let lt = leg("leg_tgt", &c.leg_tgt, tgt)?;
                    let cell = SpanCell::new(src.clone(), tgt.clone(), apex, ls, lt)
                        .map_err(|e| at(&path, e))?;
                    out.insert(name.clone(), cell);
                }
                Ok(InstanceFile::Span(Named {
                    objects,
                    cells: out,
                }))
            }
            RawFile::Prof { categories, cells } => {
                let mut objects = BTreeMap::new();
                for (name, c) in categories {
                    objects.insert(name.clone(), category(&format!("categories.{name}"), c)?);
                }
                let mut out = BTreeMap::new();
                for (name, c) in cells {
                    let path = format!("cells.{name}");
                    let src = lookup(&objects, &format!("{path}.src"), &c.src)?;
                    let tgt = lookup(&objects, &format!("{path}.tgt"), &c.tgt)?;
                    out.insert(name.clone(), profunctor(&path, src, tgt, c)?);
                }
                Ok(InstanceFile::Prof(Named {
                    objects,
                    cells: out,
                }))
            }
        }
    }

    fn from_model(model: &InstanceFile) -> Self {
        let raw_sets = |objects: &BTreeMap<String, FinSet>| {
            objects
                .iter()
                .map(|(n, s)| (n.clone(), s.labels().to_vec()))
                .collect()
        };
        match model {
            InstanceFile::Rel(n) => RawFile::Rel {
                sets: raw_sets(&n.objects),
                cells: n
                    .cells
                    .iter()
                    .map(|(name, c)| {
                        let pairs = c
                            .pairs()
                            .iter()
                            .map(|&(a, b)| [c.src.label(a).to_string(), c.tgt.label(b).to_string()])
                            .collect();
                        let raw = RawRel {
                            src: name_of(n, &c.src),
                            tgt: name_of(n, &c.tgt),
                            pairs,
                        };
                        (name.clone(), raw)
                    })
                    .collect(),
            },
            InstanceFile::Span(n) => RawFile::Span {
                sets: raw_sets(&n.objects),
                cells: n
                    .cells
                    .iter()
                    .map(|(name, c)| {
                        let leg = |legs: &[usize], end: &FinSet| {
                            legs.iter()
                                .enumerate()
                                .map(|(x, &y)| {
                                    (c.apex.label(x).to_string(), end.label(y).to_string())
                                })
                                .collect()
                        };
                        let raw = RawSpan {
                            src: name_of(n, &c.src),
                            tgt: name_of(n, &c.tgt),
                            apex: c.apex.labels().to_vec(),
                            leg_src: leg(&c.leg_src, &c.src),
                            leg_tgt: leg(&c.leg_tgt, &c.tgt),
                        };
                        (name.clone(), raw)
                    })
                    .collect(),
            },
            InstanceFile::Prof(n) => RawFile::Prof {
                categories: n
                    .objects
                    .iter()
                    .map(|(k, c)| (k.clone(), raw_category(c)))
                    .collect(),
                cells: n
                    .cells
                    .iter()
                    .map(|(name, p)| {
                        (
                            name.clone(),
                            raw_profunctor(&name_of(n, &p.src), &name_of(n, &p.tgt), p),
                        )
                    })
                    .collect(),
            },
        }
    }
}

fn name_of<O: PartialEq + Clone, C>(n: &Named<O, C>, o: &O) -> String {
    n.object_name(o)
        .expect("every endpoint is named")
        .to_string()
}

fn category(path: &str, c: &RawCat) -> Result<FinCat> {
    let mut comp = BTreeMap::new();
    for (k, h) in &c.comp {
        let parts = split_key(&format!("{path}.comp"), k, 2)?;
        comp.insert((parts[0].clone(), parts[1].clone()), h.clone());
    }
    FinCat::from_tables(
        c.objects.clone(),
        c.morphisms
            .iter()
            .map(|m| (m.label.clone(), m.src.clone(), m.tgt.clone()))
            .collect(),
        &c.identities,
        &comp,
    )
    .map_err(|e| at(path, e))
}

fn raw_category(c: &FinCat) -> RawCat {
    let obj = |i: usize| c.objects().label(i).to_string();
    let mor = |i: usize| c.morphism(i).label.clone();
    RawCat {
        objects: c.objects().labels().to_vec(),
        morphisms: c
            .morphisms()
            .iter()
            .map(|m| RawMorphism {
                label: m.label.clone(),
                src: obj(m.src),
                tgt: obj(m.tgt),
            })
            .collect(),
        identities: (0..c.num_objects())
            .map(|o| (obj(o), mor(c.identity(o))))
            .collect(),
        comp: c
            .comp_entries()
            .into_iter()
            .map(|((g, f), h)| (key(&[&mor(g), &mor(f)]), mor(h)))
            .collect(),
    }
}

fn profunctor(path: &str, src: &FinCat, tgt: &FinCat, c: &RawProf) -> Result<Profunctor> {
    let (na, nb) = (src.num_objects(), tgt.num_objects());
    let mut sets = vec![FinSet::empty(); na * nb];
    for (k, labels) in &c.sets {
        let p = format!("{path}.sets.{k}");
        let parts = split_key(&p, k, 2)?;
        let b = tgt
            .object_index(&parts[0])
            .ok_or_else(|| at(&p, format!("unresolved reference to object {:?}", parts[0])))?;
        let a = src
            .object_index(&parts[1])
            .ok_or_else(|| at(&p, format!("unresolved reference to object {:?}", parts[1])))?;
        sets[b * na + a] = finset(&p, labels)?;
    }
    let read = |field: &str,
                table: &ActionTable,
                cat: &FinCat,
                left: bool|
     -> Result<Vec<Vec<Vec<usize>>>> {
        let p = format!("{path}.{field}");
        let mut maps: BTreeMap<(usize, usize, usize), &BTreeMap<String, String>> = BTreeMap::new();
        for (k, m) in table {
            let kp = format!("{p}.{k}");
            let parts = split_key(&kp, k, 3)?;
            let f = cat.morphism_index(&parts[0]).ok_or_else(|| {
                at(
                    &kp,
                    format!("unresolved reference to morphism {:?}", parts[0]),
                )
            })?;
            let b = tgt.object_index(&parts[1]).ok_or_else(|| {
                at(
                    &kp,
                    format!("unresolved reference to object {:?}", parts[1]),
                )
            })?;
            let a = src.object_index(&parts[2]).ok_or_else(|| {
                at(
                    &kp,
                    format!("unresolved reference to object {:?}", parts[2]),
                )
            })?;
            let expected = if left {
                cat.tgt(f) == b
            } else {
                cat.src(f) == a
            };
            if !expected {
                return Err(at(
                    &kp,
                    "component is not in the domain of this morphism's action",
                ));
            }
            maps.insert((f, b, a), m);
        }
        let inner = if left { na } else { nb };
        let mut out = Vec::with_capacity(cat.num_morphisms());
        for f in 0..cat.num_morphisms() {
            let mut per = Vec::with_capacity(inner);
            for other in 0..inner {
                let (b, a, b1, a1) = if left {
                    (cat.tgt(f), other, cat.src(f), other)
                } else {
                    (other, cat.src(f), other, cat.tgt(f))
                };
                let (from, to) = (&sets[b * na + a], &sets[b1 * na + a1]);
                let kp = format!(
                    "{p}.{}",
                    key(&[
                        &cat.morphism(f).label,
                        tgt.objects().label(b),
                        src.objects().label(a)
                    ])
                );
                let m = match maps.get(&(f, b, a)) {
                    Some(m) => {
                        for x in m.keys() {
                            element(from, &kp, x)?;
                        }
                        from.labels()
                            .iter()
                            .map(|x| {
                                let y = m
                                    .get(x)
                                    .ok_or_else(|| at(&kp, format!("no image for {x:?}")))?;
                                element(to, &format!("{kp}.{x}"), y)
                            })
                            .collect::<Result<Vec<usize>>>()?
                    }
                    None if cat.is_identity(f) => (0..from.len()).collect(),
                    None if from.is_empty() => Vec::new(),
                    None => return Err(at(&kp, "missing action table")),
                };
                per.push(m);
            }
            out.push(per);
        }
        Ok(out)
    };
    let lact = read("lact", &c.lact, tgt, true)?;
    let ract = read("ract", &c.ract, src, false)?;
    Profunctor::new(src.clone(), tgt.clone(), sets, lact, ract).map_err(|e| at(path, e))
}

fn raw_profunctor(src_name: &str, tgt_name: &str, p: &Profunctor) -> RawProf {
    let (a_cat, b_cat) = (&p.src, &p.tgt);
    let (na, nb) = (a_cat.num_objects(), b_cat.num_objects());
    let ob = |b: usize| b_cat.objects().label(b);
    let oa = |a: usize| a_cat.objects().label(a);
    let mut sets = BTreeMap::new();
    for b in 0..nb {
        for a in 0..na {
            sets.insert(key(&[ob(b), oa(a)]), p.set(b, a).labels().to_vec());
        }
    }
    let table = |m: &[usize], from: &FinSet, to: &FinSet| -> BTreeMap<String, String> {
        m.iter()
            .enumerate()
            .map(|(x, &y)| (from.label(x).to_string(), to.label(y).to_string()))
            .collect()
    };
    let mut lact = BTreeMap::new();
    for beta in 0..b_cat.num_morphisms() {
        for a in 0..na {
            let (b, b0) = (b_cat.tgt(beta), b_cat.src(beta));
            if p.size(b, a) > 0 {
                lact.insert(
                    key(&[&b_cat.morphism(beta).label, ob(b), oa(a)]),
                    table(&p.lact[beta][a], p.set(b, a), p.set(b0, a)),
                );
            }
        }
    }
    let mut ract = BTreeMap::new();
    for alpha in 0..a_cat.num_morphisms() {
        for b in 0..nb {
            let (a, a1) = (a_cat.src(alpha), a_cat.tgt(alpha));
            if p.size(b, a) > 0 {
                ract.insert(
                    key(&[&a_cat.morphism(alpha).label, ob(b), oa(a)]),
                    table(&p.ract[alpha][b], p.set(b, a), p.set(b, a1)),
                );
            }
        }
    }
    RawProf {
        src: src_name.to_string(),
        tgt: tgt_name.to_string(),
        sets,
        lact,
        ract,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicat::Bicategory;
    use crate::prof::Prof;

    #[test]
    fn minimal_rel_file() {
        let text = r#"{"instance":"rel","sets":{"A":["0","1"]},
            "cells":{"D":{"src":"A","tgt":"A","pairs":[["0","0"],["1","1"]]}}}"#;
        let InstanceFile::Rel(n) = InstanceFile::parse(text).unwrap() else {
            panic!()
        };
        assert_eq!(n.cells["D"], RelCell::identity(&n.objects["A"]));
    }

    #[test]
    fn span_leg_to_missing_element() {
        let text = r#"{"instance":"span","sets":{"A":["0"]},
            "cells":{"S":{"src":"A","tgt":"A","apex":["x"],"leg_src":{"x":"0"},"leg_tgt":{"x":"9"}}}}"#;
        let err = InstanceFile::parse(text).unwrap_err().to_string();
        assert!(err.contains("unresolved reference"), "{err}");
        assert!(err.contains("cells.S.leg_tgt"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = InstanceFile::parse("{\"instance\":\"rel\",\n\"sets\":{\"A\":[1]}}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn corrupted_category_names_the_triple() {
        let mut comp = String::new();
        for g in 0..3 {
            for f in 0..3 {
                let h = if (g, f) == (1, 1) { 1 } else { (g + f) % 3 };
                comp.push_str(&format!("\"{g}|{f}\":\"{h}\","));
            }
        }
        comp.pop();
        let text = format!(
            r#"{{"instance":"prof","categories":{{"G":{{"objects":["*"],
            "morphisms":[{{"label":"0","src":"*","tgt":"*"}},{{"label":"1","src":"*","tgt":"*"}},{{"label":"2","src":"*","tgt":"*"}}],
            "identities":{{"*":"0"}},"comp":{{{comp}}}}}}}}}"#
        );
        let err = InstanceFile::parse(&text).unwrap_err().to_string();
        assert!(err.contains("associativity fails at (1, 1, 2)"), "{err}");
    }

    #[test]
    fn computed_cells_round_trip() {
        let b = Prof::default();
        let a = FinCat::walking_arrow();
        let cells = vec![
            ("ev".to_string(), b.ev(&a)),
            ("hom".to_string(), Profunctor::hom(&a)),
            (
                "lift".to_string(),
                b.lift(&Profunctor::hom(&a), &Profunctor::hom(&a))
                    .unwrap()
                    .cell,
            ),
        ];
        let file = InstanceFile::prof(cells);
        let back = InstanceFile::parse(&file.to_string_pretty()).unwrap();
        assert_eq!(back, file);
    }
}
