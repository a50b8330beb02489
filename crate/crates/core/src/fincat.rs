//! Finite categories as explicit tables, functors between them, and the
//! opposite and product constructions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::label;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category. Objects and morphisms are addressed by position;
/// `comp[g * m + f]` holds `g∘f` when `tgt(f) = src(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinCat {
    objects: FinSet,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    comp: Vec<Option<usize>>,
}

/// First violated category law found by [`validate_category`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryViolation {
    BadIdentity { object: String, morphism: String },
    MissingComposite { g: String, f: String },
    SpuriousComposite { g: String, f: String },
    CompositeEndpoints { g: String, f: String, h: String },
    LeftIdentity { f: String },
    RightIdentity { f: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::BadIdentity { object, morphism } => {
                write!(
                    out,
                    "identity {morphism} of {object} is not an endomorphism"
                )
            }
            CategoryViolation::MissingComposite { g, f } => {
                write!(out, "missing composite {g}∘{f}")
            }
            CategoryViolation::SpuriousComposite { g, f } => {
                write!(out, "composite {g}∘{f} given for non-composable pair")
            }
            CategoryViolation::CompositeEndpoints { g, f, h } => {
                write!(out, "composite {g}∘{f} = {h} has wrong endpoints")
            }
            CategoryViolation::LeftIdentity { f } => write!(out, "left identity law fails at {f}"),
            CategoryViolation::RightIdentity { f } => {
                write!(out, "right identity law fails at {f}")
            }
            CategoryViolation::Associativity { h, g, f } => {
                write!(out, "associativity fails at ({h}, {g}, {f})")
            }
        }
    }
}

impl FinCat {
    /// Assembles a category from label tables and validates it.
    ///
    /// `comp` maps `(g, f)` to the label of `g∘f`.
    pub fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: &BTreeMap<String, String>,
        comp: &BTreeMap<(String, String), String>,
    ) -> Result<FinCat> {
        let invalid = |detail: String| Error::Invalid {
            what: "category",
            detail,
        };
        for o in &objects {
            label::check_user_label(o)?;
        }
        let objects = FinSet::new(objects)?;
        let mut morph = Vec::with_capacity(morphisms.len());
        let mut mor_index = BTreeMap::new();
        for (l, s, t) in morphisms {
            label::check_user_label(&l)?;
            let src = objects
                .index_of(&s)
                .ok_or_else(|| invalid(format!("morphism {l}: unknown source object {s:?}")))?;
            let tgt = objects
                .index_of(&t)
                .ok_or_else(|| invalid(format!("morphism {l}: unknown target object {t:?}")))?;
            if mor_index.insert(l.clone(), morph.len()).is_some() {
                return Err(invalid(format!("duplicate morphism label {l:?}")));
            }
            morph.push(Morphism { label: l, src, tgt });
        }
        let mut ids = Vec::with_capacity(objects.len());
        for o in objects.labels() {
            let l = identities
                .get(o)
                .ok_or_else(|| invalid(format!("object {o:?} has no identity")))?;
            let i = *mor_index
                .get(l)
                .ok_or_else(|| invalid(format!("identity {l:?} is not a morphism")))?;
            ids.push(i);
        }
        for o in identities.keys() {
            if objects.index_of(o).is_none() {
                return Err(invalid(format!("identity given for unknown object {o:?}")));
            }
        }
        let m = morph.len();
        let mut table = vec![None; m * m];
        for ((g, f), h) in comp {
            let lookup = |x: &String| {
                mor_index
                    .get(x)
                    .copied()
                    .ok_or_else(|| invalid(format!("composite {g}|{f}: unknown morphism {x:?}")))
            };
            let (gi, fi, hi) = (lookup(g)?, lookup(f)?, lookup(h)?);
            table[gi * m + fi] = Some(hi);
        }
        let cat = FinCat {
            objects,
            morphisms: morph,
            identities: ids,
            comp: table,
        };
        validate_category(&cat).map_err(|v| invalid(v.to_string()))?;
        Ok(cat)
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, i: usize) -> &Morphism {
        &self.morphisms[i]
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.src(f)] == f
    }

    /// `g∘f`, or `None` if not composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    /// `g∘f` for a pair known to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "morphisms {} and {} are not composable",
                self.morphisms[g].label, self.morphisms[f].label
            )
        })
    }

    /// Morphisms `from → to`, in table order.
    pub fn hom(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.morphisms[f].src == from && self.morphisms[f].tgt == to)
            .collect()
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.index_of(label)
    }

    pub fn morphism_index(&self, label: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.label == label)
    }

    /// The composition table as label triples `((g, f), g∘f)`.
    pub fn comp_entries(&self) -> Vec<((usize, usize), usize)> {
        let m = self.morphisms.len();
        let mut out = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(h) = self.comp[g * m + f] {
                    out.push(((g, f), h));
                }
            }
        }
        out
    }

    /// The terminal category: one object `*`, one morphism `id`.
    pub fn terminal() -> FinCat {
        FinCat {
            objects: FinSet::unit(),
            morphisms: vec![Morphism {
                label: "id".into(),
                src: 0,
                tgt: 0,
            }],
            identities: vec![0],
            comp: vec![Some(0)],
        }
    }

    /// Discrete category on objects `0..n`; identities are `id0, id1, ...`.
    pub fn discrete(n: usize) -> FinCat {
        let morphisms = (0..n)
            .map(|i| Morphism {
                label: format!("id{i}"),
                src: i,
                tgt: i,
            })
            .collect();
        let mut comp = vec![None; n * n];
        for i in 0..n {
            comp[i * n + i] = Some(i);
        }
        FinCat {
            objects: FinSet::range(n),
            morphisms,
            identities: (0..n).collect(),
            comp,
        }
    }

    /// One-object category of a finite monoid. `table[g][f]` is `g·f` and
    /// element 0 must be the unit.
    pub fn from_monoid(labels: &[&str], table: &[Vec<usize>]) -> Result<FinCat> {
        let n = labels.len();
        let morphisms = labels
            .iter()
            .map(|l| Morphism {
                label: l.to_string(),
                src: 0,
                tgt: 0,
            })
            .collect();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[g * n + f] = Some(table[g][f]);
            }
        }
        let cat = FinCat {
            objects: FinSet::new(["*"])?,
            morphisms,
            identities: vec![0],
            comp,
        };
        validate_category(&cat).map_err(|v| Error::Invalid {
            what: "category",
            detail: v.to_string(),
        })?;
        Ok(cat)
    }

    /// Cyclic group `C_n` with elements `0..n` and addition mod n.
    pub fn cyclic_group(n: usize) -> FinCat {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|g| (0..n).map(|f| (g + f) % n).collect())
            .collect();
        FinCat::from_monoid(&refs, &table).expect("cyclic group table is lawful")
    }

    /// Symmetric group `S_3`; elements are one-line permutations, `012` first.
    pub fn symmetric_group_3() -> FinCat {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let labels: Vec<String> = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect())
            .collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|f| {
                        let gf = [g[f[0]], g[f[1]], g[f[2]]];
                        perms.iter().position(|p| *p == gf).unwrap()
                    })
                    .collect()
            })
            .collect();
        FinCat::from_monoid(&refs, &table).expect("S3 table is lawful")
    }

    /// Two objects `0`, `1` and one non-identity arrow `a: 0 → 1`.
    pub fn walking_arrow() -> FinCat {
        let morphisms = vec![
            Morphism {
                label: "id0".into(),
                src: 0,
                tgt: 0,
            },
            Morphism {
                label: "id1".into(),
                src: 1,
                tgt: 1,
            },
            Morphism {
                label: "a".into(),
                src: 0,
                tgt: 1,
            },
        ];
        let mut comp = vec![None; 9];
        comp[0] = Some(0); // id0∘id0
        comp[3 + 1] = Some(1); // id1∘id1
        comp[2 * 3] = Some(2); // a∘id0
        comp[3 + 2] = Some(2); // id1∘a
        FinCat {
            objects: FinSet::range(2),
            morphisms,
            identities: vec![0, 1],
            comp,
        }
    }

    /// Two objects joined by an inverse pair `u: 0 → 1`, `v: 1 → 0`.
    pub fn walking_iso() -> FinCat {
        // id0, id1, u, v
        let morphisms = vec![
            Morphism {
                label: "id0".into(),
                src: 0,
                tgt: 0,
            },
            Morphism {
                label: "id1".into(),
                src: 1,
                tgt: 1,
            },
            Morphism {
                label: "u".into(),
                src: 0,
                tgt: 1,
            },
            Morphism {
                label: "v".into(),
                src: 1,
                tgt: 0,
            },
        ];
        let mut comp = vec![None; 16];
        let mut set = |g: usize, f: usize, h: usize| comp[g * 4 + f] = Some(h);
        set(0, 0, 0);
        set(1, 1, 1);
        set(2, 0, 2);
        set(1, 2, 2);
        set(3, 1, 3);
        set(0, 3, 3);
        set(3, 2, 0);
        set(2, 3, 1);
        FinCat {
            objects: FinSet::range(2),
            morphisms,
            identities: vec![0, 1],
            comp,
        }
    }

    /// Span shape `1 ← 0 → 2` with arrows `l: 0 → 1` and `r: 0 → 2`.
    pub fn span_shape() -> FinCat {
        let morphisms = vec![
            Morphism {
                label: "id0".into(),
                src: 0,
                tgt: 0,
            },
            Morphism {
                label: "id1".into(),
                src: 1,
                tgt: 1,
            },
            Morphism {
                label: "id2".into(),
                src: 2,
                tgt: 2,
            },
            Morphism {
                label: "l".into(),
                src: 0,
                tgt: 1,
            },
            Morphism {
                label: "r".into(),
                src: 0,
                tgt: 2,
            },
        ];
        let n = 5;
        let mut comp = vec![None; n * n];
        for i in 0..3 {
            comp[i * n + i] = Some(i);
        }
        comp[3 * n] = Some(3);
        comp[n + 3] = Some(3);
        comp[4 * n] = Some(4);
        comp[2 * n + 4] = Some(4);
        FinCat {
            objects: FinSet::range(3),
            morphisms,
            identities: vec![0, 1, 2],
            comp,
        }
    }

    /// Opposite category: same labels, endpoints swapped, `g∘f := f∘g`.
    pub fn opposite(&self) -> FinCat {
        let m = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|x| Morphism {
                label: x.label.clone(),
                src: x.tgt,
                tgt: x.src,
            })
            .collect();
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                comp[g * m + f] = self.comp[f * m + g];
            }
        }
        FinCat {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            comp,
        }
    }

    /// Product category; object `(i, j)` sits at `i * |b.objects| + j`, and
    /// morphisms likewise.
    pub fn product(&self, other: &FinCat) -> FinCat {
        let (m1, m2) = (self.morphisms.len(), other.morphisms.len());
        let n2 = other.objects.len();
        let objects = self.objects.product(&other.objects);
        let mut morphisms = Vec::with_capacity(m1 * m2);
        for f in &self.morphisms {
            for g in &other.morphisms {
                morphisms.push(Morphism {
                    label: label::pair(&f.label, &g.label),
                    src: f.src * n2 + g.src,
                    tgt: f.tgt * n2 + g.tgt,
                });
            }
        }
        let mut identities = Vec::with_capacity(objects.len());
        for &i in &self.identities {
            for &j in &other.identities {
                identities.push(i * m2 + j);
            }
        }
        let m = m1 * m2;
        let mut comp = vec![None; m * m];
        for g1 in 0..m1 {
            for f1 in 0..m1 {
                let Some(h1) = self.compose(g1, f1) else {
                    continue;
                };
                for g2 in 0..m2 {
                    for f2 in 0..m2 {
                        if let Some(h2) = other.compose(g2, f2) {
                            comp[(g1 * m2 + g2) * m + (f1 * m2 + f2)] = Some(h1 * m2 + h2);
                        }
                    }
                }
            }
        }
        FinCat {
            objects,
            morphisms,
            identities,
            comp,
        }
    }
}

/// Scans the table for the first violated law.
pub fn validate_category(c: &FinCat) -> std::result::Result<(), CategoryViolation> {
    let m = c.morphisms.len();
    let name = |i: usize| c.morphisms[i].label.clone();
    for (o, &i) in c.identities.iter().enumerate() {
        if c.morphisms[i].src != o || c.morphisms[i].tgt != o {
            return Err(CategoryViolation::BadIdentity {
                object: c.objects.label(o).to_string(),
                morphism: name(i),
            });
        }
    }
    for g in 0..m {
        for f in 0..m {
            let composable = c.morphisms[f].tgt == c.morphisms[g].src;
            match (composable, c.comp[g * m + f]) {
                (true, None) => {
                    return Err(CategoryViolation::MissingComposite {
                        g: name(g),
                        f: name(f),
                    })
                }
                (false, Some(_)) => {
                    return Err(CategoryViolation::SpuriousComposite {
                        g: name(g),
                        f: name(f),
                    })
                }
                (true, Some(h)) => {
                    if c.morphisms[h].src != c.morphisms[f].src
                        || c.morphisms[h].tgt != c.morphisms[g].tgt
                    {
                        return Err(CategoryViolation::CompositeEndpoints {
                            g: name(g),
                            f: name(f),
                            h: name(h),
                        });
                    }
                }
                (false, None) => {}
            }
        }
    }
    for f in 0..m {
        let Morphism { src, tgt, .. } = c.morphisms[f];
        if c.comp[c.identities[tgt] * m + f] != Some(f) {
            return Err(CategoryViolation::LeftIdentity { f: name(f) });
        }
        if c.comp[f * m + c.identities[src]] != Some(f) {
            return Err(CategoryViolation::RightIdentity { f: name(f) });
        }
    }
    for h in 0..m {
        for g in 0..m {
            let Some(hg) = c.comp[h * m + g] else {
                continue;
            };
            for f in 0..m {
                let Some(gf) = c.comp[g * m + f] else {
                    continue;
                };
                if c.comp[h * m + gf] != c.comp[hg * m + f] {
                    return Err(CategoryViolation::Associativity {
                        h: name(h),
                        g: name(g),
                        f: name(f),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A functor between finite categories, given by positional maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl FinFunctor {
    pub fn identity(c: &FinCat) -> FinFunctor {
        FinFunctor {
            obj_map: (0..c.num_objects()).collect(),
            mor_map: (0..c.num_morphisms()).collect(),
        }
    }

    /// Checks endpoints, identities and composition by table scan.
    pub fn is_functor(&self, src: &FinCat, tgt: &FinCat) -> bool {
        if self.obj_map.len() != src.num_objects() || self.mor_map.len() != src.num_morphisms() {
            return false;
        }
        for (f, &ff) in self.mor_map.iter().enumerate() {
            if ff >= tgt.num_morphisms()
                || tgt.src(ff) != self.obj_map[src.src(f)]
                || tgt.tgt(ff) != self.obj_map[src.tgt(f)]
            {
                return false;
            }
        }
        for o in 0..src.num_objects() {
            if self.mor_map[src.identity(o)] != tgt.identity(self.obj_map[o]) {
                return false;
            }
        }
        for ((g, f), h) in src.comp_entries() {
            if tgt.compose(self.mor_map[g], self.mor_map[f]) != Some(self.mor_map[h]) {
                return false;
            }
        }
        true
    }

    /// Every functor `src → tgt`, by backtracking over morphism images.
    /// Refuses when more than `cap` partial assignments would be explored.
    pub fn enumerate(src: &FinCat, tgt: &FinCat, cap: u64) -> Result<Vec<FinFunctor>> {
        let mut out = Vec::new();
        let mut steps = 0u64;
        let n = src.num_objects();
        let mut obj_map = vec![0; n];
        enumerate_objects(src, tgt, 0, &mut obj_map, &mut out, &mut steps, cap)?;
        Ok(out)
    }
}

fn enumerate_objects(
    src: &FinCat,
    tgt: &FinCat,
    o: usize,
    obj_map: &mut Vec<usize>,
    out: &mut Vec<FinFunctor>,
    steps: &mut u64,
    cap: u64,
) -> Result<()> {
    if o == src.num_objects() {
        let mut mor_map = vec![usize::MAX; src.num_morphisms()];
        return enumerate_morphisms(src, tgt, 0, obj_map, &mut mor_map, out, steps, cap);
    }
    for t in 0..tgt.num_objects() {
        obj_map[o] = t;
        enumerate_objects(src, tgt, o + 1, obj_map, out, steps, cap)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn enumerate_morphisms(
    src: &FinCat,
    tgt: &FinCat,
    f: usize,
    obj_map: &[usize],
    mor_map: &mut Vec<usize>,
    out: &mut Vec<FinFunctor>,
    steps: &mut u64,
    cap: u64,
) -> Result<()> {
    *steps += 1;
    if *steps > cap {
        return Err(Error::budget(
            "functor enumeration",
            u128::from(*steps),
            cap,
        ));
    }
    if f == src.num_morphisms() {
        let candidate = FinFunctor {
            obj_map: obj_map.to_vec(),
            mor_map: mor_map.clone(),
        };
        if candidate.is_functor(src, tgt) {
            out.push(candidate);
        }
        return Ok(());
    }
    let (s, t) = (obj_map[src.src(f)], obj_map[src.tgt(f)]);
    let choices = if src.is_identity(f) {
        vec![tgt.identity(s)]
    } else {
        tgt.hom(s, t)
    };
    'next: for ff in choices {
        mor_map[f] = ff;
        // prune on composites whose three morphisms are already assigned
        for g in 0..=f {
            for h in 0..=f {
                for (x, y) in [(g, h), (h, g)] {
                    if let Some(xy) = src.compose(x, y) {
                        if xy <= f && tgt.compose(mor_map[x], mor_map[y]) != Some(mor_map[xy]) {
                            continue 'next;
                        }
                    }
                }
            }
        }
        enumerate_morphisms(src, tgt, f + 1, obj_map, mor_map, out, steps, cap)?;
    }
    mor_map[f] = usize::MAX;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    type Tables = (
        Vec<String>,
        Vec<(String, String, String)>,
        BTreeMap<String, String>,
        BTreeMap<(String, String), String>,
    );

    fn c3_tables() -> Tables {
        let objects = vec!["*".to_string()];
        let morphisms = (0..3)
            .map(|i| (i.to_string(), "*".into(), "*".into()))
            .collect();
        let identities = BTreeMap::from([("*".to_string(), "0".to_string())]);
        let mut comp = BTreeMap::new();
        for g in 0..3 {
            for f in 0..3 {
                comp.insert((g.to_string(), f.to_string()), ((g + f) % 3).to_string());
            }
        }
        (objects, morphisms, identities, comp)
    }

    #[test]
    fn builtins_validate() {
        for c in [
            FinCat::terminal(),
            FinCat::discrete(3),
            FinCat::cyclic_group(3),
            FinCat::symmetric_group_3(),
            FinCat::walking_arrow(),
            FinCat::walking_iso(),
            FinCat::span_shape(),
        ] {
            assert_eq!(validate_category(&c), Ok(()));
            assert_eq!(validate_category(&c.opposite()), Ok(()));
            assert_eq!(c.opposite().opposite(), c);
        }
    }

    #[test]
    fn c3_from_tables() {
        let (o, m, i, c) = c3_tables();
        let cat = FinCat::from_tables(o, m, &i, &c).unwrap();
        assert_eq!(cat, FinCat::cyclic_group(3));
    }

    #[test]
    fn corrupted_c3_reports_associativity() {
        let (o, m, i, mut c) = c3_tables();
        c.insert(("1".into(), "1".into()), "1".into());
        let cat = FinCat {
            objects: FinSet::unit(),
            morphisms: m
                .iter()
                .map(|(l, _, _)| Morphism {
                    label: l.clone(),
                    src: 0,
                    tgt: 0,
                })
                .collect(),
            identities: vec![0],
            comp: {
                let mut t = vec![None; 9];
                for ((g, f), h) in &c {
                    t[g.parse::<usize>().unwrap() * 3 + f.parse::<usize>().unwrap()] =
                        Some(h.parse().unwrap());
                }
                t
            },
        };
        // (1,1,1) is associative for any value of 1∘1; the first failing
        // triple in scan order is (1,1,2).
        assert_eq!(
            validate_category(&cat),
            Err(CategoryViolation::Associativity {
                h: "1".into(),
                g: "1".into(),
                f: "2".into()
            })
        );
        assert!(FinCat::from_tables(o, m, &i, &c).is_err());
    }

    #[test]
    fn c2_squared_is_klein_four() {
        let c2 = FinCat::cyclic_group(2);
        let k = c2.product(&c2);
        assert_eq!(k.num_objects(), 1);
        assert_eq!(k.num_morphisms(), 4);
        for x in 0..4 {
            assert_eq!(k.comp(x, x), k.identity(0));
            for y in 0..4 {
                assert_eq!(k.comp(x, y), k.comp(y, x));
            }
        }
        assert_eq!(validate_category(&k), Ok(()));
    }

    #[test]
    fn products() {
        let t = FinCat::terminal();
        let c3 = FinCat::cyclic_group(3);
        let p = t.product(&c3);
        assert_eq!((p.num_objects(), p.num_morphisms()), (1, 3));
        let d = FinCat::discrete(2).product(&FinCat::discrete(3));
        assert_eq!((d.num_objects(), d.num_morphisms()), (6, 6));
        assert_eq!(validate_category(&d), Ok(()));
    }

    #[test]
    fn opposite_of_arrow_reverses() {
        let a = FinCat::walking_arrow().opposite();
        let i = a.morphism_index("a").unwrap();
        assert_eq!((a.src(i), a.tgt(i)), (1, 0));
        assert_eq!(FinCat::cyclic_group(3).opposite(), FinCat::cyclic_group(3));
        assert_ne!(
            FinCat::symmetric_group_3().opposite(),
            FinCat::symmetric_group_3()
        );
    }

    #[test]
    fn functor_counts() {
        // endomorphisms of C3 as a group: x ↦ kx for k = 0, 1, 2
        let c3 = FinCat::cyclic_group(3);
        assert_eq!(FinFunctor::enumerate(&c3, &c3, 1_000_000).unwrap().len(), 3);
        // functors arrow → arrow: three (constant at 0, constant at 1, identity)
        let a = FinCat::walking_arrow();
        assert_eq!(FinFunctor::enumerate(&a, &a, 1_000_000).unwrap().len(), 3);
        // S3 → C2 homomorphisms: trivial and sign
        let s3 = FinCat::symmetric_group_3();
        let c2 = FinCat::cyclic_group(2);
        assert_eq!(FinFunctor::enumerate(&s3, &c2, 1_000_000).unwrap().len(), 2);
    }
}
