//! Set-valued profunctors between finite categories, composed by coends.
//!
//! A profunctor `P: A ⇸ B` has a component `P(b, a)` for every pair of
//! objects, stored at `b * |A| + a`. It is contravariant in `b` and
//! covariant in `a`: `lact[β][a]` maps `P(tgt β, a) → P(src β, a)` and
//! `ract[α][b]` maps `P(b, src α) → P(b, tgt α)`.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::bicat::{Bicategory, Concrete, Instance, IsoSearch, Lift};
use crate::equivariant::{Action, Problem, Search};
use crate::error::{Error, Limits, Result};
use crate::fincat::{FinCat, FinFunctor};
use crate::finset::FinSet;
use crate::label;
use crate::span::product_of_choices;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profunctor {
    pub src: FinCat,
    pub tgt: FinCat,
    pub sets: Vec<FinSet>,
    pub lact: Vec<Vec<Vec<usize>>>,
    pub ract: Vec<Vec<Vec<usize>>>,
}

fn invalid(detail: String) -> Error {
    Error::Invalid {
        what: "profunctor",
        detail,
    }
}

/// Position of each morphism inside its hom list.
fn hom_positions(c: &FinCat) -> Vec<usize> {
    let mut seen = vec![0usize; c.num_objects() * c.num_objects()];
    (0..c.num_morphisms())
        .map(|f| {
            let k = c.src(f) * c.num_objects() + c.tgt(f);
            seen[k] += 1;
            seen[k] - 1
        })
        .collect()
}

fn hom_set(c: &FinCat, from: usize, to: usize) -> FinSet {
    FinSet::from_distinct(
        c.hom(from, to)
            .into_iter()
            .map(|f| c.morphism(f).label.clone())
            .collect(),
    )
}

impl Profunctor {
    /// Validating constructor.
    pub fn new(
        src: FinCat,
        tgt: FinCat,
        sets: Vec<FinSet>,
        lact: Vec<Vec<Vec<usize>>>,
        ract: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let p = Profunctor {
            src,
            tgt,
            sets,
            lact,
            ract,
        };
        p.check().map_err(invalid)?;
        Ok(p)
    }

    /// Builds from closures; the result is not validated.
    pub(crate) fn tabulate(
        src: &FinCat,
        tgt: &FinCat,
        set: impl Fn(usize, usize) -> FinSet,
        lact: impl Fn(usize, usize, usize) -> usize,
        ract: impl Fn(usize, usize, usize) -> usize,
    ) -> Self {
        let (na, nb) = (src.num_objects(), tgt.num_objects());
        let mut sets = Vec::with_capacity(na * nb);
        for b in 0..nb {
            for a in 0..na {
                sets.push(set(b, a));
            }
        }
        let size = |b: usize, a: usize| sets[b * na + a].len();
        let lact = (0..tgt.num_morphisms())
            .map(|beta| {
                (0..na)
                    .map(|a| {
                        (0..size(tgt.tgt(beta), a))
                            .map(|x| lact(beta, a, x))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ract = (0..src.num_morphisms())
            .map(|alpha| {
                (0..nb)
                    .map(|b| {
                        (0..size(b, src.src(alpha)))
                            .map(|x| ract(alpha, b, x))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Profunctor {
            src: src.clone(),
            tgt: tgt.clone(),
            sets,
            lact,
            ract,
        }
    }

    pub fn index(&self, b: usize, a: usize) -> usize {
        b * self.src.num_objects() + a
    }

    pub fn set(&self, b: usize, a: usize) -> &FinSet {
        &self.sets[self.index(b, a)]
    }

    pub fn size(&self, b: usize, a: usize) -> usize {
        self.set(b, a).len()
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// Total number of elements over all components.
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(FinSet::len).sum()
    }

    /// First violated profunctor law, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (a_cat, b_cat) = (&self.src, &self.tgt);
        let (na, nb) = (a_cat.num_objects(), b_cat.num_objects());
        let mor = |c: &FinCat, f: usize| c.morphism(f).label.clone();
        if self.sets.len() != na * nb {
            return Err(format!(
                "{} components for {}×{} objects",
                self.sets.len(),
                nb,
                na
            ));
        }
        if self.lact.len() != b_cat.num_morphisms() || self.ract.len() != a_cat.num_morphisms() {
            return Err("one action table per morphism expected".into());
        }
        for beta in 0..b_cat.num_morphisms() {
            if self.lact[beta].len() != na {
                return Err(format!(
                    "left action of {} has the wrong shape",
                    mor(b_cat, beta)
                ));
            }
            for a in 0..na {
                let m = &self.lact[beta][a];
                let (from, to) = (self.size(b_cat.tgt(beta), a), self.size(b_cat.src(beta), a));
                if m.len() != from || m.iter().any(|&y| y >= to) {
                    return Err(format!(
                        "left action of {} at {} is not a map",
                        mor(b_cat, beta),
                        a_cat.objects().label(a)
                    ));
                }
            }
        }
        for alpha in 0..a_cat.num_morphisms() {
            if self.ract[alpha].len() != nb {
                return Err(format!(
                    "right action of {} has the wrong shape",
                    mor(a_cat, alpha)
                ));
            }
            for b in 0..nb {
                let m = &self.ract[alpha][b];
                let (from, to) = (
                    self.size(b, a_cat.src(alpha)),
                    self.size(b, a_cat.tgt(alpha)),
                );
                if m.len() != from || m.iter().any(|&y| y >= to) {
                    return Err(format!(
                        "right action of {} at {} is not a map",
                        mor(a_cat, alpha),
                        b_cat.objects().label(b)
                    ));
                }
            }
        }
        for o in 0..nb {
            let id = b_cat.identity(o);
            for a in 0..na {
                if self.lact[id][a].iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(format!(
                        "left action of identity {} is not the identity",
                        mor(b_cat, id)
                    ));
                }
            }
        }
        for o in 0..na {
            let id = a_cat.identity(o);
            for b in 0..nb {
                if self.ract[id][b].iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(format!(
                        "right action of identity {} is not the identity",
                        mor(a_cat, id)
                    ));
                }
            }
        }
        for ((g, f), gf) in b_cat.comp_entries() {
            for a in 0..na {
                for x in 0..self.size(b_cat.tgt(g), a) {
                    if self.lact[gf][a][x] != self.lact[f][a][self.lact[g][a][x]] {
                        return Err(format!(
                            "left action fails functoriality at ({}, {})",
                            mor(b_cat, g),
                            mor(b_cat, f)
                        ));
                    }
                }
            }
        }
        for ((g, f), gf) in a_cat.comp_entries() {
            for b in 0..nb {
                for x in 0..self.size(b, a_cat.src(f)) {
                    if self.ract[gf][b][x] != self.ract[g][b][self.ract[f][b][x]] {
                        return Err(format!(
                            "right action fails functoriality at ({}, {})",
                            mor(a_cat, g),
                            mor(a_cat, f)
                        ));
                    }
                }
            }
        }
        for beta in 0..b_cat.num_morphisms() {
            let (b1, b) = (b_cat.src(beta), b_cat.tgt(beta));
            for alpha in 0..a_cat.num_morphisms() {
                let (a, a1) = (a_cat.src(alpha), a_cat.tgt(alpha));
                for x in 0..self.size(b, a) {
                    let one = self.ract[alpha][b1][self.lact[beta][a][x]];
                    let two = self.lact[beta][a1][self.ract[alpha][b][x]];
                    if one != two {
                        return Err(format!(
                            "actions of {} and {} do not commute",
                            mor(b_cat, beta),
                            mor(a_cat, alpha)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Hom(b, a)` with composition as both actions.
    pub fn hom(c: &FinCat) -> Self {
        let pos = hom_positions(c);
        Profunctor::tabulate(
            c,
            c,
            |b, a| hom_set(c, b, a),
            |beta, a, x| pos[c.comp(c.hom(c.tgt(beta), a)[x], beta)],
            |alpha, b, x| pos[c.comp(alpha, c.hom(b, c.src(alpha))[x])],
        )
    }

    /// `B(b, F a)` for `F: A → B`, as a profunctor `A ⇸ B`.
    pub fn companion(functor: &FinFunctor, a_cat: &FinCat, b_cat: &FinCat) -> Self {
        let pos = hom_positions(b_cat);
        let f = functor;
        Profunctor::tabulate(
            a_cat,
            b_cat,
            |b, a| hom_set(b_cat, b, f.obj_map[a]),
            |beta, a, x| pos[b_cat.comp(b_cat.hom(b_cat.tgt(beta), f.obj_map[a])[x], beta)],
            |alpha, b, x| {
                let h = b_cat.hom(b, f.obj_map[a_cat.src(alpha)])[x];
                pos[b_cat.comp(f.mor_map[alpha], h)]
            },
        )
    }

    /// `B(F a, b)` for `F: A → B`, as a profunctor `B ⇸ A`.
    pub fn conjoint(functor: &FinFunctor, a_cat: &FinCat, b_cat: &FinCat) -> Self {
        let pos = hom_positions(b_cat);
        let f = functor;
        Profunctor::tabulate(
            b_cat,
            a_cat,
            |a, b| hom_set(b_cat, f.obj_map[a], b),
            |alpha, b, x| {
                let h = b_cat.hom(f.obj_map[a_cat.tgt(alpha)], b)[x];
                pos[b_cat.comp(h, f.mor_map[alpha])]
            },
            |beta, a, x| pos[b_cat.comp(beta, b_cat.hom(f.obj_map[a], b_cat.src(beta))[x])],
        )
    }

    /// The same set in every component with trivial actions.
    pub fn constant(src: &FinCat, tgt: &FinCat, set: &FinSet) -> Self {
        Profunctor::tabulate(src, tgt, |_, _| set.clone(), |_, _, x| x, |_, _, x| x)
    }

    pub fn empty(src: &FinCat, tgt: &FinCat) -> Self {
        Profunctor::constant(src, tgt, &FinSet::empty())
    }

    /// A plain finite set as a profunctor between terminal categories.
    pub fn scalar(set: FinSet) -> Self {
        let t = FinCat::terminal();
        Profunctor::constant(&t, &t, &set)
    }

    /// Componentwise disjoint union.
    pub fn sum(&self, other: &Profunctor) -> Result<Self> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::EndpointMismatch("sum of profunctors".into()));
        }
        Ok(Profunctor::tabulate(
            &self.src,
            &self.tgt,
            |b, a| self.set(b, a).sum(other.set(b, a)),
            |beta, a, x| {
                let (l1, l0) = (
                    self.size(self.tgt.tgt(beta), a),
                    self.size(self.tgt.src(beta), a),
                );
                if x < l1 {
                    self.lact[beta][a][x]
                } else {
                    l0 + other.lact[beta][a][x - l1]
                }
            },
            |alpha, b, x| {
                let (l1, l0) = (
                    self.size(b, self.src.src(alpha)),
                    self.size(b, self.src.tgt(alpha)),
                );
                if x < l1 {
                    self.ract[alpha][b][x]
                } else {
                    l0 + other.ract[alpha][b][x - l1]
                }
            },
        ))
    }

    /// `P*: B^op ⇸ A^op` with `P*(a, b) = P(b, a)`.
    pub fn transpose(&self) -> Self {
        let (na, nb) = (self.src.num_objects(), self.tgt.num_objects());
        let mut sets = Vec::with_capacity(na * nb);
        for a in 0..na {
            for b in 0..nb {
                sets.push(self.set(b, a).clone());
            }
        }
        Profunctor {
            src: self.tgt.opposite(),
            tgt: self.src.opposite(),
            sets,
            lact: self.ract.clone(),
            ract: self.lact.clone(),
        }
    }

    /// Componentwise product `P⊗Q: A×C ⇸ B×D`.
    pub fn tensor(&self, other: &Profunctor) -> Self {
        let (nc, nd) = (other.src.num_objects(), other.tgt.num_objects());
        let (mc, md) = (other.src.num_morphisms(), other.tgt.num_morphisms());
        let src = self.src.product(&other.src);
        let tgt = self.tgt.product(&other.tgt);
        Profunctor::tabulate(
            &src,
            &tgt,
            |bd, ac| {
                self.set(bd / nd, ac / nc)
                    .product(other.set(bd % nd, ac % nc))
            },
            |bd_mor, ac, x| {
                let (beta, delta) = (bd_mor / md, bd_mor % md);
                let (a, c) = (ac / nc, ac % nc);
                let w = other.size(other.tgt.tgt(delta), c);
                let w0 = other.size(other.tgt.src(delta), c);
                self.lact[beta][a][x / w] * w0 + other.lact[delta][c][x % w]
            },
            |ac_mor, bd, x| {
                let (alpha, gamma) = (ac_mor / mc, ac_mor % mc);
                let (b, d) = (bd / nd, bd % nd);
                let w = other.size(d, other.src.src(gamma));
                let w0 = other.size(d, other.src.tgt(gamma));
                self.ract[alpha][b][x / w] * w0 + other.ract[gamma][d][x % w]
            },
        )
    }
}

/// A finite set presented as a quotient of raw elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSet {
    /// One label per class, taken from the class representative.
    pub carrier: FinSet,
    /// Class index of each raw element.
    pub class_of: Vec<usize>,
    /// Representative raw element of each class: its least raw index.
    pub reps: Vec<usize>,
}

impl QuotientSet {
    /// Classes of the equivalence generated by `pairs`, ordered by least
    /// member. `labels` gives the unqualified and qualified label of each
    /// raw element; qualified labels are used when the plain ones collide.
    fn build(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        labels: impl Fn(usize) -> (String, String),
    ) -> Self {
        let mut uf = UnionFind::<usize>::new(n);
        for (x, y) in pairs {
            uf.union(x, y);
        }
        let mut class_of_root = HashMap::new();
        let mut reps = Vec::new();
        let class_of: Vec<usize> = (0..n)
            .map(|x| {
                *class_of_root.entry(uf.find_mut(x)).or_insert_with(|| {
                    reps.push(x);
                    reps.len() - 1
                })
            })
            .collect();
        let pairs: Vec<(String, String)> = reps.iter().map(|&r| labels(r)).collect();
        let plain: Vec<String> = pairs.iter().map(|(p, _)| p.clone()).collect();
        let carrier = match FinSet::new(plain) {
            Ok(s) => s,
            Err(_) => FinSet::from_distinct(pairs.into_iter().map(|(_, q)| q).collect()),
        };
        QuotientSet {
            carrier,
            class_of,
            reps,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

struct Part {
    /// Raw elements `(b, y, x)`: `y` in the second factor, `x` in the first.
    raws: Vec<(usize, usize, usize)>,
    offsets: Vec<usize>,
    widths: Vec<usize>,
    quotient: QuotientSet,
}

/// A composite `compose(p, q)` together with the data identifying each of
/// its elements as a class of pairs.
pub struct Composite {
    pub cell: Profunctor,
    parts: Vec<Part>,
}

impl Composite {
    /// Class of the pair `(y, x)` with `y ∈ q(c, b)` and `x ∈ p(b, a)`.
    pub fn class(&self, c: usize, a: usize, b: usize, y: usize, x: usize) -> usize {
        let part = &self.parts[self.cell.index(c, a)];
        part.quotient.class_of[part.offsets[b] + y * part.widths[b] + x]
    }

    /// Representative pair `(b, y, x)` of element `e` of component `(c, a)`.
    pub fn rep(&self, c: usize, a: usize, e: usize) -> (usize, usize, usize) {
        let part = &self.parts[self.cell.index(c, a)];
        part.raws[part.quotient.reps[e]]
    }

    pub fn quotient(&self, c: usize, a: usize) -> &QuotientSet {
        &self.parts[self.cell.index(c, a)].quotient
    }
}

/// `compose(p, q) = q∘p` for `p: A ⇸ B`, `q: B ⇸ C`, with its witness.
pub fn prof_compose_witness(p: &Profunctor, q: &Profunctor) -> Result<Composite> {
    if p.tgt != q.src {
        return Err(Error::EndpointMismatch("profunctor composite".into()));
    }
    let (a_cat, b_cat, c_cat) = (&p.src, &p.tgt, &q.tgt);
    let (na, nb, nc) = (
        a_cat.num_objects(),
        b_cat.num_objects(),
        c_cat.num_objects(),
    );
    let mut parts = Vec::with_capacity(na * nc);
    for c in 0..nc {
        for a in 0..na {
            let widths: Vec<usize> = (0..nb).map(|b| p.size(b, a)).collect();
            let mut offsets = Vec::with_capacity(nb);
            let mut raws = Vec::new();
            for (b, &w) in widths.iter().enumerate() {
                offsets.push(raws.len());
                for y in 0..q.size(c, b) {
                    for x in 0..w {
                        raws.push((b, y, x));
                    }
                }
            }
            let raw = |b: usize, y: usize, x: usize| offsets[b] + y * widths[b] + x;
            let mut pairs = Vec::new();
            for beta in 0..b_cat.num_morphisms() {
                if b_cat.is_identity(beta) {
                    continue;
                }
                let (b0, b1) = (b_cat.src(beta), b_cat.tgt(beta));
                for y in 0..q.size(c, b0) {
                    let moved = q.ract[beta][c][y];
                    for x in 0..p.size(b1, a) {
                        pairs.push((raw(b1, moved, x), raw(b0, y, p.lact[beta][a][x])));
                    }
                }
            }
            let quotient = QuotientSet::build(raws.len(), pairs, |r| {
                let (b, y, x) = raws[r];
                let plain = label::pair(p.set(b, a).label(x), q.set(c, b).label(y));
                let qualified = label::pair(
                    &label::pair(p.set(b, a).label(x), b_cat.objects().label(b)),
                    q.set(c, b).label(y),
                );
                (plain, qualified)
            });
            parts.push(Part {
                raws,
                offsets,
                widths,
                quotient,
            });
        }
    }
    let class = |c: usize, a: usize, b: usize, y: usize, x: usize| {
        let part = &parts[c * na + a];
        part.quotient.class_of[part.offsets[b] + y * part.widths[b] + x]
    };
    let cell = Profunctor::tabulate(
        a_cat,
        c_cat,
        |c, a| parts[c * na + a].quotient.carrier.clone(),
        |gamma, a, e| {
            let c = c_cat.tgt(gamma);
            let part = &parts[c * na + a];
            let (b, y, x) = part.raws[part.quotient.reps[e]];
            class(c_cat.src(gamma), a, b, q.lact[gamma][b][y], x)
        },
        |alpha, c, e| {
            let a = a_cat.src(alpha);
            let part = &parts[c * na + a];
            let (b, y, x) = part.raws[part.quotient.reps[e]];
            class(c, a_cat.tgt(alpha), b, y, p.ract[alpha][b][x])
        },
    );
    Ok(Composite { cell, parts })
}

pub fn prof_compose(p: &Profunctor, q: &Profunctor) -> Result<Profunctor> {
    Ok(prof_compose_witness(p, q)?.cell)
}

/// A natural transformation, one map per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProfTwoCell {
    pub src_cell: Arc<Profunctor>,
    pub tgt_cell: Arc<Profunctor>,
    pub maps: Vec<Vec<usize>>,
}

impl ProfTwoCell {
    pub fn new(src: Profunctor, tgt: Profunctor, maps: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_arcs(Arc::new(src), Arc::new(tgt), maps)
    }

    pub fn from_arcs(
        src: Arc<Profunctor>,
        tgt: Arc<Profunctor>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let t = ProfTwoCell {
            src_cell: src,
            tgt_cell: tgt,
            maps,
        };
        t.check().map_err(|detail| Error::Invalid {
            what: "natural transformation",
            detail,
        })?;
        Ok(t)
    }

    /// First violated condition, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (p, q) = (&*self.src_cell, &*self.tgt_cell);
        if p.src != q.src || p.tgt != q.tgt {
            return Err("profunctors with different endpoints".into());
        }
        if self.maps.len() != p.sets.len() {
            return Err("one map per component expected".into());
        }
        for (k, m) in self.maps.iter().enumerate() {
            if m.len() != p.sets[k].len() || m.iter().any(|&y| y >= q.sets[k].len()) {
                return Err(format!("component {k} is not a map"));
            }
        }
        let (na, nb) = (p.src.num_objects(), p.tgt.num_objects());
        for beta in 0..p.tgt.num_morphisms() {
            let (b0, b1) = (p.tgt.src(beta), p.tgt.tgt(beta));
            for a in 0..na {
                for x in 0..p.size(b1, a) {
                    if self.maps[p.index(b0, a)][p.lact[beta][a][x]]
                        != q.lact[beta][a][self.maps[p.index(b1, a)][x]]
                    {
                        return Err(format!("not natural at {}", p.tgt.morphism(beta).label));
                    }
                }
            }
        }
        for alpha in 0..p.src.num_morphisms() {
            let (a0, a1) = (p.src.src(alpha), p.src.tgt(alpha));
            for b in 0..nb {
                for x in 0..p.size(b, a0) {
                    if self.maps[p.index(b, a1)][p.ract[alpha][b][x]]
                        != q.ract[alpha][b][self.maps[p.index(b, a0)][x]]
                    {
                        return Err(format!("not natural at {}", p.src.morphism(alpha).label));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The naturality problem for maps `p ⇒ q`.
fn naturality_problem(p: &Profunctor, q: &Profunctor) -> Problem {
    let (na, nb) = (p.src.num_objects(), p.tgt.num_objects());
    let mut actions = Vec::new();
    for beta in 0..p.tgt.num_morphisms() {
        if p.tgt.is_identity(beta) {
            continue;
        }
        for a in 0..na {
            actions.push(Action {
                from: p.index(p.tgt.tgt(beta), a),
                to: p.index(p.tgt.src(beta), a),
                dom: p.lact[beta][a].clone(),
                cod: q.lact[beta][a].clone(),
            });
        }
    }
    for alpha in 0..p.src.num_morphisms() {
        if p.src.is_identity(alpha) {
            continue;
        }
        for b in 0..nb {
            actions.push(Action {
                from: p.index(b, p.src.src(alpha)),
                to: p.index(b, p.src.tgt(alpha)),
                dom: p.ract[alpha][b].clone(),
                cod: q.ract[alpha][b].clone(),
            });
        }
    }
    Problem {
        dom: p.sets.iter().map(FinSet::len).collect(),
        cod: q.sets.iter().map(FinSet::len).collect(),
        actions,
    }
}

/// Every natural transformation `p ⇒ q`, in lexicographic order.
pub fn prof_two_cells(p: &Profunctor, q: &Profunctor, cap: u64) -> Result<Vec<ProfTwoCell>> {
    if p.src != q.src || p.tgt != q.tgt {
        return Err(Error::EndpointMismatch("natural transformations".into()));
    }
    let problem = naturality_problem(p, q);
    let (pa, qa) = (Arc::new(p.clone()), Arc::new(q.clone()));
    Ok(Search::new(&problem, "profunctor 2-cells", cap)
        .run()?
        .into_iter()
        .map(|maps| ProfTwoCell {
            src_cell: pa.clone(),
            tgt_cell: qa.clone(),
            maps,
        })
        .collect())
}

/// Families `(x_A ∈ P(A, A))` compatible along every morphism, as index
/// tuples in lexicographic order.
pub fn end_families(p: &Profunctor, cap: u64) -> Result<Vec<Vec<usize>>> {
    if !p.is_endo() {
        return Err(Error::NotEndo("end of a profunctor".into()));
    }
    let c = &p.src;
    let n = c.num_objects();
    // morphisms grouped by their later endpoint so each is checked once
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in 0..c.num_morphisms() {
        if !c.is_identity(m) {
            checks[c.src(m).max(c.tgt(m))].push(m);
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut steps = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &Profunctor,
        checks: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        steps: &mut u64,
        cap: u64,
    ) -> Result<()> {
        let c = &p.src;
        let o = current.len();
        if o == c.num_objects() {
            out.push(current.clone());
            return Ok(());
        }
        for x in 0..p.size(o, o) {
            *steps += 1;
            if *steps > cap {
                return Err(Error::budget(
                    "end of a profunctor",
                    u128::from(*steps),
                    cap,
                ));
            }
            current.push(x);
            let ok = checks[o].iter().all(|&m| {
                let (a, a1) = (c.src(m), c.tgt(m));
                p.ract[m][a][current[a]] == p.lact[m][a1][current[a1]]
            });
            if ok {
                go(p, checks, current, out, steps, cap)?;
            }
            current.pop();
        }
        Ok(())
    }
    go(p, &checks, &mut current, &mut out, &mut steps, cap)?;
    Ok(out)
}

fn end_label(p: &Profunctor, family: &[usize]) -> String {
    label::graph(
        family
            .iter()
            .enumerate()
            .map(|(o, &x)| (p.src.objects().label(o), p.set(o, o).label(x))),
    )
}

/// The end of the diagonal as a set of compatible families.
pub fn end_diag(p: &Profunctor, cap: u64) -> Result<FinSet> {
    let families = end_families(p, cap)?;
    Ok(FinSet::from_distinct(
        families.iter().map(|f| end_label(p, f)).collect(),
    ))
}

/// The coend of the diagonal: `⊔_A P(A, A)` modulo `ract(m)(z) ∼ lact(m)(z)`.
/// Raw elements are `(A, z)` listed by object, then element.
pub fn coend_diag(p: &Profunctor) -> Result<QuotientSet> {
    if !p.is_endo() {
        return Err(Error::NotEndo("coend of a profunctor".into()));
    }
    let c = &p.src;
    let n = c.num_objects();
    let mut offsets = Vec::with_capacity(n);
    let mut raws = Vec::new();
    for o in 0..n {
        offsets.push(raws.len());
        raws.extend((0..p.size(o, o)).map(|z| (o, z)));
    }
    let mut pairs = Vec::new();
    for m in 0..c.num_morphisms() {
        if c.is_identity(m) {
            continue;
        }
        let (a, a1) = (c.src(m), c.tgt(m));
        for z in 0..p.size(a1, a) {
            pairs.push((offsets[a1] + p.ract[m][a1][z], offsets[a] + p.lact[m][a][z]));
        }
    }
    Ok(QuotientSet::build(raws.len(), pairs, |r| {
        let (o, z) = raws[r];
        let l = p.set(o, o).label(z).to_string();
        (l.clone(), label::pair(c.objects().label(o), &l))
    }))
}

fn coend_offsets(p: &Profunctor) -> Vec<usize> {
    let mut acc = 0;
    (0..p.src.num_objects())
        .map(|o| {
            let start = acc;
            acc += p.size(o, o);
            start
        })
        .collect()
}

/// Splits a raw coend index into `(object, element)`.
fn locate(offsets: &[usize], raw: usize) -> (usize, usize) {
    let o = offsets
        .iter()
        .rposition(|&s| s <= raw)
        .expect("offsets start at zero");
    (o, raw - offsets[o])
}

/// Elements of one lift component as flattened families over `C`.
struct LiftData {
    cell: Profunctor,
    /// `families[k][t]`: element `t` of component `k`, images of `P(c, b)`
    /// concatenated over `c`.
    families: Vec<Vec<Vec<usize>>>,
    /// `offsets[b][c]`: start of `P(c, b)` inside a family over `b`.
    offsets: Vec<Vec<usize>>,
}

fn family_label(
    p: &Profunctor,
    q: &Profunctor,
    b: usize,
    a: usize,
    family: &[usize],
    offsets: &[usize],
) -> String {
    let c_cat = &p.tgt;
    let single = c_cat.num_objects() == 1;
    let mut entries = Vec::new();
    for c in 0..c_cat.num_objects() {
        for x in 0..p.size(c, b) {
            let key = if single {
                p.set(c, b).label(x).to_string()
            } else {
                label::pair(c_cat.objects().label(c), p.set(c, b).label(x))
            };
            entries.push((key, q.set(c, a).label(family[offsets[c] + x]).to_string()));
        }
    }
    label::graph(entries.iter().map(|(k, v)| (k.as_str(), v.as_str())))
}

/// Right lift `p⊸q: A ⇸ B` of `q: A ⇸ C` through `p: B ⇸ C`.
fn lift_data(p: &Profunctor, q: &Profunctor, cap: u64) -> Result<LiftData> {
    if p.tgt != q.tgt {
        return Err(Error::EndpointMismatch("profunctor lift".into()));
    }
    let (a_cat, b_cat, c_cat) = (&q.src, &p.src, &p.tgt);
    let (na, nb) = (a_cat.num_objects(), b_cat.num_objects());
    let offsets: Vec<Vec<usize>> = (0..nb)
        .map(|b| {
            let mut acc = 0;
            (0..c_cat.num_objects())
                .map(|c| {
                    let s = acc;
                    acc += p.size(c, b);
                    s
                })
                .collect()
        })
        .collect();
    let mut families = Vec::with_capacity(na * nb);
    let mut total = 0u64;
    for b in 0..nb {
        for a in 0..na {
            let mut problem = Problem {
                dom: (0..c_cat.num_objects()).map(|c| p.size(c, b)).collect(),
                cod: (0..c_cat.num_objects()).map(|c| q.size(c, a)).collect(),
                actions: Vec::new(),
            };
            for gamma in 0..c_cat.num_morphisms() {
                if c_cat.is_identity(gamma) {
                    continue;
                }
                problem.actions.push(Action {
                    from: c_cat.tgt(gamma),
                    to: c_cat.src(gamma),
                    dom: p.lact[gamma][b].clone(),
                    cod: q.lact[gamma][a].clone(),
                });
            }
            let found: Vec<Vec<usize>> = Search::new(&problem, "profunctor lift", cap)
                .run()?
                .into_iter()
                .map(|f| f.concat())
                .collect();
            total += found.len() as u64;
            if total > cap {
                return Err(Error::budget("profunctor lift", u128::from(total), cap));
            }
            families.push(found);
        }
    }
    let lookup: Vec<HashMap<&[usize], usize>> = families
        .iter()
        .map(|fs| {
            fs.iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect()
        })
        .collect();
    let cell = Profunctor::tabulate(
        a_cat,
        b_cat,
        |b, a| {
            FinSet::from_distinct(
                families[b * na + a]
                    .iter()
                    .map(|f| family_label(p, q, b, a, f, &offsets[b]))
                    .collect(),
            )
        },
        |beta, a, t| {
            let (b0, b1) = (b_cat.src(beta), b_cat.tgt(beta));
            let phi = &families[b1 * na + a][t];
            let mut moved = Vec::with_capacity(offsets[b0].len());
            for c in 0..c_cat.num_objects() {
                for x in 0..p.size(c, b0) {
                    moved.push(phi[offsets[b1][c] + p.ract[beta][c][x]]);
                }
            }
            lookup[b0 * na + a][moved.as_slice()]
        },
        |alpha, b, t| {
            let (a0, a1) = (a_cat.src(alpha), a_cat.tgt(alpha));
            let phi = &families[b * na + a0][t];
            let mut moved = Vec::with_capacity(phi.len());
            for c in 0..c_cat.num_objects() {
                for x in 0..p.size(c, b) {
                    moved.push(q.ract[alpha][c][phi[offsets[b][c] + x]]);
                }
            }
            lookup[b * na + a1][moved.as_slice()]
        },
    );
    Ok(LiftData {
        cell,
        families,
        offsets,
    })
}

pub fn prof_lift(p: &Profunctor, q: &Profunctor, cap: u64) -> Result<Profunctor> {
    Ok(lift_data(p, q, cap)?.cell)
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// The index-preserving functor between two categories with the same shape.
fn reindex(c: &FinCat) -> FinFunctor {
    FinFunctor::identity(c)
}

/// Horizontal composite of `a` and `b` given the composites of their
/// sources and targets.
fn hcomp_through(
    src: &Composite,
    tgt: &Composite,
    cells: &(Arc<Profunctor>, Arc<Profunctor>),
    a: &ProfTwoCell,
    b: &ProfTwoCell,
) -> ProfTwoCell {
    let (nc, na) = (src.cell.tgt.num_objects(), src.cell.src.num_objects());
    let nb = a.src_cell.tgt.num_objects();
    let mut maps = Vec::with_capacity(nc * na);
    for c in 0..nc {
        for a_obj in 0..na {
            maps.push(
                (0..src.cell.size(c, a_obj))
                    .map(|e| {
                        let (bo, y, x) = src.rep(c, a_obj, e);
                        let y1 = b.maps[c * nb + bo][y];
                        let x1 = a.maps[bo * na + a_obj][x];
                        tgt.class(c, a_obj, bo, y1, x1)
                    })
                    .collect(),
            );
        }
    }
    ProfTwoCell {
        src_cell: Arc::clone(&cells.0),
        tgt_cell: Arc::clone(&cells.1),
        maps,
    }
}

/// Prof over finite categories and set-valued profunctors.
#[derive(Clone, Debug, Default)]
pub struct Prof {
    pub limits: Limits,
}

impl Prof {
    pub fn new(limits: Limits) -> Self {
        Prof { limits }
    }

    fn cap(&self) -> u64 {
        self.limits.max_candidates
    }

    fn end_index(&self, p: &Profunctor) -> Result<HashMap<Vec<usize>, usize>> {
        Ok(end_families(p, self.cap())?
            .into_iter()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect())
    }

    /// Functions `Hom(a, b) → S` for the closed cospread, in lexicographic order.
    fn cospread_elements(
        &self,
        s: &Profunctor,
        c: &FinCat,
        b: usize,
        a: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let n = c.hom(a, b).len();
        let choices = vec![identity_map(s.size(0, 0)); n];
        product_of_choices(&choices, self.cap(), "closed cospread")
    }

    fn cospread_lookup(
        &self,
        s: &Profunctor,
        c: &FinCat,
    ) -> Result<Vec<HashMap<Vec<usize>, usize>>> {
        let n = c.num_objects();
        let mut out = Vec::with_capacity(n * n);
        for b in 0..n {
            for a in 0..n {
                out.push(
                    self.cospread_elements(s, c, b, a)?
                        .into_iter()
                        .enumerate()
                        .map(|(i, f)| (f, i))
                        .collect(),
                );
            }
        }
        Ok(out)
    }
}

impl Bicategory for Prof {
    type Obj = FinCat;
    type Cell = Profunctor;
    type Two = ProfTwoCell;

    fn instance(&self) -> Instance {
        Instance::Prof
    }

    fn limits(&self) -> Limits {
        self.limits
    }

    fn src(&self, f: &Profunctor) -> FinCat {
        f.src.clone()
    }

    fn tgt(&self, f: &Profunctor) -> FinCat {
        f.tgt.clone()
    }

    fn identity(&self, a: &FinCat) -> Profunctor {
        Profunctor::hom(a)
    }

    fn compose(&self, f: &Profunctor, g: &Profunctor) -> Result<Profunctor> {
        prof_compose(f, g)
    }

    fn two_src(&self, a: &ProfTwoCell) -> Profunctor {
        (*a.src_cell).clone()
    }

    fn two_tgt(&self, a: &ProfTwoCell) -> Profunctor {
        (*a.tgt_cell).clone()
    }

    fn id2(&self, f: &Profunctor) -> ProfTwoCell {
        let f = Arc::new(f.clone());
        ProfTwoCell {
            maps: f.sets.iter().map(|s| identity_map(s.len())).collect(),
            src_cell: f.clone(),
            tgt_cell: f,
        }
    }

    fn vcomp(&self, a: &ProfTwoCell, b: &ProfTwoCell) -> Result<ProfTwoCell> {
        if a.tgt_cell != b.src_cell {
            return Err(Error::EndpointMismatch(
                "vertical composite of transformations".into(),
            ));
        }
        Ok(ProfTwoCell {
            src_cell: a.src_cell.clone(),
            tgt_cell: b.tgt_cell.clone(),
            maps: a
                .maps
                .iter()
                .zip(&b.maps)
                .map(|(m, n)| m.iter().map(|&x| n[x]).collect())
                .collect(),
        })
    }

    fn hcomp(&self, a: &ProfTwoCell, b: &ProfTwoCell) -> Result<ProfTwoCell> {
        let src = prof_compose_witness(&a.src_cell, &b.src_cell)?;
        let tgt = prof_compose_witness(&a.tgt_cell, &b.tgt_cell)?;
        let cells = (Arc::new(src.cell.clone()), Arc::new(tgt.cell.clone()));
        Ok(hcomp_through(&src, &tgt, &cells, a, b))
    }

    fn whisker_all(&self, alphas: &[ProfTwoCell], g: &Profunctor) -> Result<Vec<ProfTwoCell>> {
        let Some(first) = alphas.first() else {
            return Ok(Vec::new());
        };
        let shared = alphas
            .iter()
            .all(|a| a.src_cell == first.src_cell && a.tgt_cell == first.tgt_cell);
        if !shared {
            let id = self.id2(g);
            return alphas.iter().map(|a| self.hcomp(a, &id)).collect();
        }
        let src = prof_compose_witness(&first.src_cell, g)?;
        let tgt = prof_compose_witness(&first.tgt_cell, g)?;
        let cells = (Arc::new(src.cell.clone()), Arc::new(tgt.cell.clone()));
        let id = self.id2(g);
        Ok(alphas
            .iter()
            .map(|a| hcomp_through(&src, &tgt, &cells, a, &id))
            .collect())
    }

    fn two_cells(&self, f: &Profunctor, g: &Profunctor) -> Result<Vec<ProfTwoCell>> {
        prof_two_cells(f, g, self.cap())
    }

    fn invert(&self, a: &ProfTwoCell) -> Option<ProfTwoCell> {
        let mut maps = Vec::with_capacity(a.maps.len());
        for (k, m) in a.maps.iter().enumerate() {
            let n = a.tgt_cell.sets[k].len();
            if m.len() != n {
                return None;
            }
            let mut inv = vec![usize::MAX; n];
            for (x, &y) in m.iter().enumerate() {
                if inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            maps.push(inv);
        }
        Some(ProfTwoCell {
            src_cell: a.tgt_cell.clone(),
            tgt_cell: a.src_cell.clone(),
            maps,
        })
    }

    fn find_iso(&self, f: &Profunctor, g: &Profunctor) -> IsoSearch<ProfTwoCell> {
        if f.src != g.src
            || f.tgt != g.tgt
            || f.sets.iter().zip(&g.sets).any(|(x, y)| x.len() != y.len())
        {
            return IsoSearch::Absent;
        }
        let problem = naturality_problem(f, g);
        match Search::new(&problem, "isomorphism search", self.cap())
            .injective()
            .limit(1)
            .run()
        {
            Ok(mut found) => match found.pop() {
                Some(maps) => IsoSearch::Found(ProfTwoCell {
                    src_cell: Arc::new(f.clone()),
                    tgt_cell: Arc::new(g.clone()),
                    maps,
                }),
                None => IsoSearch::Absent,
            },
            Err(_) => IsoSearch::BudgetExceeded,
        }
    }

    fn unitor_after(&self, f: &Profunctor) -> Result<ProfTwoCell> {
        let b_cat = &f.tgt;
        let id = Profunctor::hom(b_cat);
        let comp = prof_compose_witness(f, &id)?;
        let (nc, na) = (b_cat.num_objects(), f.src.num_objects());
        let mut maps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                maps.push(
                    (0..comp.cell.size(c, a))
                        .map(|e| {
                            let (b, y, x) = comp.rep(c, a, e);
                            let h = b_cat.hom(c, b)[y];
                            f.lact[h][a][x]
                        })
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(comp.cell, f.clone(), maps)
    }

    fn unitor_after_inv(&self, f: &Profunctor) -> Result<ProfTwoCell> {
        let b_cat = &f.tgt;
        let comp = prof_compose_witness(f, &Profunctor::hom(b_cat))?;
        let pos = hom_positions(b_cat);
        let (nc, na) = (b_cat.num_objects(), f.src.num_objects());
        let mut maps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                let idc = pos[b_cat.identity(c)];
                maps.push(
                    (0..f.size(c, a))
                        .map(|x| comp.class(c, a, c, idc, x))
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(f.clone(), comp.cell, maps)
    }

    fn unitor_before(&self, f: &Profunctor) -> Result<ProfTwoCell> {
        let a_cat = &f.src;
        let comp = prof_compose_witness(&Profunctor::hom(a_cat), f)?;
        let (nc, na) = (f.tgt.num_objects(), a_cat.num_objects());
        let mut maps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                maps.push(
                    (0..comp.cell.size(c, a))
                        .map(|e| {
                            let (b, y, x) = comp.rep(c, a, e);
                            let h = a_cat.hom(b, a)[x];
                            f.ract[h][c][y]
                        })
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(comp.cell, f.clone(), maps)
    }

    fn unitor_before_inv(&self, f: &Profunctor) -> Result<ProfTwoCell> {
        let a_cat = &f.src;
        let comp = prof_compose_witness(&Profunctor::hom(a_cat), f)?;
        let pos = hom_positions(a_cat);
        let (nc, na) = (f.tgt.num_objects(), a_cat.num_objects());
        let mut maps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                let ida = pos[a_cat.identity(a)];
                maps.push(
                    (0..f.size(c, a))
                        .map(|y| comp.class(c, a, a, y, ida))
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(f.clone(), comp.cell, maps)
    }

    fn associator(&self, f: &Profunctor, g: &Profunctor, h: &Profunctor) -> Result<ProfTwoCell> {
        let fg = prof_compose_witness(f, g)?;
        let gh = prof_compose_witness(g, h)?;
        let left = prof_compose_witness(&fg.cell, h)?;
        let right = prof_compose_witness(f, &gh.cell)?;
        let (nd, na) = (h.tgt.num_objects(), f.src.num_objects());
        let mut maps = Vec::with_capacity(nd * na);
        for d in 0..nd {
            for a in 0..na {
                maps.push(
                    (0..left.cell.size(d, a))
                        .map(|e| {
                            let (c, z, w) = left.rep(d, a, e);
                            let (b, y, x) = fg.rep(c, a, w);
                            let u = gh.class(d, b, c, z, y);
                            right.class(d, a, b, u, x)
                        })
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(left.cell, right.cell, maps)
    }

    fn lift(&self, f: &Profunctor, g: &Profunctor) -> Result<Lift<Profunctor, ProfTwoCell>> {
        let data = lift_data(f, g, self.cap())?;
        let comp = prof_compose_witness(&data.cell, f)?;
        let (nc, na) = (f.tgt.num_objects(), g.src.num_objects());
        let mut maps = Vec::with_capacity(nc * na);
        for c in 0..nc {
            for a in 0..na {
                maps.push(
                    (0..comp.cell.size(c, a))
                        .map(|e| {
                            let (b, y, t) = comp.rep(c, a, e);
                            data.families[b * na + a][t][data.offsets[b][c] + y]
                        })
                        .collect(),
                );
            }
        }
        let eval = ProfTwoCell::new(comp.cell, g.clone(), maps)?;
        Ok(Lift {
            cell: data.cell,
            eval,
        })
    }

    fn lift_factor(
        &self,
        f: &Profunctor,
        lift: &Lift<Profunctor, ProfTwoCell>,
        h: &Profunctor,
        gamma: &ProfTwoCell,
    ) -> Result<ProfTwoCell> {
        let g = &*lift.eval.tgt_cell;
        let comp = prof_compose_witness(h, f)?;
        if *gamma.src_cell != comp.cell || *gamma.tgt_cell != *g {
            return Err(Error::EndpointMismatch("factorization endpoints".into()));
        }
        let (a_cat, b_cat, c_cat) = (&g.src, &f.src, &f.tgt);
        let (na, nb) = (a_cat.num_objects(), b_cat.num_objects());
        let mut maps = Vec::with_capacity(na * nb);
        for b in 0..nb {
            let mut offsets = Vec::new();
            let mut acc = 0;
            for c in 0..c_cat.num_objects() {
                offsets.push(acc);
                acc += f.size(c, b);
            }
            for a in 0..na {
                let mut m = Vec::with_capacity(h.size(b, a));
                for t in 0..h.size(b, a) {
                    let mut family = Vec::with_capacity(acc);
                    for c in 0..c_cat.num_objects() {
                        for y in 0..f.size(c, b) {
                            family
                                .push(gamma.maps[comp.cell.index(c, a)][comp.class(c, a, b, y, t)]);
                        }
                    }
                    let want = family_label(f, g, b, a, &family, &offsets);
                    let j = lift
                        .cell
                        .set(b, a)
                        .index_of(&want)
                        .ok_or_else(|| Error::Invalid {
                            what: "lift factorization",
                            detail: format!("lift has no element {want}"),
                        })?;
                    m.push(j);
                }
                maps.push(m);
            }
        }
        ProfTwoCell::new(h.clone(), lift.cell.clone(), maps)
    }

    fn unit(&self) -> FinCat {
        FinCat::terminal()
    }

    fn tensor_obj(&self, a: &FinCat, b: &FinCat) -> FinCat {
        a.product(b)
    }

    fn tensor(&self, f: &Profunctor, g: &Profunctor) -> Result<Profunctor> {
        Ok(f.tensor(g))
    }

    fn braid(&self, a: &FinCat, b: &FinCat) -> Profunctor {
        let (na, nb) = (a.num_objects(), b.num_objects());
        let (ma, mb) = (a.num_morphisms(), b.num_morphisms());
        let swap = FinFunctor {
            obj_map: (0..na * nb).map(|k| (k % nb) * na + k / nb).collect(),
            mor_map: (0..ma * mb).map(|k| (k % mb) * ma + k / mb).collect(),
        };
        Profunctor::companion(&swap, &a.product(b), &b.product(a))
    }

    fn dual_obj(&self, a: &FinCat) -> FinCat {
        a.opposite()
    }

    /// `Hom(x, y)` over `A^op × A`.
    fn ev(&self, a: &FinCat) -> Profunctor {
        let hom = Profunctor::hom(a);
        let src = a.opposite().product(a);
        let (n, m) = (a.num_objects(), a.num_morphisms());
        let pos = hom_positions(a);
        Profunctor::tabulate(
            &src,
            &FinCat::terminal(),
            |_, xy| hom.set(xy / n, xy % n).clone(),
            |_, _, h| h,
            |uv, _, h| {
                // u: x' → x in A, v: y → y'
                let (u, v) = (uv / m, uv % m);
                let f = a.hom(a.tgt(u), a.src(v))[h];
                pos[a.comp(v, a.comp(f, u))]
            },
        )
    }

    /// `Hom(x, y)` over `A × A^op`.
    fn coev(&self, a: &FinCat) -> Profunctor {
        let hom = Profunctor::hom(a);
        let tgt = a.product(&a.opposite());
        let (n, m) = (a.num_objects(), a.num_morphisms());
        let pos = hom_positions(a);
        Profunctor::tabulate(
            &FinCat::terminal(),
            &tgt,
            |xy, _| hom.set(xy / n, xy % n).clone(),
            |uv, _, h| {
                // u: x' → x in A, v: y → y' in A
                let (u, v) = (uv / m, uv % m);
                let f = a.hom(a.tgt(u), a.src(v))[h];
                pos[a.comp(v, a.comp(f, u))]
            },
            |_, _, h| h,
        )
    }

    fn dual_cell(&self, f: &Profunctor) -> Profunctor {
        f.transpose()
    }

    fn lunit(&self, a: &FinCat) -> Profunctor {
        Profunctor::companion(&reindex(a), &FinCat::terminal().product(a), a)
    }

    fn lunit_inv(&self, a: &FinCat) -> Profunctor {
        Profunctor::companion(&reindex(a), a, &FinCat::terminal().product(a))
    }

    fn runit(&self, a: &FinCat) -> Profunctor {
        Profunctor::companion(&reindex(a), &a.product(&FinCat::terminal()), a)
    }

    fn runit_inv(&self, a: &FinCat) -> Profunctor {
        Profunctor::companion(&reindex(a), a, &a.product(&FinCat::terminal()))
    }

    fn assoc(&self, a: &FinCat, b: &FinCat, c: &FinCat) -> Profunctor {
        let left = a.product(b).product(c);
        Profunctor::companion(&reindex(&left), &left, &a.product(&b.product(c)))
    }

    fn assoc_inv(&self, a: &FinCat, b: &FinCat, c: &FinCat) -> Profunctor {
        let right = a.product(&b.product(c));
        Profunctor::companion(&reindex(&right), &right, &a.product(b).product(c))
    }
}

impl Concrete for Prof {
    fn trace_closed(&self, f: &Profunctor) -> Result<Profunctor> {
        Ok(Profunctor::scalar(coend_diag(f)?.carrier))
    }

    fn cotrace_closed(&self, f: &Profunctor) -> Result<Profunctor> {
        Ok(Profunctor::scalar(end_diag(f, self.cap())?))
    }

    /// `Hom(b, a) × S`.
    fn spread_closed(&self, s: &Profunctor, a: &FinCat) -> Result<Profunctor> {
        let hom = Profunctor::hom(a);
        let set = s.set(0, 0);
        let k = set.len();
        Ok(Profunctor::tabulate(
            a,
            a,
            |b, x| hom.set(b, x).product(set),
            |beta, x, e| hom.lact[beta][x][e / k.max(1)] * k + e % k.max(1),
            |alpha, b, e| hom.ract[alpha][b][e / k.max(1)] * k + e % k.max(1),
        ))
    }

    /// `S^Hom(a, b)` at component `(b, a)`.
    fn cospread_closed(&self, s: &Profunctor, a: &FinCat) -> Result<Profunctor> {
        let n = a.num_objects();
        let set = s.set(0, 0);
        let mut elements = Vec::with_capacity(n * n);
        for b in 0..n {
            for x in 0..n {
                elements.push(self.cospread_elements(s, a, b, x)?);
            }
        }
        let lookup = self.cospread_lookup(s, a)?;
        let pos = hom_positions(a);
        Ok(Profunctor::tabulate(
            a,
            a,
            |b, x| {
                let homs = a.hom(x, b);
                FinSet::from_distinct(
                    elements[b * n + x]
                        .iter()
                        .map(|phi| {
                            label::graph(
                                homs.iter()
                                    .zip(phi)
                                    .map(|(&h, &v)| (a.morphism(h).label.as_str(), set.label(v))),
                            )
                        })
                        .collect(),
                )
            },
            |beta, x, e| {
                // φ ↦ (h: x → b' ↦ φ(β∘h))
                let (b0, b1) = (a.src(beta), a.tgt(beta));
                let phi = &elements[b1 * n + x][e];
                let moved: Vec<usize> = a
                    .hom(x, b0)
                    .into_iter()
                    .map(|h| phi[pos[a.comp(beta, h)]])
                    .collect();
                lookup[b0 * n + x][&moved]
            },
            |alpha, b, e| {
                // φ ↦ (h: x' → b ↦ φ(h∘α))
                let (x0, x1) = (a.src(alpha), a.tgt(alpha));
                let phi = &elements[b * n + x0][e];
                let moved: Vec<usize> = a
                    .hom(x1, b)
                    .into_iter()
                    .map(|h| phi[pos[a.comp(h, alpha)]])
                    .collect();
                lookup[b * n + x1][&moved]
            },
        ))
    }

    fn trace_closed_map(&self, phi: &ProfTwoCell) -> Result<ProfTwoCell> {
        let (f, g) = (&*phi.src_cell, &*phi.tgt_cell);
        let (qf, qg) = (coend_diag(f)?, coend_diag(g)?);
        let (of, og) = (coend_offsets(f), coend_offsets(g));
        let map = qf
            .reps
            .iter()
            .map(|&r| {
                let (o, z) = locate(&of, r);
                qg.class_of[og[o] + phi.maps[f.index(o, o)][z]]
            })
            .collect();
        ProfTwoCell::new(
            Profunctor::scalar(qf.carrier),
            Profunctor::scalar(qg.carrier),
            vec![map],
        )
    }

    fn cotrace_closed_map(&self, phi: &ProfTwoCell) -> Result<ProfTwoCell> {
        let (f, g) = (&*phi.src_cell, &*phi.tgt_cell);
        let target = self.end_index(g)?;
        let map = end_families(f, self.cap())?
            .into_iter()
            .map(|x| {
                let moved: Vec<usize> = x
                    .iter()
                    .enumerate()
                    .map(|(o, &v)| phi.maps[f.index(o, o)][v])
                    .collect();
                target[&moved]
            })
            .collect();
        ProfTwoCell::new(self.cotrace_closed(f)?, self.cotrace_closed(g)?, vec![map])
    }

    fn spread_closed_map(&self, sigma: &ProfTwoCell, a: &FinCat) -> Result<ProfTwoCell> {
        let src = self.spread_closed(&sigma.src_cell, a)?;
        let tgt = self.spread_closed(&sigma.tgt_cell, a)?;
        let (k, k1) = (sigma.src_cell.size(0, 0), sigma.tgt_cell.size(0, 0));
        let maps = src
            .sets
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|e| (e / k) * k1 + sigma.maps[0][e % k])
                    .collect()
            })
            .collect();
        ProfTwoCell::new(src, tgt, maps)
    }

    fn cospread_closed_map(&self, sigma: &ProfTwoCell, a: &FinCat) -> Result<ProfTwoCell> {
        let n = a.num_objects();
        let lookup = self.cospread_lookup(&sigma.tgt_cell, a)?;
        let mut maps = Vec::with_capacity(n * n);
        for b in 0..n {
            for x in 0..n {
                maps.push(
                    self.cospread_elements(&sigma.src_cell, a, b, x)?
                        .into_iter()
                        .map(|phi| {
                            let moved: Vec<usize> = phi.iter().map(|&v| sigma.maps[0][v]).collect();
                            lookup[b * n + x][&moved]
                        })
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(
            self.cospread_closed(&sigma.src_cell, a)?,
            self.cospread_closed(&sigma.tgt_cell, a)?,
            maps,
        )
    }

    fn spread_transpose(
        &self,
        s: &Profunctor,
        f: &Profunctor,
        alpha: &ProfTwoCell,
    ) -> Result<ProfTwoCell> {
        let a = &f.src;
        if *alpha.src_cell != self.spread_closed(s, a)? || *alpha.tgt_cell != *f {
            return Err(Error::EndpointMismatch("spread transpose".into()));
        }
        let pos = hom_positions(a);
        let k = s.size(0, 0);
        let index = self.end_index(f)?;
        let map = (0..k)
            .map(|x| {
                let family: Vec<usize> = (0..a.num_objects())
                    .map(|o| alpha.maps[f.index(o, o)][pos[a.identity(o)] * k + x])
                    .collect();
                index[&family]
            })
            .collect();
        ProfTwoCell::new(s.clone(), self.cotrace_closed(f)?, vec![map])
    }

    fn trace_transpose(
        &self,
        f: &Profunctor,
        s: &Profunctor,
        beta: &ProfTwoCell,
    ) -> Result<ProfTwoCell> {
        let a = &f.src;
        let q = coend_diag(f)?;
        if *beta.src_cell != Profunctor::scalar(q.carrier.clone()) || *beta.tgt_cell != *s {
            return Err(Error::EndpointMismatch("trace transpose".into()));
        }
        let offsets = coend_offsets(f);
        let lookup = self.cospread_lookup(s, a)?;
        let n = a.num_objects();
        let mut maps = Vec::with_capacity(n * n);
        for b in 0..n {
            for x in 0..n {
                maps.push(
                    (0..f.size(b, x))
                        .map(|p| {
                            // p ↦ (h: x → b ↦ β[ract(h)(p)])
                            let phi: Vec<usize> = a
                                .hom(x, b)
                                .into_iter()
                                .map(|h| beta.maps[0][q.class_of[offsets[b] + f.ract[h][b][p]]])
                                .collect();
                            lookup[b * n + x][&phi]
                        })
                        .collect(),
                );
            }
        }
        ProfTwoCell::new(f.clone(), self.cospread_closed(s, a)?, maps)
    }

    fn scalar_size(&self, s: &Profunctor) -> usize {
        s.size(0, 0)
    }

    fn scalar_labels(&self, s: &Profunctor) -> Vec<String> {
        s.set(0, 0).labels().to_vec()
    }

    fn scalar_apply(&self, a: &ProfTwoCell, element: usize) -> usize {
        a.maps[0][element]
    }

    fn cotrace_element(&self, f: &Profunctor, i: usize) -> Result<ProfTwoCell> {
        let families = end_families(f, self.cap())?;
        let x = families.get(i).ok_or_else(|| Error::Invalid {
            what: "cotrace element",
            detail: format!("index {i} of {} families", families.len()),
        })?;
        let a = &f.src;
        let hom = Profunctor::hom(a);
        let n = a.num_objects();
        let mut maps = Vec::with_capacity(n * n);
        for (b, &xb) in x.iter().enumerate().take(n) {
            for t in 0..n {
                maps.push(a.hom(b, t).into_iter().map(|h| f.ract[h][b][xb]).collect());
            }
        }
        ProfTwoCell::new(hom, f.clone(), maps)
    }

    fn cotrace_index(&self, f: &Profunctor, alpha: &ProfTwoCell) -> Result<usize> {
        let a = &f.src;
        if *alpha.tgt_cell != *f || *alpha.src_cell != Profunctor::hom(a) {
            return Err(Error::EndpointMismatch("cotrace element".into()));
        }
        let pos = hom_positions(a);
        let family: Vec<usize> = (0..a.num_objects())
            .map(|o| alpha.maps[f.index(o, o)][pos[a.identity(o)]])
            .collect();
        self.end_index(f)?
            .get(&family)
            .copied()
            .ok_or_else(|| Error::Invalid {
                what: "cotrace element",
                detail: "transformation does not come from an end family".into(),
            })
    }

    fn pairing(&self, g: &Profunctor, f: &Profunctor, z: usize, x: usize) -> Result<usize> {
        let qg = coend_diag(g)?;
        let rep = *qg.reps.get(z).ok_or_else(|| Error::Invalid {
            what: "pairing",
            detail: format!("trace element {z} out of range"),
        })?;
        let (o, z0) = locate(&coend_offsets(g), rep);
        let families = end_families(f, self.cap())?;
        let fam = families.get(x).ok_or_else(|| Error::Invalid {
            what: "pairing",
            detail: format!("cotrace element {x} out of range"),
        })?;
        let comp = prof_compose_witness(f, g)?;
        let e = comp.class(o, o, o, z0, fam[o]);
        let qc = coend_diag(&comp.cell)?;
        Ok(qc.class_of[coend_offsets(&comp.cell)[o] + e])
    }

    fn scalar_braid(&self, s: &Profunctor, t: &Profunctor) -> Result<ProfTwoCell> {
        let ts = prof_compose_witness(t, s)?;
        let st = prof_compose_witness(s, t)?;
        let map = (0..ts.cell.size(0, 0))
            .map(|e| {
                let (_, y, x) = ts.rep(0, 0, e);
                st.class(0, 0, 0, x, y)
            })
            .collect();
        ProfTwoCell::new(ts.cell, st.cell, vec![map])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicat;

    const CAP: u64 = 1_000_000;

    /// Group elements as permutations of a small set, independent of FinCat.
    fn perms3() -> Vec<[usize; 3]> {
        vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
    }

    fn compose3(g: [usize; 3], f: [usize; 3]) -> [usize; 3] {
        [g[f[0]], g[f[1]], g[f[2]]]
    }

    fn center_size_s3() -> usize {
        let ps = perms3();
        ps.iter()
            .filter(|&&z| ps.iter().all(|&g| compose3(z, g) == compose3(g, z)))
            .count()
    }

    fn conjugacy_classes_s3() -> usize {
        let ps = perms3();
        let inverse = |g: [usize; 3]| *ps.iter().find(|&&h| compose3(g, h) == [0, 1, 2]).unwrap();
        let mut seen: Vec<[usize; 3]> = Vec::new();
        let mut classes = 0;
        for &x in &ps {
            if seen.contains(&x) {
                continue;
            }
            classes += 1;
            for &g in &ps {
                let c = compose3(compose3(g, x), inverse(g));
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        classes
    }

    #[test]
    fn hom_profunctors_are_lawful() {
        for c in [
            FinCat::terminal(),
            FinCat::discrete(2),
            FinCat::cyclic_group(3),
            FinCat::symmetric_group_3(),
            FinCat::walking_arrow(),
            FinCat::walking_iso(),
            FinCat::span_shape(),
        ] {
            let h = Profunctor::hom(&c);
            h.check().unwrap();
            h.transpose().check().unwrap();
            assert_eq!(h.transpose().transpose(), h);
        }
        let d = Profunctor::hom(&FinCat::discrete(2));
        assert_eq!(
            d.sets.iter().map(FinSet::len).collect::<Vec<_>>(),
            vec![1, 0, 0, 1]
        );
        assert_eq!(Profunctor::hom(&FinCat::cyclic_group(3)).size(0, 0), 3);
    }

    #[test]
    fn end_and_coend_oracles() {
        assert_eq!(center_size_s3(), 1);
        assert_eq!(conjugacy_classes_s3(), 3);
        let s3 = Profunctor::hom(&FinCat::symmetric_group_3());
        assert_eq!(end_diag(&s3, CAP).unwrap().len(), center_size_s3());
        assert_eq!(coend_diag(&s3).unwrap().len(), conjugacy_classes_s3());
        let c3 = Profunctor::hom(&FinCat::cyclic_group(3));
        assert_eq!(end_diag(&c3, CAP).unwrap().len(), 3);
        assert_eq!(coend_diag(&c3).unwrap().len(), 3);
        // discrete: product of and disjoint union of the diagonal
        let d = FinCat::discrete(2);
        let p = Profunctor::constant(&d, &d, &FinSet::range(2));
        assert_eq!(end_diag(&p, CAP).unwrap().len(), 4);
        assert_eq!(coend_diag(&p).unwrap().len(), 4);
    }

    #[test]
    fn coend_actions_are_independent_of_representative() {
        let s3 = Profunctor::hom(&FinCat::symmetric_group_3());
        let q = coend_diag(&s3).unwrap();
        for (r, &cls) in q.class_of.iter().enumerate() {
            assert_eq!(q.class_of[q.reps[cls]], cls);
            assert!(q.reps[cls] <= r);
        }
    }

    #[test]
    fn two_cells_of_hom_c2() {
        let h = Profunctor::hom(&FinCat::cyclic_group(2));
        let cells = prof_two_cells(&h, &h, CAP).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells.contains(&Prof::default().id2(&h)));
        let e = Profunctor::empty(&h.src, &h.tgt);
        assert_eq!(prof_two_cells(&e, &h, CAP).unwrap().len(), 1);
    }

    #[test]
    fn composite_of_discrete_is_matrix_product() {
        let d = FinCat::discrete(2);
        let p = Profunctor::tabulate(
            &d,
            &d,
            |b, a| FinSet::range(b + 2 * a + 1),
            |_, _, x| x,
            |_, _, x| x,
        );
        let q = Profunctor::tabulate(
            &d,
            &d,
            |b, a| FinSet::range((b + a) % 2 + 1),
            |_, _, x| x,
            |_, _, x| x,
        );
        let r = prof_compose(&p, &q).unwrap();
        r.check().unwrap();
        for c in 0..2 {
            for a in 0..2 {
                let want: usize = (0..2).map(|b| q.size(c, b) * p.size(b, a)).sum();
                assert_eq!(r.size(c, a), want);
            }
        }
    }

    #[test]
    fn yoneda_and_coyoneda() {
        let b = Prof::default();
        for c in [
            FinCat::cyclic_group(2),
            FinCat::walking_arrow(),
            FinCat::span_shape(),
        ] {
            let p = Profunctor::hom(&c)
                .sum(&Profunctor::constant(&c, &c, &FinSet::range(1)))
                .unwrap();
            p.check().unwrap();
            let u = b.unitor_after(&p).unwrap();
            assert!(b.invert(&u).is_some());
            let v = b.unitor_before(&p).unwrap();
            assert!(b.invert(&v).is_some());
            let l = b.lift(&Profunctor::hom(&c), &p).unwrap();
            l.cell.check().unwrap();
            assert!(b.find_iso(&l.cell, &p).is_found());
        }
    }

    #[test]
    fn lift_with_empty_numerator_is_singletons() {
        let c = FinCat::walking_arrow();
        let l = prof_lift(&Profunctor::empty(&c, &c), &Profunctor::hom(&c), CAP).unwrap();
        assert!(l.sets.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn monoidal_structure_is_lawful() {
        let b = Prof::default();
        let a = FinCat::walking_arrow();
        let d = FinCat::discrete(2);
        for p in [
            b.ev(&a),
            b.coev(&a),
            b.braid(&a, &d),
            b.lunit(&a),
            b.lunit_inv(&a),
            b.assoc(&a, &d, &a),
            Profunctor::hom(&a).tensor(&Profunctor::hom(&d)),
        ] {
            p.check().unwrap();
        }
        let c = b.coev(&d);
        assert_eq!(c.sets.iter().filter(|s| !s.is_empty()).count(), 2);
    }

    #[test]
    fn dims_of_groups() {
        let b = Prof::default();
        let (t, c) = bicat::dims(&b, &FinCat::symmetric_group_3()).unwrap();
        assert_eq!((t.size(0, 0), c.size(0, 0)), (3, 1));
        let (t, c) = bicat::dims(&b, &FinCat::cyclic_group(3)).unwrap();
        assert_eq!((t.size(0, 0), c.size(0, 0)), (3, 3));
    }

    #[test]
    fn generic_constructions_match_closed_forms() {
        let b = Prof::default();
        for c in [FinCat::cyclic_group(2), FinCat::walking_arrow()] {
            let p = Profunctor::hom(&c)
                .sum(&Profunctor::constant(&c, &c, &FinSet::range(1)))
                .unwrap();
            for f in [Profunctor::hom(&c), p] {
                let t = bicat::trace(&b, &f).unwrap();
                assert!(b.find_iso(&t, &b.trace_closed(&f).unwrap()).is_found());
                let k = bicat::cotrace(&b, &f).unwrap();
                assert!(b.find_iso(&k, &b.cotrace_closed(&f).unwrap()).is_found());
            }
            let s = Profunctor::scalar(FinSet::range(2));
            let sp = bicat::spread(&b, &s, &c).unwrap();
            assert!(b
                .find_iso(&sp, &b.spread_closed(&s, &c).unwrap())
                .is_found());
            let cs = bicat::cospread(&b, &s, &c).unwrap();
            assert!(b
                .find_iso(&cs, &b.cospread_closed(&s, &c).unwrap())
                .is_found());
        }
    }

    #[test]
    fn codimension_monoids_of_c3() {
        let b = Prof::default();
        let a = FinCat::cyclic_group(3);
        let m1 = bicat::codim_monoid_enriched(&b, &a).unwrap();
        let m2 = bicat::codim_monoid_unitor(&b, &a).unwrap();
        let m3 = bicat::codim_monoid_lift_monad(&b, &a).unwrap();
        for m in [&m1, &m2, &m3] {
            m.check().unwrap();
            assert_eq!(m.len(), 3);
        }
        assert!(m1.isomorphism_to(&m2).is_some());
        assert!(m1.isomorphism_to(&m3).is_some());
        // the action of the center on conjugacy classes is free and transitive for C3
        for z in 0..3 {
            let orbit: std::collections::BTreeSet<usize> = (0..3)
                .map(|x| bicat::dim_action(&b, &a, z, x).unwrap())
                .collect();
            assert_eq!(orbit.len(), 3);
        }
    }
}
