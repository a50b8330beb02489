//! The capability interface each instance implements, and the constructions
//! written once against it: names, spread, trace, cotrace, cospread,
//! extensions, the scalar enrichment and its element-level structure.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};

/// Which concrete bicategory a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Rel,
    Span,
    Prof,
}

impl Instance {
    pub fn as_str(self) -> &'static str {
        match self {
            Instance::Rel => "rel",
            Instance::Span => "span",
            Instance::Prof => "prof",
        }
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A right lift `f⊸g` with its evaluation 2-cell `f∘(f⊸g) ⇒ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift<C, T> {
    pub cell: C,
    pub eval: T,
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug, PartialEq)]
pub enum IsoSearch<T> {
    Found(T),
    Absent,
    BudgetExceeded,
}

impl<T> IsoSearch<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoSearch::Found(_))
    }
}

/// Structure consumed by the generic layer.
///
/// Composition is written in diagrammatic order: `compose(f, g)` is `g∘f`.
/// Likewise `vcomp(a, b)` runs `a` first and `hcomp(a, b)` whiskers `a` on
/// the first factor and `b` on the second.
pub trait Bicategory {
    type Obj: Clone + PartialEq + Debug;
    type Cell: Clone + PartialEq + Debug;
    type Two: Clone + Eq + std::hash::Hash + Debug;

    fn instance(&self) -> Instance;
    fn limits(&self) -> Limits;

    fn src(&self, f: &Self::Cell) -> Self::Obj;
    fn tgt(&self, f: &Self::Cell) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Cell;
    fn compose(&self, f: &Self::Cell, g: &Self::Cell) -> Result<Self::Cell>;

    fn two_src(&self, a: &Self::Two) -> Self::Cell;
    fn two_tgt(&self, a: &Self::Two) -> Self::Cell;
    fn id2(&self, f: &Self::Cell) -> Self::Two;
    fn vcomp(&self, a: &Self::Two, b: &Self::Two) -> Result<Self::Two>;
    fn hcomp(&self, a: &Self::Two, b: &Self::Two) -> Result<Self::Two>;
    /// All 2-cells `f ⇒ g` in canonical order.
    /// `hcomp(a, id2(g))` for each `a`; instances may share work across
    /// 2-cells with common endpoints.
    fn whisker_all(&self, alphas: &[Self::Two], g: &Self::Cell) -> Result<Vec<Self::Two>> {
        let id = self.id2(g);
        alphas.iter().map(|a| self.hcomp(a, &id)).collect()
    }

    fn two_cells(&self, f: &Self::Cell, g: &Self::Cell) -> Result<Vec<Self::Two>>;
    fn invert(&self, a: &Self::Two) -> Option<Self::Two>;
    fn find_iso(&self, f: &Self::Cell, g: &Self::Cell) -> IsoSearch<Self::Two>;

    /// `compose(f, id) ⇒ f`.
    fn unitor_after(&self, f: &Self::Cell) -> Result<Self::Two>;
    /// `f ⇒ compose(f, id)`.
    fn unitor_after_inv(&self, f: &Self::Cell) -> Result<Self::Two>;
    /// `compose(id, f) ⇒ f`.
    fn unitor_before(&self, f: &Self::Cell) -> Result<Self::Two>;
    /// `f ⇒ compose(id, f)`.
    fn unitor_before_inv(&self, f: &Self::Cell) -> Result<Self::Two>;
    /// `compose(compose(f, g), h) ⇒ compose(f, compose(g, h))`.
    fn associator(&self, f: &Self::Cell, g: &Self::Cell, h: &Self::Cell) -> Result<Self::Two>;

    /// Right lift of `g: A → C` through `f: B → C`.
    fn lift(&self, f: &Self::Cell, g: &Self::Cell) -> Result<Lift<Self::Cell, Self::Two>>;
    /// The 2-cell `h ⇒ f⊸g` corresponding to `gamma: compose(h, f) ⇒ g`.
    fn lift_factor(
        &self,
        f: &Self::Cell,
        lift: &Lift<Self::Cell, Self::Two>,
        h: &Self::Cell,
        gamma: &Self::Two,
    ) -> Result<Self::Two>;

    fn unit(&self) -> Self::Obj;
    fn tensor_obj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor(&self, f: &Self::Cell, g: &Self::Cell) -> Result<Self::Cell>;
    /// `A⊗B → B⊗A`.
    fn braid(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Cell;
    fn dual_obj(&self, a: &Self::Obj) -> Self::Obj;
    /// `A*⊗A → I`.
    fn ev(&self, a: &Self::Obj) -> Self::Cell;
    /// `I → A⊗A*`.
    fn coev(&self, a: &Self::Obj) -> Self::Cell;
    /// `f*: B* → A*` for `f: A → B`.
    fn dual_cell(&self, f: &Self::Cell) -> Self::Cell;
    /// `I⊗A → A`.
    fn lunit(&self, a: &Self::Obj) -> Self::Cell;
    fn lunit_inv(&self, a: &Self::Obj) -> Self::Cell;
    /// `A⊗I → A`.
    fn runit(&self, a: &Self::Obj) -> Self::Cell;
    fn runit_inv(&self, a: &Self::Obj) -> Self::Cell;
    /// `(A⊗B)⊗C → A⊗(B⊗C)`.
    fn assoc(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Self::Cell;
    fn assoc_inv(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Self::Cell;
}

/// Closed forms and element-level data an instance exposes so the generic
/// constructions can be checked against them.
///
/// Scalars are read as finite sets: a scalar `s` has `scalar_size(s)`
/// elements and a 2-cell between scalars acts on them by `scalar_apply`.
pub trait Concrete: Bicategory {
    fn trace_closed(&self, f: &Self::Cell) -> Result<Self::Cell>;
    fn cotrace_closed(&self, f: &Self::Cell) -> Result<Self::Cell>;
    fn spread_closed(&self, s: &Self::Cell, a: &Self::Obj) -> Result<Self::Cell>;
    fn cospread_closed(&self, s: &Self::Cell, a: &Self::Obj) -> Result<Self::Cell>;

    fn trace_closed_map(&self, phi: &Self::Two) -> Result<Self::Two>;
    fn cotrace_closed_map(&self, phi: &Self::Two) -> Result<Self::Two>;
    fn spread_closed_map(&self, sigma: &Self::Two, a: &Self::Obj) -> Result<Self::Two>;
    fn cospread_closed_map(&self, sigma: &Self::Two, a: &Self::Obj) -> Result<Self::Two>;

    /// Transpose of `alpha: spread(s) ⇒ f` to `s ⇒ cotrace(f)`.
    fn spread_transpose(
        &self,
        s: &Self::Cell,
        f: &Self::Cell,
        alpha: &Self::Two,
    ) -> Result<Self::Two>;
    /// Transpose of `beta: trace(f) ⇒ s` to `f ⇒ cospread(s)`.
    fn trace_transpose(
        &self,
        f: &Self::Cell,
        s: &Self::Cell,
        beta: &Self::Two,
    ) -> Result<Self::Two>;

    fn scalar_size(&self, s: &Self::Cell) -> usize;
    fn scalar_labels(&self, s: &Self::Cell) -> Vec<String>;
    fn scalar_apply(&self, a: &Self::Two, element: usize) -> usize;

    /// Element `i` of `cotrace_closed(f)` as a 2-cell `id ⇒ f`.
    fn cotrace_element(&self, f: &Self::Cell, i: usize) -> Result<Self::Two>;
    /// Inverse of `cotrace_element`.
    fn cotrace_index(&self, f: &Self::Cell, alpha: &Self::Two) -> Result<usize>;
    /// The pairing `trace(g)∘cotrace(f) ⇒ trace(compose(f, g))` on elements.
    fn pairing(&self, g: &Self::Cell, f: &Self::Cell, z: usize, x: usize) -> Result<usize>;
    /// Canonical swap `compose(t, s) ⇒ compose(s, t)` of scalars.
    fn scalar_braid(&self, s: &Self::Cell, t: &Self::Cell) -> Result<Self::Two>;
}

/// Composes a non-empty path of 1-cells in diagrammatic order.
pub fn compose_path<B: Bicategory>(b: &B, cells: &[B::Cell]) -> Result<B::Cell> {
    let (first, rest) = cells.split_first().ok_or_else(|| Error::Invalid {
        what: "path",
        detail: "empty composite".into(),
    })?;
    rest.iter()
        .try_fold(first.clone(), |acc, c| b.compose(&acc, c))
}

/// Vertically composes a non-empty path of 2-cells.
pub fn vcomp_path<B: Bicategory>(b: &B, cells: &[B::Two]) -> Result<B::Two> {
    let (first, rest) = cells.split_first().ok_or_else(|| Error::Invalid {
        what: "path",
        detail: "empty composite".into(),
    })?;
    rest.iter()
        .try_fold(first.clone(), |acc, c| b.vcomp(&acc, c))
}

fn endo_object<B: Bicategory>(b: &B, f: &B::Cell) -> Result<B::Obj> {
    let a = b.src(f);
    if a != b.tgt(f) {
        return Err(Error::NotEndo(format!("{} 1-cell", b.instance())));
    }
    Ok(a)
}

fn scalar_check<B: Bicategory>(b: &B, s: &B::Cell) -> Result<()> {
    let i = b.unit();
    if b.src(s) != i || b.tgt(s) != i {
        return Err(Error::NotEndo(format!("{} scalar expected", b.instance())));
    }
    Ok(())
}

/// `name(f) = (f⊗A*)∘coev_A : I → B⊗A*`.
pub fn name<B: Bicategory>(b: &B, f: &B::Cell) -> Result<B::Cell> {
    let a = b.src(f);
    let tensored = b.tensor(f, &b.identity(&b.dual_obj(&a)))?;
    b.compose(&b.coev(&a), &tensored)
}

/// Inverse of [`name`]: turns `p: I → B⊗A*` back into `A → B`.
pub fn realize<B: Bicategory>(b: &B, p: &B::Cell, a: &B::Obj, target: &B::Obj) -> Result<B::Cell> {
    let da = b.dual_obj(a);
    compose_path(
        b,
        &[
            b.lunit_inv(a),
            b.tensor(p, &b.identity(a))?,
            b.assoc(target, &da, a),
            b.tensor(&b.identity(target), &b.ev(a))?,
            b.runit(target),
        ],
    )
}

/// `l∘(s⊗A)∘l•`.
pub fn spread<B: Bicategory>(b: &B, s: &B::Cell, a: &B::Obj) -> Result<B::Cell> {
    scalar_check(b, s)?;
    compose_path(
        b,
        &[b.lunit_inv(a), b.tensor(s, &b.identity(a))?, b.lunit(a)],
    )
}

/// `ev∘b∘(f⊗A*)∘coev`.
pub fn trace<B: Bicategory>(b: &B, f: &B::Cell) -> Result<B::Cell> {
    let a = endo_object(b, f)?;
    let da = b.dual_obj(&a);
    compose_path(
        b,
        &[
            b.coev(&a),
            b.tensor(f, &b.identity(&da))?,
            b.braid(&a, &da),
            b.ev(&a),
        ],
    )
}

/// `name(id)⊸name(f)`.
pub fn cotrace<B: Bicategory>(b: &B, f: &B::Cell) -> Result<B::Cell> {
    let a = endo_object(b, f)?;
    let lifted = b.lift(&name(b, &b.identity(&a))?, &name(b, f)?)?;
    Ok(lifted.cell)
}

/// `realize((ev∘b)⊸s)`.
pub fn cospread<B: Bicategory>(b: &B, s: &B::Cell, a: &B::Obj) -> Result<B::Cell> {
    scalar_check(b, s)?;
    let pairing = b.compose(&b.braid(a, &b.dual_obj(a)), &b.ev(a))?;
    let lifted = b.lift(&pairing, s)?;
    realize(b, &lifted.cell, a, a)
}

/// Right extension of `g: A → C` along `f: A → B`, as `(f*⊸g*)*`.
pub fn extension<B: Bicategory>(b: &B, g: &B::Cell, f: &B::Cell) -> Result<B::Cell> {
    if b.src(g) != b.src(f) {
        return Err(Error::EndpointMismatch(
            "extension needs a shared source".into(),
        ));
    }
    let lifted = b.lift(&b.dual_cell(f), &b.dual_cell(g))?;
    Ok(b.dual_cell(&lifted.cell))
}

fn parallel<B: Bicategory>(b: &B, f: &B::Cell, g: &B::Cell) -> Result<()> {
    if b.src(f) != b.src(g) || b.tgt(f) != b.tgt(g) {
        return Err(Error::EndpointMismatch("parallel 1-cells expected".into()));
    }
    Ok(())
}

/// `cotrace(f⊸g)`.
pub fn enrichment_hom<B: Bicategory>(b: &B, f: &B::Cell, g: &B::Cell) -> Result<B::Cell> {
    parallel(b, f, g)?;
    cotrace(b, &b.lift(f, g)?.cell)
}

/// `name(f)⊸name(g)`, the second route to the enrichment hom.
pub fn enrichment_hom_via_names<B: Bicategory>(b: &B, f: &B::Cell, g: &B::Cell) -> Result<B::Cell> {
    parallel(b, f, g)?;
    Ok(b.lift(&name(b, f)?, &name(b, g)?)?.cell)
}

/// The 2-cells `id ⇒ f`.
pub fn two_trace<B: Bicategory>(b: &B, f: &B::Cell) -> Result<Vec<B::Two>> {
    let a = endo_object(b, f)?;
    b.two_cells(&b.identity(&a), f)
}

/// `(trace(id_A), cotrace(id_A))`.
pub fn dims<B: Bicategory>(b: &B, a: &B::Obj) -> Result<(B::Cell, B::Cell)> {
    let id = b.identity(a);
    Ok((trace(b, &id)?, cotrace(b, &id)?))
}

/// The enrichment hom between parallel cells, read through the closed-form
/// cotrace so its elements can be addressed.
pub struct HomObject<B: Bicategory> {
    pub f: B::Cell,
    pub g: B::Cell,
    pub lift: Lift<B::Cell, B::Two>,
    pub scalar: B::Cell,
}

impl<B: Concrete> HomObject<B> {
    pub fn new(b: &B, f: &B::Cell, g: &B::Cell) -> Result<Self> {
        parallel(b, f, g)?;
        let lift = b.lift(f, g)?;
        let scalar = b.cotrace_closed(&lift.cell)?;
        Ok(HomObject {
            f: f.clone(),
            g: g.clone(),
            lift,
            scalar,
        })
    }

    pub fn len(&self, b: &B) -> usize {
        b.scalar_size(&self.scalar)
    }

    pub fn is_empty(&self, b: &B) -> bool {
        self.len(b) == 0
    }

    /// The 2-cell `f ⇒ g` an element stands for:
    /// `f ⇒ compose(id, f) ⇒ compose(f⊸g, f) ⇒ g`.
    pub fn decode(&self, b: &B, i: usize) -> Result<B::Two> {
        let x = b.cotrace_element(&self.lift.cell, i)?;
        vcomp_path(
            b,
            &[
                b.unitor_before_inv(&self.f)?,
                b.hcomp(&x, &b.id2(&self.f))?,
                self.lift.eval.clone(),
            ],
        )
    }

    /// The element standing for `theta: f ⇒ g`.
    pub fn encode(&self, b: &B, theta: &B::Two) -> Result<usize> {
        let gamma = b.vcomp(&b.unitor_before(&self.f)?, theta)?;
        let h = b.identity(&b.src(&self.f));
        let x = b.lift_factor(&self.f, &self.lift, &h, &gamma)?;
        b.cotrace_index(&self.lift.cell, &x)
    }
}

/// Enriched composition on elements: `y ∈ E(g,h)`, `x ∈ E(f,g)` give the
/// element of `E(f,h)` for the vertical composite.
pub fn enriched_compose<B: Concrete>(
    b: &B,
    fg: &HomObject<B>,
    gh: &HomObject<B>,
    fh: &HomObject<B>,
    y: usize,
    x: usize,
) -> Result<usize> {
    let composite = b.vcomp(&fg.decode(b, x)?, &gh.decode(b, y)?)?;
    fh.encode(b, &composite)
}

/// The unit element of `E(f,f)`.
pub fn enriched_unit<B: Concrete>(b: &B, ff: &HomObject<B>) -> Result<usize> {
    ff.encode(b, &b.id2(&ff.f))
}

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub unit: usize,
    /// `table[x][y] = x·y`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// First violated monoid law, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        let n = self.len();
        if self.unit >= n {
            return Err("unit out of range".into());
        }
        for x in 0..n {
            if self.table[self.unit][x] != x || self.table[x][self.unit] != x {
                return Err(format!("unit law fails at {x}"));
            }
            for y in 0..n {
                for z in 0..n {
                    let l = self.table[self.table[x][y]][z];
                    let r = self.table[x][self.table[y][z]];
                    if l != r {
                        return Err(format!("associativity fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// A bijection `self → other` preserving unit and product, searched by
    /// backtracking; `None` when none exists.
    pub fn isomorphism_to(&self, other: &FiniteMonoid) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if n == 0 {
            return Some(map);
        }
        map[self.unit] = other.unit;
        used[other.unit] = true;
        fn consistent(a: &FiniteMonoid, b: &FiniteMonoid, map: &[usize]) -> bool {
            let n = a.len();
            for x in 0..n {
                if map[x] == usize::MAX {
                    continue;
                }
                for y in 0..n {
                    if map[y] == usize::MAX {
                        continue;
                    }
                    let xy = a.table[x][y];
                    if map[xy] != usize::MAX && map[xy] != b.table[map[x]][map[y]] {
                        return false;
                    }
                }
            }
            true
        }
        fn go(
            a: &FiniteMonoid,
            b: &FiniteMonoid,
            i: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = a.len();
            if i == n {
                return consistent(a, b, map);
            }
            if map[i] != usize::MAX {
                return go(a, b, i + 1, map, used);
            }
            for t in 0..n {
                if used[t] {
                    continue;
                }
                map[i] = t;
                used[t] = true;
                if consistent(a, b, map) && go(a, b, i + 1, map, used) {
                    return true;
                }
                used[t] = false;
                map[i] = usize::MAX;
            }
            false
        }
        if go(self, other, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }
}

/// The monoid on `E(id_A, id_A)` under enriched composition.
pub fn codim_monoid_enriched<B: Concrete>(b: &B, a: &B::Obj) -> Result<FiniteMonoid> {
    let id = b.identity(a);
    let hom = HomObject::new(b, &id, &id)?;
    let n = hom.len(b);
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            // x·y = x after y
            *cell = enriched_compose(b, &hom, &hom, &hom, x, y)?;
        }
    }
    Ok(FiniteMonoid {
        unit: enriched_unit(b, &hom)?,
        table,
    })
}

/// Lax product `cotrace(f)∘cotrace(h) → cotrace(compose(h, f))` on elements.
pub fn cotrace_product<B: Concrete>(
    b: &B,
    f: &B::Cell,
    h: &B::Cell,
    x: usize,
    y: usize,
) -> Result<usize> {
    let a = endo_object(b, f)?;
    let id = b.identity(&a);
    let alpha = b.cotrace_element(f, x)?;
    let beta = b.cotrace_element(h, y)?;
    let both = b.vcomp(&b.unitor_before_inv(&id)?, &b.hcomp(&beta, &alpha)?)?;
    b.cotrace_index(&b.compose(h, f)?, &both)
}

/// The unitor monoid on `cotrace(id_A)`: the lax product followed by the
/// cotrace of the unitor `id∘id ⇒ id`.
pub fn codim_monoid_unitor<B: Concrete>(b: &B, a: &B::Obj) -> Result<FiniteMonoid> {
    let id = b.identity(a);
    let cot = b.cotrace_closed(&id)?;
    let n = b.scalar_size(&cot);
    let collapse = b.cotrace_closed_map(&b.unitor_before(&id)?)?;
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let p = cotrace_product(b, &id, &id, x, y)?;
            *cell = b.scalar_apply(&collapse, p);
        }
    }
    let unit = b.cotrace_index(&id, &b.id2(&id))?;
    Ok(FiniteMonoid { unit, table })
}

/// The monad monoid on `L = name(id)⊸name(id)`: elements are 2-cells
/// `id_I ⇒ L`, multiplied through the lift's universal property.
pub fn codim_monoid_lift_monad<B: Concrete>(b: &B, a: &B::Obj) -> Result<FiniteMonoid> {
    let n_id = name(b, &b.identity(a))?;
    let lift = b.lift(&n_id, &n_id)?;
    let l = lift.cell.clone();
    let id_i = b.identity(&b.unit());
    let gamma_mult = vcomp_path(
        b,
        &[
            b.associator(&l, &l, &n_id)?,
            b.hcomp(&b.id2(&l), &lift.eval)?,
            lift.eval.clone(),
        ],
    )?;
    let mult = b.lift_factor(&n_id, &lift, &b.compose(&l, &l)?, &gamma_mult)?;
    let unit_cell = b.lift_factor(&n_id, &lift, &id_i, &b.unitor_before(&n_id)?)?;
    let n = b.scalar_size(&l);
    let element = |x: &B::Two| b.scalar_apply(x, 0);
    let points: Vec<B::Two> = b.two_cells(&id_i, &l)?;
    if points.len() != n {
        return Err(Error::Invalid {
            what: "lift monad",
            detail: format!("{} points for a scalar of size {n}", points.len()),
        });
    }
    let mut by_element = vec![None; n];
    for p in &points {
        by_element[element(p)] = Some(p.clone());
    }
    let split = b.unitor_before_inv(&id_i)?;
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let (px, py) = (
                by_element[x].as_ref().expect("every element is a point"),
                by_element[y].as_ref().expect("every element is a point"),
            );
            // x·y = mult ∘ (x ∘ y): x acts on the outer factor
            let prod = vcomp_path(b, &[split.clone(), b.hcomp(py, px)?, mult.clone()])?;
            table[x][y] = element(&prod);
        }
    }
    Ok(FiniteMonoid {
        unit: element(&unit_cell),
        table,
    })
}

/// Action of `cotrace(id_A)` on `trace(id_A)` through the pairing.
pub fn dim_action<B: Concrete>(b: &B, a: &B::Obj, z: usize, x: usize) -> Result<usize> {
    let id = b.identity(a);
    let paired = b.pairing(&id, &id, z, x)?;
    let collapse = b.trace_closed_map(&b.unitor_before(&id)?)?;
    Ok(b.scalar_apply(&collapse, paired))
}
