//! Spans of finite sets with pullback composition.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bicat::{Bicategory, Concrete, Instance, IsoSearch, Lift};
use crate::error::{Error, Limits, Result};
use crate::finset::FinSet;
use crate::label;

/// A span `src ← apex → tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanCell {
    pub src: FinSet,
    pub tgt: FinSet,
    pub apex: FinSet,
    pub leg_src: Vec<usize>,
    pub leg_tgt: Vec<usize>,
}

impl SpanCell {
    pub fn new(
        src: FinSet,
        tgt: FinSet,
        apex: FinSet,
        leg_src: Vec<usize>,
        leg_tgt: Vec<usize>,
    ) -> Result<Self> {
        let bad = |detail: String| Error::Invalid {
            what: "span",
            detail,
        };
        if leg_src.len() != apex.len() || leg_tgt.len() != apex.len() {
            return Err(bad("legs must be total on the apex".into()));
        }
        if let Some(x) = leg_src.iter().position(|&a| a >= src.len()) {
            return Err(bad(format!(
                "source leg sends {} outside the source",
                apex.label(x)
            )));
        }
        if let Some(x) = leg_tgt.iter().position(|&b| b >= tgt.len()) {
            return Err(bad(format!(
                "target leg sends {} outside the target",
                apex.label(x)
            )));
        }
        Ok(SpanCell {
            src,
            tgt,
            apex,
            leg_src,
            leg_tgt,
        })
    }

    pub fn identity(a: &FinSet) -> Self {
        let id: Vec<usize> = (0..a.len()).collect();
        SpanCell {
            src: a.clone(),
            tgt: a.clone(),
            apex: a.clone(),
            leg_src: id.clone(),
            leg_tgt: id,
        }
    }

    /// `src ← src → tgt` with identity source leg and `map` as target leg.
    pub fn from_function(src: &FinSet, tgt: &FinSet, map: Vec<usize>) -> Self {
        SpanCell {
            src: src.clone(),
            tgt: tgt.clone(),
            apex: src.clone(),
            leg_src: (0..src.len()).collect(),
            leg_tgt: map,
        }
    }

    pub fn empty(src: &FinSet, tgt: &FinSet) -> Self {
        SpanCell {
            src: src.clone(),
            tgt: tgt.clone(),
            apex: FinSet::empty(),
            leg_src: vec![],
            leg_tgt: vec![],
        }
    }

    /// Scalar on the unit with the given apex.
    pub fn scalar(apex: FinSet) -> Self {
        let n = apex.len();
        SpanCell {
            src: FinSet::unit(),
            tgt: FinSet::unit(),
            apex,
            leg_src: vec![0; n],
            leg_tgt: vec![0; n],
        }
    }

    pub fn reversed(&self) -> Self {
        SpanCell {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            apex: self.apex.clone(),
            leg_src: self.leg_tgt.clone(),
            leg_tgt: self.leg_src.clone(),
        }
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// Apex elements over `(a, b)`.
    pub fn fiber(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.apex.len())
            .filter(|&x| self.leg_src[x] == a && self.leg_tgt[x] == b)
            .collect()
    }

    /// Apex elements whose two legs agree.
    pub fn loops(&self) -> Vec<usize> {
        assert!(self.is_endo());
        (0..self.apex.len())
            .filter(|&x| self.leg_src[x] == self.leg_tgt[x])
            .collect()
    }

    /// Maps `α: A → apex` with both legs of `α` the identity, in
    /// lexicographic order.
    pub fn sections(&self, cap: u64) -> Result<Vec<Vec<usize>>> {
        assert!(self.is_endo());
        let choices: Vec<Vec<usize>> = (0..self.src.len()).map(|a| self.fiber(a, a)).collect();
        product_of_choices(&choices, cap, "span sections")
    }
}

/// Every tuple picking one entry per position, in lexicographic order.
pub(crate) fn product_of_choices(
    choices: &[Vec<usize>],
    cap: u64,
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    let mut count: u128 = 1;
    for c in choices {
        count = count.saturating_mul(c.len() as u128);
    }
    if count > u128::from(cap) {
        return Err(Error::budget(what, count, cap));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = Vec::with_capacity(choices.len());
    fn go(choices: &[Vec<usize>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == choices.len() {
            out.push(current.clone());
            return;
        }
        for &c in &choices[current.len()] {
            current.push(c);
            go(choices, current, out);
            current.pop();
        }
    }
    go(choices, &mut current, &mut out);
    Ok(out)
}

/// A map of apexes commuting with both legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanTwoCell {
    pub src_cell: Arc<SpanCell>,
    pub tgt_cell: Arc<SpanCell>,
    pub map: Vec<usize>,
}

impl SpanTwoCell {
    pub fn new(src: SpanCell, tgt: SpanCell, map: Vec<usize>) -> Result<Self> {
        Self::from_arcs(Arc::new(src), Arc::new(tgt), map)
    }

    fn from_arcs(src: Arc<SpanCell>, tgt: Arc<SpanCell>, map: Vec<usize>) -> Result<Self> {
        same_endpoints(&src, &tgt)?;
        if map.len() != src.apex.len() {
            return Err(Error::Invalid {
                what: "span 2-cell",
                detail: "map is not total on the source apex".into(),
            });
        }
        for (x, &y) in map.iter().enumerate() {
            if y >= tgt.apex.len()
                || src.leg_src[x] != tgt.leg_src[y]
                || src.leg_tgt[x] != tgt.leg_tgt[y]
            {
                return Err(Error::Invalid {
                    what: "span 2-cell",
                    detail: format!("element {} breaks a leg triangle", src.apex.label(x)),
                });
            }
        }
        Ok(SpanTwoCell {
            src_cell: src,
            tgt_cell: tgt,
            map,
        })
    }
}

fn same_endpoints(f: &SpanCell, g: &SpanCell) -> Result<()> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(Error::EndpointMismatch(
            "spans with different endpoints".into(),
        ));
    }
    Ok(())
}

/// Matching apex pairs of the composite `g∘f`, in lexicographic order.
pub fn compose_pairs(f: &SpanCell, g: &SpanCell) -> Vec<(usize, usize)> {
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); g.src.len()];
    for (t, &b) in g.leg_src.iter().enumerate() {
        by_src[b].push(t);
    }
    let mut out = Vec::new();
    for (s, &b) in f.leg_tgt.iter().enumerate() {
        for &t in &by_src[b] {
            out.push((s, t));
        }
    }
    out
}

/// Pullback composite `g∘f` on the subset of `f.apex × g.apex`.
pub fn span_compose(f: &SpanCell, g: &SpanCell) -> Result<SpanCell> {
    if f.tgt != g.src {
        return Err(Error::EndpointMismatch("span composite".into()));
    }
    let pairs = compose_pairs(f, g);
    let apex = FinSet::from_distinct(
        pairs
            .iter()
            .map(|&(s, t)| label::pair(f.apex.label(s), g.apex.label(t)))
            .collect(),
    );
    Ok(SpanCell {
        src: f.src.clone(),
        tgt: g.tgt.clone(),
        apex,
        leg_src: pairs.iter().map(|&(s, _)| f.leg_src[s]).collect(),
        leg_tgt: pairs.iter().map(|&(_, t)| g.leg_tgt[t]).collect(),
    })
}

fn pair_index(f: &SpanCell, g: &SpanCell) -> HashMap<(usize, usize), usize> {
    compose_pairs(f, g)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect()
}

/// Componentwise product of spans.
pub fn span_tensor(f: &SpanCell, g: &SpanCell) -> SpanCell {
    let (ns, nt) = (g.src.len(), g.tgt.len());
    let m = g.apex.len();
    let n = f.apex.len() * m;
    SpanCell {
        src: f.src.product(&g.src),
        tgt: f.tgt.product(&g.tgt),
        apex: f.apex.product(&g.apex),
        leg_src: (0..n)
            .map(|k| f.leg_src[k / m] * ns + g.leg_src[k % m])
            .collect(),
        leg_tgt: (0..n)
            .map(|k| f.leg_tgt[k / m] * nt + g.leg_tgt[k % m])
            .collect(),
    }
}

struct LiftElement {
    a: usize,
    b: usize,
    /// Image of each element of the fiber of `f` over `b`, in fiber order.
    images: Vec<usize>,
}

fn lift_elements(f: &SpanCell, g: &SpanCell, cap: u64) -> Result<Vec<LiftElement>> {
    if f.tgt != g.tgt {
        return Err(Error::EndpointMismatch("span lift".into()));
    }
    let mut out = Vec::new();
    for a in 0..g.src.len() {
        let over_a: Vec<usize> = (0..g.apex.len()).filter(|&u| g.leg_src[u] == a).collect();
        for b in 0..f.src.len() {
            let choices: Vec<Vec<usize>> = (0..f.apex.len())
                .filter(|&s| f.leg_src[s] == b)
                .map(|s| {
                    over_a
                        .iter()
                        .copied()
                        .filter(|&u| g.leg_tgt[u] == f.leg_tgt[s])
                        .collect()
                })
                .collect();
            for images in product_of_choices(&choices, cap, "span lift")? {
                out.push(LiftElement { a, b, images });
            }
            if out.len() as u64 > cap {
                return Err(Error::budget("span lift", out.len() as u128, cap));
            }
        }
    }
    Ok(out)
}

/// Right lift of `g: A → C` through `f: B → C`.
pub fn span_lift(f: &SpanCell, g: &SpanCell, cap: u64) -> Result<SpanCell> {
    let elements = lift_elements(f, g, cap)?;
    let fiber =
        |b: usize| -> Vec<usize> { (0..f.apex.len()).filter(|&s| f.leg_src[s] == b).collect() };
    let apex = FinSet::from_distinct(
        elements
            .iter()
            .map(|e| {
                let dom = fiber(e.b);
                let graph = label::graph(
                    dom.iter()
                        .zip(&e.images)
                        .map(|(&s, &u)| (f.apex.label(s), g.apex.label(u))),
                );
                label::pair(&label::pair(g.src.label(e.a), f.src.label(e.b)), &graph)
            })
            .collect(),
    );
    Ok(SpanCell {
        src: g.src.clone(),
        tgt: f.src.clone(),
        apex,
        leg_src: elements.iter().map(|e| e.a).collect(),
        leg_tgt: elements.iter().map(|e| e.b).collect(),
    })
}

/// Loops `{s | leg_src(s) = leg_tgt(s)}` as a scalar.
///
/// This is the pullback of the paired legs along the diagonal, which is
/// what the compact closed trace composite computes.
pub fn span_trace_closed(f: &SpanCell) -> Result<SpanCell> {
    if !f.is_endo() {
        return Err(Error::NotEndo("span trace".into()));
    }
    let loops = f.loops();
    Ok(SpanCell::scalar(FinSet::from_distinct(
        loops.iter().map(|&s| f.apex.label(s).to_string()).collect(),
    )))
}

/// Mutual sections of the two legs as a scalar.
pub fn span_cotrace_closed(f: &SpanCell, cap: u64) -> Result<SpanCell> {
    if !f.is_endo() {
        return Err(Error::NotEndo("span cotrace".into()));
    }
    let sections = f.sections(cap)?;
    Ok(SpanCell::scalar(FinSet::from_distinct(
        sections
            .iter()
            .map(|alpha| section_label(f, alpha))
            .collect(),
    )))
}

fn section_label(f: &SpanCell, alpha: &[usize]) -> String {
    label::graph(
        alpha
            .iter()
            .enumerate()
            .map(|(a, &s)| (f.src.label(a), f.apex.label(s))),
    )
}

/// All 2-cells `f ⇒ g`, maps listed in lexicographic order.
pub fn span_two_cells(f: &SpanCell, g: &SpanCell, cap: u64) -> Result<Vec<SpanTwoCell>> {
    same_endpoints(f, g)?;
    let choices: Vec<Vec<usize>> = (0..f.apex.len())
        .map(|s| g.fiber(f.leg_src[s], f.leg_tgt[s]))
        .collect();
    let (fa, ga) = (Arc::new(f.clone()), Arc::new(g.clone()));
    Ok(product_of_choices(&choices, cap, "span 2-cells")?
        .into_iter()
        .map(|map| SpanTwoCell {
            src_cell: fa.clone(),
            tgt_cell: ga.clone(),
            map,
        })
        .collect())
}

fn diagonal(a: &FinSet) -> Vec<usize> {
    (0..a.len()).map(|i| i * a.len() + i).collect()
}

fn index_vec(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Span(FinSet) with its compact closed structure.
#[derive(Clone, Debug, Default)]
pub struct Span {
    pub limits: Limits,
}

impl Span {
    pub fn new(limits: Limits) -> Self {
        Span { limits }
    }

    fn cap(&self) -> u64 {
        self.limits.max_candidates
    }

    fn section_index(&self, f: &SpanCell) -> Result<HashMap<Vec<usize>, usize>> {
        Ok(f.sections(self.cap())?
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect())
    }

    fn loop_index(f: &SpanCell) -> HashMap<usize, usize> {
        f.loops()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect()
    }

    /// Index of `(a, a', x)` in the closed cospread apex.
    fn cospread_index(s_len: usize, n: usize, a: usize, b: usize, x: Option<usize>) -> usize {
        // rows before a: each contributes (n - 1) off-diagonal elements and s_len diagonal ones
        let before = a * (n - 1 + s_len);
        if a == b {
            before + a + x.expect("diagonal element needs a scalar element")
        } else if b < a {
            before + b
        } else {
            before + a + s_len + (b - a - 1)
        }
    }
}

impl Bicategory for Span {
    type Obj = FinSet;
    type Cell = SpanCell;
    type Two = SpanTwoCell;

    fn instance(&self) -> Instance {
        Instance::Span
    }

    fn limits(&self) -> Limits {
        self.limits
    }

    fn src(&self, f: &SpanCell) -> FinSet {
        f.src.clone()
    }

    fn tgt(&self, f: &SpanCell) -> FinSet {
        f.tgt.clone()
    }

    fn identity(&self, a: &FinSet) -> SpanCell {
        SpanCell::identity(a)
    }

    fn compose(&self, f: &SpanCell, g: &SpanCell) -> Result<SpanCell> {
        span_compose(f, g)
    }

    fn two_src(&self, a: &SpanTwoCell) -> SpanCell {
        (*a.src_cell).clone()
    }

    fn two_tgt(&self, a: &SpanTwoCell) -> SpanCell {
        (*a.tgt_cell).clone()
    }

    fn id2(&self, f: &SpanCell) -> SpanTwoCell {
        let f = Arc::new(f.clone());
        SpanTwoCell {
            src_cell: f.clone(),
            tgt_cell: f.clone(),
            map: index_vec(f.apex.len()),
        }
    }

    fn vcomp(&self, a: &SpanTwoCell, b: &SpanTwoCell) -> Result<SpanTwoCell> {
        if a.tgt_cell != b.src_cell {
            return Err(Error::EndpointMismatch(
                "vertical composite of span maps".into(),
            ));
        }
        Ok(SpanTwoCell {
            src_cell: a.src_cell.clone(),
            tgt_cell: b.tgt_cell.clone(),
            map: a.map.iter().map(|&x| b.map[x]).collect(),
        })
    }

    fn hcomp(&self, a: &SpanTwoCell, b: &SpanTwoCell) -> Result<SpanTwoCell> {
        let src = span_compose(&a.src_cell, &b.src_cell)?;
        let tgt = span_compose(&a.tgt_cell, &b.tgt_cell)?;
        let index = pair_index(&a.tgt_cell, &b.tgt_cell);
        let map = compose_pairs(&a.src_cell, &b.src_cell)
            .into_iter()
            .map(|(s, t)| index[&(a.map[s], b.map[t])])
            .collect();
        SpanTwoCell::new(src, tgt, map)
    }

    fn two_cells(&self, f: &SpanCell, g: &SpanCell) -> Result<Vec<SpanTwoCell>> {
        span_two_cells(f, g, self.cap())
    }

    fn invert(&self, a: &SpanTwoCell) -> Option<SpanTwoCell> {
        let n = a.tgt_cell.apex.len();
        if a.map.len() != n {
            return None;
        }
        let mut inv = vec![usize::MAX; n];
        for (x, &y) in a.map.iter().enumerate() {
            if inv[y] != usize::MAX {
                return None;
            }
            inv[y] = x;
        }
        Some(SpanTwoCell {
            src_cell: a.tgt_cell.clone(),
            tgt_cell: a.src_cell.clone(),
            map: inv,
        })
    }

    /// Matches fibers over each pair of endpoints in apex order; complete,
    /// since an isomorphism exists exactly when every fiber has the same size.
    fn find_iso(&self, f: &SpanCell, g: &SpanCell) -> IsoSearch<SpanTwoCell> {
        if same_endpoints(f, g).is_err() || f.apex.len() != g.apex.len() {
            return IsoSearch::Absent;
        }
        let mut fibers: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for y in 0..g.apex.len() {
            fibers
                .entry((g.leg_src[y], g.leg_tgt[y]))
                .or_default()
                .push(y);
        }
        let mut used: HashMap<(usize, usize), usize> = HashMap::new();
        let mut map = Vec::with_capacity(f.apex.len());
        for x in 0..f.apex.len() {
            let key = (f.leg_src[x], f.leg_tgt[x]);
            let next = used.entry(key).or_insert(0);
            match fibers.get(&key).and_then(|v| v.get(*next)) {
                Some(&y) => {
                    map.push(y);
                    *next += 1;
                }
                None => return IsoSearch::Absent,
            }
        }
        match SpanTwoCell::new(f.clone(), g.clone(), map) {
            Ok(t) => IsoSearch::Found(t),
            Err(_) => IsoSearch::Absent,
        }
    }

    fn unitor_after(&self, f: &SpanCell) -> Result<SpanTwoCell> {
        let c = span_compose(f, &SpanCell::identity(&f.tgt))?;
        let map = compose_pairs(f, &SpanCell::identity(&f.tgt))
            .into_iter()
            .map(|(s, _)| s)
            .collect();
        SpanTwoCell::new(c, f.clone(), map)
    }

    fn unitor_after_inv(&self, f: &SpanCell) -> Result<SpanTwoCell> {
        let id = SpanCell::identity(&f.tgt);
        let index = pair_index(f, &id);
        let map = (0..f.apex.len())
            .map(|s| index[&(s, f.leg_tgt[s])])
            .collect();
        SpanTwoCell::new(f.clone(), span_compose(f, &id)?, map)
    }

    fn unitor_before(&self, f: &SpanCell) -> Result<SpanTwoCell> {
        let id = SpanCell::identity(&f.src);
        let map = compose_pairs(&id, f).into_iter().map(|(_, s)| s).collect();
        SpanTwoCell::new(span_compose(&id, f)?, f.clone(), map)
    }

    fn unitor_before_inv(&self, f: &SpanCell) -> Result<SpanTwoCell> {
        let id = SpanCell::identity(&f.src);
        let index = pair_index(&id, f);
        let map = (0..f.apex.len())
            .map(|s| index[&(f.leg_src[s], s)])
            .collect();
        SpanTwoCell::new(f.clone(), span_compose(&id, f)?, map)
    }

    fn associator(&self, f: &SpanCell, g: &SpanCell, h: &SpanCell) -> Result<SpanTwoCell> {
        let fg = span_compose(f, g)?;
        let gh = span_compose(g, h)?;
        let fg_pairs = compose_pairs(f, g);
        let gh_index = pair_index(g, h);
        let right_index = pair_index(f, &gh);
        let map = compose_pairs(&fg, h)
            .into_iter()
            .map(|(st, u)| {
                let (s, t) = fg_pairs[st];
                right_index[&(s, gh_index[&(t, u)])]
            })
            .collect();
        SpanTwoCell::new(span_compose(&fg, h)?, span_compose(f, &gh)?, map)
    }

    fn lift(&self, f: &SpanCell, g: &SpanCell) -> Result<Lift<SpanCell, SpanTwoCell>> {
        let cell = span_lift(f, g, self.cap())?;
        let elements = lift_elements(f, g, self.cap())?;
        let positions: Vec<usize> = {
            // position of each f-apex element inside its source fiber
            let mut seen = vec![0usize; f.src.len()];
            f.leg_src
                .iter()
                .map(|&b| {
                    seen[b] += 1;
                    seen[b] - 1
                })
                .collect()
        };
        let map = compose_pairs(&cell, f)
            .into_iter()
            .map(|(l, s)| elements[l].images[positions[s]])
            .collect();
        let eval = SpanTwoCell::new(span_compose(&cell, f)?, g.clone(), map)?;
        Ok(Lift { cell, eval })
    }

    fn lift_factor(
        &self,
        f: &SpanCell,
        lift: &Lift<SpanCell, SpanTwoCell>,
        h: &SpanCell,
        gamma: &SpanTwoCell,
    ) -> Result<SpanTwoCell> {
        let g = &*lift.eval.tgt_cell;
        if *gamma.src_cell != span_compose(h, f)? || *gamma.tgt_cell != *g {
            return Err(Error::EndpointMismatch("factorization endpoints".into()));
        }
        let elements = lift_elements(f, g, self.cap())?;
        let lookup: HashMap<(usize, usize, &[usize]), usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.a, e.b, e.images.as_slice()), i))
            .collect();
        let hf = pair_index(h, f);
        let mut map = Vec::with_capacity(h.apex.len());
        for t in 0..h.apex.len() {
            let (a, b) = (h.leg_src[t], h.leg_tgt[t]);
            let images: Vec<usize> = (0..f.apex.len())
                .filter(|&s| f.leg_src[s] == b)
                .map(|s| gamma.map[hf[&(t, s)]])
                .collect();
            let i = lookup
                .get(&(a, b, images.as_slice()))
                .ok_or_else(|| Error::Invalid {
                    what: "lift factorization",
                    detail: format!("no lift element matches {}", h.apex.label(t)),
                })?;
            // `lift.cell` may differ from the recomputed lift; address by label
            let want = span_lift_label(f, g, &elements[*i]);
            let j = lift
                .cell
                .apex
                .index_of(&want)
                .ok_or_else(|| Error::Invalid {
                    what: "lift factorization",
                    detail: format!("lift has no element {want}"),
                })?;
            map.push(j);
        }
        SpanTwoCell::new(h.clone(), lift.cell.clone(), map)
    }

    fn unit(&self) -> FinSet {
        FinSet::unit()
    }

    fn tensor_obj(&self, a: &FinSet, b: &FinSet) -> FinSet {
        a.product(b)
    }

    fn tensor(&self, f: &SpanCell, g: &SpanCell) -> Result<SpanCell> {
        Ok(span_tensor(f, g))
    }

    fn braid(&self, a: &FinSet, b: &FinSet) -> SpanCell {
        let (n, m) = (a.len(), b.len());
        SpanCell::from_function(
            &a.product(b),
            &b.product(a),
            (0..n * m).map(|k| (k % m) * n + k / m).collect(),
        )
    }

    fn dual_obj(&self, a: &FinSet) -> FinSet {
        a.clone()
    }

    fn ev(&self, a: &FinSet) -> SpanCell {
        SpanCell {
            src: a.product(a),
            tgt: FinSet::unit(),
            apex: a.clone(),
            leg_src: diagonal(a),
            leg_tgt: vec![0; a.len()],
        }
    }

    fn coev(&self, a: &FinSet) -> SpanCell {
        self.ev(a).reversed()
    }

    fn dual_cell(&self, f: &SpanCell) -> SpanCell {
        f.reversed()
    }

    fn lunit(&self, a: &FinSet) -> SpanCell {
        SpanCell::from_function(&FinSet::unit().product(a), a, index_vec(a.len()))
    }

    fn lunit_inv(&self, a: &FinSet) -> SpanCell {
        SpanCell::from_function(a, &FinSet::unit().product(a), index_vec(a.len()))
    }

    fn runit(&self, a: &FinSet) -> SpanCell {
        SpanCell::from_function(&a.product(&FinSet::unit()), a, index_vec(a.len()))
    }

    fn runit_inv(&self, a: &FinSet) -> SpanCell {
        SpanCell::from_function(a, &a.product(&FinSet::unit()), index_vec(a.len()))
    }

    fn assoc(&self, a: &FinSet, b: &FinSet, c: &FinSet) -> SpanCell {
        let left = a.product(b).product(c);
        let n = left.len();
        SpanCell::from_function(&left, &a.product(&b.product(c)), index_vec(n))
    }

    fn assoc_inv(&self, a: &FinSet, b: &FinSet, c: &FinSet) -> SpanCell {
        let right = a.product(&b.product(c));
        let n = right.len();
        SpanCell::from_function(&right, &a.product(b).product(c), index_vec(n))
    }
}

fn span_lift_label(f: &SpanCell, g: &SpanCell, e: &LiftElement) -> String {
    let dom: Vec<usize> = (0..f.apex.len()).filter(|&s| f.leg_src[s] == e.b).collect();
    let graph = label::graph(
        dom.iter()
            .zip(&e.images)
            .map(|(&s, &u)| (f.apex.label(s), g.apex.label(u))),
    );
    label::pair(&label::pair(g.src.label(e.a), f.src.label(e.b)), &graph)
}

impl Concrete for Span {
    fn trace_closed(&self, f: &SpanCell) -> Result<SpanCell> {
        span_trace_closed(f)
    }

    fn cotrace_closed(&self, f: &SpanCell) -> Result<SpanCell> {
        span_cotrace_closed(f, self.cap())
    }

    /// `A ← S×A → A` with both legs the projection.
    fn spread_closed(&self, s: &SpanCell, a: &FinSet) -> Result<SpanCell> {
        let n = a.len();
        let proj: Vec<usize> = (0..s.apex.len() * n).map(|k| k % n).collect();
        SpanCell::new(a.clone(), a.clone(), s.apex.product(a), proj.clone(), proj)
    }

    /// `S` over each diagonal pair, a single point elsewhere.
    fn cospread_closed(&self, s: &SpanCell, a: &FinSet) -> Result<SpanCell> {
        let mut labels = Vec::new();
        let (mut ls, mut lt) = (Vec::new(), Vec::new());
        for x in 0..a.len() {
            for y in 0..a.len() {
                let base = label::pair(a.label(x), a.label(y));
                if x == y {
                    for e in s.apex.labels() {
                        labels.push(label::pair(&base, e));
                        ls.push(x);
                        lt.push(y);
                    }
                } else {
                    labels.push(base);
                    ls.push(x);
                    lt.push(y);
                }
            }
        }
        SpanCell::new(a.clone(), a.clone(), FinSet::from_distinct(labels), ls, lt)
    }

    fn trace_closed_map(&self, phi: &SpanTwoCell) -> Result<SpanTwoCell> {
        let (f, g) = (&*phi.src_cell, &*phi.tgt_cell);
        let target = Self::loop_index(g);
        let map = f.loops().into_iter().map(|s| target[&phi.map[s]]).collect();
        SpanTwoCell::new(span_trace_closed(f)?, span_trace_closed(g)?, map)
    }

    fn cotrace_closed_map(&self, phi: &SpanTwoCell) -> Result<SpanTwoCell> {
        let (f, g) = (&*phi.src_cell, &*phi.tgt_cell);
        let target = self.section_index(g)?;
        let map = f
            .sections(self.cap())?
            .into_iter()
            .map(|alpha| {
                let moved: Vec<usize> = alpha.iter().map(|&s| phi.map[s]).collect();
                target[&moved]
            })
            .collect();
        SpanTwoCell::new(self.cotrace_closed(f)?, self.cotrace_closed(g)?, map)
    }

    fn spread_closed_map(&self, sigma: &SpanTwoCell, a: &FinSet) -> Result<SpanTwoCell> {
        let n = a.len();
        let map = (0..sigma.src_cell.apex.len() * n)
            .map(|k| sigma.map[k / n] * n + k % n)
            .collect();
        SpanTwoCell::new(
            self.spread_closed(&sigma.src_cell, a)?,
            self.spread_closed(&sigma.tgt_cell, a)?,
            map,
        )
    }

    fn cospread_closed_map(&self, sigma: &SpanTwoCell, a: &FinSet) -> Result<SpanTwoCell> {
        let n = a.len();
        let (sl, tl) = (sigma.src_cell.apex.len(), sigma.tgt_cell.apex.len());
        let mut map = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    for e in 0..sl {
                        map.push(Self::cospread_index(tl, n, x, y, Some(sigma.map[e])));
                    }
                } else {
                    map.push(Self::cospread_index(tl, n, x, y, None));
                }
            }
        }
        SpanTwoCell::new(
            self.cospread_closed(&sigma.src_cell, a)?,
            self.cospread_closed(&sigma.tgt_cell, a)?,
            map,
        )
    }

    fn spread_transpose(
        &self,
        s: &SpanCell,
        f: &SpanCell,
        alpha: &SpanTwoCell,
    ) -> Result<SpanTwoCell> {
        let a = &f.src;
        if *alpha.src_cell != self.spread_closed(s, a)? || *alpha.tgt_cell != *f {
            return Err(Error::EndpointMismatch("spread transpose".into()));
        }
        let n = a.len();
        let index = self.section_index(f)?;
        let map = (0..s.apex.len())
            .map(|x| {
                let section: Vec<usize> = (0..n).map(|i| alpha.map[x * n + i]).collect();
                index[&section]
            })
            .collect();
        SpanTwoCell::new(s.clone(), self.cotrace_closed(f)?, map)
    }

    fn trace_transpose(
        &self,
        f: &SpanCell,
        s: &SpanCell,
        beta: &SpanTwoCell,
    ) -> Result<SpanTwoCell> {
        let a = &f.src;
        if *beta.src_cell != span_trace_closed(f)? || *beta.tgt_cell != *s {
            return Err(Error::EndpointMismatch("trace transpose".into()));
        }
        let loops = Self::loop_index(f);
        let n = a.len();
        let map = (0..f.apex.len())
            .map(|t| {
                let (x, y) = (f.leg_src[t], f.leg_tgt[t]);
                let e = loops.get(&t).map(|&l| beta.map[l]);
                Self::cospread_index(s.apex.len(), n, x, y, e)
            })
            .collect();
        SpanTwoCell::new(f.clone(), self.cospread_closed(s, a)?, map)
    }

    fn scalar_size(&self, s: &SpanCell) -> usize {
        s.apex.len()
    }

    fn scalar_labels(&self, s: &SpanCell) -> Vec<String> {
        s.apex.labels().to_vec()
    }

    fn scalar_apply(&self, a: &SpanTwoCell, element: usize) -> usize {
        a.map[element]
    }

    fn cotrace_element(&self, f: &SpanCell, i: usize) -> Result<SpanTwoCell> {
        let sections = f.sections(self.cap())?;
        let alpha = sections.get(i).ok_or_else(|| Error::Invalid {
            what: "cotrace element",
            detail: format!("index {i} of {} sections", sections.len()),
        })?;
        SpanTwoCell::new(SpanCell::identity(&f.src), f.clone(), alpha.clone())
    }

    fn cotrace_index(&self, f: &SpanCell, alpha: &SpanTwoCell) -> Result<usize> {
        if *alpha.tgt_cell != *f || *alpha.src_cell != SpanCell::identity(&f.src) {
            return Err(Error::EndpointMismatch("cotrace element".into()));
        }
        self.section_index(f)?
            .get(&alpha.map)
            .copied()
            .ok_or_else(|| Error::Invalid {
                what: "cotrace element",
                detail: "map is not a section".into(),
            })
    }

    fn pairing(&self, g: &SpanCell, f: &SpanCell, z: usize, x: usize) -> Result<usize> {
        let loops = g.loops();
        let t = *loops.get(z).ok_or_else(|| Error::Invalid {
            what: "pairing",
            detail: format!("trace element {z} out of range"),
        })?;
        let sections = f.sections(self.cap())?;
        let alpha = sections.get(x).ok_or_else(|| Error::Invalid {
            what: "pairing",
            detail: format!("cotrace element {x} out of range"),
        })?;
        let a = g.leg_src[t];
        let composite = span_compose(f, g)?;
        let pos = pair_index(f, g)[&(alpha[a], t)];
        Self::loop_index(&composite)
            .get(&pos)
            .copied()
            .ok_or_else(|| Error::Invalid {
                what: "pairing",
                detail: "paired element is not a loop".into(),
            })
    }

    fn scalar_braid(&self, s: &SpanCell, t: &SpanCell) -> Result<SpanTwoCell> {
        let (ns, nt) = (s.apex.len(), t.apex.len());
        let map = (0..nt * ns).map(|k| (k % ns) * nt + k / ns).collect();
        SpanTwoCell::new(span_compose(t, s)?, span_compose(s, t)?, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicat;

    fn point() -> FinSet {
        FinSet::new(["0"]).unwrap()
    }

    fn const_span(apex: &[&str]) -> SpanCell {
        SpanCell::new(
            point(),
            point(),
            FinSet::new(apex.iter().copied()).unwrap(),
            vec![0; apex.len()],
            vec![0; apex.len()],
        )
        .unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = const_span(&["x", "y"]);
        assert_eq!(span_compose(&f, &f).unwrap().apex.len(), 4);
        let e = SpanCell::empty(&point(), &point());
        assert_eq!(span_compose(&e, &f).unwrap().apex.len(), 0);
        let b = Span::default();
        let idf = span_compose(&SpanCell::identity(&point()), &f).unwrap();
        assert!(b.find_iso(&idf, &f).is_found());
    }

    #[test]
    fn capabilities() {
        let b = Span::default();
        let a = FinSet::range(2);
        let f = SpanCell::new(
            a.clone(),
            a.clone(),
            FinSet::new(["p", "q", "r"]).unwrap(),
            vec![0, 1, 1],
            vec![1, 0, 1],
        )
        .unwrap();
        assert_eq!(f.reversed().reversed(), f);
        assert_eq!(
            span_tensor(&SpanCell::identity(&a), &SpanCell::identity(&a)),
            SpanCell::identity(&a.product(&a))
        );
        let c = b.coev(&a);
        assert_eq!(c.apex, a);
        assert_eq!(c.leg_tgt, vec![0, 3]);
    }

    #[test]
    fn lift_examples() {
        let b = Span::default();
        let a = FinSet::range(2);
        let g = SpanCell::new(
            a.clone(),
            a.clone(),
            FinSet::new(["p", "q", "r"]).unwrap(),
            vec![0, 1, 1],
            vec![1, 0, 1],
        )
        .unwrap();
        let l = span_lift(&SpanCell::identity(&a), &g, 1000).unwrap();
        assert!(b.find_iso(&l, &g).is_found());
        let f = const_span(&["x", "y"]);
        let h = const_span(&["u"]);
        assert_eq!(span_lift(&f, &h, 1000).unwrap().apex.len(), 1);
    }

    #[test]
    fn closed_forms() {
        let a = FinSet::range(3);
        let id = SpanCell::identity(&a);
        assert_eq!(span_trace_closed(&id).unwrap().apex.len(), 3);
        assert_eq!(span_cotrace_closed(&id, 100).unwrap().apex.len(), 1);
        let e = SpanCell::empty(&a, &a);
        assert_eq!(span_trace_closed(&e).unwrap().apex.len(), 0);
        assert_eq!(span_cotrace_closed(&e, 100).unwrap().apex.len(), 0);
        let c = const_span(&["x", "y"]);
        assert_eq!(span_cotrace_closed(&c, 100).unwrap().apex.len(), 2);
        // both apex elements are loops over the single point
        assert_eq!(span_trace_closed(&c).unwrap().apex.len(), 2);
    }

    #[test]
    fn two_cell_examples() {
        let c = const_span(&["x", "y"]);
        let cells = span_two_cells(&c, &c, 100).unwrap();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().any(|t| t.map == vec![0, 1]));
        let e = SpanCell::empty(&point(), &point());
        assert_eq!(span_two_cells(&e, &c, 100).unwrap().len(), 1);
        assert!(span_two_cells(&c, &c, 3).unwrap_err().is_budget());
    }

    #[test]
    fn name_of_identity_is_diagonal_coev() {
        let b = Span::default();
        let a = FinSet::range(2);
        let n = bicat::name(&b, &SpanCell::identity(&a)).unwrap();
        assert!(b.find_iso(&n, &b.coev(&a)).is_found());
    }

    #[test]
    fn generic_trace_counts_loops() {
        let b = Span::default();
        let c = const_span(&["x", "y"]);
        let t = bicat::trace(&b, &c).unwrap();
        assert_eq!(t.apex.len(), 2);
        let a = FinSet::range(2);
        let swap = SpanCell::new(
            a.clone(),
            a.clone(),
            FinSet::new(["s"]).unwrap(),
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(bicat::trace(&b, &swap).unwrap().apex.len(), 0);
    }

    #[test]
    fn cospread_index_layout() {
        let b = Span::default();
        let a = FinSet::range(3);
        let s = SpanCell::scalar(FinSet::new(["u", "v"]).unwrap());
        let c = b.cospread_closed(&s, &a).unwrap();
        for (k, (&x, &y)) in c.leg_src.iter().zip(&c.leg_tgt).enumerate() {
            let e = if x == y {
                Some(c.apex.label(k).ends_with('v') as usize)
            } else {
                None
            };
            assert_eq!(Span::cospread_index(2, 3, x, y, e), k);
        }
    }

    #[test]
    fn generic_constructions_match_closed_forms() {
        let b = Span::default();
        let a = FinSet::range(2);
        let f = SpanCell::new(
            a.clone(),
            a.clone(),
            FinSet::new(["p", "q", "r"]).unwrap(),
            vec![0, 1, 1],
            vec![0, 0, 1],
        )
        .unwrap();
        for g in [f.clone(), SpanCell::identity(&a), SpanCell::empty(&a, &a)] {
            let t = bicat::trace(&b, &g).unwrap();
            assert!(b.find_iso(&t, &b.trace_closed(&g).unwrap()).is_found());
            let c = bicat::cotrace(&b, &g).unwrap();
            assert!(b.find_iso(&c, &b.cotrace_closed(&g).unwrap()).is_found());
        }
        let s = SpanCell::scalar(FinSet::new(["u", "v"]).unwrap());
        let sp = bicat::spread(&b, &s, &a).unwrap();
        assert!(b
            .find_iso(&sp, &b.spread_closed(&s, &a).unwrap())
            .is_found());
        let cs = bicat::cospread(&b, &s, &a).unwrap();
        assert!(b
            .find_iso(&cs, &b.cospread_closed(&s, &a).unwrap())
            .is_found());
    }

    #[test]
    fn codimension_monoids_agree() {
        let b = Span::default();
        let a = FinSet::range(2);
        let m1 = bicat::codim_monoid_enriched(&b, &a).unwrap();
        let m2 = bicat::codim_monoid_unitor(&b, &a).unwrap();
        let m3 = bicat::codim_monoid_lift_monad(&b, &a).unwrap();
        for m in [&m1, &m2, &m3] {
            m.check().unwrap();
        }
        assert_eq!(m1.len(), 1);
        assert!(m1.isomorphism_to(&m2).is_some());
        assert!(m1.isomorphism_to(&m3).is_some());
    }
}
