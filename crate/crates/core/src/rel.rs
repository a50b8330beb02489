//! Finite sets and relations.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bicat::{Bicategory, Concrete, Instance, IsoSearch, Lift};
use crate::error::{Error, Limits, Result};
use crate::finset::FinSet;

/// A relation `src → tgt` as a set of index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelCell {
    pub src: FinSet,
    pub tgt: FinSet,
    pairs: BTreeSet<(usize, usize)>,
}

impl RelCell {
    pub fn new(
        src: FinSet,
        tgt: FinSet,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs
            .iter()
            .find(|&&(a, b)| a >= src.len() || b >= tgt.len())
        {
            return Err(Error::Invalid {
                what: "relation",
                detail: format!("pair ({a}, {b}) outside {} × {}", src.len(), tgt.len()),
            });
        }
        Ok(RelCell { src, tgt, pairs })
    }

    pub fn from_labels(src: FinSet, tgt: FinSet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut out = BTreeSet::new();
        for (a, b) in pairs {
            let i = src.index_of(a).ok_or_else(|| Error::Invalid {
                what: "relation",
                detail: format!("unknown source element {a:?}"),
            })?;
            let j = tgt.index_of(b).ok_or_else(|| Error::Invalid {
                what: "relation",
                detail: format!("unknown target element {b:?}"),
            })?;
            out.insert((i, j));
        }
        Ok(RelCell {
            src,
            tgt,
            pairs: out,
        })
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn identity(a: &FinSet) -> Self {
        RelCell {
            src: a.clone(),
            tgt: a.clone(),
            pairs: (0..a.len()).map(|i| (i, i)).collect(),
        }
    }

    pub fn empty(src: &FinSet, tgt: &FinSet) -> Self {
        RelCell {
            src: src.clone(),
            tgt: tgt.clone(),
            pairs: BTreeSet::new(),
        }
    }

    pub fn full(src: &FinSet, tgt: &FinSet) -> Self {
        let pairs = (0..src.len())
            .flat_map(|a| (0..tgt.len()).map(move |b| (a, b)))
            .collect();
        RelCell {
            src: src.clone(),
            tgt: tgt.clone(),
            pairs,
        }
    }

    /// Graph of a function given as target indices.
    pub fn graph(src: &FinSet, tgt: &FinSet, map: &[usize]) -> Self {
        RelCell {
            src: src.clone(),
            tgt: tgt.clone(),
            pairs: map.iter().enumerate().map(|(a, &b)| (a, b)).collect(),
        }
    }

    /// `{(*,*)}` when `inhabited`, else `∅`.
    pub fn scalar(inhabited: bool) -> Self {
        let i = FinSet::unit();
        if inhabited {
            RelCell::identity(&i)
        } else {
            RelCell::empty(&i, &i)
        }
    }

    pub fn transpose(&self) -> Self {
        RelCell {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn is_subset(&self, other: &RelCell) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// All relations `src → tgt`, in binary-counter order over pairs.
    pub fn all(src: &FinSet, tgt: &FinSet) -> Vec<RelCell> {
        let cells: Vec<(usize, usize)> = (0..src.len())
            .flat_map(|a| (0..tgt.len()).map(move |b| (a, b)))
            .collect();
        assert!(cells.len() < 32, "relation space too large to list");
        (0u64..1 << cells.len())
            .map(|mask| RelCell {
                src: src.clone(),
                tgt: tgt.clone(),
                pairs: cells
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect(),
            })
            .collect()
    }
}

/// Inclusion witness `src_cell ⊆ tgt_cell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelTwoCell {
    pub src_cell: Arc<RelCell>,
    pub tgt_cell: Arc<RelCell>,
}

impl RelTwoCell {
    pub fn new(src: RelCell, tgt: RelCell) -> Result<Self> {
        if src.src != tgt.src || src.tgt != tgt.tgt {
            return Err(Error::EndpointMismatch("relation 2-cell endpoints".into()));
        }
        if !src.is_subset(&tgt) {
            return Err(Error::Invalid {
                what: "relation 2-cell",
                detail: "source relation is not contained in the target".into(),
            });
        }
        Ok(RelTwoCell {
            src_cell: Arc::new(src),
            tgt_cell: Arc::new(tgt),
        })
    }
}

fn same_endpoints(f: &RelCell, g: &RelCell) -> Result<()> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(Error::EndpointMismatch(
            "relations with different endpoints".into(),
        ));
    }
    Ok(())
}

/// `s∘r`: pairs `(a, c)` with some `b` such that `a r b` and `b s c`.
pub fn rel_compose(r: &RelCell, s: &RelCell) -> Result<RelCell> {
    if r.tgt != s.src {
        return Err(Error::EndpointMismatch("relation composite".into()));
    }
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); s.src.len()];
    for &(b, c) in &s.pairs {
        by_src[b].push(c);
    }
    let pairs = r
        .pairs
        .iter()
        .flat_map(|&(a, b)| by_src[b].iter().map(move |&c| (a, c)))
        .collect();
    Ok(RelCell {
        src: r.src.clone(),
        tgt: s.tgt.clone(),
        pairs,
    })
}

/// Right lift of `s: A → C` through `r: B → C`.
pub fn rel_lift(r: &RelCell, s: &RelCell) -> Result<RelCell> {
    if r.tgt != s.tgt {
        return Err(Error::EndpointMismatch("relation lift".into()));
    }
    let mut pairs = BTreeSet::new();
    for a in 0..s.src.len() {
        for b in 0..r.src.len() {
            let ok = r
                .pairs
                .range((b, 0)..(b + 1, 0))
                .all(|&(_, c)| s.contains(a, c));
            if ok {
                pairs.insert((a, b));
            }
        }
    }
    Ok(RelCell {
        src: s.src.clone(),
        tgt: r.src.clone(),
        pairs,
    })
}

/// Product relation on product sets.
pub fn rel_tensor(r: &RelCell, s: &RelCell) -> RelCell {
    let (n, m) = (s.src.len(), s.tgt.len());
    let pairs = r
        .pairs
        .iter()
        .flat_map(|&(a, b)| s.pairs.iter().map(move |&(c, d)| (a * n + c, b * m + d)))
        .collect();
    RelCell {
        src: r.src.product(&s.src),
        tgt: r.tgt.product(&s.tgt),
        pairs,
    }
}

/// `{(*,*)}` iff some `a r a`.
pub fn rel_trace_closed(r: &RelCell) -> Result<RelCell> {
    if !r.is_endo() {
        return Err(Error::NotEndo("relation trace".into()));
    }
    Ok(RelCell::scalar(r.pairs.iter().any(|&(a, b)| a == b)))
}

/// `{(*,*)}` iff `r` is reflexive.
pub fn rel_cotrace_closed(r: &RelCell) -> Result<RelCell> {
    if !r.is_endo() {
        return Err(Error::NotEndo("relation cotrace".into()));
    }
    Ok(RelCell::scalar((0..r.src.len()).all(|a| r.contains(a, a))))
}

/// The inclusion witness `f ⊆ g` if there is one.
pub fn rel_two_cells(f: &RelCell, g: &RelCell) -> Result<Vec<RelTwoCell>> {
    same_endpoints(f, g)?;
    Ok(RelTwoCell::new(f.clone(), g.clone()).into_iter().collect())
}

fn swap_map(a: &FinSet, b: &FinSet) -> Vec<usize> {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|k| (k % m) * n + k / m).collect()
}

fn diagonal_map(a: &FinSet) -> Vec<usize> {
    (0..a.len()).map(|i| i * a.len() + i).collect()
}

/// Rel with its compact closed structure.
#[derive(Clone, Debug, Default)]
pub struct Rel {
    pub limits: Limits,
}

impl Rel {
    pub fn new(limits: Limits) -> Self {
        Rel { limits }
    }
}

impl Bicategory for Rel {
    type Obj = FinSet;
    type Cell = RelCell;
    type Two = RelTwoCell;

    fn instance(&self) -> Instance {
        Instance::Rel
    }

    fn limits(&self) -> Limits {
        self.limits
    }

    fn src(&self, f: &RelCell) -> FinSet {
        f.src.clone()
    }

    fn tgt(&self, f: &RelCell) -> FinSet {
        f.tgt.clone()
    }

    fn identity(&self, a: &FinSet) -> RelCell {
        RelCell::identity(a)
    }

    fn compose(&self, f: &RelCell, g: &RelCell) -> Result<RelCell> {
        rel_compose(f, g)
    }

    fn two_src(&self, a: &RelTwoCell) -> RelCell {
        (*a.src_cell).clone()
    }

    fn two_tgt(&self, a: &RelTwoCell) -> RelCell {
        (*a.tgt_cell).clone()
    }

    fn id2(&self, f: &RelCell) -> RelTwoCell {
        let f = Arc::new(f.clone());
        RelTwoCell {
            src_cell: f.clone(),
            tgt_cell: f,
        }
    }

    fn vcomp(&self, a: &RelTwoCell, b: &RelTwoCell) -> Result<RelTwoCell> {
        if a.tgt_cell != b.src_cell {
            return Err(Error::EndpointMismatch(
                "vertical composite of inclusions".into(),
            ));
        }
        Ok(RelTwoCell {
            src_cell: a.src_cell.clone(),
            tgt_cell: b.tgt_cell.clone(),
        })
    }

    fn hcomp(&self, a: &RelTwoCell, b: &RelTwoCell) -> Result<RelTwoCell> {
        RelTwoCell::new(
            rel_compose(&a.src_cell, &b.src_cell)?,
            rel_compose(&a.tgt_cell, &b.tgt_cell)?,
        )
    }

    fn two_cells(&self, f: &RelCell, g: &RelCell) -> Result<Vec<RelTwoCell>> {
        rel_two_cells(f, g)
    }

    fn invert(&self, a: &RelTwoCell) -> Option<RelTwoCell> {
        (a.src_cell == a.tgt_cell).then(|| a.clone())
    }

    fn find_iso(&self, f: &RelCell, g: &RelCell) -> IsoSearch<RelTwoCell> {
        if f == g {
            IsoSearch::Found(self.id2(f))
        } else {
            IsoSearch::Absent
        }
    }

    fn unitor_after(&self, f: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(rel_compose(f, &RelCell::identity(&f.tgt))?, f.clone())
    }

    fn unitor_after_inv(&self, f: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(f.clone(), rel_compose(f, &RelCell::identity(&f.tgt))?)
    }

    fn unitor_before(&self, f: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(rel_compose(&RelCell::identity(&f.src), f)?, f.clone())
    }

    fn unitor_before_inv(&self, f: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(f.clone(), rel_compose(&RelCell::identity(&f.src), f)?)
    }

    fn associator(&self, f: &RelCell, g: &RelCell, h: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(
            rel_compose(&rel_compose(f, g)?, h)?,
            rel_compose(f, &rel_compose(g, h)?)?,
        )
    }

    fn lift(&self, f: &RelCell, g: &RelCell) -> Result<Lift<RelCell, RelTwoCell>> {
        let cell = rel_lift(f, g)?;
        let eval = RelTwoCell::new(rel_compose(&cell, f)?, g.clone())?;
        Ok(Lift { cell, eval })
    }

    fn lift_factor(
        &self,
        f: &RelCell,
        lift: &Lift<RelCell, RelTwoCell>,
        h: &RelCell,
        gamma: &RelTwoCell,
    ) -> Result<RelTwoCell> {
        if *gamma.src_cell != rel_compose(h, f)? {
            return Err(Error::EndpointMismatch("factorization source".into()));
        }
        RelTwoCell::new(h.clone(), lift.cell.clone())
    }

    fn unit(&self) -> FinSet {
        FinSet::unit()
    }

    fn tensor_obj(&self, a: &FinSet, b: &FinSet) -> FinSet {
        a.product(b)
    }

    fn tensor(&self, f: &RelCell, g: &RelCell) -> Result<RelCell> {
        Ok(rel_tensor(f, g))
    }

    fn braid(&self, a: &FinSet, b: &FinSet) -> RelCell {
        RelCell::graph(&a.product(b), &b.product(a), &swap_map(a, b))
    }

    fn dual_obj(&self, a: &FinSet) -> FinSet {
        a.clone()
    }

    fn ev(&self, a: &FinSet) -> RelCell {
        RelCell {
            src: a.product(a),
            tgt: FinSet::unit(),
            pairs: diagonal_map(a).into_iter().map(|d| (d, 0)).collect(),
        }
    }

    fn coev(&self, a: &FinSet) -> RelCell {
        RelCell {
            src: FinSet::unit(),
            tgt: a.product(a),
            pairs: diagonal_map(a).into_iter().map(|d| (0, d)).collect(),
        }
    }

    fn dual_cell(&self, f: &RelCell) -> RelCell {
        f.transpose()
    }

    fn lunit(&self, a: &FinSet) -> RelCell {
        let ia = FinSet::unit().product(a);
        RelCell::graph(&ia, a, &(0..a.len()).collect::<Vec<_>>())
    }

    fn lunit_inv(&self, a: &FinSet) -> RelCell {
        self.lunit(a).transpose()
    }

    fn runit(&self, a: &FinSet) -> RelCell {
        let ai = a.product(&FinSet::unit());
        RelCell::graph(&ai, a, &(0..a.len()).collect::<Vec<_>>())
    }

    fn runit_inv(&self, a: &FinSet) -> RelCell {
        self.runit(a).transpose()
    }

    fn assoc(&self, a: &FinSet, b: &FinSet, c: &FinSet) -> RelCell {
        let left = a.product(b).product(c);
        let right = a.product(&b.product(c));
        RelCell::graph(&left, &right, &(0..left.len()).collect::<Vec<_>>())
    }

    fn assoc_inv(&self, a: &FinSet, b: &FinSet, c: &FinSet) -> RelCell {
        self.assoc(a, b, c).transpose()
    }
}

impl Concrete for Rel {
    fn trace_closed(&self, f: &RelCell) -> Result<RelCell> {
        rel_trace_closed(f)
    }

    fn cotrace_closed(&self, f: &RelCell) -> Result<RelCell> {
        rel_cotrace_closed(f)
    }

    fn spread_closed(&self, s: &RelCell, a: &FinSet) -> Result<RelCell> {
        Ok(if s.pairs.is_empty() {
            RelCell::empty(a, a)
        } else {
            RelCell::identity(a)
        })
    }

    fn cospread_closed(&self, s: &RelCell, a: &FinSet) -> Result<RelCell> {
        let full = RelCell::full(a, a);
        Ok(if s.pairs.is_empty() {
            RelCell {
                pairs: full.pairs.iter().copied().filter(|(x, y)| x != y).collect(),
                ..full
            }
        } else {
            full
        })
    }

    fn trace_closed_map(&self, phi: &RelTwoCell) -> Result<RelTwoCell> {
        RelTwoCell::new(
            rel_trace_closed(&phi.src_cell)?,
            rel_trace_closed(&phi.tgt_cell)?,
        )
    }

    fn cotrace_closed_map(&self, phi: &RelTwoCell) -> Result<RelTwoCell> {
        RelTwoCell::new(
            rel_cotrace_closed(&phi.src_cell)?,
            rel_cotrace_closed(&phi.tgt_cell)?,
        )
    }

    fn spread_closed_map(&self, sigma: &RelTwoCell, a: &FinSet) -> Result<RelTwoCell> {
        RelTwoCell::new(
            self.spread_closed(&sigma.src_cell, a)?,
            self.spread_closed(&sigma.tgt_cell, a)?,
        )
    }

    fn cospread_closed_map(&self, sigma: &RelTwoCell, a: &FinSet) -> Result<RelTwoCell> {
        RelTwoCell::new(
            self.cospread_closed(&sigma.src_cell, a)?,
            self.cospread_closed(&sigma.tgt_cell, a)?,
        )
    }

    fn spread_transpose(&self, s: &RelCell, f: &RelCell, alpha: &RelTwoCell) -> Result<RelTwoCell> {
        if *alpha.src_cell != self.spread_closed(s, &f.src)? || *alpha.tgt_cell != *f {
            return Err(Error::EndpointMismatch("spread transpose".into()));
        }
        RelTwoCell::new(s.clone(), rel_cotrace_closed(f)?)
    }

    fn trace_transpose(&self, f: &RelCell, s: &RelCell, beta: &RelTwoCell) -> Result<RelTwoCell> {
        if *beta.src_cell != rel_trace_closed(f)? || *beta.tgt_cell != *s {
            return Err(Error::EndpointMismatch("trace transpose".into()));
        }
        RelTwoCell::new(f.clone(), self.cospread_closed(s, &f.src)?)
    }

    fn scalar_size(&self, s: &RelCell) -> usize {
        s.pairs.len()
    }

    fn scalar_labels(&self, s: &RelCell) -> Vec<String> {
        s.pairs
            .iter()
            .map(|_| crate::label::UNIT.to_string())
            .collect()
    }

    fn scalar_apply(&self, _a: &RelTwoCell, element: usize) -> usize {
        element
    }

    fn cotrace_element(&self, f: &RelCell, i: usize) -> Result<RelTwoCell> {
        if i != 0 {
            return Err(Error::Invalid {
                what: "cotrace element",
                detail: format!("index {i} in a relation scalar"),
            });
        }
        RelTwoCell::new(RelCell::identity(&f.src), f.clone())
    }

    fn cotrace_index(&self, f: &RelCell, alpha: &RelTwoCell) -> Result<usize> {
        if *alpha.tgt_cell != *f || *alpha.src_cell != RelCell::identity(&f.src) {
            return Err(Error::EndpointMismatch("cotrace element".into()));
        }
        Ok(0)
    }

    fn pairing(&self, g: &RelCell, f: &RelCell, z: usize, x: usize) -> Result<usize> {
        let fixed = rel_trace_closed(g)?;
        let reflexive = rel_cotrace_closed(f)?;
        if z >= fixed.pairs.len() || x >= reflexive.pairs.len() {
            return Err(Error::Invalid {
                what: "pairing",
                detail: "element outside scalar".into(),
            });
        }
        let target = rel_trace_closed(&rel_compose(f, g)?)?;
        if target.pairs.is_empty() {
            return Err(Error::Invalid {
                what: "pairing",
                detail: "trace of the composite is empty".into(),
            });
        }
        Ok(0)
    }

    fn scalar_braid(&self, s: &RelCell, t: &RelCell) -> Result<RelTwoCell> {
        RelTwoCell::new(rel_compose(t, s)?, rel_compose(s, t)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicat;

    fn two() -> FinSet {
        FinSet::range(2)
    }

    fn rel(pairs: &[(usize, usize)]) -> RelCell {
        RelCell::new(two(), two(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let r = rel(&[(0, 0)]);
        let s = rel(&[(0, 1)]);
        assert_eq!(rel_compose(&r, &s).unwrap(), rel(&[(0, 1)]));
        assert_eq!(rel_compose(&RelCell::identity(&two()), &s).unwrap(), s);
        assert_eq!(
            rel_compose(&RelCell::empty(&two(), &two()), &s).unwrap(),
            rel(&[])
        );
    }

    #[test]
    fn lift_examples() {
        let a = two();
        let s = rel(&[(0, 1), (1, 1)]);
        assert_eq!(rel_lift(&RelCell::identity(&a), &s).unwrap(), s);
        assert_eq!(
            rel_lift(&RelCell::empty(&a, &a), &s).unwrap(),
            RelCell::full(&a, &a)
        );
        assert_eq!(
            rel_lift(&RelCell::full(&a, &a), &RelCell::identity(&a)).unwrap(),
            rel(&[])
        );
    }

    #[test]
    fn lift_is_residual_by_brute_force() {
        // oracle: the lift is the largest t with t;r ⊆ s
        let a = two();
        for r in RelCell::all(&a, &a) {
            for s in RelCell::all(&a, &a) {
                let mut best = RelCell::empty(&a, &a);
                for t in RelCell::all(&a, &a) {
                    if rel_compose(&t, &r).unwrap().is_subset(&s) {
                        best.pairs.extend(t.pairs.iter().copied());
                    }
                }
                assert_eq!(rel_lift(&r, &s).unwrap(), best);
            }
        }
    }

    #[test]
    fn traces() {
        let i = rel(&[(0, 0), (1, 1)]);
        assert_eq!(rel_trace_closed(&i).unwrap(), RelCell::scalar(true));
        assert_eq!(
            rel_trace_closed(&rel(&[(0, 1), (1, 0)])).unwrap(),
            RelCell::scalar(false)
        );
        assert_eq!(
            rel_trace_closed(&rel(&[(0, 0)])).unwrap(),
            RelCell::scalar(true)
        );
        assert_eq!(rel_cotrace_closed(&i).unwrap(), RelCell::scalar(true));
        assert_eq!(
            rel_cotrace_closed(&rel(&[(0, 0)])).unwrap(),
            RelCell::scalar(false)
        );
        let e = FinSet::empty();
        assert_eq!(
            rel_cotrace_closed(&RelCell::empty(&e, &e)).unwrap(),
            RelCell::scalar(true)
        );
        assert!(rel_trace_closed(&RelCell::empty(&two(), &FinSet::range(3))).is_err());
    }

    #[test]
    fn two_cell_examples() {
        let a = two();
        assert_eq!(
            rel_two_cells(&RelCell::identity(&a), &RelCell::full(&a, &a))
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            rel_two_cells(&RelCell::full(&a, &a), &RelCell::identity(&a))
                .unwrap()
                .len(),
            0
        );
        let e = RelCell::empty(&a, &a);
        assert_eq!(rel_two_cells(&e, &e).unwrap().len(), 1);
    }

    #[test]
    fn capabilities() {
        let b = Rel::default();
        let a = two();
        assert_eq!(b.identity(&a), rel(&[(0, 0), (1, 1)]));
        let t = rel_tensor(
            &RelCell::identity(&a),
            &RelCell::identity(&FinSet::range(3)),
        );
        assert_eq!(t, RelCell::identity(&a.product(&FinSet::range(3))));
        assert_eq!(rel(&[(0, 1)]).transpose(), rel(&[(1, 0)]));
    }

    #[test]
    fn name_of_single_pair() {
        let b = Rel::default();
        let f = rel(&[(0, 1)]);
        let n = bicat::name(&b, &f).unwrap();
        let ba = two().product(&two());
        assert_eq!(n.tgt, ba);
        let expected: BTreeSet<(usize, usize)> = [(0, ba.index_of("1∘0").unwrap())].into();
        assert_eq!(n.pairs, expected);
    }

    #[test]
    fn generic_spread_and_cospread() {
        let b = Rel::default();
        let a = FinSet::range(3);
        let yes = RelCell::scalar(true);
        let no = RelCell::scalar(false);
        assert_eq!(bicat::spread(&b, &yes, &a).unwrap(), RelCell::identity(&a));
        assert_eq!(bicat::spread(&b, &no, &a).unwrap(), RelCell::empty(&a, &a));
        assert_eq!(
            bicat::cospread(&b, &yes, &a).unwrap(),
            RelCell::full(&a, &a)
        );
        assert_eq!(
            bicat::cospread(&b, &no, &a).unwrap(),
            b.cospread_closed(&no, &a).unwrap()
        );
        let i = FinSet::unit();
        assert_eq!(bicat::cospread(&b, &no, &i).unwrap(), no);
    }

    #[test]
    fn dims_of_empty_set() {
        let b = Rel::default();
        let (d, c) = bicat::dims(&b, &FinSet::empty()).unwrap();
        assert_eq!(d, RelCell::scalar(false));
        assert_eq!(c, RelCell::scalar(true));
    }
}
