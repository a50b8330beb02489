//! The law suite: one executable check per law id, run per instance over
//! generated or file-supplied cases, with deterministic sampling, simple
//! shrinking and replayable witnesses.
//!
//! Case generation is uniform across laws. A law declares its roles
//! (1-cells between object variables, scalars, equivalence pairs, adjoint
//! pairs, identities). Cases are enumerated exhaustively over the smallest
//! objects while the case count stays within [`EXHAUSTIVE_CASES`]; whatever
//! the exhaustive phase could not reach is then covered by `samples` random
//! cases over the whole object pool. Rel enumerates every relation, so its
//! unary laws are exhaustive up to `max_size`; Span enumerates cells only
//! over the one-point set and Prof only over the terminal category.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bicat::{self, Bicategory, Concrete, HomObject, Instance, IsoSearch, Lift};
use crate::error::{Error, Limits, Result};
use crate::file::InstanceFile;
use crate::fincat::{FinCat, FinFunctor};
use crate::finset::FinSet;
use crate::prof::{prof_compose_witness, Prof, Profunctor};
use crate::rel::{rel_compose, Rel, RelCell, RelTwoCell};
use crate::span::{compose_pairs, span_compose, Span, SpanCell, SpanTwoCell};

/// Largest number of cases the exhaustive phase may produce for one law.
pub const EXHAUSTIVE_CASES: usize = 20_000;
/// Stand-in for the witness file path in replay arguments.
pub const WITNESS_PATH: &str = "WITNESS.json";
/// 2-cells tried per naturality square.
const NATURALITY_SAMPLES: usize = 3;
/// Elements tried per element-level diagram.
const ELEMENT_SAMPLES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Counterexample,
    BudgetExceeded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Counterexample => "counterexample",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// A failing case in replayable form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub detail: String,
    /// Role names, also the cell names in `input`.
    pub roles: Vec<String>,
    /// An instance file holding the failing cells.
    pub input: serde_json::Value,
    /// CLI arguments re-running the law on `input` saved as [`WITNESS_PATH`].
    pub replay: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub instance: Instance,
    pub cases: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Deliberate faults for exercising the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Removes one element from every computed lift before checking its
    /// universal property.
    DropLiftElement,
}

impl Mutation {
    pub fn as_str(self) -> &'static str {
        match self {
            Mutation::DropLiftElement => "drop-lift-element",
        }
    }
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop-lift-element" => Ok(Mutation::DropLiftElement),
            _ => Err(Error::Invalid {
                what: "mutation",
                detail: format!("unknown mutation {s:?}; expected drop-lift-element"),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    /// Bound on set sizes, apex sizes and profunctor component sizes.
    pub max_size: usize,
    pub instances: Vec<Instance>,
    /// Law ids to run; `None` runs all.
    pub laws: Option<Vec<String>>,
    pub limits: Limits,
    pub mutate: Option<Mutation>,
    pub threads: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 200,
            max_size: 3,
            instances: vec![Instance::Rel, Instance::Span, Instance::Prof],
            laws: None,
            limits: Limits::default(),
            mutate: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |detail: String| {
            Err(Error::Invalid {
                what: "suite config",
                detail,
            })
        };
        if !(1..=4).contains(&self.max_size) {
            return bad(format!("max size {} outside 1..=4", self.max_size));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if self.threads == 0 {
            return bad("threads must be positive".into());
        }
        if let Some(laws) = &self.laws {
            for l in laws {
                if !LAWS.iter().any(|d| d.id == l) {
                    return bad(format!("unknown law {l:?}"));
                }
            }
        }
        Ok(())
    }

    fn selected(&self, law: &LawDef, instance: Instance) -> bool {
        law.only.is_none_or(|i| i == instance)
            && self
                .laws
                .as_ref()
                .is_none_or(|ls| ls.iter().any(|l| l == law.id))
    }
}

#[derive(Clone, Copy, Debug)]
enum Role {
    /// A 1-cell between two object variables.
    Cell(usize, usize),
    Scalar,
    /// An equivalence on an object and its pseudo-inverse.
    Equiv(usize),
    /// A 1-cell with a right adjoint.
    Adjoint(usize, usize),
    /// The identity on an object.
    Id(usize),
}

impl Role {
    fn vars(self) -> Vec<usize> {
        match self {
            Role::Cell(i, j) | Role::Adjoint(i, j) => vec![i, j],
            Role::Equiv(i) | Role::Id(i) => vec![i],
            Role::Scalar => vec![],
        }
    }
}

struct LawDef {
    id: &'static str,
    roles: &'static [Role],
    names: &'static [&'static str],
    /// Cells the shrinker may replace.
    shrinkable: &'static [&'static str],
    only: Option<Instance>,
}

use Role::*;

const ENDO: &[Role] = &[Cell(0, 0)];
const ENDO2: &[Role] = &[Cell(0, 0), Cell(0, 0)];
const OBJ: &[Role] = &[Id(0)];

/// Every law, in report order.
const LAWS: &[LawDef] = &[
    LawDef {
        id: "rel.residuation",
        roles: &[Cell(0, 1), Cell(1, 2), Cell(0, 2)],
        names: &["t", "r", "s"],
        shrinkable: &["t", "r", "s"],
        only: Some(Instance::Rel),
    },
    LawDef {
        id: "lift.universal",
        roles: &[Cell(1, 2), Cell(0, 2), Cell(0, 1)],
        names: &["f", "g", "h"],
        shrinkable: &["f", "g", "h"],
        only: None,
    },
    LawDef {
        id: "ext.universal",
        roles: &[Cell(0, 1), Cell(0, 2), Cell(1, 2)],
        names: &["f", "g", "h"],
        shrinkable: &["f", "g", "h"],
        only: None,
    },
    LawDef {
        id: "trace.closed_form",
        roles: ENDO,
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "cotrace.closed_form",
        roles: ENDO,
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "adjunction.spread_cotrace",
        roles: &[Scalar, Cell(0, 0), Scalar, Cell(0, 0)],
        names: &["s", "f", "s2", "f2"],
        shrinkable: &["s", "f", "s2", "f2"],
        only: None,
    },
    LawDef {
        id: "adjunction.trace_cospread",
        roles: &[Scalar, Cell(0, 0), Scalar, Cell(0, 0)],
        names: &["s", "f", "s2", "f2"],
        shrinkable: &["s", "f", "s2", "f2"],
        only: None,
    },
    LawDef {
        id: "scalar.fixed_point",
        roles: &[Scalar],
        names: &["s"],
        shrinkable: &["s"],
        only: None,
    },
    LawDef {
        id: "trace.cyclicity",
        roles: &[Cell(0, 1), Cell(1, 0)],
        names: &["f", "g"],
        shrinkable: &["f", "g"],
        only: None,
    },
    LawDef {
        id: "cotrace.cyclicity",
        roles: ENDO2,
        names: &["f", "g"],
        shrinkable: &["f", "g"],
        only: None,
    },
    LawDef {
        id: "cotrace.conjugation",
        roles: &[Cell(0, 0), Equiv(0)],
        names: &["f", "g", "g_inv"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "trace.dual_invariance",
        roles: ENDO,
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "cotrace.dual_invariance",
        roles: ENDO,
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "trace.tensor",
        roles: &[Cell(0, 0), Cell(1, 1)],
        names: &["f", "e"],
        shrinkable: &["f", "e"],
        only: None,
    },
    LawDef {
        id: "cotrace.tensor_cell",
        roles: &[Cell(0, 0), Cell(1, 1)],
        names: &["f", "e"],
        shrinkable: &["f", "e"],
        only: None,
    },
    LawDef {
        id: "linearity.copower",
        roles: &[Scalar, Cell(0, 0)],
        names: &["s", "f"],
        shrinkable: &["s", "f"],
        only: None,
    },
    LawDef {
        id: "linearity.power",
        roles: &[Scalar, Cell(0, 0)],
        names: &["s", "f"],
        shrinkable: &["s", "f"],
        only: None,
    },
    LawDef {
        id: "pairing.linear_functor",
        roles: &[Cell(0, 0), Cell(0, 0), Cell(0, 0)],
        names: &["g", "f1", "f2"],
        shrinkable: &["g", "f1", "f2"],
        only: None,
    },
    LawDef {
        id: "adjoint_relation",
        roles: &[Cell(0, 0), Scalar],
        names: &["f", "s"],
        shrinkable: &["f", "s"],
        only: None,
    },
    LawDef {
        id: "frobenius_form",
        roles: &[Adjoint(0, 1), Cell(0, 1)],
        names: &["f", "f_adj", "g"],
        shrinkable: &["g"],
        only: None,
    },
    LawDef {
        id: "enrichment.agreement",
        roles: &[Cell(0, 1), Cell(0, 1)],
        names: &["f", "g"],
        shrinkable: &["f", "g"],
        only: None,
    },
    LawDef {
        id: "enrichment.composition",
        roles: &[Cell(0, 1), Cell(0, 1), Cell(0, 1)],
        names: &["f", "g", "h"],
        shrinkable: &["f", "g", "h"],
        only: None,
    },
    LawDef {
        id: "two_trace.bijection",
        roles: ENDO,
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "codim.monoid",
        roles: OBJ,
        names: &["id"],
        shrinkable: &[],
        only: None,
    },
    LawDef {
        id: "dim.module",
        roles: OBJ,
        names: &["id"],
        shrinkable: &[],
        only: None,
    },
    LawDef {
        id: "codim.three_monoids",
        roles: OBJ,
        names: &["id"],
        shrinkable: &[],
        only: None,
    },
    LawDef {
        id: "scalar.symmetry",
        roles: &[Scalar, Scalar],
        names: &["s", "t"],
        shrinkable: &["s", "t"],
        only: None,
    },
    LawDef {
        id: "coherence",
        roles: &[Cell(0, 1), Cell(1, 2), Cell(2, 3)],
        names: &["f", "g", "h"],
        shrinkable: &["f", "g", "h"],
        only: None,
    },
    LawDef {
        id: "name.roundtrip",
        roles: &[Cell(0, 1)],
        names: &["f"],
        shrinkable: &["f"],
        only: None,
    },
    LawDef {
        id: "dual.zigzag",
        roles: OBJ,
        names: &["id"],
        shrinkable: &[],
        only: None,
    },
    LawDef {
        id: "prof.yoneda",
        roles: &[Cell(0, 1)],
        names: &["p"],
        shrinkable: &[],
        only: Some(Instance::Prof),
    },
    LawDef {
        id: "prof.composite_well_defined",
        roles: &[Cell(0, 1), Cell(1, 2)],
        names: &["p", "q"],
        shrinkable: &[],
        only: Some(Instance::Prof),
    },
];

/// All law ids in report order.
pub fn law_ids() -> Vec<&'static str> {
    LAWS.iter().map(|l| l.id).collect()
}

/// Whether `law` has a check for `instance`.
pub fn applies(law: &str, instance: Instance) -> bool {
    LAWS.iter()
        .any(|l| l.id == law && l.only.is_none_or(|i| i == instance))
}

type Obj<F> = <<F as Fixture>::B as Bicategory>::Obj;
type Cell<F> = <<F as Fixture>::B as Bicategory>::Cell;
type LiftOf<F> = Lift<Cell<F>, <<F as Fixture>::B as Bicategory>::Two>;

/// Instance-specific generators and hooks.
trait Fixture: Sync {
    type B: Concrete + Sync;
    fn bicat(&self) -> &Self::B;
    fn pool(&self) -> Vec<Obj<Self>>;
    fn size(&self, a: &Obj<Self>) -> usize;
    /// Every cell `a → b` up to the size bound, when that list is small.
    fn all_cells(&self, a: &Obj<Self>, b: &Obj<Self>) -> Option<Vec<Cell<Self>>>;
    fn random_cell(&self, a: &Obj<Self>, b: &Obj<Self>, rng: &mut ChaCha8Rng) -> Cell<Self>;
    fn equivalences(&self, a: &Obj<Self>) -> Vec<(Cell<Self>, Cell<Self>)>;
    /// Pairs `(f, f†)` with `f† ` right adjoint to `f: a → b`.
    fn adjointables(&self, a: &Obj<Self>, b: &Obj<Self>) -> Vec<(Cell<Self>, Cell<Self>)>;
    fn to_file(&self, cells: Vec<(String, Cell<Self>)>) -> InstanceFile;
    /// Strictly smaller variants of a cell, smallest change first.
    fn shrink(&self, c: &Cell<Self>) -> Vec<Cell<Self>>;
    /// The lift with one element removed, when the instance supports it.
    fn corrupt_lift(&self, f: &Cell<Self>, lift: &LiftOf<Self>) -> Result<Option<LiftOf<Self>>>;
    /// Instance-only laws.
    fn extra(&self, _id: &str, _case: &[Cell<Self>]) -> Result<Option<String>> {
        Ok(None)
    }
}

fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n > 0 && m == 0 {
        return Vec::new();
    }
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..m).map(move |y| {
                    let mut q = p.clone();
                    q.push(y);
                    q
                })
            })
            .collect();
    }
    out
}

fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter()
        .all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
}

struct RelFixture {
    b: Rel,
    max_size: usize,
}

impl Fixture for RelFixture {
    type B = Rel;

    fn bicat(&self) -> &Rel {
        &self.b
    }

    fn pool(&self) -> Vec<FinSet> {
        (0..=self.max_size).map(FinSet::range).collect()
    }

    fn size(&self, a: &FinSet) -> usize {
        a.len()
    }

    fn all_cells(&self, a: &FinSet, b: &FinSet) -> Option<Vec<RelCell>> {
        (a.len() * b.len() <= 9).then(|| RelCell::all(a, b))
    }

    fn random_cell(&self, a: &FinSet, b: &FinSet, rng: &mut ChaCha8Rng) -> RelCell {
        let mut pairs = Vec::new();
        for x in 0..a.len() {
            for y in 0..b.len() {
                if rng.gen_bool(0.5) {
                    pairs.push((x, y));
                }
            }
        }
        RelCell::new(a.clone(), b.clone(), pairs).expect("pairs are in range")
    }

    fn equivalences(&self, a: &FinSet) -> Vec<(RelCell, RelCell)> {
        functions(a.len(), a.len())
            .into_iter()
            .filter(|m| is_bijection(m))
            .map(|m| {
                let g = RelCell::graph(a, a, &m);
                let t = g.transpose();
                (g, t)
            })
            .collect()
    }

    fn adjointables(&self, a: &FinSet, b: &FinSet) -> Vec<(RelCell, RelCell)> {
        functions(a.len(), b.len())
            .into_iter()
            .map(|m| {
                let g = RelCell::graph(a, b, &m);
                let t = g.transpose();
                (g, t)
            })
            .collect()
    }

    fn to_file(&self, cells: Vec<(String, RelCell)>) -> InstanceFile {
        InstanceFile::rel(cells)
    }

    fn shrink(&self, c: &RelCell) -> Vec<RelCell> {
        c.pairs()
            .iter()
            .map(|p| {
                let rest = c.pairs().iter().filter(|q| *q != p).copied();
                RelCell::new(c.src.clone(), c.tgt.clone(), rest)
                    .expect("subset of a valid relation")
            })
            .collect()
    }

    fn corrupt_lift(
        &self,
        f: &RelCell,
        lift: &Lift<RelCell, RelTwoCell>,
    ) -> Result<Option<Lift<RelCell, RelTwoCell>>> {
        let Some(&first) = lift.cell.pairs().iter().next() else {
            return Ok(None);
        };
        let rest = lift.cell.pairs().iter().filter(|&&p| p != first).copied();
        let cell = RelCell::new(lift.cell.src.clone(), lift.cell.tgt.clone(), rest)?;
        let eval = RelTwoCell::new(rel_compose(&cell, f)?, (*lift.eval.tgt_cell).clone())?;
        Ok(Some(Lift { cell, eval }))
    }
}

struct SpanFixture {
    b: Span,
    max_size: usize,
}

fn span_shrink(c: &SpanCell) -> Vec<SpanCell> {
    (0..c.apex.len())
        .map(|drop| {
            let keep: Vec<usize> = (0..c.apex.len()).filter(|&x| x != drop).collect();
            let apex = FinSet::new(keep.iter().map(|&x| c.apex.label(x).to_string()))
                .expect("distinct labels");
            SpanCell::new(
                c.src.clone(),
                c.tgt.clone(),
                apex,
                keep.iter().map(|&x| c.leg_src[x]).collect(),
                keep.iter().map(|&x| c.leg_tgt[x]).collect(),
            )
            .expect("restriction of a valid span")
        })
        .collect()
}

impl Fixture for SpanFixture {
    type B = Span;

    fn bicat(&self) -> &Span {
        &self.b
    }

    fn pool(&self) -> Vec<FinSet> {
        (1..=self.max_size.min(3)).map(FinSet::range).collect()
    }

    fn size(&self, a: &FinSet) -> usize {
        a.len()
    }

    fn all_cells(&self, a: &FinSet, b: &FinSet) -> Option<Vec<SpanCell>> {
        (a.len() == 1 && b.len() == 1).then(|| {
            (0..=self.max_size)
                .map(|n| {
                    SpanCell::new(
                        a.clone(),
                        b.clone(),
                        FinSet::range(n),
                        vec![0; n],
                        vec![0; n],
                    )
                    .expect("constant legs")
                })
                .collect()
        })
    }

    fn random_cell(&self, a: &FinSet, b: &FinSet, rng: &mut ChaCha8Rng) -> SpanCell {
        if a.is_empty() || b.is_empty() {
            return SpanCell::empty(a, b);
        }
        let n = rng.gen_range(0..=self.max_size);
        let ls = (0..n).map(|_| rng.gen_range(0..a.len())).collect();
        let lt = (0..n).map(|_| rng.gen_range(0..b.len())).collect();
        SpanCell::new(a.clone(), b.clone(), FinSet::range(n), ls, lt).expect("legs are in range")
    }

    fn equivalences(&self, a: &FinSet) -> Vec<(SpanCell, SpanCell)> {
        functions(a.len(), a.len())
            .into_iter()
            .filter(|m| is_bijection(m))
            .map(|m| {
                let g = SpanCell::from_function(a, a, m);
                let r = g.reversed();
                (g, r)
            })
            .collect()
    }

    fn adjointables(&self, a: &FinSet, b: &FinSet) -> Vec<(SpanCell, SpanCell)> {
        functions(a.len(), b.len())
            .into_iter()
            .map(|m| {
                let g = SpanCell::from_function(a, b, m);
                let r = g.reversed();
                (g, r)
            })
            .collect()
    }

    fn to_file(&self, cells: Vec<(String, SpanCell)>) -> InstanceFile {
        InstanceFile::span(cells)
    }

    fn shrink(&self, c: &SpanCell) -> Vec<SpanCell> {
        span_shrink(c)
    }

    fn corrupt_lift(
        &self,
        f: &SpanCell,
        lift: &Lift<SpanCell, SpanTwoCell>,
    ) -> Result<Option<Lift<SpanCell, SpanTwoCell>>> {
        if lift.cell.apex.is_empty() {
            return Ok(None);
        }
        let cell = span_shrink(&lift.cell).swap_remove(0);
        let old = compose_pairs(&lift.cell, f);
        let map = compose_pairs(&cell, f)
            .into_iter()
            .map(|(s, t)| {
                let i = old
                    .iter()
                    .position(|&p| p == (s + 1, t))
                    .expect("surviving pair");
                lift.eval.map[i]
            })
            .collect();
        let eval = SpanTwoCell::new(span_compose(&cell, f)?, (*lift.eval.tgt_cell).clone(), map)?;
        Ok(Some(Lift { cell, eval }))
    }
}

/// The single-object category on `{1, e}` with `e·e = e`.
fn idempotent() -> FinCat {
    FinCat::from_monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]])
        .expect("idempotent monoid is lawful")
}

/// Cap on functors enumerated between two pool categories.
const FUNCTOR_CAP: usize = 8;

struct ProfFixture {
    b: Prof,
    max_size: usize,
    pool: Vec<FinCat>,
    /// Generated cells between pool categories, keyed by positions.
    cells: BTreeMap<(usize, usize), Vec<Profunctor>>,
}

impl ProfFixture {
    fn new(b: Prof, max_size: usize) -> Result<Self> {
        let pool = vec![
            FinCat::terminal(),
            FinCat::discrete(2),
            FinCat::walking_arrow(),
            FinCat::walking_iso(),
            FinCat::cyclic_group(2),
            FinCat::cyclic_group(3),
            FinCat::span_shape(),
            idempotent(),
        ];
        let mut fx = ProfFixture {
            b,
            max_size,
            pool,
            cells: BTreeMap::new(),
        };
        for i in 0..fx.pool.len() {
            for j in 0..fx.pool.len() {
                let cells = fx.generate(&fx.pool[i], &fx.pool[j])?;
                fx.cells.insert((i, j), cells);
            }
        }
        Ok(fx)
    }

    fn functors(&self, a: &FinCat, b: &FinCat) -> Result<Vec<FinFunctor>> {
        let mut fs = FinFunctor::enumerate(a, b, self.b.limits().max_candidates)?;
        fs.truncate(FUNCTOR_CAP);
        Ok(fs)
    }

    fn fits(&self, p: &Profunctor) -> bool {
        (0..p.tgt.num_objects())
            .all(|b| (0..p.src.num_objects()).all(|a| p.size(b, a) <= self.max_size))
    }

    fn generate(&self, a: &FinCat, b: &FinCat) -> Result<Vec<Profunctor>> {
        let mut base = vec![Profunctor::empty(a, b)];
        for n in 1..=self.max_size.min(2) {
            base.push(Profunctor::constant(a, b, &FinSet::range(n)));
        }
        for f in self.functors(a, b)? {
            base.push(Profunctor::companion(&f, a, b));
        }
        for f in self.functors(b, a)? {
            base.push(Profunctor::conjoint(&f, b, a));
        }
        base.retain(|p| self.fits(p));
        let mut out = base.clone();
        for (i, p) in base.iter().enumerate().skip(1) {
            for q in base.iter().skip(i) {
                let s = p.sum(q)?;
                if self.fits(&s) {
                    out.push(s);
                }
            }
        }
        let mut unique: Vec<Profunctor> = Vec::new();
        for p in out {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        Ok(unique)
    }

    fn position(&self, c: &FinCat) -> Option<usize> {
        self.pool.iter().position(|p| p == c)
    }
}

impl Fixture for ProfFixture {
    type B = Prof;

    fn bicat(&self) -> &Prof {
        &self.b
    }

    fn pool(&self) -> Vec<FinCat> {
        self.pool.clone()
    }

    fn size(&self, a: &FinCat) -> usize {
        a.num_morphisms()
    }

    fn all_cells(&self, a: &FinCat, b: &FinCat) -> Option<Vec<Profunctor>> {
        let t = FinCat::terminal();
        (*a == t && *b == t).then(|| {
            (0..=self.max_size)
                .map(|n| Profunctor::scalar(FinSet::range(n)))
                .collect()
        })
    }

    fn random_cell(&self, a: &FinCat, b: &FinCat, rng: &mut ChaCha8Rng) -> Profunctor {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.cells[&(i, j)]
                .choose(rng)
                .expect("the empty profunctor is always present")
                .clone(),
            _ => Profunctor::empty(a, b),
        }
    }

    fn equivalences(&self, a: &FinCat) -> Vec<(Profunctor, Profunctor)> {
        self.functors(a, a)
            .unwrap_or_default()
            .into_iter()
            .filter(|f| is_bijection(&f.obj_map) && is_bijection(&f.mor_map))
            .map(|f| {
                (
                    Profunctor::companion(&f, a, a),
                    Profunctor::conjoint(&f, a, a),
                )
            })
            .collect()
    }

    fn adjointables(&self, a: &FinCat, b: &FinCat) -> Vec<(Profunctor, Profunctor)> {
        self.functors(a, b)
            .unwrap_or_default()
            .into_iter()
            .map(|f| {
                (
                    Profunctor::companion(&f, a, b),
                    Profunctor::conjoint(&f, a, b),
                )
            })
            .collect()
    }

    fn to_file(&self, cells: Vec<(String, Profunctor)>) -> InstanceFile {
        InstanceFile::prof(cells)
    }

    fn shrink(&self, _c: &Profunctor) -> Vec<Profunctor> {
        Vec::new()
    }

    fn corrupt_lift(&self, _f: &Profunctor, _lift: &LiftOf<Self>) -> Result<Option<LiftOf<Self>>> {
        Ok(None)
    }

    fn extra(&self, id: &str, case: &[Profunctor]) -> Result<Option<String>> {
        if id != "prof.composite_well_defined" {
            return Ok(None);
        }
        let (p, q) = (&case[0], &case[1]);
        let w = prof_compose_witness(p, q)?;
        if let Err(e) = w.cell.check() {
            return Ok(Some(format!("composite is not a profunctor: {e}")));
        }
        for c in 0..q.tgt.num_objects() {
            for a in 0..p.src.num_objects() {
                for e in 0..w.quotient(c, a).len() {
                    let (b, y, x) = w.rep(c, a, e);
                    if w.class(c, a, b, y, x) != e {
                        return Ok(Some(format!(
                            "representative of class {e} at ({c},{a}) lies in another class"
                        )));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Builds the case lists for one law.
struct Gen<'a, F: Fixture> {
    fx: &'a F,
    file: Option<&'a FileData<F>>,
    rng: ChaCha8Rng,
    samples: usize,
    cap: u64,
}

struct FileData<F: Fixture> {
    objects: Vec<Obj<F>>,
    cells: Vec<(String, Cell<F>)>,
}

fn assignments(n: usize, vars: usize) -> Vec<Vec<usize>> {
    functions(vars, n)
}

impl<F: Fixture> Gen<'_, F> {
    fn cells_between(&self, a: &Obj<F>, b: &Obj<F>) -> Option<Vec<Cell<F>>> {
        let bc = self.fx.bicat();
        match self.file {
            Some(file) => Some(
                file.cells
                    .iter()
                    .filter(|(_, c)| bc.src(c) == *a && bc.tgt(c) == *b)
                    .map(|(_, c)| c.clone())
                    .collect(),
            ),
            None => self.fx.all_cells(a, b),
        }
    }

    fn options(&self, role: Role, objs: &[Obj<F>]) -> Option<Vec<Vec<Cell<F>>>> {
        let bc = self.fx.bicat();
        let singles = |v: Vec<Cell<F>>| v.into_iter().map(|c| vec![c]).collect();
        match role {
            Cell(i, j) => self.cells_between(&objs[i], &objs[j]).map(singles),
            Scalar => {
                let u = bc.unit();
                self.cells_between(&u, &u).map(singles)
            }
            Equiv(i) => Some(
                self.fx
                    .equivalences(&objs[i])
                    .into_iter()
                    .map(|(g, h)| vec![g, h])
                    .collect(),
            ),
            Adjoint(i, j) => Some(
                self.fx
                    .adjointables(&objs[i], &objs[j])
                    .into_iter()
                    .map(|(g, h)| vec![g, h])
                    .collect(),
            ),
            Id(i) => Some(vec![vec![bc.identity(&objs[i])]]),
        }
    }

    /// Cases over `objects` for every assignment whose roles are all
    /// enumerable, plus whether every assignment was.
    fn exhaustive(
        &self,
        law: &LawDef,
        objects: &[Obj<F>],
        limit: usize,
    ) -> Option<(Vec<Vec<Cell<F>>>, bool)> {
        let vars = law
            .roles
            .iter()
            .flat_map(|r| r.vars())
            .max()
            .map_or(0, |m| m + 1);
        let mut out = Vec::new();
        let mut complete = true;
        for asg in assignments(objects.len(), vars) {
            let objs: Vec<Obj<F>> = asg.iter().map(|&i| objects[i].clone()).collect();
            let mut lists = Vec::with_capacity(law.roles.len());
            for &r in law.roles {
                match self.options(r, &objs) {
                    Some(l) => lists.push(l),
                    None => {
                        complete = false;
                        lists.clear();
                        break;
                    }
                }
            }
            if lists.len() != law.roles.len() {
                continue;
            }
            let count: usize = lists.iter().map(Vec::len).product();
            if out.len() + count > limit {
                return None;
            }
            let mut partial: Vec<Vec<Cell<F>>> = vec![vec![]];
            for l in &lists {
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        l.iter().map(move |o| {
                            let mut q = p.clone();
                            q.extend(o.iter().cloned());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        Some((out, complete))
    }

    fn random_case(&mut self, law: &LawDef, pool: &[Obj<F>]) -> Option<Vec<Cell<F>>> {
        let vars = law
            .roles
            .iter()
            .flat_map(|r| r.vars())
            .max()
            .map_or(0, |m| m + 1);
        let objs: Vec<Obj<F>> = (0..vars)
            .map(|_| pool.choose(&mut self.rng).expect("non-empty pool").clone())
            .collect();
        let bc = self.fx.bicat();
        let mut case = Vec::new();
        for &r in law.roles {
            match r {
                Cell(i, j) => case.push(self.fx.random_cell(&objs[i], &objs[j], &mut self.rng)),
                Scalar => {
                    let u = bc.unit();
                    case.push(self.fx.random_cell(&u, &u, &mut self.rng));
                }
                Equiv(_) | Adjoint(_, _) => {
                    let list = self.options(r, &objs)?;
                    case.extend(list.choose(&mut self.rng)?.iter().cloned());
                }
                Id(i) => case.push(bc.identity(&objs[i])),
            }
        }
        Some(case)
    }

    fn cases(&mut self, law: &LawDef) -> Result<Vec<Vec<Cell<F>>>> {
        if let Some(file) = self.file {
            if let Some(bound) = self.bound(law, file)? {
                return Ok(vec![bound]);
            }
            let limit = usize::try_from(self.cap).unwrap_or(usize::MAX);
            return match self.exhaustive(law, &file.objects, limit) {
                Some((cases, _)) => Ok(cases),
                None => Err(Error::budget(
                    format!("cases for {}", law.id),
                    u128::from(self.cap) + 1,
                    self.cap,
                )),
            };
        }
        let mut pool = self.fx.pool();
        pool.sort_by_key(|o| self.fx.size(o));
        let mut sizes: Vec<usize> = pool.iter().map(|o| self.fx.size(o)).collect();
        sizes.dedup();
        // Cases, whether they are exhaustive, and the size bound used.
        type Choice<T> = (Vec<Vec<T>>, bool, usize);
        let mut best: Option<Choice<Cell<F>>> = None;
        for &k in &sizes {
            let objs: Vec<Obj<F>> = pool
                .iter()
                .filter(|o| self.fx.size(o) <= k)
                .cloned()
                .collect();
            match self.exhaustive(law, &objs, EXHAUSTIVE_CASES) {
                Some((cases, complete)) => best = Some((cases, complete, k)),
                None => break,
            }
        }
        let (mut cases, complete) = match best {
            Some((c, complete, k)) => (c, complete && k == *sizes.last().expect("non-empty pool")),
            None => (Vec::new(), false),
        };
        if !complete {
            let mut drawn = 0;
            for _ in 0..self.samples * 20 {
                if drawn == self.samples {
                    break;
                }
                if let Some(c) = self.random_case(law, &pool) {
                    cases.push(c);
                    drawn += 1;
                }
            }
        }
        Ok(cases)
    }

    /// The case named by role in the file, if the file names every role.
    fn bound(&self, law: &LawDef, file: &FileData<F>) -> Result<Option<Vec<Cell<F>>>> {
        let lookup = |n: &str| {
            file.cells
                .iter()
                .find(|(k, _)| k == n)
                .map(|(_, c)| c.clone())
        };
        let Some(case) = law
            .names
            .iter()
            .map(|n| lookup(n))
            .collect::<Option<Vec<_>>>()
        else {
            return Ok(None);
        };
        let bc = self.fx.bicat();
        let mut objs: BTreeMap<usize, Obj<F>> = BTreeMap::new();
        let mut bind = |v: usize, o: Obj<F>| -> Result<()> {
            match objs.get(&v) {
                Some(prev) if *prev != o => Err(Error::EndpointMismatch(format!(
                    "cells named for {} do not fit its shape",
                    law.id
                ))),
                _ => {
                    objs.insert(v, o);
                    Ok(())
                }
            }
        };
        let mut k = 0;
        for &r in law.roles {
            let c = &case[k];
            match r {
                Cell(i, j) | Adjoint(i, j) => {
                    bind(i, bc.src(c))?;
                    bind(j, bc.tgt(c))?;
                }
                Equiv(i) | Id(i) => {
                    bind(i, bc.src(c))?;
                    bind(i, bc.tgt(c))?;
                }
                Scalar => {
                    bind(usize::MAX, bc.unit())?;
                    bind(usize::MAX, bc.src(c))?;
                    bind(usize::MAX, bc.tgt(c))?;
                }
            }
            k += if matches!(r, Equiv(_) | Adjoint(_, _)) {
                2
            } else {
                1
            };
        }
        Ok(Some(case))
    }
}

fn iso<B: Bicategory>(b: &B, x: &B::Cell, y: &B::Cell, what: &str) -> Result<Option<String>> {
    match b.find_iso(x, y) {
        IsoSearch::Found(_) => Ok(None),
        IsoSearch::Absent => Ok(Some(format!("no invertible 2-cell {what}"))),
        IsoSearch::BudgetExceeded => Err(Error::budget(
            format!("find_iso {what}"),
            0,
            b.limits().max_candidates,
        )),
    }
}

fn first_failure(
    checks: impl IntoIterator<Item = Result<Option<String>>>,
) -> Result<Option<String>> {
    for c in checks {
        if let Some(d) = c? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Checks the universal property of `lift` for `f` and target `g` against
/// each candidate: every 2-cell `compose(h, f) ⇒ g` must factor through the
/// evaluation in exactly one way, and `lift_factor` must return that way.
pub fn check_lift_universal_property<B: Bicategory>(
    b: &B,
    f: &B::Cell,
    g: &B::Cell,
    lift: &Lift<B::Cell, B::Two>,
    candidates: &[B::Cell],
) -> Result<Option<String>> {
    if b.two_src(&lift.eval) != b.compose(&lift.cell, f)? || b.two_tgt(&lift.eval) != *g {
        return Ok(Some("evaluation has the wrong endpoints".into()));
    }
    for (ci, h) in candidates.iter().enumerate() {
        let gammas = b.two_cells(&b.compose(h, f)?, g)?;
        let deltas = b.two_cells(h, &lift.cell)?;
        // factored 2-cell -> (number of factorizations, first one)
        let mut through: HashMap<B::Two, (usize, usize)> = HashMap::new();
        for (di, w) in b.whisker_all(&deltas, f)?.into_iter().enumerate() {
            through.entry(b.vcomp(&w, &lift.eval)?).or_insert((0, di)).0 += 1;
        }
        for (gi, gamma) in gammas.iter().enumerate() {
            let (n, di) = through.get(gamma).copied().unwrap_or((0, 0));
            if n != 1 {
                return Ok(Some(format!("2-cell #{gi} from candidate #{ci} into the target has {n} factorizations through the lift")));
            }
            let d = match b.lift_factor(f, lift, h, gamma) {
                Ok(d) => d,
                Err(e) if e.is_budget() => return Err(e),
                Err(e) => {
                    return Ok(Some(format!(
                        "lift_factor failed on 2-cell #{gi} from candidate #{ci}: {e}"
                    )))
                }
            };
            if d != deltas[di] {
                return Ok(Some(format!("lift_factor returns a wrong factorization of 2-cell #{gi} from candidate #{ci}")));
            }
        }
    }
    Ok(None)
}

fn count_mismatch(what: &str, l: usize, r: usize) -> Option<String> {
    (l != r).then(|| format!("{what}: {l} against {r}"))
}

/// One law on one case; `Some(detail)` is a counterexample.
fn check<F: Fixture>(
    fx: &F,
    id: &str,
    c: &[Cell<F>],
    mutate: Option<Mutation>,
) -> Result<Option<String>> {
    let b = fx.bicat();
    let tr = |f: &Cell<F>| bicat::trace(b, f);
    let ct = |f: &Cell<F>| bicat::cotrace(b, f);
    let size = |s: &Cell<F>| b.scalar_size(s);
    match id {
        "rel.residuation" => {
            let (t, r, s) = (&c[0], &c[1], &c[2]);
            let lhs = !b.two_cells(&b.compose(t, r)?, s)?.is_empty();
            let rhs = !b.two_cells(t, &b.lift(r, s)?.cell)?.is_empty();
            Ok((lhs != rhs).then(|| {
                format!("composite contained in target is {lhs}, contained in lift is {rhs}")
            }))
        }
        "lift.universal" => {
            let (f, g, h) = (&c[0], &c[1], &c[2]);
            let mut lift = b.lift(f, g)?;
            if mutate == Some(Mutation::DropLiftElement) {
                if let Some(bad) = fx.corrupt_lift(f, &lift)? {
                    lift = bad;
                }
            }
            if let Some(d) = check_lift_universal_property(b, f, g, &lift, std::slice::from_ref(h))?
            {
                return Ok(Some(d));
            }
            let own = match b.lift_factor(f, &lift, &lift.cell, &lift.eval) {
                Ok(d) => d,
                Err(e) if e.is_budget() => return Err(e),
                Err(e) => {
                    return Ok(Some(format!(
                        "lift_factor fails on the evaluation itself: {e}"
                    )))
                }
            };
            Ok((own != b.id2(&lift.cell))
                .then(|| "the evaluation does not factor through the identity".to_string()))
        }
        "ext.universal" => {
            let (f, g, h) = (&c[0], &c[1], &c[2]);
            let e = bicat::extension(b, g, f)?;
            let l = b.two_cells(&b.compose(f, h)?, g)?.len();
            let r = b.two_cells(h, &e)?.len();
            Ok(count_mismatch(
                "2-cells into the target against 2-cells into the extension",
                l,
                r,
            ))
        }
        "trace.closed_form" => iso(
            b,
            &tr(&c[0])?,
            &b.trace_closed(&c[0])?,
            "between the trace and its closed form",
        ),
        "cotrace.closed_form" => iso(
            b,
            &ct(&c[0])?,
            &b.cotrace_closed(&c[0])?,
            "between the cotrace and its closed form",
        ),
        "adjunction.spread_cotrace" => spread_cotrace(b, c),
        "adjunction.trace_cospread" => trace_cospread(b, c),
        "scalar.fixed_point" => first_failure([
            iso(
                b,
                &tr(&c[0])?,
                &c[0],
                "between the trace of a scalar and the scalar",
            ),
            iso(
                b,
                &ct(&c[0])?,
                &c[0],
                "between the cotrace of a scalar and the scalar",
            ),
        ]),
        "trace.cyclicity" => {
            let (f, g) = (&c[0], &c[1]);
            iso(
                b,
                &tr(&b.compose(f, g)?)?,
                &tr(&b.compose(g, f)?)?,
                "between the traces of the two cyclic composites",
            )
        }
        "cotrace.cyclicity" => {
            let (f, g) = (&c[0], &c[1]);
            let l = ct(&b.lift(f, g)?.cell)?;
            let r = ct(&bicat::extension(b, g, f)?)?;
            iso(
                b,
                &l,
                &r,
                "between the cotraces of the lift and the extension",
            )
        }
        "cotrace.conjugation" => {
            let (f, g, gi) = (&c[0], &c[1], &c[2]);
            let conj = bicat::compose_path(b, &[g.clone(), f.clone(), gi.clone()])?;
            iso(
                b,
                &ct(&conj)?,
                &ct(f)?,
                "between the cotraces of a conjugate and the original",
            )
        }
        "trace.dual_invariance" => iso(
            b,
            &tr(&b.dual_cell(&c[0]))?,
            &tr(&c[0])?,
            "between the traces of a cell and its dual",
        ),
        "cotrace.dual_invariance" => iso(
            b,
            &ct(&b.dual_cell(&c[0]))?,
            &ct(&c[0])?,
            "between the cotraces of a cell and its dual",
        ),
        "trace.tensor" => {
            let (f, e) = (&c[0], &c[1]);
            let prod = b.compose(&tr(e)?, &tr(f)?)?;
            iso(
                b,
                &tr(&b.tensor(f, e)?)?,
                &prod,
                "between the trace of a tensor and the product of traces",
            )
        }
        "cotrace.tensor_cell" => {
            let (f, e) = (&c[0], &c[1]);
            let prod = b.compose(&ct(e)?, &ct(f)?)?;
            let whole = ct(&b.tensor(f, e)?)?;
            // 2-cells between scalars are maps of their elements
            let exists = size(&prod) == 0 || size(&whole) > 0;
            Ok((!exists).then(|| {
                "no 2-cell from the product of cotraces to the cotrace of the tensor".to_string()
            }))
        }
        "linearity.copower" => {
            let (s, f) = (&c[0], &c[1]);
            let sp = bicat::spread(b, s, &b.src(f))?;
            iso(
                b,
                &tr(&b.compose(f, &sp)?)?,
                &b.compose(&tr(f)?, s)?,
                "between the trace of a spread composite and the scaled trace",
            )
        }
        "linearity.power" => {
            let (s, f) = (&c[0], &c[1]);
            let sp = bicat::spread(b, s, &b.src(f))?;
            let l = ct(&b.lift(&sp, f)?.cell)?;
            let r = b.lift(s, &ct(f)?)?.cell;
            iso(
                b,
                &l,
                &r,
                "between the cotrace of a lift through a spread and the lift of the cotrace",
            )
        }
        "pairing.linear_functor" => pairing_law(b, c),
        "adjoint_relation" => {
            let (f, s) = (&c[0], &c[1]);
            let cs = bicat::cospread(b, s, &b.src(f))?;
            let l = ct(&b.lift(f, &cs)?.cell)?;
            let r = b.lift(&tr(f)?, s)?.cell;
            iso(
                b,
                &l,
                &r,
                "between the cotrace of a lift into a cospread and the lift of the trace",
            )
        }
        "frobenius_form" => {
            let (f, fa, g) = (&c[0], &c[1], &c[2]);
            let l = bicat::enrichment_hom(b, f, g)?;
            let r = ct(&b.compose(g, fa)?)?;
            iso(
                b,
                &l,
                &r,
                "between the enrichment hom and the cotrace through the adjoint",
            )
        }
        "enrichment.agreement" => {
            let (f, g) = (&c[0], &c[1]);
            let l = bicat::enrichment_hom(b, f, g)?;
            let r = bicat::enrichment_hom_via_names(b, f, g)?;
            iso(b, &l, &r, "between the two enrichment homs")
        }
        "enrichment.composition" => enrichment_composition(b, c),
        "two_trace.bijection" => {
            let f = &c[0];
            let tt = bicat::two_trace(b, f)?;
            let n = size(&b.cotrace_closed(f)?);
            if let Some(d) = count_mismatch(
                "2-cells from the identity against cotrace elements",
                tt.len(),
                n,
            ) {
                return Ok(Some(d));
            }
            for i in 0..n {
                let e = b.cotrace_element(f, i)?;
                if !tt.contains(&e) {
                    return Ok(Some(format!(
                        "cotrace element {i} is not a 2-cell from the identity"
                    )));
                }
                let j = b.cotrace_index(f, &e)?;
                if j != i {
                    return Ok(Some(format!("cotrace element {i} indexes back to {j}")));
                }
            }
            Ok(None)
        }
        "codim.monoid" => {
            let a = b.src(&c[0]);
            let m = bicat::codim_monoid_enriched(b, &a)?;
            if let Err(e) = m.check() {
                return Ok(Some(format!("codimension monoid: {e}")));
            }
            Ok(count_mismatch(
                "monoid size against codimension",
                m.len(),
                size(&b.cotrace_closed(&c[0])?),
            ))
        }
        "dim.module" => {
            let a = b.src(&c[0]);
            let m = bicat::codim_monoid_unitor(b, &a)?;
            let d = size(&b.trace_closed(&c[0])?);
            for z in 0..d {
                let u = bicat::dim_action(b, &a, z, m.unit)?;
                if u != z {
                    return Ok(Some(format!("the unit moves dimension element {z} to {u}")));
                }
                for y in 0..m.len() {
                    for x in 0..m.len() {
                        let l = bicat::dim_action(b, &a, bicat::dim_action(b, &a, z, y)?, x)?;
                        let r = bicat::dim_action(b, &a, z, m.table[y][x])?;
                        if l != r {
                            return Ok(Some(format!("acting by {y} then {x} on {z} gives {l}, acting by the product gives {r}")));
                        }
                    }
                }
            }
            Ok(None)
        }
        "codim.three_monoids" => {
            let a = b.src(&c[0]);
            let m1 = bicat::codim_monoid_enriched(b, &a)?;
            let m2 = bicat::codim_monoid_unitor(b, &a)?;
            let m3 = bicat::codim_monoid_lift_monad(b, &a)?;
            for (name, m) in [("enriched", &m1), ("unitor", &m2), ("lift monad", &m3)] {
                if let Err(e) = m.check() {
                    return Ok(Some(format!("{name} monoid: {e}")));
                }
            }
            if m1.isomorphism_to(&m2).is_none() {
                return Ok(Some(
                    "enriched and unitor monoids are not isomorphic".into(),
                ));
            }
            Ok(m1
                .isomorphism_to(&m3)
                .is_none()
                .then(|| "enriched and lift-monad monoids are not isomorphic".to_string()))
        }
        "scalar.symmetry" => {
            let (s, t) = (&c[0], &c[1]);
            let st = b.scalar_braid(s, t)?;
            let ts = b.scalar_braid(t, s)?;
            if b.vcomp(&st, &ts)? != b.id2(&b.compose(t, s)?) {
                return Ok(Some("braiding twice is not the identity".into()));
            }
            Ok(b.invert(&st)
                .is_none()
                .then(|| "braiding is not invertible".to_string()))
        }
        "coherence" => coherence(b, c),
        "name.roundtrip" => {
            let f = &c[0];
            let back = bicat::realize(b, &bicat::name(b, f)?, &b.src(f), &b.tgt(f))?;
            iso(b, &back, f, "between the realized name and the original")
        }
        "dual.zigzag" => {
            let a = b.src(&c[0]);
            let da = b.dual_obj(&a);
            let z1 = bicat::compose_path(
                b,
                &[
                    b.lunit_inv(&a),
                    b.tensor(&b.coev(&a), &b.identity(&a))?,
                    b.assoc(&a, &da, &a),
                    b.tensor(&b.identity(&a), &b.ev(&a))?,
                    b.runit(&a),
                ],
            )?;
            let z2 = bicat::compose_path(
                b,
                &[
                    b.runit_inv(&da),
                    b.tensor(&b.identity(&da), &b.coev(&a))?,
                    b.assoc_inv(&da, &a, &da),
                    b.tensor(&b.ev(&a), &b.identity(&da))?,
                    b.lunit(&da),
                ],
            )?;
            first_failure([
                iso(
                    b,
                    &z1,
                    &b.identity(&a),
                    "between the first zigzag and the identity",
                ),
                iso(
                    b,
                    &z2,
                    &b.identity(&da),
                    "between the second zigzag and the identity",
                ),
            ])
        }
        "prof.yoneda" => {
            let p = &c[0];
            first_failure([
                iso(
                    b,
                    &b.compose(&b.identity(&b.src(p)), p)?,
                    p,
                    "between Hom composed before and the profunctor",
                ),
                iso(
                    b,
                    &b.compose(p, &b.identity(&b.tgt(p)))?,
                    p,
                    "between Hom composed after and the profunctor",
                ),
            ])
        }
        other => fx.extra(other, c),
    }
}

fn spread_cotrace<B: Concrete>(b: &B, c: &[B::Cell]) -> Result<Option<String>> {
    let (s, f, s2, f2) = (&c[0], &c[1], &c[2], &c[3]);
    let a = b.src(f);
    let l = b.two_cells(&bicat::spread(b, s, &a)?, f)?.len();
    let r = b.two_cells(s, &bicat::cotrace(b, f)?)?.len();
    if let Some(d) = count_mismatch(
        "2-cells out of the spread against 2-cells into the cotrace",
        l,
        r,
    ) {
        return Ok(Some(d));
    }
    let sp = b.spread_closed(s, &a)?;
    let cot = b.cotrace_closed(f)?;
    let alphas = b.two_cells(&sp, f)?;
    let targets = b.two_cells(s, &cot)?;
    let mut images = Vec::with_capacity(alphas.len());
    for alpha in &alphas {
        let t = b.spread_transpose(s, f, alpha)?;
        if !targets.contains(&t) || images.contains(&t) {
            return Ok(Some(
                "spread transpose is not injective into the 2-cells".into(),
            ));
        }
        images.push(t);
    }
    if let Some(d) = count_mismatch(
        "transposes against 2-cells into the closed cotrace",
        images.len(),
        targets.len(),
    ) {
        return Ok(Some(d));
    }
    let mut phis = b.two_cells(f, f2)?;
    phis.truncate(NATURALITY_SAMPLES);
    phis.extend(b.two_cells(f, f)?.into_iter().take(NATURALITY_SAMPLES));
    let mut sigmas = b.two_cells(s2, s)?;
    sigmas.truncate(NATURALITY_SAMPLES);
    for sigma in &sigmas {
        for phi in &phis {
            let fp = b.two_tgt(phi);
            for alpha in alphas.iter().take(NATURALITY_SAMPLES) {
                let moved = bicat::vcomp_path(
                    b,
                    &[b.spread_closed_map(sigma, &a)?, alpha.clone(), phi.clone()],
                )?;
                let l = b.spread_transpose(s2, &fp, &moved)?;
                let r = bicat::vcomp_path(
                    b,
                    &[
                        sigma.clone(),
                        b.spread_transpose(s, f, alpha)?,
                        b.cotrace_closed_map(phi)?,
                    ],
                )?;
                if l != r {
                    return Ok(Some("spread transpose is not natural".into()));
                }
            }
        }
    }
    Ok(None)
}

fn trace_cospread<B: Concrete>(b: &B, c: &[B::Cell]) -> Result<Option<String>> {
    let (s, f, s2, f2) = (&c[0], &c[1], &c[2], &c[3]);
    let a = b.src(f);
    let l = b.two_cells(&bicat::trace(b, f)?, s)?.len();
    let r = b.two_cells(f, &bicat::cospread(b, s, &a)?)?.len();
    if let Some(d) = count_mismatch(
        "2-cells out of the trace against 2-cells into the cospread",
        l,
        r,
    ) {
        return Ok(Some(d));
    }
    let tr = b.trace_closed(f)?;
    let cs = b.cospread_closed(s, &a)?;
    let betas = b.two_cells(&tr, s)?;
    let targets = b.two_cells(f, &cs)?;
    let mut images = Vec::with_capacity(betas.len());
    for beta in &betas {
        let t = b.trace_transpose(f, s, beta)?;
        if !targets.contains(&t) || images.contains(&t) {
            return Ok(Some(
                "trace transpose is not injective into the 2-cells".into(),
            ));
        }
        images.push(t);
    }
    if let Some(d) = count_mismatch(
        "transposes against 2-cells into the closed cospread",
        images.len(),
        targets.len(),
    ) {
        return Ok(Some(d));
    }
    let mut phis = b.two_cells(f2, f)?;
    phis.truncate(NATURALITY_SAMPLES);
    phis.extend(b.two_cells(f, f)?.into_iter().take(NATURALITY_SAMPLES));
    let mut sigmas = b.two_cells(s, s2)?;
    sigmas.truncate(NATURALITY_SAMPLES);
    for sigma in &sigmas {
        for phi in &phis {
            let fp = b.two_src(phi);
            for beta in betas.iter().take(NATURALITY_SAMPLES) {
                let moved =
                    bicat::vcomp_path(b, &[b.trace_closed_map(phi)?, beta.clone(), sigma.clone()])?;
                let l = b.trace_transpose(&fp, s2, &moved)?;
                let r = bicat::vcomp_path(
                    b,
                    &[
                        phi.clone(),
                        b.trace_transpose(f, s, beta)?,
                        b.cospread_closed_map(sigma, &a)?,
                    ],
                )?;
                if l != r {
                    return Ok(Some("trace transpose is not natural".into()));
                }
            }
        }
    }
    Ok(None)
}

fn pairing_law<B: Concrete>(b: &B, c: &[B::Cell]) -> Result<Option<String>> {
    let (g, f1, f2) = (&c[0], &c[1], &c[2]);
    let a = b.src(g);
    let id = b.identity(&a);
    let n_tg = b.scalar_size(&b.trace_closed(g)?);
    let n_c1 = b.scalar_size(&b.cotrace_closed(f1)?);
    let n_c2 = b.scalar_size(&b.cotrace_closed(f2)?);
    let n_t1 = b.scalar_size(&b.trace_closed(&b.compose(f1, g)?)?);
    for z in 0..n_tg {
        for x in 0..n_c1 {
            let p = b.pairing(g, f1, z, x)?;
            if p >= n_t1 {
                return Ok(Some(format!(
                    "pairing of {z} and {x} lands outside the trace"
                )));
            }
        }
    }
    let x0 = b.cotrace_index(&id, &b.id2(&id))?;
    let collapse = b.trace_closed_map(&b.unitor_before(g)?)?;
    for z in 0..n_tg {
        let u = b.scalar_apply(&collapse, b.pairing(g, &id, z, x0)?);
        if u != z {
            return Ok(Some(format!("pairing with the unit moves {z} to {u}")));
        }
    }
    let g2 = b.compose(f2, g)?;
    let f12 = b.compose(f1, f2)?;
    let assoc = b.trace_closed_map(&b.associator(f1, f2, g)?)?;
    for z in 0..n_tg.min(ELEMENT_SAMPLES) {
        for y in 0..n_c2.min(ELEMENT_SAMPLES) {
            for x in 0..n_c1.min(ELEMENT_SAMPLES) {
                let l = b.pairing(&g2, f1, b.pairing(g, f2, z, y)?, x)?;
                let p = bicat::cotrace_product(b, f2, f1, y, x)?;
                let r = b.scalar_apply(&assoc, b.pairing(g, &f12, z, p)?);
                if l != r {
                    return Ok(Some(format!("pairing is not associative at ({z},{y},{x})")));
                }
            }
        }
    }
    Ok(None)
}

fn enrichment_composition<B: Concrete>(b: &B, c: &[B::Cell]) -> Result<Option<String>> {
    let (f, g, h) = (&c[0], &c[1], &c[2]);
    let hom = |x: &B::Cell, y: &B::Cell| HomObject::new(b, x, y);
    let (ff, gg, fg) = (hom(f, f)?, hom(g, g)?, hom(f, g)?);
    let (uf, ug) = (bicat::enriched_unit(b, &ff)?, bicat::enriched_unit(b, &gg)?);
    for x in 0..fg.len(b) {
        let d = fg.decode(b, x)?;
        if fg.encode(b, &d)? != x {
            return Ok(Some(format!("element {x} does not survive decoding")));
        }
        if bicat::enriched_compose(b, &fg, &gg, &fg, ug, x)? != x {
            return Ok(Some(format!("left unit fails at {x}")));
        }
        if bicat::enriched_compose(b, &ff, &fg, &fg, x, uf)? != x {
            return Ok(Some(format!("right unit fails at {x}")));
        }
    }
    let (gh, hf, gf, fh) = (hom(g, h)?, hom(h, f)?, hom(g, f)?, hom(f, h)?);
    for x in 0..fg.len(b).min(ELEMENT_SAMPLES) {
        for y in 0..gh.len(b).min(ELEMENT_SAMPLES) {
            for z in 0..hf.len(b).min(ELEMENT_SAMPLES) {
                let zy = bicat::enriched_compose(b, &gh, &hf, &gf, z, y)?;
                let l = bicat::enriched_compose(b, &fg, &gf, &ff, zy, x)?;
                let yx = bicat::enriched_compose(b, &fg, &gh, &fh, y, x)?;
                let r = bicat::enriched_compose(b, &fh, &hf, &ff, z, yx)?;
                if l != r {
                    return Ok(Some(format!(
                        "enriched composition is not associative at ({x},{y},{z})"
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn coherence<B: Bicategory>(b: &B, c: &[B::Cell]) -> Result<Option<String>> {
    let (f, g, h) = (&c[0], &c[1], &c[2]);
    let assoc = b.associator(f, g, h)?;
    let Some(inv) = b.invert(&assoc) else {
        return Ok(Some("associator is not invertible".into()));
    };
    if b.vcomp(&assoc, &inv)? != b.id2(&b.two_src(&assoc)) {
        return Ok(Some("associator inverse is one-sided".into()));
    }
    for (what, there, back) in [
        ("after", b.unitor_after(f)?, b.unitor_after_inv(f)?),
        ("before", b.unitor_before(f)?, b.unitor_before_inv(f)?),
    ] {
        if b.vcomp(&there, &back)? != b.id2(&b.two_src(&there))
            || b.vcomp(&back, &there)? != b.id2(f)
        {
            return Ok(Some(format!("unitor {what} and its inverse do not cancel")));
        }
    }
    let id = b.identity(&b.tgt(f));
    let l = b.vcomp(
        &b.associator(f, &id, g)?,
        &b.hcomp(&b.id2(f), &b.unitor_before(g)?)?,
    )?;
    let r = b.hcomp(&b.unitor_after(f)?, &b.id2(g))?;
    Ok((l != r).then(|| "triangle identity fails".to_string()))
}

fn law_seed(seed: u64, id: &str, instance: Instance) -> u64 {
    // FNV-1a over the law id, mixed with the seed and instance
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in id.bytes().chain([instance as u8]) {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

fn run_law<F: Fixture>(
    fx: &F,
    law: &LawDef,
    cfg: &SuiteConfig,
    file: Option<&FileData<F>>,
) -> LawReport {
    let instance = fx.bicat().instance();
    let mut gen = Gen {
        fx,
        file,
        rng: ChaCha8Rng::seed_from_u64(law_seed(cfg.seed, law.id, instance)),
        samples: cfg.samples,
        cap: cfg.limits.max_candidates,
    };
    let report = |cases: u64, status: Status, witness: Option<Witness>| LawReport {
        law: law.id.to_string(),
        instance,
        cases,
        status,
        witness,
    };
    let cases = match gen.cases(law) {
        Ok(c) => c,
        Err(e) if e.is_budget() => return report(0, Status::BudgetExceeded, None),
        Err(e) => {
            let w = Witness {
                detail: format!("case generation failed: {e}"),
                roles: Vec::new(),
                input: serde_json::Value::Null,
                replay: Vec::new(),
            };
            return report(0, Status::Counterexample, Some(w));
        }
    };
    let fails = |case: &[Cell<F>]| match check(fx, law.id, case, cfg.mutate) {
        Ok(Some(d)) => Some(d),
        Ok(None) => None,
        Err(e) if e.is_budget() => None,
        Err(e) => Some(format!("error: {e}")),
    };
    let witness = |case: Vec<Cell<F>>, detail: String| {
        let named: Vec<(String, Cell<F>)> =
            law.names.iter().map(|s| s.to_string()).zip(case).collect();
        let mut replay = vec![
            "check-laws".to_string(),
            "--input".into(),
            WITNESS_PATH.into(),
            "--law".into(),
            law.id.into(),
        ];
        if let Some(m) = cfg.mutate {
            replay.extend(["--mutate".to_string(), m.as_str().to_string()]);
        }
        Witness {
            detail,
            roles: law.names.iter().map(|s| s.to_string()).collect(),
            input: fx.to_file(named).to_json(),
            replay,
        }
    };
    let mut budget = None;
    for (n, case) in cases.iter().enumerate() {
        let res = check(fx, law.id, case, cfg.mutate);
        let detail = match res {
            Ok(None) => continue,
            Ok(Some(d)) => d,
            Err(e) if e.is_budget() => {
                budget.get_or_insert_with(|| witness(case.clone(), e.to_string()));
                continue;
            }
            Err(e) => format!("error: {e}"),
        };
        let (case, detail) = shrink(fx, law, case.clone(), detail, &fails);
        return report(
            n as u64 + 1,
            Status::Counterexample,
            Some(witness(case, detail)),
        );
    }
    match budget {
        Some(w) => report(cases.len() as u64, Status::BudgetExceeded, Some(w)),
        None => report(cases.len() as u64, Status::Pass, None),
    }
}

/// Replaces shrinkable cells by smaller ones while the law still fails.
fn shrink<F: Fixture>(
    fx: &F,
    law: &LawDef,
    mut case: Vec<Cell<F>>,
    mut detail: String,
    fails: &dyn Fn(&[Cell<F>]) -> Option<String>,
) -> (Vec<Cell<F>>, String) {
    'outer: loop {
        for (i, name) in law.names.iter().enumerate() {
            if !law.shrinkable.contains(name) {
                continue;
            }
            for smaller in fx.shrink(&case[i]) {
                let mut next = case.clone();
                next[i] = smaller;
                if let Some(d) = fails(&next) {
                    case = next;
                    detail = d;
                    continue 'outer;
                }
            }
        }
        return (case, detail);
    }
}

enum AnyFixture {
    Rel(RelFixture),
    Span(SpanFixture),
    Prof(Box<ProfFixture>),
}

fn fixture(instance: Instance, cfg: &SuiteConfig) -> Result<AnyFixture> {
    Ok(match instance {
        Instance::Rel => AnyFixture::Rel(RelFixture {
            b: Rel::new(cfg.limits),
            max_size: cfg.max_size,
        }),
        Instance::Span => AnyFixture::Span(SpanFixture {
            b: Span::new(cfg.limits),
            max_size: cfg.max_size,
        }),
        Instance::Prof => AnyFixture::Prof(Box::new(ProfFixture::new(
            Prof::new(cfg.limits),
            cfg.max_size,
        )?)),
    })
}

enum AnyFile {
    Rel(FileData<RelFixture>),
    Span(FileData<SpanFixture>),
    Prof(FileData<ProfFixture>),
}

fn run_jobs(
    cfg: &SuiteConfig,
    jobs: Vec<(usize, Instance)>,
    fixtures: &BTreeMap<Instance, AnyFixture>,
    file: Option<&AnyFile>,
) -> Vec<LawReport> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<LawReport>>> = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..cfg.threads.min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(law, instance)) = jobs.get(i) else {
                    break;
                };
                let law = &LAWS[law];
                let r = match (&fixtures[&instance], file) {
                    (AnyFixture::Rel(fx), Some(AnyFile::Rel(d))) => run_law(fx, law, cfg, Some(d)),
                    (AnyFixture::Span(fx), Some(AnyFile::Span(d))) => {
                        run_law(fx, law, cfg, Some(d))
                    }
                    (AnyFixture::Prof(fx), Some(AnyFile::Prof(d))) => {
                        run_law(fx.as_ref(), law, cfg, Some(d))
                    }
                    (AnyFixture::Rel(fx), _) => run_law(fx, law, cfg, None),
                    (AnyFixture::Span(fx), _) => run_law(fx, law, cfg, None),
                    (AnyFixture::Prof(fx), _) => run_law(fx.as_ref(), law, cfg, None),
                };
                results
                    .lock()
                    .expect("no job panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("workers have finished")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// Runs the selected laws on generated cases for each selected instance.
/// Reports come back in law order, then instance order.
pub fn run_law_suite(cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    cfg.validate()?;
    let mut fixtures = BTreeMap::new();
    for &i in &cfg.instances {
        fixtures.insert(i, fixture(i, cfg)?);
    }
    let mut instances = cfg.instances.clone();
    instances.sort();
    instances.dedup();
    let jobs = LAWS
        .iter()
        .enumerate()
        .flat_map(|(li, law)| {
            instances
                .iter()
                .filter(move |&&i| cfg.selected(law, i))
                .map(move |&i| (li, i))
        })
        .collect();
    Ok(run_jobs(cfg, jobs, &fixtures, None))
}

/// Runs the selected laws on the cells of an instance file. A law whose
/// role names all appear among the cells runs on exactly that case;
/// otherwise it runs on every assignment of file objects and cells.
pub fn run_on_file(file: &InstanceFile, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    cfg.validate()?;
    let instance = file.instance();
    let data = match file {
        InstanceFile::Rel(n) => AnyFile::Rel(FileData {
            objects: n.objects.values().cloned().collect(),
            cells: n.cells.clone().into_iter().collect(),
        }),
        InstanceFile::Span(n) => AnyFile::Span(FileData {
            objects: n.objects.values().cloned().collect(),
            cells: n.cells.clone().into_iter().collect(),
        }),
        InstanceFile::Prof(n) => AnyFile::Prof(FileData {
            objects: n.objects.values().cloned().collect(),
            cells: n.cells.clone().into_iter().collect(),
        }),
    };
    let mut fixtures = BTreeMap::new();
    fixtures.insert(instance, fixture(instance, cfg)?);
    let jobs = LAWS
        .iter()
        .enumerate()
        .filter(|(_, law)| cfg.selected(law, instance))
        .map(|(li, _)| (li, instance))
        .collect();
    Ok(run_jobs(cfg, jobs, &fixtures, Some(&data)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(law: &str, instance: Instance) -> SuiteConfig {
        SuiteConfig {
            laws: Some(vec![law.into()]),
            instances: vec![instance],
            samples: 20,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_law_id_is_unique() {
        let ids = law_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = SuiteConfig {
            laws: Some(vec!["nope".into()]),
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SuiteConfig {
            max_size: 0,
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rel_lift_cases_cover_the_size_two_grid() {
        let fx = RelFixture {
            b: Rel::default(),
            max_size: 2,
        };
        let mut gen = Gen {
            fx: &fx,
            file: None,
            rng: ChaCha8Rng::seed_from_u64(0),
            samples: 1,
            cap: 1 << 20,
        };
        let law = LAWS.iter().find(|l| l.id == "lift.universal").unwrap();
        let cases = gen.cases(law).unwrap();
        let full = cases
            .iter()
            .filter(|c| c.iter().all(|r| r.src.len() == 2 && r.tgt.len() == 2))
            .count();
        assert_eq!(full, 16 * 16 * 16);
    }

    #[test]
    fn rel_residuation_passes() {
        let r = run_law_suite(&only("rel.residuation", Instance::Rel)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].status, Status::Pass);
    }

    #[test]
    fn dropped_lift_element_is_caught_and_replays() {
        for instance in [Instance::Rel, Instance::Span] {
            let cfg = SuiteConfig {
                mutate: Some(Mutation::DropLiftElement),
                ..only("lift.universal", instance)
            };
            let r = run_law_suite(&cfg).unwrap();
            assert_eq!(r[0].status, Status::Counterexample, "{instance}");
            let w = r[0].witness.clone().unwrap();
            let file = InstanceFile::parse(&w.input.to_string()).unwrap();
            let again = run_on_file(&file, &cfg).unwrap();
            assert_eq!(again[0].status, Status::Counterexample);
            assert_eq!(again[0].witness.as_ref().unwrap().detail, w.detail);
            let clean = run_on_file(&file, &only("lift.universal", instance)).unwrap();
            assert_eq!(clean[0].status, Status::Pass);
        }
    }

    #[test]
    fn shrinking_reaches_a_minimal_relation() {
        let fx = RelFixture {
            b: Rel::default(),
            max_size: 2,
        };
        let cfg = SuiteConfig {
            mutate: Some(Mutation::DropLiftElement),
            ..only("lift.universal", Instance::Rel)
        };
        let r = run_law(
            &fx,
            LAWS.iter().find(|l| l.id == "lift.universal").unwrap(),
            &cfg,
            None,
        );
        let w = r.witness.unwrap();
        let InstanceFile::Rel(n) = InstanceFile::parse(&w.input.to_string()).unwrap() else {
            panic!()
        };
        // dropping any further pair from h makes the case pass
        let h = &n.cells["h"];
        assert!(h.pairs().len() <= 1, "{:?}", h.pairs());
    }
}
