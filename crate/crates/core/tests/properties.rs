//! Randomized invariants, each checked against a direct computation.

use proptest::prelude::*;

use cotrace_core::bicat::{self, Bicategory, Concrete, Instance};
use cotrace_core::file::InstanceFile;
use cotrace_core::fincat::validate_category;
use cotrace_core::laws::{run_law_suite, SuiteConfig};
use cotrace_core::rel::{rel_compose, rel_lift};
use cotrace_core::span::{span_compose, span_trace_closed};
use cotrace_core::{FinCat, FinSet, Prof, Rel, RelCell, Span, SpanCell};

fn relation(src: usize, tgt: usize) -> impl Strategy<Value = RelCell> {
    proptest::collection::vec(any::<bool>(), src * tgt).prop_map(move |bits| {
        let pairs = (0..src * tgt)
            .filter(|&i| bits[i])
            .map(|i| (i / tgt, i % tgt));
        RelCell::new(FinSet::range(src), FinSet::range(tgt), pairs).unwrap()
    })
}

fn span(src: usize, tgt: usize, max_apex: usize) -> impl Strategy<Value = SpanCell> {
    proptest::collection::vec((0..src, 0..tgt), 0..=max_apex).prop_map(move |legs| {
        let (ls, lt): (Vec<usize>, Vec<usize>) = legs.into_iter().unzip();
        SpanCell::new(
            FinSet::range(src),
            FinSet::range(tgt),
            FinSet::range(ls.len()),
            ls,
            lt,
        )
        .unwrap()
    })
}

/// Relations `t: A → B`, `r: B → C`, `s: A → C` on sets of size at most 3.
fn triple() -> impl Strategy<Value = (RelCell, RelCell, RelCell)> {
    (0..4usize, 1..4usize, 0..4usize)
        .prop_flat_map(|(a, b, c)| (relation(a, b), relation(b, c), relation(a, c)))
}

proptest! {
    #[test]
    fn residuation((t, r, s) in triple()) {
        let composite = rel_compose(&t, &r).unwrap();
        let lift = rel_lift(&r, &s).unwrap();
        prop_assert_eq!(composite.is_subset(&s), t.is_subset(&lift));
    }

    #[test]
    fn lift_matches_pointwise_formula((_, r, s) in triple()) {
        let lift = rel_lift(&r, &s).unwrap();
        for a in 0..s.src.len() {
            for b in 0..r.src.len() {
                let expected = (0..r.tgt.len()).all(|c| !r.contains(b, c) || s.contains(a, c));
                prop_assert_eq!(lift.contains(a, b), expected);
            }
        }
    }

    #[test]
    fn rel_generic_trace_is_closed_form(r in (0..4usize).prop_flat_map(|n| relation(n, n))) {
        let b = Rel::default();
        let generic = bicat::trace(&b, &r).unwrap();
        prop_assert!(b.find_iso(&generic, &b.trace_closed(&r).unwrap()).is_found());
        let generic = bicat::cotrace(&b, &r).unwrap();
        prop_assert!(b.find_iso(&generic, &b.cotrace_closed(&r).unwrap()).is_found());
    }

    #[test]
    fn span_composite_counts_matching_pairs(
        (f, g) in (1..4usize, 1..4usize, 1..4usize).prop_flat_map(|(a, b, c)| (span(a, b, 4), span(b, c, 4)))
    ) {
        let h = span_compose(&f, &g).unwrap();
        let mut expected = 0;
        for x in 0..f.apex.len() {
            for y in 0..g.apex.len() {
                if f.leg_tgt[x] == g.leg_src[y] {
                    expected += 1;
                }
            }
        }
        prop_assert_eq!(h.apex.len(), expected);
    }

    #[test]
    fn span_trace_counts_loops(f in (1..4usize).prop_flat_map(|n| span(n, n, 5))) {
        let loops = (0..f.apex.len()).filter(|&x| f.leg_src[x] == f.leg_tgt[x]).count();
        prop_assert_eq!(span_trace_closed(&f).unwrap().apex.len(), loops);
        let b = Span::default();
        let generic = bicat::trace(&b, &f).unwrap();
        prop_assert_eq!(b.scalar_size(&generic), loops);
    }

    #[test]
    fn rel_files_round_trip(cells in proptest::collection::vec((0..3usize, 0..3usize).prop_flat_map(|(a, b)| relation(a, b)), 1..4)) {
        let named: Vec<(String, RelCell)> = cells.into_iter().enumerate().map(|(i, c)| (format!("r{i}"), c)).collect();
        let file = InstanceFile::rel(named);
        prop_assert_eq!(InstanceFile::parse(&file.to_string_pretty()).unwrap(), file);
    }

    #[test]
    fn span_files_round_trip(cells in proptest::collection::vec((1..3usize, 1..3usize).prop_flat_map(|(a, b)| span(a, b, 3)), 1..4)) {
        let named: Vec<(String, SpanCell)> = cells.into_iter().enumerate().map(|(i, c)| (format!("s{i}"), c)).collect();
        let file = InstanceFile::span(named);
        prop_assert_eq!(InstanceFile::parse(&file.to_string_pretty()).unwrap(), file);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn cyclic_groups_have_equal_dims(n in 1..6usize) {
        let c = FinCat::cyclic_group(n);
        prop_assert!(validate_category(&c).is_ok());
        prop_assert_eq!(c.opposite().opposite(), c.clone());
        let b = Prof::default();
        let (dim, codim) = bicat::dims(&b, &c).unwrap();
        // Abelian: every class is a singleton and every element is central.
        prop_assert_eq!((b.scalar_size(&dim), b.scalar_size(&codim)), (n, n));
    }

    #[test]
    fn suite_is_deterministic_and_seed_independent(seed in any::<u64>()) {
        let cfg = |seed| SuiteConfig {
            seed,
            samples: 20,
            instances: vec![Instance::Rel, Instance::Span],
            laws: Some(vec!["trace.closed_form".into(), "trace.cyclicity".into(), "scalar.symmetry".into()]),
            ..SuiteConfig::default()
        };
        let first = run_law_suite(&cfg(seed)).unwrap();
        prop_assert_eq!(&first, &run_law_suite(&cfg(seed)).unwrap());
        let other = run_law_suite(&cfg(seed ^ 1)).unwrap();
        let statuses = |r: &[cotrace_core::laws::LawReport]| r.iter().map(|x| (x.law.clone(), x.status)).collect::<Vec<_>>();
        prop_assert_eq!(statuses(&first), statuses(&other));
    }
}
