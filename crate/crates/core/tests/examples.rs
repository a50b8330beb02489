//! Worked examples for the lift checker and the file validator.

use cotrace_core::bicat::{Bicategory, Instance};
use cotrace_core::file::InstanceFile;
use cotrace_core::laws::{check_lift_universal_property, run_law_suite, SuiteConfig};
use cotrace_core::{FinCat, FinSet, Prof, Profunctor, Rel, RelCell};

#[test]
fn prof_lift_of_hom_over_c2() {
    let b = Prof::default();
    let c2 = FinCat::cyclic_group(2);
    let hom = Profunctor::hom(&c2);
    let q = Profunctor::constant(&c2, &c2, &FinSet::range(2))
        .sum(&hom)
        .unwrap();
    let lift = b.lift(&hom, &q).unwrap();
    let candidates = vec![
        Profunctor::empty(&c2, &c2),
        Profunctor::constant(&c2, &c2, &FinSet::range(1)),
        hom.clone(),
        hom.sum(&hom).unwrap(),
    ];
    assert_eq!(
        check_lift_universal_property(&b, &hom, &q, &lift, &candidates).unwrap(),
        None
    );
}

#[test]
fn rel_lift_over_all_pairs_on_two_points() {
    let b = Rel::default();
    let two = FinSet::range(2);
    let all = RelCell::all(&two, &two);
    assert_eq!(all.len(), 16);
    for r in &all {
        for s in &all {
            let lift = b.lift(r, s).unwrap();
            assert_eq!(
                check_lift_universal_property(&b, r, s, &lift, &all).unwrap(),
                None
            );
        }
    }
}

#[test]
fn non_functorial_action_is_rejected_at_load() {
    // The generator of C2 must act by an involution; this one collapses v onto u.
    let text = r#"{
        "instance": "prof",
        "categories": {"C2": {"objects": ["*"],
            "morphisms": [{"label": "e", "src": "*", "tgt": "*"}, {"label": "g", "src": "*", "tgt": "*"}],
            "identities": {"*": "e"},
            "comp": {"e|e": "e", "e|g": "g", "g|e": "g", "g|g": "e"}}},
        "cells": {"P": {"src": "C2", "tgt": "C2",
            "sets": {"*|*": ["u", "v"]},
            "lact": {"g|*|*": {"u": "u", "v": "u"}},
            "ract": {"g|*|*": {"u": "u", "v": "v"}}}}
    }"#;
    let err = InstanceFile::parse(text).unwrap_err().to_string();
    assert!(
        err.contains("cells.P") && err.contains("functoriality"),
        "{err}"
    );
}

#[test]
fn seeds_do_not_change_statuses() {
    let cfg = |seed| SuiteConfig {
        seed,
        instances: vec![Instance::Prof],
        laws: Some(vec!["trace.closed_form".into(), "cotrace.cyclicity".into()]),
        ..SuiteConfig::default()
    };
    let a = run_law_suite(&cfg(1)).unwrap();
    let b = run_law_suite(&cfg(2)).unwrap();
    let statuses =
        |r: &[cotrace_core::laws::LawReport]| r.iter().map(|x| x.status).collect::<Vec<_>>();
    assert_eq!(statuses(&a), statuses(&b));
}
