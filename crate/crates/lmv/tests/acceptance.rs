//! Acceptance suite: golden worked examples and the property corpora,
//! one test per criterion, each printing its pass line. Budgets,
//! tolerances and corpus sizes are pinned here.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::time::{Duration, Instant};

use lmv::harness::{gen_term, run_suite, GenConfig, Suite, SuiteConfig};
use lmv::parallel::{
    check_diamond, complete_development, is_parallel_reduct, parallel_reducts, Membership,
    ReductBudget,
};
use lmv::reduction::{normalize, rules_at, Mode, Strategy};
use lmv::segments::{
    buds, enumerate_segment_trees, extended_structural_reduce, restrict_tree_to, wood_substitute,
    Payload, SegmentWood,
};
use lmv::syntax::{parse_term, print_term};
use lmv::term::{replace_at, term_at, term_occurrences, Occurrence, Subterm, Term};
use lmv::alpha_eq;

fn p(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn budget() -> ReductBudget {
    ReductBudget {
        max_reducts: 200,
        max_trees_per_node: 16,
    }
}

fn pass(n: u32, what: &str, elapsed: Duration) {
    println!("criterion {:>2} PASS ({:>8.2?}): {}", n, elapsed, what);
}

/// Criterion 1: the two segment-trees of the two-tree worked example
/// enumerate exactly, and both extended structural reductions print the
/// expected terms. Runtime < 1 s.
#[test]
fn criterion_01_segment_tree_example() {
    let start = Instant::now();
    let t = p("(u [x. mu @a.(@a <x,(@a w)>), y. v])");
    let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
    assert_eq!(trees.len(), 2, "exactly two segment-trees from the root");
    assert_eq!(
        trees[0].members,
        [Occurrence::root()].into(),
        "first tree is the singleton"
    );
    assert_eq!(
        trees[1].members,
        [Occurrence::root(), Occurrence(vec![1, 0])].into(),
        "second tree adds the mu-abstraction"
    );
    let app = Term::app_term(Term::var("V"), t.clone());
    let r1 = extended_structural_reduce(&app, &trees[0]).unwrap();
    let expect1 = p("(u [x. (V mu @a.(@a <x,(@a w)>)), y. (V v)])");
    assert!(alpha_eq(&r1, &expect1, false), "got {}", print_term(&r1, false));
    let r2 = extended_structural_reduce(&app, &trees[1]).unwrap();
    let expect2 = p("(u [x. mu @a.(@a (V <x,(@a (V w))>)), y. (V v)])");
    assert!(alpha_eq(&r2, &expect2, false), "got {}", print_term(&r2, false));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1));
    pass(1, "segment-trees and extended structural reductions", elapsed);
}

/// Criterion 2: the nested-mu wood example: buds, both restrictions, both
/// wood substitutions, and the parallel step between them. Runtime < 1 s.
#[test]
fn criterion_02_wood_example() {
    let start = Instant::now();
    let t = p("mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))");
    let r_occ = Occurrence(vec![0, 0]);
    let r = term_at(&t, &r_occ).unwrap().clone();
    let omega1s = Occurrence(vec![0, 0, 0, 0, 0]);
    assert_eq!(buds(&r), [Occurrence::root(), omega1s.clone()].into());

    let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
    assert_eq!(trees.len(), 2);
    let q1 = restrict_tree_to(&t, &trees[0], &r_occ).unwrap();
    let q2 = restrict_tree_to(&t, &trees[1], &r_occ).unwrap();
    assert!(q1.trees.is_empty());
    assert_eq!(q1.proper_buds, [Occurrence::root(), omega1s.clone()].into());
    assert_eq!(q2.trees.len(), 1);
    assert_eq!(q2.trees[0].members, [Occurrence::root()].into());
    assert_eq!(q2.proper_buds, [omega1s].into());
    assert_eq!(q1.buds(), q2.buds());
    assert!(q1.trunk_pieces().is_subset(&q2.trunk_pieces()));

    let subst_in_t = |q: &SegmentWood| {
        let sub = wood_substitute(&r, q, &Payload::Fun(p("V"))).unwrap();
        replace_at(&t, &r_occ, Subterm::Term(sub)).unwrap()
    };
    let t1 = subst_in_t(&q1);
    let t2 = subst_in_t(&q2);
    assert!(alpha_eq(
        &t1,
        &p("mu @a.(@a (V mu @b.(@b in2 \\s.(@a (V in1 s)))))"),
        false
    ));
    assert!(alpha_eq(
        &t2,
        &p("mu @a.(@a mu @b.(@b (V in2 \\s.(@a (V in1 s)))))"),
        false
    ));
    assert_eq!(is_parallel_reduct(&t1, &t2, &budget()), Membership::Member);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1));
    pass(2, "wood restrictions and substitutions", elapsed);
}

/// Criterion 3: the permutative example: its two one-step reducts and
/// the development are parallel reducts, the development is the common
/// join, and the diamond check passes. Runtime < 1 s.
#[test]
fn criterion_03_permutative_example() {
    let start = Instant::now();
    let t = p("(((u [x.v,y.w]) [r.p,s.q]) e)");
    let t1 = p("((u [x.(v [r.p,s.q]), y.(w [r.p,s.q])]) e)");
    let t2 = p("((u [x.v,y.w]) [r.(p e),s.(q e)])");
    let tstar = p("(u [x.(v [r.(p e),s.(q e)]), y.(w [r.(p e),s.(q e)])])");
    let b = budget();
    let set = parallel_reducts(&t, &b);
    assert!(!set.overflowed);
    for expect in [&t1, &t2, &tstar] {
        assert!(
            set.terms.iter().any(|r| alpha_eq(r, expect, false)),
            "missing reduct {}",
            print_term(expect, false)
        );
    }
    assert!(alpha_eq(&complete_development(&t), &tstar, false));
    assert!(check_diamond(&t, &b, 50).is_pass());
    assert_eq!(is_parallel_reduct(&t1, &tstar, &b), Membership::Member);
    assert_eq!(is_parallel_reduct(&t2, &tstar, &b), Membership::Member);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1));
    pass(3, "permutative reducts join at the development", elapsed);
}

/// Criterion 4: key lemma over 300 generated terms of size <= 10 with
/// budget (200, 16): no failures, inconclusive <= 5%. Runtime < 5 min.
#[test]
fn criterion_04_key_lemma_suite() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 42,
            max_size: 10,
            ..Default::default()
        },
        count: 300,
        jobs: 4,
    };
    let report = run_suite(Suite::KeyLemma, &cfg);
    assert_eq!(report.failed, 0, "witnesses: {:?}", report.witnesses);
    assert!(
        report.inconclusive * 20 <= report.run,
        "inconclusive above 5%: {}/{}",
        report.inconclusive,
        report.run
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300));
    pass(4, "key-lemma suite, 300 terms", elapsed);
}

/// Criterion 5: diamond property over the same corpus, reduct pairs
/// capped at 50 per term: no failures. Runtime < 5 min.
#[test]
fn criterion_05_diamond_suite() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 42,
            max_size: 10,
            ..Default::default()
        },
        count: 300,
        jobs: 4,
    };
    let report = run_suite(Suite::Diamond, &cfg);
    assert_eq!(report.failed, 0, "witnesses: {:?}", report.witnesses);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300));
    pass(5, "diamond suite, 300 terms, 50 pairs each", elapsed);
}

/// Criterion 6: confluence tiling over 100 generated terms with chains of
/// up to 3 single steps each: no failures, a common reduct every time.
/// Runtime < 5 min.
#[test]
fn criterion_06_confluence_tiling() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 7,
            max_size: 10,
            ..Default::default()
        },
        count: 100,
        jobs: 4,
    };
    let report = run_suite(Suite::Confluence, &cfg);
    assert_eq!(report.failed, 0, "witnesses: {:?}", report.witnesses);
    assert_eq!(report.passed, 100, "every case must report a common reduct");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300));
    pass(6, "confluence tiling, 100 terms", elapsed);
}

/// Criterion 7: subject reduction over 300 typed terms: every one-step
/// call-by-value reduct re-checks at the original formula; reconstruction
/// diagnostics <= 2%. Runtime < 2 min.
#[test]
fn criterion_07_subject_reduction() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 11,
            max_size: 6,
            ..Default::default()
        },
        count: 300,
        jobs: 4,
    };
    let report = run_suite(Suite::Subject, &cfg);
    assert_eq!(report.failed, 0, "witnesses: {:?}", report.witnesses);
    assert!(
        report.inconclusive * 50 <= report.run,
        "reconstruction diagnostics above 2%: {}/{}",
        report.inconclusive,
        report.run
    );
    assert!(!report.aborted, "skip rate above 20%");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120));
    pass(7, "subject reduction, 300 typed terms", elapsed);
}

/// Criterion 8: value closure over 200 generated values: traces of up to
/// 20 steps stay values.
#[test]
fn criterion_08_value_closure() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 23,
            max_size: 10,
            ..Default::default()
        },
        count: 200,
        jobs: 4,
    };
    let report = run_suite(Suite::Values, &cfg);
    assert_eq!(report.failed, 0, "witnesses: {:?}", report.witnesses);
    assert_eq!(report.passed, 200);
    pass(8, "value closure, 200 values", start.elapsed());
}

/// Criterion 9: no critical pairs: over 1000 generated terms no
/// occurrence matches two distinct call-by-value rules.
#[test]
fn criterion_09_no_critical_pairs() {
    let start = Instant::now();
    let mut occurrences = 0usize;
    for seed in 0..1000u64 {
        let t = gen_term(&GenConfig {
            seed,
            max_size: 10,
            ..Default::default()
        });
        for (occ, sub) in term_occurrences(&t) {
            occurrences += 1;
            let rules = rules_at(sub, Mode::Cbv);
            assert!(
                rules.len() <= 1,
                "occurrence {} of {} matches {:?}",
                occ,
                print_term(&t, false),
                rules
            );
        }
    }
    assert!(occurrences > 5000);
    pass(9, "no critical pairs over 1000 terms", start.elapsed());
}

/// Criterion 10: the substitution lemma (three forms) and the wood lemma
/// on small instances: no failures, inconclusive <= 5%.
#[test]
fn criterion_10_substitution_and_wood_lemmas() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 31,
            max_size: 8,
            ..Default::default()
        },
        count: 200,
        jobs: 4,
    };
    let subst = run_suite(Suite::Subst, &cfg);
    assert_eq!(subst.failed, 0, "witnesses: {:?}", subst.witnesses);
    assert!(subst.inconclusive * 20 <= subst.run);
    let woods = run_suite(Suite::Woods, &cfg);
    assert_eq!(woods.failed, 0, "witnesses: {:?}", woods.witnesses);
    assert!(woods.inconclusive * 20 <= woods.run);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300));
    pass(10, "substitution and wood lemmas, 200 instances each", elapsed);
}

/// Criterion 11: parser round-trip over 1000 generated terms: 100%.
#[test]
fn criterion_11_parser_roundtrip() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        gen: GenConfig {
            seed: 0,
            max_size: 10,
            ..Default::default()
        },
        count: 1000,
        jobs: 4,
    };
    let report = run_suite(Suite::Roundtrip, &cfg);
    assert_eq!(report.passed, 1000, "witnesses: {:?}", report.witnesses);
    pass(11, "parser round-trip, 1000 terms", start.elapsed());
}

/// Criterion 12: strong normalization is not asserted for call-by-value.
/// Fuel exhaustion is a reported flag, and suites abort when more than
/// 20% of their cases skip.
#[test]
fn criterion_12_fuel_exhaustion_is_reported_not_asserted() {
    let start = Instant::now();
    // a call-by-value diverger: the argument is a value, so beta_v loops
    let omega = p("(\\x.(x x) \\x.(x x))");
    let trace = normalize(&omega, Mode::Cbv, Strategy::Lo, 50);
    assert!(trace.exhausted, "divergence must exhaust fuel");
    assert_eq!(trace.steps.len(), 50);
    // exhaustion is a flag, not an error: the trace is fully usable
    assert!(alpha_eq(trace.final_term(), &omega, false));

    // the skip cap: a report with more than 20% skips aborts, one at
    // exactly 20% does not
    let mut report = run_suite(
        Suite::Roundtrip,
        &SuiteConfig {
            gen: GenConfig::default(),
            count: 10,
            jobs: 1,
        },
    );
    report.skipped = 3;
    report.aborted = report.skipped * 5 > report.run;
    assert!(report.aborted);
    report.skipped = 2;
    report.aborted = report.skipped * 5 > report.run;
    assert!(!report.aborted);
    pass(12, "call-by-value fuel exhaustion reported as skip", start.elapsed());
}
