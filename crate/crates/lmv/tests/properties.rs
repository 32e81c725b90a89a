//! Property tests over generated terms.
//!
//! The proptest strategies build terms independently of the crate's own
//! seeded generator, so the round-trip and substitution laws are checked
//! against a second source of randomness.

use proptest::prelude::*;

use lmv::harness::{gen_term, gen_typed_term_any_goal, gen_value, GenConfig};
use lmv::parallel::{
    check_key_lemma, complete_development, is_parallel_reduct, parallel_reducts, Membership,
    ReductBudget,
};
use lmv::reduction::{contract, find_redexes, normalize, Mode, Strategy as ReduceStrategy};
use lmv::segments::{acceptors, maximal_segment_tree, segment_successors};
use lmv::subst::{canonical_key, freshen_clashing_binders};
use lmv::syntax::{parse_term, print_term};
use lmv::term::{
    free_lambda_vars, free_mu_vars, is_value, strip_all_labels, term_occurrences, ETerm, Index,
    MuName, Occurrence, Term, TermNode, VarName,
};
use lmv::typing::{formula_at, infer, ContextPair};
use lmv::{alpha_eq, mu_subst_arg, mu_subst_fun, subst_var};

// ---------------------------------------------------------------------------
// proptest strategies

fn arb_var() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        Just("u".to_string()),
    ]
}

fn arb_mu_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("a".to_string()), Just("b".to_string())]
}

fn arb_index() -> impl Strategy<Value = Index> {
    prop_oneof![Just(Index::One), Just(Index::Two)]
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = arb_var().prop_map(Term::var);
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (arb_var(), inner.clone()).prop_map(|(x, t)| Term::lam(x, t)),
            (arb_mu_name(), inner.clone()).prop_map(|(a, t)| Term::mu(a, t)),
            (arb_mu_name(), inner.clone()).prop_map(|(a, t)| Term::name(a, t)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::pair(l, r)),
            (arb_index(), inner.clone()).prop_map(|(i, t)| Term::inj(i, t)),
            (inner.clone(), inner.clone()).prop_map(|(f, u)| Term::app_term(f, u)),
            (inner.clone(), arb_index()).prop_map(|(f, i)| Term::app(f, ETerm::Proj(i))),
            (inner.clone(), arb_var(), inner.clone(), arb_var(), inner.clone()).prop_map(
                |(s, x, l, y, r)| Term::app(s, ETerm::case(x, l, y, r))
            ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_roundtrip(t in arb_term()) {
        let printed = print_term(&t, false);
        let back = parse_term(&printed).unwrap();
        prop_assert!(alpha_eq(&back, &t, false), "roundtrip failed: {printed}");
    }

    #[test]
    fn printing_is_injective_up_to_alpha(a in arb_term(), b in arb_term()) {
        if print_term(&a, false) == print_term(&b, false) {
            prop_assert!(alpha_eq(&a, &b, false));
        }
    }

    #[test]
    fn canonical_key_characterizes_alpha(a in arb_term(), b in arb_term()) {
        prop_assert_eq!(
            alpha_eq(&a, &b, false),
            canonical_key(&a, false) == canonical_key(&b, false)
        );
    }

    #[test]
    fn alpha_eq_is_reflexive(t in arb_term()) {
        prop_assert!(alpha_eq(&t, &t, true));
    }

    #[test]
    fn subst_of_absent_variable_is_identity(t in arb_term()) {
        let fresh = VarName::new("q0");
        prop_assert!(!free_lambda_vars(&t).contains(&fresh));
        let r = subst_var(&t, &fresh, &Term::var("y"));
        prop_assert!(alpha_eq(&t, &r, false));

        let fresh_mu = MuName::new("q0");
        prop_assert!(!free_mu_vars(&t).contains(&fresh_mu));
        let r = mu_subst_arg(&t, &fresh_mu, &ETerm::term(Term::var("y")));
        prop_assert!(alpha_eq(&t, &r, false));
        let r = mu_subst_fun(&t, &fresh_mu, &Term::var("y")).unwrap();
        prop_assert!(alpha_eq(&t, &r, false));
    }

    #[test]
    fn subst_respects_alpha_on_both_arguments(t in arb_term(), v in arb_term()) {
        // alpha-variant of t: freshen every binder clashing with its own
        // free variables plus the whole pool
        let pool: std::collections::BTreeSet<VarName> =
            ["x", "y", "z", "u"].iter().map(|s| VarName::new(*s)).collect();
        let mu_pool: std::collections::BTreeSet<MuName> =
            ["a", "b"].iter().map(|s| MuName::new(*s)).collect();
        let t2 = freshen_clashing_binders(&t, &pool, &mu_pool);
        prop_assert!(alpha_eq(&t, &t2, false));
        let x = VarName::new("x");
        let r1 = subst_var(&t, &x, &v);
        let r2 = subst_var(&t2, &x, &v);
        prop_assert!(alpha_eq(&r1, &r2, false));
        // and on the payload side
        let v2 = freshen_clashing_binders(&v, &pool, &mu_pool);
        prop_assert!(alpha_eq(&v, &v2, false));
        let r3 = subst_var(&t, &x, &v2);
        prop_assert!(alpha_eq(&r1, &r3, false));
    }

    #[test]
    fn label_erasure_commutes_with_operations(t in arb_term(), v in arb_term()) {
        let x = VarName::new("x");
        prop_assert!(alpha_eq(
            &strip_all_labels(&subst_var(&t, &x, &v)),
            &subst_var(&strip_all_labels(&t), &x, &strip_all_labels(&v)),
            true
        ));
        let a = MuName::new("a");
        prop_assert!(alpha_eq(
            &strip_all_labels(&mu_subst_arg(&t, &a, &ETerm::term(v.clone()))),
            &mu_subst_arg(&strip_all_labels(&t), &a, &ETerm::term(strip_all_labels(&v))),
            true
        ));
        for site in find_redexes(&t, Mode::Cbv) {
            let stepped = contract(&t, &site).unwrap();
            let stepped_stripped = contract(&strip_all_labels(&t), &site).unwrap();
            prop_assert!(alpha_eq(
                &strip_all_labels(&stepped),
                &strip_all_labels(&stepped_stripped),
                true
            ));
        }
        prop_assert!(alpha_eq(
            &strip_all_labels(&complete_development(&t)),
            &complete_development(&strip_all_labels(&t)),
            true
        ));
    }

    #[test]
    fn value_grammar_is_exact(t in arb_term()) {
        let expected = match &t.node {
            TermNode::Var(_) | TermNode::Lam { .. } | TermNode::Name { .. } => true,
            TermNode::Mu { .. } | TermNode::App { .. } => false,
            TermNode::Pair(l, r) => is_value(l) && is_value(r),
            TermNode::Inj { body, .. } => is_value(body),
        };
        prop_assert_eq!(is_value(&t), expected);
    }
}

// ---------------------------------------------------------------------------
// seeded-corpus properties

fn corpus(count: usize, size: usize, base: u64) -> impl Iterator<Item = Term> {
    (0..count).map(move |i| {
        gen_term(&GenConfig {
            seed: base + i as u64,
            max_size: size,
            ..Default::default()
        })
    })
}

#[test]
fn development_is_a_parallel_reduct() {
    let budget = ReductBudget::default();
    for t in corpus(150, 8, 9000) {
        let tstar = complete_development(&t);
        match is_parallel_reduct(&t, &tstar, &budget) {
            Membership::Member | Membership::Inconclusive => {}
            Membership::NotMember => panic!(
                "t* not a parallel reduct: t = {}, t* = {}",
                print_term(&t, false),
                print_term(&tstar, false)
            ),
        }
    }
}

#[test]
fn single_steps_are_parallel_reducts() {
    let budget = ReductBudget::default();
    for t in corpus(150, 8, 9500) {
        let set = parallel_reducts(&t, &budget);
        if set.overflowed {
            continue;
        }
        for site in find_redexes(&t, Mode::Cbv) {
            let stepped = contract(&t, &site).unwrap();
            assert!(
                set.terms.iter().any(|r| alpha_eq(r, &stepped, false)),
                "single step missing from parallel reducts of {}",
                print_term(&t, false)
            );
        }
    }
}

/// Every parallel reduct is reachable by a sequence of single steps
/// (bounded search), and conversely single steps are parallel reducts:
/// the multi-step relation is the transitive closure of parallel
/// reduction.
#[test]
fn parallel_reducts_are_multi_step_reachable() {
    let budget = ReductBudget::default();
    for t in corpus(120, 6, 11000) {
        let set = parallel_reducts(&t, &budget);
        if set.overflowed {
            continue;
        }
        for reduct in &set.terms {
            assert!(
                reachable_by_single_steps(&t, reduct, 4000),
                "parallel reduct not multi-step reachable: {} from {}",
                print_term(reduct, false),
                print_term(&t, false)
            );
        }
    }
}

fn reachable_by_single_steps(from: &Term, to: &Term, node_cap: usize) -> bool {
    let target = canonical_key(&strip_all_labels(to), false);
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(strip_all_labels(from));
    while let Some(cur) = queue.pop_front() {
        let key = canonical_key(&cur, false);
        if key == target {
            return true;
        }
        if !seen.insert(key) || seen.len() > node_cap {
            continue;
        }
        for site in find_redexes(&cur, Mode::Cbv) {
            queue.push_back(contract(&cur, &site).unwrap());
        }
    }
    false
}

/// The Z-shape consequence of the key lemma: t > u implies u > t* and
/// t* > u*.
#[test]
fn z_shape_of_developments() {
    let budget = ReductBudget::default();
    for t in corpus(80, 7, 12000) {
        let tstar = complete_development(&t);
        let set = parallel_reducts(&t, &budget);
        if set.overflowed {
            continue;
        }
        for u in set.terms.iter().take(20) {
            assert_ne!(
                is_parallel_reduct(u, &tstar, &budget),
                Membership::NotMember,
                "u > t* fails for {}",
                print_term(&t, false)
            );
            let ustar = complete_development(u);
            assert_ne!(
                is_parallel_reduct(&tstar, &ustar, &budget),
                Membership::NotMember,
                "t* > u* fails for {}",
                print_term(&t, false)
            );
        }
    }
}

#[test]
fn key_lemma_holds_on_small_corpus() {
    let budget = ReductBudget::default();
    for t in corpus(100, 8, 13000) {
        assert!(
            !matches!(check_key_lemma(&t, &budget), lmv::parallel::Verdict::Fail { .. }),
            "key lemma failed on {}",
            print_term(&t, false)
        );
    }
}

/// No acceptor of a maximal segment-tree has a segment-successor.
#[test]
fn maximal_trees_have_successor_free_acceptors() {
    for t in corpus(200, 10, 14000) {
        for (occ, _) in term_occurrences(&t) {
            let Ok(tree) = maximal_segment_tree(&t, &occ) else {
                continue;
            };
            for acc in acceptors(&t, &tree).unwrap() {
                assert!(
                    segment_successors(&t, &acc).unwrap().is_empty(),
                    "acceptor {} of a maximal tree has successors in {}",
                    acc,
                    print_term(&t, false)
                );
            }
        }
    }
}

/// For typed terms, all members of a segment-tree carry the same formula.
#[test]
fn segment_tree_members_share_their_formula() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let cfg = GenConfig {
            seed: 15000 + seed,
            max_size: 6,
            ..Default::default()
        };
        let Some((_, t)) = gen_typed_term_any_goal(&cfg) else {
            continue;
        };
        let (_, deriv) = infer(&ContextPair::empty(), &t).unwrap();
        for (occ, _) in term_occurrences(&t) {
            let Ok(tree) = maximal_segment_tree(&t, &occ) else {
                continue;
            };
            if tree.members.len() < 2 {
                continue;
            }
            let formulas: Vec<_> = tree
                .members
                .iter()
                .map(|m| formula_at(&deriv, m).cloned().expect("typed occurrence"))
                .collect();
            assert!(
                formulas.windows(2).all(|w| w[0] == w[1]),
                "segment-tree members disagree in {}",
                print_term(&t, true)
            );
            checked += 1;
        }
    }
    assert!(checked > 0, "corpus never produced a multi-member tree");
}

/// Values are closed under reduction: exhaustive bounded search over all
/// single-step reducts.
#[test]
fn value_closure_exhaustive() {
    for seed in 0..150u64 {
        let cfg = GenConfig {
            seed: 16000 + seed,
            max_size: 8,
            ..Default::default()
        };
        let v = gen_value(&cfg);
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = vec![v.clone()];
        while let Some(cur) = queue.pop() {
            if seen.len() > 200 {
                break;
            }
            if !seen.insert(canonical_key(&cur, false)) {
                continue;
            }
            assert!(
                is_value(&cur),
                "value lost under reduction: {} from {}",
                print_term(&cur, false),
                print_term(&v, false)
            );
            for site in find_redexes(&cur, Mode::Cbv) {
                queue.push(contract(&cur, &site).unwrap());
            }
        }
    }
}

/// Call-by-name normalization of well-typed terms within fuel: an
/// empirical report (strong normalization is a theorem for the
/// call-by-name calculus, but this harness only observes it).
#[test]
fn cbn_normalization_of_typed_terms_report() {
    let mut normalized = 0;
    let mut exhausted = 0;
    let mut generated = 0;
    for seed in 0..150u64 {
        let cfg = GenConfig {
            seed: 17000 + seed,
            max_size: 6,
            ..Default::default()
        };
        let Some((_, t)) = gen_typed_term_any_goal(&cfg) else {
            continue;
        };
        generated += 1;
        let trace = normalize(&lmv::erase(&t), Mode::Cbn, ReduceStrategy::Lo, 500);
        if trace.exhausted {
            exhausted += 1;
        } else {
            normalized += 1;
        }
    }
    println!(
        "REPORT cbn-normalization generated={} normalized={} fuel-exhausted={}",
        generated, normalized, exhausted
    );
    assert!(generated > 100);
}

/// Confluence tiling on random typed terms: two random two-step chains
/// from the erasure of a generated typed term complete to a common reduct.
#[test]
fn confluence_tiling_on_typed_terms() {
    use lmv::parallel::check_confluence_tile;
    let budget = ReductBudget::default();
    let mut checked = 0;
    for seed in 0..60u64 {
        let cfg = GenConfig {
            seed: 20000 + seed,
            max_size: 6,
            ..Default::default()
        };
        let Some((_, t)) = gen_typed_term_any_goal(&cfg) else {
            continue;
        };
        let out = check_confluence_tile(&lmv::erase(&t), 2, 2, seed, &budget);
        match out.verdict {
            lmv::parallel::Verdict::Pass => {
                assert!(out.common.is_some());
                checked += 1;
            }
            lmv::parallel::Verdict::Fail { witness } => {
                panic!("typed tiling failed on {}: {witness}", print_term(&t, false))
            }
            lmv::parallel::Verdict::Inconclusive => {}
        }
    }
    assert!(checked >= 40, "only {checked} typed tilings checked");
}

/// Contraction rewrites only at or below the site.
#[test]
fn contraction_is_local() {
    for t in corpus(150, 9, 18000) {
        for site in find_redexes(&t, Mode::Cbv) {
            if site.occurrence.is_root() {
                continue;
            }
            let stepped = contract(&t, &site).unwrap();
            let new_sub = lmv::term::term_at(&stepped, &site.occurrence).unwrap().clone();
            let spliced = lmv::term::replace_at(
                &t,
                &site.occurrence,
                lmv::term::Subterm::Term(new_sub),
            )
            .unwrap();
            assert!(
                alpha_eq(&spliced, &stepped, true),
                "contraction changed context at {} in {}",
                site.occurrence,
                print_term(&t, false)
            );
        }
    }
}

/// The enumeration from a root always contains the singleton and the
/// maximal tree, and every enumerated set is betweenness-closed.
#[test]
fn enumeration_contains_singleton_and_maximal() {
    use lmv::segments::{enumerate_segment_trees_capped, validate_tree, SegmentTree};
    for t in corpus(150, 10, 19000) {
        let occ = Occurrence::root();
        let Ok((trees, exceeded)) = enumerate_segment_trees_capped(&t, &occ, 64) else {
            continue;
        };
        let singleton = SegmentTree::singleton(occ.clone());
        assert!(trees.iter().any(|tr| tr.members == singleton.members));
        if !exceeded {
            let maximal = maximal_segment_tree(&t, &occ).unwrap();
            assert!(trees.iter().any(|tr| tr.members == maximal.members));
        }
        for tree in &trees {
            validate_tree(&t, tree).unwrap();
        }
    }
}
