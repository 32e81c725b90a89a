//! Parallel reduction and complete developments.
//!
//! One parallel step simultaneously contracts a set of redexes. On top of
//! the congruence and logical-redex clauses, the structural clause reduces
//! an application `(V u)` or `(u e)` whose operand is a case/mu term along
//! any segment-tree of the operand: the tree's acceptors are tracked
//! through the operand's own parallel step by marker labels, then wrapped
//! with the (reduced) payload and the application is erased.
//!
//! The complete development `t*` contracts every redex of `t` at once,
//! using the maximal segment-tree at structural redexes; it is the join
//! witness for the diamond property.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::reduction::{contract, find_redexes, is_case_app, rules_at, Mode, RuleId};
use crate::segments::{
    acceptors, enumerate_segment_trees_capped, maximal_segment_tree, wrap_marked, Payload,
};
use crate::subst::{canonical_key, subst_var};
use crate::syntax::print_term;
use crate::term::{
    is_value, mark_occurrences, with_extra_labels, ETerm, Index, MarkerId, Occurrence, Term,
    TermNode,
};

/// Bounds for reduct enumeration. Exceeding a bound never fails silently:
/// results carry an overflow flag and checkers report `Inconclusive`.
#[derive(Clone, Copy, Debug)]
pub struct ReductBudget {
    pub max_reducts: usize,
    pub max_trees_per_node: usize,
}

impl Default for ReductBudget {
    fn default() -> Self {
        ReductBudget {
            max_reducts: 200,
            max_trees_per_node: 16,
        }
    }
}

/// The parallel reducts of a term, deduplicated up to alpha (labels
/// ignored), with an overflow flag.
#[derive(Clone, Debug)]
pub struct ReductSet {
    pub terms: Vec<Term>,
    pub overflowed: bool,
}

/// Three-valued membership answer: overflow makes a negative answer
/// inconclusive rather than false.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Membership {
    Member,
    NotMember,
    Inconclusive,
}

/// Outcome of a property check on one term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    Inconclusive,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// The complete development `t*`.
pub fn complete_development(t: &Term) -> Term {
    let rules = rules_at(t, Mode::Cbv);
    let TermNode::App { fun, arg } = &t.node else {
        return develop_congruence(t);
    };
    let Some(&rule) = rules.first() else {
        // not a redex: develop both sides
        return Term {
            labels: t.labels.clone(),
            node: TermNode::App {
                fun: Box::new(complete_development(fun)),
                arg: develop_eterm(arg),
            },
        };
    };
    match rule {
        RuleId::BetaV => {
            let (TermNode::Lam { binder, body, .. }, ETerm::Term(v)) = (&fun.node, arg) else {
                unreachable!("rule shape checked by rules_at");
            };
            let result = subst_var(&complete_development(body), binder, &complete_development(v));
            with_extra_labels(result, &t.labels)
        }
        RuleId::PiV => {
            let (TermNode::Pair(l, r), ETerm::Proj(index)) = (&fun.node, arg) else {
                unreachable!("rule shape checked by rules_at");
            };
            let picked = match index {
                Index::One => l,
                Index::Two => r,
            };
            with_extra_labels(complete_development(picked), &t.labels)
        }
        RuleId::DV => {
            let (
                TermNode::Inj { index, body, .. },
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                },
            ) = (&fun.node, arg)
            else {
                unreachable!("rule shape checked by rules_at");
            };
            let (branch, binder) = match index {
                Index::One => (left, left_binder),
                Index::Two => (right, right_binder),
            };
            let result = subst_var(
                &complete_development(branch),
                binder,
                &complete_development(body),
            );
            with_extra_labels(result, &t.labels)
        }
        RuleId::Delta | RuleId::Mu => {
            // operand is the function, payload is the E-term argument
            let developed =
                develop_structural(fun, Payload::Arg(develop_eterm(arg)));
            with_extra_labels(developed, &t.labels)
        }
        RuleId::DeltaPrimeV | RuleId::MuPrimeV => {
            let ETerm::Term(u) = arg else {
                unreachable!("rule shape checked by rules_at");
            };
            let developed = develop_structural(u, Payload::Fun(complete_development(fun)));
            with_extra_labels(developed, &t.labels)
        }
        RuleId::Beta | RuleId::Pi | RuleId::D => unreachable!("cbv rules only"),
    }
}

/// Structural development: the maximal segment-tree is taken on the
/// original operand and transferred through the operand's development by
/// marker labels, then the developed payload is pushed onto the residual
/// acceptors.
fn develop_structural(operand: &Term, payload: Payload) -> Term {
    let tree =
        maximal_segment_tree(operand, &Occurrence::root()).expect("operand is a case/mu term");
    let occs = acceptors(operand, &tree).expect("tree was just built");
    let marker = MarkerId::fresh();
    let marked = mark_occurrences(operand, &occs, marker);
    let developed = complete_development(&marked);
    wrap_marked(&developed, marker, &payload)
}

fn develop_congruence(t: &Term) -> Term {
    let mut out = t.clone();
    out.node = match &t.node {
        TermNode::Var(_) => t.node.clone(),
        TermNode::Lam { binder, ann, body } => TermNode::Lam {
            binder: binder.clone(),
            ann: ann.clone(),
            body: Box::new(complete_development(body)),
        },
        TermNode::Mu { binder, ann, body } => TermNode::Mu {
            binder: binder.clone(),
            ann: ann.clone(),
            body: Box::new(complete_development(body)),
        },
        TermNode::Inj { index, ann, body } => TermNode::Inj {
            index: *index,
            ann: ann.clone(),
            body: Box::new(complete_development(body)),
        },
        TermNode::Name { name, body } => TermNode::Name {
            name: name.clone(),
            body: Box::new(complete_development(body)),
        },
        TermNode::Pair(l, r) => TermNode::Pair(
            Box::new(complete_development(l)),
            Box::new(complete_development(r)),
        ),
        TermNode::App { .. } => unreachable!("applications handled by the caller"),
    };
    out
}

fn develop_eterm(e: &ETerm) -> ETerm {
    match e {
        ETerm::Term(t) => ETerm::Term(Box::new(complete_development(t))),
        ETerm::Proj(i) => ETerm::Proj(*i),
        ETerm::Case {
            left_binder,
            left,
            right_binder,
            right,
        } => ETerm::Case {
            left_binder: left_binder.clone(),
            left: Box::new(complete_development(left)),
            right_binder: right_binder.clone(),
            right: Box::new(complete_development(right)),
        },
    }
}

// ---------------------------------------------------------------------------
// Enumeration of parallel reducts

struct Enumerator {
    budget: ReductBudget,
    overflowed: bool,
}

/// A set of terms deduplicated by alpha-equivalence. Labels are respected
/// during enumeration so that distinct residual transfers stay distinct.
struct KeyedSet {
    keys: std::collections::BTreeSet<String>,
    terms: Vec<Term>,
}

impl KeyedSet {
    fn new() -> KeyedSet {
        KeyedSet {
            keys: Default::default(),
            terms: Vec::new(),
        }
    }

    fn insert(&mut self, t: Term) -> bool {
        if self.keys.insert(canonical_key(&t, true)) {
            self.terms.push(t);
            true
        } else {
            false
        }
    }
}

impl Enumerator {
    fn reducts(&mut self, t: &Term) -> Vec<Term> {
        let mut out = KeyedSet::new();
        let full = |e: &mut Enumerator, out: &mut KeyedSet, candidate: Term| -> bool {
            if out.terms.len() >= e.budget.max_reducts {
                e.overflowed = true;
                return true;
            }
            out.insert(with_extra_labels(candidate, &t.labels));
            false
        };
        match &t.node {
            TermNode::Var(_) => {
                out.insert(t.clone());
            }
            TermNode::Lam { binder, ann, body } => {
                for b in self.reducts(body) {
                    let mut r = t.clone();
                    r.node = TermNode::Lam {
                        binder: binder.clone(),
                        ann: ann.clone(),
                        body: Box::new(b),
                    };
                    out.insert(r);
                }
            }
            TermNode::Mu { binder, ann, body } => {
                for b in self.reducts(body) {
                    let mut r = t.clone();
                    r.node = TermNode::Mu {
                        binder: binder.clone(),
                        ann: ann.clone(),
                        body: Box::new(b),
                    };
                    out.insert(r);
                }
            }
            TermNode::Inj { index, ann, body } => {
                for b in self.reducts(body) {
                    let mut r = t.clone();
                    r.node = TermNode::Inj {
                        index: *index,
                        ann: ann.clone(),
                        body: Box::new(b),
                    };
                    out.insert(r);
                }
            }
            TermNode::Name { name, body } => {
                for b in self.reducts(body) {
                    let mut r = t.clone();
                    r.node = TermNode::Name {
                        name: name.clone(),
                        body: Box::new(b),
                    };
                    out.insert(r);
                }
            }
            TermNode::Pair(l, r) => {
                let ls = self.reducts(l);
                let rs = self.reducts(r);
                'pair: for lv in &ls {
                    for rv in &rs {
                        let mut c = t.clone();
                        c.node = TermNode::Pair(Box::new(lv.clone()), Box::new(rv.clone()));
                        if out.terms.len() >= self.budget.max_reducts {
                            self.overflowed = true;
                            break 'pair;
                        }
                        out.insert(c);
                    }
                }
            }
            TermNode::App { fun, arg } => {
                // congruence
                let fs = self.reducts(fun);
                let es = self.ereducts(arg);
                'cong: for f in &fs {
                    for e in &es {
                        let mut c = t.clone();
                        c.node = TermNode::App {
                            fun: Box::new(f.clone()),
                            arg: e.clone(),
                        };
                        if out.terms.len() >= self.budget.max_reducts {
                            self.overflowed = true;
                            break 'cong;
                        }
                        out.insert(c);
                    }
                }
                // logical redexes
                match (&fun.node, arg) {
                    (TermNode::Lam { binder, body, .. }, ETerm::Term(v)) if is_value(v) => {
                        let bs = self.reducts(body);
                        let vs = self.reducts(v);
                        'beta: for b in &bs {
                            for vv in &vs {
                                if full(self, &mut out, subst_var(b, binder, vv)) {
                                    break 'beta;
                                }
                            }
                        }
                    }
                    (TermNode::Pair(l, r), ETerm::Proj(index))
                        if is_value(l) && is_value(r) =>
                    {
                        let picked = match index {
                            Index::One => l,
                            Index::Two => r,
                        };
                        for v in self.reducts(picked) {
                            if full(self, &mut out, v) {
                                break;
                            }
                        }
                    }
                    (
                        TermNode::Inj { index, body, .. },
                        ETerm::Case {
                            left_binder,
                            left,
                            right_binder,
                            right,
                        },
                    ) if is_value(body) => {
                        let (branch, binder) = match index {
                            Index::One => (left, left_binder),
                            Index::Two => (right, right_binder),
                        };
                        let vs = self.reducts(body);
                        let bs = self.reducts(branch);
                        'dv: for b in &bs {
                            for v in &vs {
                                if full(self, &mut out, subst_var(b, binder, v)) {
                                    break 'dv;
                                }
                            }
                        }
                    }
                    _ => {}
                }
                // structural clause, operand on the left: (u e) with u a
                // case/mu term, along any segment-tree of u
                if is_case_app(fun) || matches!(fun.node, TermNode::Mu { .. }) {
                    let es = self.ereducts(arg);
                    self.structural(fun, &es, PayloadSide::Arg, &mut out, t);
                }
                // operand on the right: (V u)
                if is_value(fun) {
                    if let ETerm::Term(u) = arg {
                        if is_case_app(u) || matches!(u.node, TermNode::Mu { .. }) {
                            let vs: Vec<ETerm> = self
                                .reducts(fun)
                                .into_iter()
                                .map(|v| ETerm::Term(Box::new(v)))
                                .collect();
                            self.structural(u, &vs, PayloadSide::Fun, &mut out, t);
                        }
                    }
                }
            }
        }
        out.terms
    }

    fn structural(
        &mut self,
        operand: &Term,
        payloads: &[ETerm],
        side: PayloadSide,
        out: &mut KeyedSet,
        whole: &Term,
    ) {
        let (trees, exceeded) = enumerate_segment_trees_capped(
            operand,
            &Occurrence::root(),
            self.budget.max_trees_per_node,
        )
        .expect("operand is a predecessor-free case/mu term");
        if exceeded {
            self.overflowed = true;
        }
        for tree in trees {
            let occs = acceptors(operand, &tree).expect("tree from enumeration");
            let marker = MarkerId::fresh();
            let marked = mark_occurrences(operand, &occs, marker);
            let inner = self.reducts(&marked);
            'emit: for u in &inner {
                for payload in payloads {
                    let p = match (side, payload) {
                        (PayloadSide::Arg, e) => Payload::Arg(e.clone()),
                        (PayloadSide::Fun, ETerm::Term(v)) => Payload::Fun((**v).clone()),
                        (PayloadSide::Fun, _) => unreachable!("fun payloads are terms"),
                    };
                    if out.terms.len() >= self.budget.max_reducts {
                        self.overflowed = true;
                        break 'emit;
                    }
                    let w = wrap_marked(u, marker, &p);
                    out.insert(with_extra_labels(w, &whole.labels));
                }
            }
        }
    }

    fn ereducts(&mut self, e: &ETerm) -> Vec<ETerm> {
        match e {
            ETerm::Term(t) => self
                .reducts(t)
                .into_iter()
                .map(|t| ETerm::Term(Box::new(t)))
                .collect(),
            ETerm::Proj(i) => vec![ETerm::Proj(*i)],
            ETerm::Case {
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let ls = self.reducts(left);
                let rs = self.reducts(right);
                let mut out = Vec::new();
                for l in &ls {
                    for r in &rs {
                        if out.len() >= self.budget.max_reducts {
                            self.overflowed = true;
                            return out;
                        }
                        out.push(ETerm::Case {
                            left_binder: left_binder.clone(),
                            left: Box::new(l.clone()),
                            right_binder: right_binder.clone(),
                            right: Box::new(r.clone()),
                        });
                    }
                }
                out
            }
        }
    }
}

#[derive(Clone, Copy)]
enum PayloadSide {
    Fun,
    Arg,
}

/// All parallel reducts of `t` within the budget, deduplicated up to alpha
/// with labels ignored. `t` itself is always a member (reflexivity).
pub fn parallel_reducts(t: &Term, budget: &ReductBudget) -> ReductSet {
    let mut e = Enumerator {
        budget: *budget,
        overflowed: false,
    };
    let raw = e.reducts(t);
    let mut keys = std::collections::BTreeSet::new();
    let mut terms = Vec::new();
    for r in raw {
        if keys.insert(canonical_key(&r, false)) {
            terms.push(r);
        }
    }
    ReductSet {
        terms,
        overflowed: e.overflowed,
    }
}

/// Whether `u` is a parallel reduct of `t`. Overflow without a positive
/// answer is reported as [`Membership::Inconclusive`].
pub fn is_parallel_reduct(t: &Term, u: &Term, budget: &ReductBudget) -> Membership {
    let set = parallel_reducts(t, budget);
    let key = canonical_key(u, false);
    if set.terms.iter().any(|r| canonical_key(r, false) == key) {
        Membership::Member
    } else if set.overflowed {
        Membership::Inconclusive
    } else {
        Membership::NotMember
    }
}

/// Checks the key lemma on `t`: every parallel reduct of `t` parallel-
/// reduces to the complete development of `t`.
pub fn check_key_lemma(t: &Term, budget: &ReductBudget) -> Verdict {
    let tstar = complete_development(t);
    let set = parallel_reducts(t, budget);
    let mut inconclusive = set.overflowed;
    for reduct in &set.terms {
        match is_parallel_reduct(reduct, &tstar, budget) {
            Membership::Member => {}
            Membership::NotMember => {
                return Verdict::Fail {
                    witness: format!(
                        "t' = {} does not reduce to t* = {}",
                        print_term(reduct, false),
                        print_term(&tstar, false)
                    ),
                };
            }
            Membership::Inconclusive => inconclusive = true,
        }
    }
    if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Checks the diamond property on `t`: every pair of parallel reducts
/// joins at the complete development. At most `pair_cap` pairs are tried.
pub fn check_diamond(t: &Term, budget: &ReductBudget, pair_cap: usize) -> Verdict {
    let tstar = complete_development(t);
    let set = parallel_reducts(t, budget);
    let mut inconclusive = set.overflowed;
    // membership of t* is memoized per element; a pair fails only if one
    // of its components definitely cannot reach t*
    let memberships: Vec<Membership> = set
        .terms
        .iter()
        .map(|r| is_parallel_reduct(r, &tstar, budget))
        .collect();
    let mut pairs = 0usize;
    'outer: for i in 0..set.terms.len() {
        for j in i..set.terms.len() {
            if pairs >= pair_cap {
                break 'outer;
            }
            pairs += 1;
            for k in [i, j] {
                match memberships[k] {
                    Membership::Member => {}
                    Membership::NotMember => {
                        return Verdict::Fail {
                            witness: format!(
                                "{} and {} do not join at t* = {}",
                                print_term(&set.terms[i], false),
                                print_term(&set.terms[j], false),
                                print_term(&tstar, false)
                            ),
                        };
                    }
                    Membership::Inconclusive => inconclusive = true,
                }
            }
        }
    }
    if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Outcome of a confluence tiling: the verdict plus the common reduct when
/// the grid closed.
#[derive(Clone, Debug)]
pub struct TileOutcome {
    pub verdict: Verdict,
    pub common: Option<Term>,
}

/// Completes the square between two single-step chains from `t` by
/// development tiling: cell (i,j) for i,j >= 1 is the complete development
/// of cell (i-1,j-1), and every grid edge is verified to be one parallel
/// step.
pub fn tile_join(t: &Term, chain_a: &[Term], chain_b: &[Term], budget: &ReductBudget) -> TileOutcome {
    let k = chain_a.len();
    let m = chain_b.len();
    let mut grid: Vec<Vec<Term>> = vec![vec![t.clone(); m + 1]; k + 1];
    for (i, a) in chain_a.iter().enumerate() {
        grid[i + 1][0] = a.clone();
    }
    for (j, b) in chain_b.iter().enumerate() {
        grid[0][j + 1] = b.clone();
    }
    for i in 1..=k {
        for j in 1..=m {
            grid[i][j] = complete_development(&grid[i - 1][j - 1]);
        }
    }
    let mut inconclusive = false;
    for i in 0..=k {
        for j in 0..=m {
            let mut edges = Vec::new();
            if j < m {
                edges.push(&grid[i][j + 1]);
            }
            if i < k {
                edges.push(&grid[i + 1][j]);
            }
            for target in edges {
                match is_parallel_reduct(&grid[i][j], target, budget) {
                    Membership::Member => {}
                    Membership::NotMember => {
                        return TileOutcome {
                            verdict: Verdict::Fail {
                                witness: format!(
                                    "{} does not parallel-reduce to {}",
                                    print_term(&grid[i][j], false),
                                    print_term(target, false)
                                ),
                            },
                            common: None,
                        };
                    }
                    Membership::Inconclusive => inconclusive = true,
                }
            }
        }
    }
    TileOutcome {
        verdict: if inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        },
        common: Some(grid[k][m].clone()),
    }
}

/// Builds two seeded random call-by-value chains of up to `k` and `m`
/// single steps from `t` and verifies the confluence tiling.
pub fn check_confluence_tile(
    t: &Term,
    k: usize,
    m: usize,
    seed: u64,
    budget: &ReductBudget,
) -> TileOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain_a = random_chain(t, k, &mut rng);
    let chain_b = random_chain(t, m, &mut rng);
    tile_join(t, &chain_a, &chain_b, budget)
}

fn random_chain(t: &Term, len: usize, rng: &mut ChaCha8Rng) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = t.clone();
    for _ in 0..len {
        let sites = find_redexes(&cur, Mode::Cbv);
        let Some(site) = sites.choose(rng) else {
            break;
        };
        cur = contract(&cur, site).expect("site from find_redexes");
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_eq;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn budget() -> ReductBudget {
        ReductBudget::default()
    }

    fn contains(set: &ReductSet, t: &Term) -> bool {
        set.terms.iter().any(|r| alpha_eq(r, t, false))
    }

    /// The permutative example: `t = (((u [x.v,y.w]) [r.p,s.q]) e)`.
    fn example_perm() -> Term {
        p("(((u [x.v,y.w]) [r.p,s.q]) e)")
    }

    fn example_perm_t1() -> Term {
        p("((u [x.(v [r.p,s.q]), y.(w [r.p,s.q])]) e)")
    }

    fn example_perm_t2() -> Term {
        p("((u [x.v,y.w]) [r.(p e),s.(q e)])")
    }

    fn example_perm_star() -> Term {
        p("(u [x.(v [r.(p e),s.(q e)]), y.(w [r.(p e),s.(q e)])])")
    }

    #[test]
    fn development_basics() {
        assert!(alpha_eq(&complete_development(&p("x")), &p("x"), false));
        assert!(alpha_eq(&complete_development(&p("(\\x.x y)")), &p("y"), false));
        assert!(alpha_eq(
            &complete_development(&example_perm()),
            &example_perm_star(),
            false
        ));
    }

    #[test]
    fn development_of_left_structural() {
        // (z E2) develops along the maximal tree of the operand
        let t = p("(z (u [x. mu @a.(@a <x,(@a w)>), y. v]))");
        let expect = p("(u [x. mu @a.(@a (z <x,(@a (z w))>)), y. (z v)])");
        assert!(alpha_eq(&complete_development(&t), &expect, false));
    }

    #[test]
    fn parallel_reducts_of_beta_redex() {
        let set = parallel_reducts(&p("(\\x.x y)"), &budget());
        assert!(!set.overflowed);
        assert_eq!(set.terms.len(), 2);
        assert!(contains(&set, &p("(\\x.x y)")));
        assert!(contains(&set, &p("y")));
    }

    #[test]
    fn parallel_reducts_of_variable() {
        let set = parallel_reducts(&p("x"), &budget());
        assert_eq!(set.terms.len(), 1);
    }

    #[test]
    fn permutative_example_reducts() {
        let set = parallel_reducts(&example_perm(), &budget());
        assert!(!set.overflowed);
        assert!(contains(&set, &example_perm_t1()));
        assert!(contains(&set, &example_perm_t2()));
        assert!(contains(&set, &example_perm_star()));
    }

    #[test]
    fn membership_examples() {
        let b = budget();
        assert_eq!(
            is_parallel_reduct(&example_perm(), &example_perm_t1(), &b),
            Membership::Member
        );
        assert_eq!(
            is_parallel_reduct(&example_perm_t1(), &example_perm_star(), &b),
            Membership::Member
        );
        assert_eq!(
            is_parallel_reduct(&example_perm_t2(), &example_perm_star(), &b),
            Membership::Member
        );
        assert_eq!(
            is_parallel_reduct(&p("x"), &p("y"), &b),
            Membership::NotMember
        );
    }

    #[test]
    fn reflexivity_and_single_steps_are_parallel() {
        let b = budget();
        for s in [
            "(mu @a.(@a x) y)",
            "((u [x1.t1,x2.t2]) p1)",
            "(z (u [x1.t1,x2.t2]))",
            "(\\x.<x,x> y)",
            // payload variables clash with binders in the operand
            "(mu @a.(@a x) (@a y))",
            "((y [v.z,k1.v]) [u.w,w.in1 v])",
            "(in1 v (u [v.(v v),k1.k1]))",
        ] {
            let t = p(s);
            let set = parallel_reducts(&t, &b);
            assert!(contains(&set, &t), "reflexivity on {s}");
            for site in find_redexes(&t, Mode::Cbv) {
                let step = contract(&t, &site).unwrap();
                assert!(contains(&set, &step), "single step {site:?} on {s}");
            }
        }
    }

    #[test]
    fn key_lemma_on_examples() {
        let b = budget();
        assert!(check_key_lemma(&p("x"), &b).is_pass());
        assert!(check_key_lemma(&example_perm(), &b).is_pass());
        assert!(check_key_lemma(&p("(z (u [x. mu @a.(@a <x,(@a w)>), y. v]))"), &b).is_pass());
    }

    #[test]
    fn diamond_on_examples() {
        let b = budget();
        assert!(check_diamond(&p("x"), &b, 50).is_pass());
        assert!(check_diamond(&example_perm(), &b, 50).is_pass());
    }

    #[test]
    fn tile_join_trivial_and_permutative_chains() {
        let b = budget();
        let t = example_perm();
        // k = m = 0
        let out = tile_join(&t, &[], &[], &b);
        assert!(out.verdict.is_pass());
        assert!(alpha_eq(out.common.as_ref().unwrap(), &t, false));
        // the two one-step permutative chains join at t*
        let out = tile_join(&t, &[example_perm_t1()], &[example_perm_t2()], &b);
        assert!(out.verdict.is_pass());
        assert!(alpha_eq(
            out.common.as_ref().unwrap(),
            &example_perm_star(),
            false
        ));
    }

    #[test]
    fn overflow_is_flagged() {
        let tiny = ReductBudget {
            max_reducts: 2,
            max_trees_per_node: 16,
        };
        let set = parallel_reducts(&example_perm(), &tiny);
        assert!(set.overflowed);
    }
}
