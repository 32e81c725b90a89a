//! Segment-trees and segment-woods.
//!
//! The segment-successor relation on occurrences of a term relates a case
//! application `(u [x1.u1,x2.u2])` to its branches, and `mu @a.u` to every
//! body `v` of a subterm `(@a v)` bound by that binder. A segment-tree
//! from a predecessor-free case/mu occurrence is a successor-reachable,
//! betweenness-closed set of case/mu occurrences; its acceptors are the
//! successors that fall outside the set. Extended structural reduction
//! pushes the payload of an application onto every acceptor and erases the
//! application, generalizing the four structural rules.
//!
//! Everything works on [`Occurrence`]s, not subterms: equal subterms at
//! different positions are distinct.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::reduction::is_case_app;
use crate::term::{
    is_value, modify_at, term_at, term_occurrences, ETerm, MuName, Occurrence, Term, TermError,
    TermNode,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SegmentError {
    #[error("{0} is not a case application or mu-abstraction")]
    NotSegmentTerm(Occurrence),
    #[error("{0} has a segment-predecessor")]
    HasPredecessor(Occurrence),
    #[error("more than {cap} segment-trees from this root")]
    CapExceeded { cap: usize },
    #[error("invalid segment-tree: {0}")]
    InvalidTree(String),
    #[error("invalid segment-wood: {0}")]
    InvalidWood(String),
    #[error("left payload of a wood substitution must be a value")]
    NonValuePayload,
    #[error("term at {0} is not an application with the tree root as operand")]
    NotAnApplication(Occurrence),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A segment-tree: a root occurrence and the member set (root included).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SegmentTree {
    pub root: Occurrence,
    pub members: BTreeSet<Occurrence>,
}

impl SegmentTree {
    pub fn singleton(root: Occurrence) -> SegmentTree {
        let members = [root.clone()].into();
        SegmentTree { root, members }
    }
}

/// A segment-wood: disjoint segment-trees rooted at buds plus a set of
/// proper-buds.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SegmentWood {
    pub trees: Vec<SegmentTree>,
    pub proper_buds: BTreeSet<Occurrence>,
}

impl SegmentWood {
    pub fn from_tree(tree: SegmentTree) -> SegmentWood {
        SegmentWood {
            trees: vec![tree],
            proper_buds: BTreeSet::new(),
        }
    }

    /// `Bud(Q)`: the tree roots together with the proper-buds.
    pub fn buds(&self) -> BTreeSet<Occurrence> {
        let mut out = self.proper_buds.clone();
        out.extend(self.trees.iter().map(|t| t.root.clone()));
        out
    }

    /// All trunk-pieces, i.e. members of the component trees.
    pub fn trunk_pieces(&self) -> BTreeSet<Occurrence> {
        self.trees
            .iter()
            .flat_map(|t| t.members.iter().cloned())
            .collect()
    }
}

/// True iff `occ` addresses a case application or a mu-abstraction.
pub fn is_segment_occurrence(t: &Term, occ: &Occurrence) -> Result<bool, SegmentError> {
    let sub = term_at(t, occ)?;
    Ok(is_case_app(sub) || matches!(sub.node, TermNode::Mu { .. }))
}

/// The segment-successors of the occurrence `o` in `t`.
pub fn segment_successors(t: &Term, o: &Occurrence) -> Result<BTreeSet<Occurrence>, SegmentError> {
    let sub = term_at(t, o)?;
    let mut out = BTreeSet::new();
    match &sub.node {
        TermNode::App {
            arg: ETerm::Case { .. },
            ..
        } => {
            out.insert(o.child(1).child(0));
            out.insert(o.child(1).child(1));
        }
        TermNode::Mu { binder, body, .. } => {
            named_bodies(body, binder, o.child(0), &mut out);
        }
        _ => {}
    }
    Ok(out)
}

/// Occurrences of `v` for every `(@a v)` in `t` whose `a` is this binder.
fn named_bodies(t: &Term, a: &MuName, at: Occurrence, out: &mut BTreeSet<Occurrence>) {
    match &t.node {
        TermNode::Var(_) => {}
        TermNode::Name { name, body } => {
            if name == a {
                out.insert(at.child(0));
            }
            named_bodies(body, a, at.child(0), out);
        }
        TermNode::Mu { binder, body, .. } => {
            if binder != a {
                named_bodies(body, a, at.child(0), out);
            }
        }
        TermNode::Lam { body, .. } | TermNode::Inj { body, .. } => {
            named_bodies(body, a, at.child(0), out)
        }
        TermNode::Pair(l, r) => {
            named_bodies(l, a, at.child(0), out);
            named_bodies(r, a, at.child(1), out);
        }
        TermNode::App { fun, arg } => {
            named_bodies(fun, a, at.child(0), out);
            match arg {
                ETerm::Term(u) => named_bodies(u, a, at.child(1), out),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    named_bodies(left, a, at.child(1).child(0), out);
                    named_bodies(right, a, at.child(1).child(1), out);
                }
            }
        }
    }
}

/// The unique segment-predecessor of `o` in `t`, if any.
pub fn segment_predecessor(t: &Term, o: &Occurrence) -> Result<Option<Occurrence>, SegmentError> {
    term_at(t, o)?;
    for (occ, sub) in term_occurrences(t) {
        if is_case_app(sub) || matches!(sub.node, TermNode::Mu { .. }) {
            if segment_successors(t, &occ)?.contains(o) {
                return Ok(Some(occ));
            }
        }
    }
    Ok(None)
}

/// The buds of `t`: the root, plus every `v` occurring as `(@a v)` with
/// `a` free in `t`.
pub fn buds(t: &Term) -> BTreeSet<Occurrence> {
    let mut out = BTreeSet::new();
    out.insert(Occurrence::root());
    collect_buds(t, Occurrence::root(), &mut Vec::new(), &mut out);
    out
}

fn collect_buds(t: &Term, at: Occurrence, bound: &mut Vec<MuName>, out: &mut BTreeSet<Occurrence>) {
    match &t.node {
        TermNode::Var(_) => {}
        TermNode::Name { name, body } => {
            if !bound.contains(name) {
                out.insert(at.child(0));
            }
            collect_buds(body, at.child(0), bound, out);
        }
        TermNode::Mu { binder, body, .. } => {
            bound.push(binder.clone());
            collect_buds(body, at.child(0), bound, out);
            bound.pop();
        }
        TermNode::Lam { body, .. } | TermNode::Inj { body, .. } => {
            collect_buds(body, at.child(0), bound, out)
        }
        TermNode::Pair(l, r) => {
            collect_buds(l, at.child(0), bound, out);
            collect_buds(r, at.child(1), bound, out);
        }
        TermNode::App { fun, arg } => {
            collect_buds(fun, at.child(0), bound, out);
            match arg {
                ETerm::Term(u) => collect_buds(u, at.child(1), bound, out),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    collect_buds(left, at.child(1).child(0), bound, out);
                    collect_buds(right, at.child(1).child(1), bound, out);
                }
            }
        }
    }
}

fn require_root(t: &Term, root: &Occurrence) -> Result<(), SegmentError> {
    if !is_segment_occurrence(t, root)? {
        return Err(SegmentError::NotSegmentTerm(root.clone()));
    }
    if segment_predecessor(t, root)?.is_some() {
        return Err(SegmentError::HasPredecessor(root.clone()));
    }
    Ok(())
}

/// The case/mu successors of `o`, i.e. the edges of the reachability tree.
fn segment_children(t: &Term, o: &Occurrence) -> Result<Vec<Occurrence>, SegmentError> {
    let mut out = Vec::new();
    for s in segment_successors(t, o)? {
        if is_segment_occurrence(t, &s)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// All segment-trees from `root` in `t`, up to `cap` many, sorted by size
/// and then by member paths. Exceeding the cap is an error, not a silent
/// truncation; [`enumerate_segment_trees_capped`] returns the partial list.
pub fn enumerate_segment_trees(
    t: &Term,
    root: &Occurrence,
    cap: usize,
) -> Result<Vec<SegmentTree>, SegmentError> {
    let (trees, exceeded) = enumerate_segment_trees_capped(t, root, cap)?;
    if exceeded {
        return Err(SegmentError::CapExceeded { cap });
    }
    Ok(trees)
}

/// As [`enumerate_segment_trees`], but on overflow returns the first `cap`
/// trees and a flag instead of failing.
pub fn enumerate_segment_trees_capped(
    t: &Term,
    root: &Occurrence,
    cap: usize,
) -> Result<(Vec<SegmentTree>, bool), SegmentError> {
    require_root(t, root)?;
    let mut sets: Vec<BTreeSet<Occurrence>> = Vec::new();
    let mut exceeded = false;
    subtree_sets(t, root, cap, &mut sets, &mut exceeded)?;
    let mut keyed: Vec<(usize, Vec<Occurrence>, BTreeSet<Occurrence>)> = sets
        .into_iter()
        .map(|s| (s.len(), s.iter().cloned().collect(), s))
        .collect();
    keyed.sort();
    let trees = keyed
        .into_iter()
        .map(|(_, _, members)| SegmentTree {
            root: root.clone(),
            members,
        })
        .collect();
    Ok((trees, exceeded))
}

/// Rooted subtrees of the reachability tree below `node`, each including
/// `node` itself.
fn subtree_sets(
    t: &Term,
    node: &Occurrence,
    cap: usize,
    out: &mut Vec<BTreeSet<Occurrence>>,
    exceeded: &mut bool,
) -> Result<(), SegmentError> {
    out.push([node.clone()].into());
    for child in segment_children(t, node)? {
        let mut child_sets = Vec::new();
        subtree_sets(t, &child, cap, &mut child_sets, exceeded)?;
        let base = out.clone();
        for cs in child_sets {
            for b in &base {
                if out.len() >= cap {
                    *exceeded = true;
                    return Ok(());
                }
                let mut s = b.clone();
                s.extend(cs.iter().cloned());
                out.push(s);
            }
        }
    }
    Ok(())
}

/// The maximal segment-tree from `root`: successors are added until no
/// acceptor is a case/mu term.
pub fn maximal_segment_tree(t: &Term, root: &Occurrence) -> Result<SegmentTree, SegmentError> {
    require_root(t, root)?;
    let mut members: BTreeSet<Occurrence> = [root.clone()].into();
    let mut queue = vec![root.clone()];
    while let Some(o) = queue.pop() {
        for child in segment_children(t, &o)? {
            if members.insert(child.clone()) {
                queue.push(child);
            }
        }
    }
    Ok(SegmentTree {
        root: root.clone(),
        members,
    })
}

/// The acceptors of a segment-tree: successors of members outside the set.
pub fn acceptors(t: &Term, tree: &SegmentTree) -> Result<BTreeSet<Occurrence>, SegmentError> {
    let mut out = BTreeSet::new();
    for m in &tree.members {
        for s in segment_successors(t, m)? {
            if !tree.members.contains(&s) {
                out.insert(s);
            }
        }
    }
    Ok(out)
}

/// The acceptors of a segment-wood: tree acceptors plus proper-buds.
pub fn wood_acceptors(t: &Term, wood: &SegmentWood) -> Result<BTreeSet<Occurrence>, SegmentError> {
    let mut out = wood.proper_buds.clone();
    for tree in &wood.trees {
        out.extend(acceptors(t, tree)?);
    }
    Ok(out)
}

/// Checks the segment-tree conditions: the root is predecessor-free, all
/// members are case/mu occurrences reachable from the root, and the set is
/// closed under betweenness.
pub fn validate_tree(t: &Term, tree: &SegmentTree) -> Result<(), SegmentError> {
    require_root(t, &tree.root)?;
    if !tree.members.contains(&tree.root) {
        return Err(SegmentError::InvalidTree("root not a member".into()));
    }
    for m in &tree.members {
        if !is_segment_occurrence(t, m)? {
            return Err(SegmentError::InvalidTree(format!(
                "{} is not a case/mu occurrence",
                m
            )));
        }
        // walk the (unique) predecessor chain back to the root; every
        // intermediate node must be a member
        let mut cur = m.clone();
        while cur != tree.root {
            match segment_predecessor(t, &cur)? {
                Some(p) => {
                    if !tree.members.contains(&p) {
                        return Err(SegmentError::InvalidTree(format!(
                            "not betweenness-closed: {} missing",
                            p
                        )));
                    }
                    cur = p;
                }
                None => {
                    return Err(SegmentError::InvalidTree(format!(
                        "{} is not reachable from the root",
                        m
                    )))
                }
            }
        }
    }
    Ok(())
}

/// Checks the segment-wood conditions: tree roots are buds, components are
/// valid trees, and trees and proper-buds are mutually disjoint.
pub fn validate_wood(t: &Term, wood: &SegmentWood) -> Result<(), SegmentError> {
    let all_buds = buds(t);
    for tree in &wood.trees {
        if !all_buds.contains(&tree.root) {
            return Err(SegmentError::InvalidWood(format!(
                "tree root {} is not a bud",
                tree.root
            )));
        }
        validate_tree(t, tree)?;
    }
    for b in &wood.proper_buds {
        if !all_buds.contains(b) {
            return Err(SegmentError::InvalidWood(format!("{} is not a bud", b)));
        }
    }
    let mut seen: BTreeSet<Occurrence> = BTreeSet::new();
    for tree in &wood.trees {
        for m in &tree.members {
            if !seen.insert(m.clone()) {
                return Err(SegmentError::InvalidWood(format!(
                    "trees overlap at {}",
                    m
                )));
            }
        }
    }
    for b in &wood.proper_buds {
        if seen.contains(b) {
            return Err(SegmentError::InvalidWood(format!(
                "proper-bud {} lies in a tree",
                b
            )));
        }
    }
    Ok(())
}

/// The payload pushed onto acceptors.
#[derive(Clone, Debug)]
pub enum Payload {
    /// Wrap each acceptor `v` as `(V v)`; the value of `t[V/Q]`.
    Fun(Term),
    /// Wrap each acceptor `v` as `(v e)`; the E-term of `t[e/Q]`.
    Arg(ETerm),
}

impl Payload {
    fn wrap(&self, sub: Term) -> Term {
        match self {
            Payload::Fun(v) => Term::app_term(v.clone(), sub),
            Payload::Arg(e) => Term::app(sub, e.clone()),
        }
    }
}

/// Wraps every occurrence in `occs` with the payload, innermost-first so
/// that nested occurrences compose. Host binders that would capture a
/// free variable of the payload are renamed first; renaming keeps all
/// occurrence paths valid.
pub fn wrap_occurrences(
    t: &Term,
    occs: &BTreeSet<Occurrence>,
    payload: &Payload,
) -> Result<Term, SegmentError> {
    let (avoid_lambda, avoid_mu) = match payload {
        Payload::Fun(v) => (
            crate::term::free_lambda_vars(v),
            crate::term::free_mu_vars(v),
        ),
        Payload::Arg(e) => (
            crate::term::free_lambda_vars_eterm(e),
            crate::term::free_mu_vars_eterm(e),
        ),
    };
    let mut cur = crate::subst::freshen_clashing_binders(t, &avoid_lambda, &avoid_mu);
    let mut ordered: Vec<&Occurrence> = occs.iter().collect();
    ordered.sort_by_key(|o| std::cmp::Reverse(o.depth()));
    for occ in ordered {
        cur = modify_at(&cur, occ, |sub| payload.wrap(sub))?;
    }
    Ok(cur)
}

/// Wraps every occurrence labeled with `marker` (innermost-first), then
/// strips the marker. This is the residual-transfer step: acceptors are
/// marked in the source term, carried through a reduction, and wrapped at
/// their residual positions.
pub fn wrap_marked(t: &Term, marker: crate::term::MarkerId, payload: &Payload) -> Term {
    let occs = crate::term::marked_occurrences(t, marker).into_iter().collect();
    let wrapped = wrap_occurrences(t, &occs, payload).expect("marked paths are valid");
    crate::term::strip_marker(&wrapped, marker)
}

/// `t[V/Q]` (resp. `t[e/Q]`): wraps every acceptor of the wood.
pub fn wood_substitute(t: &Term, wood: &SegmentWood, payload: &Payload) -> Result<Term, SegmentError> {
    if let Payload::Fun(v) = payload {
        if !is_value(v) {
            return Err(SegmentError::NonValuePayload);
        }
    }
    let occs = wood_acceptors(t, wood)?;
    wrap_occurrences(t, &occs, payload)
}

/// Extended structural reduction of `app` along `tree`.
///
/// `app` must be `(V r)` with `V` a value, or `(r e)`, where `r` is the
/// operand hosting the tree (the tree root is the empty occurrence in
/// `r`). Every acceptor is wrapped with the payload and the application
/// node is erased; the application's labels move to the result root.
pub fn extended_structural_reduce(app: &Term, tree: &SegmentTree) -> Result<Term, SegmentError> {
    let TermNode::App { fun, arg } = &app.node else {
        return Err(SegmentError::NotAnApplication(Occurrence::root()));
    };
    let case_or_mu = |t: &Term| is_case_app(t) || matches!(t.node, TermNode::Mu { .. });
    let (operand, payload) = if case_or_mu(fun) {
        ((**fun).clone(), Payload::Arg(arg.clone()))
    } else if let ETerm::Term(u) = arg {
        if case_or_mu(u) && is_value(fun) {
            ((**u).clone(), Payload::Fun((**fun).clone()))
        } else {
            return Err(SegmentError::NotAnApplication(Occurrence::root()));
        }
    } else {
        return Err(SegmentError::NotAnApplication(Occurrence::root()));
    };
    validate_tree(&operand, tree)?;
    let occs = acceptors(&operand, tree)?;
    let wrapped = wrap_occurrences(&operand, &occs, &payload)?;
    Ok(crate::term::with_extra_labels(wrapped, &app.labels))
}

/// Restricts a segment-tree of `t` to the subterm at `scope`, yielding the
/// segment-wood in that subterm: members inside the scope regroup into
/// trees (rooted where their predecessor leaves the scope), and acceptors
/// inside the scope whose predecessor lies outside become proper-buds.
/// All occurrences of the result are relative to the subterm.
pub fn restrict_tree_to(
    t: &Term,
    tree: &SegmentTree,
    scope: &Occurrence,
) -> Result<SegmentWood, SegmentError> {
    term_at(t, scope)?;
    let inside: Vec<&Occurrence> = tree.members.iter().filter(|m| m.is_within(scope)).collect();
    // classify members: roots have their predecessor outside the scope
    let mut roots: Vec<Occurrence> = Vec::new();
    let mut assigned: Vec<(Occurrence, Occurrence)> = Vec::new(); // (member, its pred)
    for m in &inside {
        match segment_predecessor(t, m)? {
            Some(p) if p.is_within(scope) && tree.members.contains(&p) => {
                assigned.push(((*m).clone(), p));
            }
            _ => roots.push((*m).clone()),
        }
    }
    // build one tree per root by chasing predecessor chains
    let mut trees: Vec<SegmentTree> = Vec::new();
    for root in &roots {
        let mut members: BTreeSet<Occurrence> = [root.clone()].into();
        let mut changed = true;
        while changed {
            changed = false;
            for (m, p) in &assigned {
                if members.contains(p) && members.insert(m.clone()) {
                    changed = true;
                }
            }
        }
        trees.push(SegmentTree {
            root: root.clone(),
            members,
        });
    }
    // acceptors inside the scope whose predecessor member is outside
    let mut proper_buds = BTreeSet::new();
    for a in acceptors(t, tree)? {
        if !a.is_within(scope) {
            continue;
        }
        let pred = segment_predecessor(t, &a)?
            .expect("acceptors have a predecessor by definition");
        if !pred.is_within(scope) {
            proper_buds.insert(a.strip_prefix(scope).expect("checked within"));
        }
    }
    let trees = trees
        .into_iter()
        .map(|tr| SegmentTree {
            root: tr.root.strip_prefix(scope).expect("checked within"),
            members: tr
                .members
                .iter()
                .map(|m| m.strip_prefix(scope).expect("checked within"))
                .collect(),
        })
        .collect();
    Ok(SegmentWood { trees, proper_buds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_eq;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn o(path: &[usize]) -> Occurrence {
        Occurrence(path.to_vec())
    }

    /// The two-tree term of the worked example:
    /// `t = (u [x. mu @a.(@a <x,(@a w)>), y. v])`.
    fn example_two_trees() -> Term {
        p("(u [x. mu @a.(@a <x,(@a w)>), y. v])")
    }

    /// The wood example term `mu @a.(@a mu @b.(@b in2 \s.(@a in1 s)))`.
    fn example_wood() -> Term {
        p("mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))")
    }

    #[test]
    fn successors_of_case_and_mu() {
        let t = example_two_trees();
        // the root's successors are the two branches
        let s = segment_successors(&t, &Occurrence::root()).unwrap();
        assert_eq!(s, [o(&[1, 0]), o(&[1, 1])].into());
        // the mu's successors are the bodies of its named subterms
        let s = segment_successors(&t, &o(&[1, 0])).unwrap();
        assert_eq!(s, [o(&[1, 0, 0, 0]), o(&[1, 0, 0, 0, 1, 0])].into());
        // a lambda has none
        assert!(segment_successors(&p("\\x.x"), &Occurrence::root())
            .unwrap()
            .is_empty());
        // shadowing: a rebinding of @a hides inner named bodies
        let t = p("mu @a.(@a mu @a.(@a x))");
        let s = segment_successors(&t, &Occurrence::root()).unwrap();
        assert_eq!(s, [o(&[0, 0])].into());
    }

    #[test]
    fn buds_examples() {
        let r = p("mu @b.(@b in2 \\s.(@a in1 s))");
        assert_eq!(buds(&r), [Occurrence::root(), o(&[0, 0, 0, 0, 0])].into());
        assert_eq!(buds(&p("\\x.x")), [Occurrence::root()].into());
        assert_eq!(buds(&p("mu @a.(@a x)")), [Occurrence::root()].into());
    }

    #[test]
    fn enumerate_trees_of_example() {
        let t = example_two_trees();
        let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[0].members, [Occurrence::root()].into());
        assert_eq!(trees[1].members, [Occurrence::root(), o(&[1, 0])].into());

        // within a mu whose named body is not a case/mu term the only
        // tree is the singleton
        let t = p("mu @a.(@a x)");
        let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
        assert_eq!(trees.len(), 1);

        let t = example_wood();
        let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[1].members, [Occurrence::root(), o(&[0, 0])].into());
    }

    #[test]
    fn enumerate_rejects_bad_roots() {
        let t = example_two_trees();
        // a branch has a predecessor
        assert!(matches!(
            enumerate_segment_trees(&t, &o(&[1, 0]), 64),
            Err(SegmentError::HasPredecessor(_))
        ));
        assert!(matches!(
            enumerate_segment_trees(&p("\\x.x"), &Occurrence::root(), 64),
            Err(SegmentError::NotSegmentTerm(_))
        ));
    }

    #[test]
    fn maximal_trees() {
        let t = example_two_trees();
        let m = maximal_segment_tree(&t, &Occurrence::root()).unwrap();
        assert_eq!(m.members, [Occurrence::root(), o(&[1, 0])].into());

        let t = p("(u [x.a1, y.a2])");
        let m = maximal_segment_tree(&t, &Occurrence::root()).unwrap();
        assert_eq!(m.members, [Occurrence::root()].into());

        let t = example_wood();
        let m = maximal_segment_tree(&t, &Occurrence::root()).unwrap();
        assert_eq!(m.members, [Occurrence::root(), o(&[0, 0])].into());
    }

    #[test]
    fn acceptors_of_example_trees() {
        let t = example_two_trees();
        let o1 = SegmentTree::singleton(Occurrence::root());
        assert_eq!(acceptors(&t, &o1).unwrap(), [o(&[1, 0]), o(&[1, 1])].into());
        let o2 = SegmentTree {
            root: Occurrence::root(),
            members: [Occurrence::root(), o(&[1, 0])].into(),
        };
        assert_eq!(
            acceptors(&t, &o2).unwrap(),
            [o(&[1, 0, 0, 0]), o(&[1, 0, 0, 0, 1, 0]), o(&[1, 1])].into()
        );
    }

    #[test]
    fn extended_structural_reduction_of_example() {
        let t = example_two_trees();
        let app = Term::app_term(p("V"), t.clone());
        let o1 = SegmentTree::singleton(Occurrence::root());
        let r1 = extended_structural_reduce(&app, &o1).unwrap();
        assert!(alpha_eq(
            &r1,
            &p("(u [x. (V mu @a.(@a <x,(@a w)>)), y. (V v)])"),
            false
        ));
        let o2 = SegmentTree {
            root: Occurrence::root(),
            members: [Occurrence::root(), o(&[1, 0])].into(),
        };
        let r2 = extended_structural_reduce(&app, &o2).unwrap();
        assert!(alpha_eq(
            &r2,
            &p("(u [x. mu @a.(@a (V <x,(@a (V w))>)), y. (V v)])"),
            false
        ));
    }

    #[test]
    fn singleton_trees_coincide_with_structural_rules() {
        use crate::reduction::{contract, find_redexes, Mode};
        for s in [
            "((u [x1.u1,x2.u2]) e)",
            "((u [x1.u1,x2.u2]) p1)",
            "(mu @a.(@a <x,(@a w)>) e)",
            "(z (u [x1.u1,x2.u2]))",
            "(z mu @a.(@a x))",
        ] {
            let app = p(s);
            let TermNode::App { fun, arg } = &app.node else {
                unreachable!()
            };
            let operand_is_fun =
                is_case_app(fun) || matches!(fun.node, TermNode::Mu { .. });
            let _ = (operand_is_fun, arg);
            let tree = SegmentTree::singleton(Occurrence::root());
            let esr = extended_structural_reduce(&app, &tree).unwrap();
            let sites = find_redexes(&app, Mode::Cbv);
            let root_site = sites
                .iter()
                .find(|site| site.occurrence.is_root())
                .expect("structural redex at root");
            let step = contract(&app, root_site).unwrap();
            assert!(
                alpha_eq(&esr, &step, false),
                "mismatch on {s}: {esr} vs {step}"
            );
        }
    }

    #[test]
    fn wood_example_restrictions() {
        let t = example_wood();
        let r_occ = o(&[0, 0]);
        let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
        let (o1, o2) = (&trees[0], &trees[1]);
        // restriction of the singleton tree: both acceptors become
        // proper-buds of the wood in r
        let q1 = restrict_tree_to(&t, o1, &r_occ).unwrap();
        assert!(q1.trees.is_empty());
        assert_eq!(q1.proper_buds, [Occurrence::root(), o(&[0, 0, 0, 0, 0])].into());
        // restriction of the two-member tree keeps r as a trunk
        let q2 = restrict_tree_to(&t, o2, &r_occ).unwrap();
        assert_eq!(q2.trees.len(), 1);
        assert_eq!(q2.trees[0].members, [Occurrence::root()].into());
        assert_eq!(q2.proper_buds, [o(&[0, 0, 0, 0, 0])].into());
        // both are woods in r and share their bud set; the acceptors of
        // the treeless wood are exactly its proper-buds
        let r = term_at(&t, &r_occ).unwrap();
        validate_wood(r, &q1).unwrap();
        validate_wood(r, &q2).unwrap();
        assert_eq!(
            wood_acceptors(r, &q1).unwrap(),
            [Occurrence::root(), o(&[0, 0, 0, 0, 0])].into()
        );
        assert_eq!(
            wood_acceptors(r, &q2).unwrap(),
            [o(&[0, 0]), o(&[0, 0, 0, 0, 0])].into()
        );
        assert_eq!(q1.buds(), q2.buds());
        assert!(q1.trunk_pieces().is_subset(&q2.trunk_pieces()));
        assert_eq!(q1.buds(), buds(r));
    }

    #[test]
    fn wood_substitution_of_example() {
        let t = example_wood();
        let r_occ = o(&[0, 0]);
        let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
        let q1 = restrict_tree_to(&t, &trees[0], &r_occ).unwrap();
        let q2 = restrict_tree_to(&t, &trees[1], &r_occ).unwrap();
        let r = term_at(&t, &r_occ).unwrap();
        let v = Payload::Fun(p("V"));
        let r1 = wood_substitute(r, &q1, &v).unwrap();
        let r2 = wood_substitute(r, &q2, &v).unwrap();
        let t1 = crate::term::replace_at(&t, &r_occ, crate::term::Subterm::Term(r1)).unwrap();
        let t2 = crate::term::replace_at(&t, &r_occ, crate::term::Subterm::Term(r2)).unwrap();
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
    }

    #[test]
    fn empty_wood_substitution_is_identity() {
        let t = example_wood();
        let r = wood_substitute(&t, &SegmentWood::default(), &Payload::Fun(p("V"))).unwrap();
        assert!(alpha_eq(&t, &r, true));
    }

    #[test]
    fn wood_substitution_rejects_non_value() {
        let t = example_wood();
        let err = wood_substitute(&t, &SegmentWood::default(), &Payload::Fun(p("(x y)")));
        assert!(matches!(err, Err(SegmentError::NonValuePayload)));
    }

    #[test]
    fn validate_catches_gaps() {
        let t = p("(u [x. mu @a.(@a (w [r.p, s.q])), y. v])");
        // members {root, inner case} without the mu between them
        let inner_case = o(&[1, 0, 0, 0]);
        let bad = SegmentTree {
            root: Occurrence::root(),
            members: [Occurrence::root(), inner_case].into(),
        };
        assert!(matches!(
            validate_tree(&t, &bad),
            Err(SegmentError::InvalidTree(_))
        ));
    }
}
