//! Abstract syntax: terms, E-terms, occurrences and marker labels.
//!
//! Terms follow the grammar
//!
//! ```text
//! T ::= x | \x.T | (T E) | <T,T> | in1 T | in2 T | mu @a.T | (@a T)
//! E ::= T | p1 | p2 | [x.T,y.T]
//! ```
//!
//! Lambda-variables and mu-variables are drawn from disjoint namespaces
//! ([`VarName`] vs [`MuName`]), so the same string may be used for both.
//! Every term node carries a set of [`MarkerId`] labels used for residual
//! tracking; labels and binder annotations are metadata and never affect
//! typing, reduction or (default-mode) alpha equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::typing::Formula;

/// A lambda-variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarName(pub String);

/// A mu-variable name, printed with a leading `@`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MuName(pub String);

impl VarName {
    pub fn new(s: impl Into<String>) -> Self {
        VarName(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl MuName {
    pub fn new(s: impl Into<String>) -> Self {
        MuName(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for MuName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// An opaque marker used to track residuals of occurrences across
/// reductions. Fresh ids are unique within the process.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MarkerId(u32);

static NEXT_MARKER: AtomicU32 = AtomicU32::new(0);

impl MarkerId {
    /// Returns a marker id not handed out before.
    pub fn fresh() -> MarkerId {
        MarkerId(NEXT_MARKER.fetch_add(1, Ordering::Relaxed))
    }
}

/// Index of an injection (`in1`/`in2`) or projection (`p1`/`p2`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Index {
    One,
    Two,
}

impl Index {
    pub fn as_usize(self) -> usize {
        match self {
            Index::One => 1,
            Index::Two => 2,
        }
    }

    pub fn other(self) -> Index {
        match self {
            Index::One => Index::Two,
            Index::Two => Index::One,
        }
    }
}

/// A term node together with its marker labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub labels: BTreeSet<MarkerId>,
    pub node: TermNode,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermNode {
    /// A lambda-variable.
    Var(VarName),
    /// `\x.t`, optionally annotated with the domain formula.
    Lam {
        binder: VarName,
        ann: Option<Formula>,
        body: Box<Term>,
    },
    /// Application `(t e)` of a term to an E-term.
    App { fun: Box<Term>, arg: ETerm },
    /// Pair `<t,u>`.
    Pair(Box<Term>, Box<Term>),
    /// Injection `in1 t` / `in2 t`; the annotation supplies the missing
    /// disjunct of the sum type.
    Inj {
        index: Index,
        ann: Option<Formula>,
        body: Box<Term>,
    },
    /// `mu @a.t`, optionally annotated with the formula it inhabits.
    Mu {
        binder: MuName,
        ann: Option<Formula>,
        body: Box<Term>,
    },
    /// Named term `(@a t)`.
    Name { name: MuName, body: Box<Term> },
}

/// An E-term: the right-hand side of an application.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ETerm {
    Term(Box<Term>),
    Proj(Index),
    Case {
        left_binder: VarName,
        left: Box<Term>,
        right_binder: VarName,
        right: Box<Term>,
    },
}

impl Term {
    fn new(node: TermNode) -> Term {
        Term {
            labels: BTreeSet::new(),
            node,
        }
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::new(TermNode::Var(VarName::new(name)))
    }

    pub fn lam(binder: impl Into<String>, body: Term) -> Term {
        Term::new(TermNode::Lam {
            binder: VarName::new(binder),
            ann: None,
            body: Box::new(body),
        })
    }

    pub fn lam_ann(binder: impl Into<String>, ann: Formula, body: Term) -> Term {
        Term::new(TermNode::Lam {
            binder: VarName::new(binder),
            ann: Some(ann),
            body: Box::new(body),
        })
    }

    pub fn app(fun: Term, arg: ETerm) -> Term {
        Term::new(TermNode::App {
            fun: Box::new(fun),
            arg,
        })
    }

    /// Application of a term to a term argument, `(t u)`.
    pub fn app_term(fun: Term, arg: Term) -> Term {
        Term::app(fun, ETerm::Term(Box::new(arg)))
    }

    pub fn pair(left: Term, right: Term) -> Term {
        Term::new(TermNode::Pair(Box::new(left), Box::new(right)))
    }

    pub fn inj(index: Index, body: Term) -> Term {
        Term::new(TermNode::Inj {
            index,
            ann: None,
            body: Box::new(body),
        })
    }

    pub fn inj_ann(index: Index, ann: Formula, body: Term) -> Term {
        Term::new(TermNode::Inj {
            index,
            ann: Some(ann),
            body: Box::new(body),
        })
    }

    pub fn mu(binder: impl Into<String>, body: Term) -> Term {
        Term::new(TermNode::Mu {
            binder: MuName::new(binder),
            ann: None,
            body: Box::new(body),
        })
    }

    pub fn mu_ann(binder: impl Into<String>, ann: Formula, body: Term) -> Term {
        Term::new(TermNode::Mu {
            binder: MuName::new(binder),
            ann: Some(ann),
            body: Box::new(body),
        })
    }

    pub fn name(name: impl Into<String>, body: Term) -> Term {
        Term::new(TermNode::Name {
            name: MuName::new(name),
            body: Box::new(body),
        })
    }

    /// Number of term nodes (E-term wrappers are not counted).
    pub fn size(&self) -> usize {
        let mut n = 1;
        match &self.node {
            TermNode::Var(_) => {}
            TermNode::Lam { body, .. }
            | TermNode::Inj { body, .. }
            | TermNode::Mu { body, .. }
            | TermNode::Name { body, .. } => n += body.size(),
            TermNode::Pair(l, r) => n += l.size() + r.size(),
            TermNode::App { fun, arg } => {
                n += fun.size();
                match arg {
                    ETerm::Term(t) => n += t.size(),
                    ETerm::Proj(_) => {}
                    ETerm::Case { left, right, .. } => n += left.size() + right.size(),
                }
            }
        }
        n
    }
}

impl ETerm {
    pub fn term(t: Term) -> ETerm {
        ETerm::Term(Box::new(t))
    }

    pub fn case(
        left_binder: impl Into<String>,
        left: Term,
        right_binder: impl Into<String>,
        right: Term,
    ) -> ETerm {
        ETerm::Case {
            left_binder: VarName::new(left_binder),
            left: Box::new(left),
            right_binder: VarName::new(right_binder),
            right: Box::new(right),
        }
    }
}

/// True iff `t` is a value:
/// `V ::= x | \x.t | <V,V> | in1 V | in2 V | (@a t)`.
pub fn is_value(t: &Term) -> bool {
    match &t.node {
        TermNode::Var(_) | TermNode::Lam { .. } | TermNode::Name { .. } => true,
        TermNode::Pair(l, r) => is_value(l) && is_value(r),
        TermNode::Inj { body, .. } => is_value(body),
        TermNode::App { .. } | TermNode::Mu { .. } => false,
    }
}

/// A path addressing one node of a term.
///
/// Child order: `Lam`/`Mu`/`Inj`/`Name` have the body at 0; `Pair` children
/// are 0 and 1; `App` has the function at 0 and the argument at 1; `Case`
/// branches are 0 and 1; `Proj` has no children. A term argument of an
/// application is addressed directly (the E-term wrapper is transparent).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Occurrence(pub Vec<usize>);

impl Occurrence {
    pub fn root() -> Occurrence {
        Occurrence(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Occurrence {
        let mut path = self.0.clone();
        path.push(i);
        Occurrence(path)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// True iff `self` is at or below `prefix`.
    pub fn is_within(&self, prefix: &Occurrence) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// The path of `self` relative to `prefix`, if `self` lies within it.
    pub fn strip_prefix(&self, prefix: &Occurrence) -> Option<Occurrence> {
        if self.is_within(prefix) {
            Some(Occurrence(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }

    pub fn join(&self, suffix: &Occurrence) -> Occurrence {
        let mut path = self.0.clone();
        path.extend_from_slice(&suffix.0);
        Occurrence(path)
    }

    /// Parses `root` (or the empty string) and dot-separated child indices
    /// such as `0.1.0`.
    pub fn parse(s: &str) -> Result<Occurrence, TermError> {
        if s.is_empty() || s == "root" {
            return Ok(Occurrence::root());
        }
        let mut path = Vec::new();
        for part in s.split('.') {
            match part.parse::<usize>() {
                Ok(i) => path.push(i),
                Err(_) => return Err(TermError::BadPathSyntax(s.to_string())),
            }
        }
        Ok(Occurrence(path))
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("invalid path {0}")]
    InvalidPath(Occurrence),
    #[error("node kind mismatch at {0}")]
    KindMismatch(Occurrence),
    #[error("malformed path `{0}`")]
    BadPathSyntax(String),
    #[error("substitution payload is not a value")]
    NonValue,
}

/// A borrowed term or E-term, as returned by [`subterm_at`].
#[derive(Clone, Copy, Debug)]
pub enum SubtermRef<'a> {
    Term(&'a Term),
    ETerm(&'a ETerm),
}

/// An owned term or E-term, as accepted by [`replace_at`].
#[derive(Clone, Debug)]
pub enum Subterm {
    Term(Term),
    ETerm(ETerm),
}

fn step<'a>(cur: SubtermRef<'a>, i: usize) -> Option<SubtermRef<'a>> {
    match cur {
        SubtermRef::Term(t) => match &t.node {
            TermNode::Var(_) => None,
            TermNode::Lam { body, .. }
            | TermNode::Inj { body, .. }
            | TermNode::Mu { body, .. }
            | TermNode::Name { body, .. } => (i == 0).then_some(SubtermRef::Term(body)),
            TermNode::Pair(l, r) => match i {
                0 => Some(SubtermRef::Term(l)),
                1 => Some(SubtermRef::Term(r)),
                _ => None,
            },
            TermNode::App { fun, arg } => match i {
                0 => Some(SubtermRef::Term(fun)),
                1 => Some(match arg {
                    ETerm::Term(t) => SubtermRef::Term(t),
                    other => SubtermRef::ETerm(other),
                }),
                _ => None,
            },
        },
        SubtermRef::ETerm(e) => match e {
            ETerm::Case { left, right, .. } => match i {
                0 => Some(SubtermRef::Term(left)),
                1 => Some(SubtermRef::Term(right)),
                _ => None,
            },
            _ => None,
        },
    }
}

/// The node addressed by `occ`, which may be a term or an E-term.
pub fn subterm_at<'a>(t: &'a Term, occ: &Occurrence) -> Result<SubtermRef<'a>, TermError> {
    let mut cur = SubtermRef::Term(t);
    for &i in &occ.0 {
        cur = step(cur, i).ok_or_else(|| TermError::InvalidPath(occ.clone()))?;
    }
    Ok(cur)
}

/// The term addressed by `occ`; errors if the path lands on a projection
/// or case E-term.
pub fn term_at<'a>(t: &'a Term, occ: &Occurrence) -> Result<&'a Term, TermError> {
    match subterm_at(t, occ)? {
        SubtermRef::Term(t) => Ok(t),
        SubtermRef::ETerm(_) => Err(TermError::KindMismatch(occ.clone())),
    }
}

/// Replaces the node at `occ` with `repl`. The replacement kind must match
/// the addressed node kind; no renaming is performed.
pub fn replace_at(t: &Term, occ: &Occurrence, repl: Subterm) -> Result<Term, TermError> {
    rebuild(t, &occ.0, occ, repl)
}

fn rebuild(t: &Term, path: &[usize], full: &Occurrence, repl: Subterm) -> Result<Term, TermError> {
    let Some((&i, rest)) = path.split_first() else {
        return match repl {
            Subterm::Term(r) => Ok(r),
            Subterm::ETerm(_) => Err(TermError::KindMismatch(full.clone())),
        };
    };
    let mut out = t.clone();
    match (&mut out.node, i) {
        (TermNode::Lam { body, .. }, 0)
        | (TermNode::Inj { body, .. }, 0)
        | (TermNode::Mu { body, .. }, 0)
        | (TermNode::Name { body, .. }, 0) => {
            **body = rebuild(body, rest, full, repl)?;
        }
        (TermNode::Pair(l, _), 0) => **l = rebuild(l, rest, full, repl)?,
        (TermNode::Pair(_, r), 1) => **r = rebuild(r, rest, full, repl)?,
        (TermNode::App { fun, .. }, 0) => **fun = rebuild(fun, rest, full, repl)?,
        (TermNode::App { arg, .. }, 1) => match arg {
            ETerm::Term(u) => **u = rebuild(u, rest, full, repl)?,
            ETerm::Proj(_) => {
                if !rest.is_empty() {
                    return Err(TermError::InvalidPath(full.clone()));
                }
                match repl {
                    Subterm::ETerm(e) => *arg = e,
                    Subterm::Term(_) => return Err(TermError::KindMismatch(full.clone())),
                }
            }
            ETerm::Case { left, right, .. } => match rest.split_first() {
                None => match repl {
                    Subterm::ETerm(e) => *arg = e,
                    Subterm::Term(_) => return Err(TermError::KindMismatch(full.clone())),
                },
                Some((&0, rest2)) => **left = rebuild(left, rest2, full, repl)?,
                Some((&1, rest2)) => **right = rebuild(right, rest2, full, repl)?,
                Some(_) => return Err(TermError::InvalidPath(full.clone())),
            },
        },
        _ => return Err(TermError::InvalidPath(full.clone())),
    }
    Ok(out)
}

/// Rewrites the term at `occ` with `f`. The path must address a term.
pub fn modify_at(
    t: &Term,
    occ: &Occurrence,
    f: impl FnOnce(Term) -> Term,
) -> Result<Term, TermError> {
    let sub = term_at(t, occ)?.clone();
    replace_at(t, occ, Subterm::Term(f(sub)))
}

/// All term occurrences of `t` in preorder (paths are lexicographically
/// sorted), together with the addressed subterms.
pub fn term_occurrences(t: &Term) -> Vec<(Occurrence, &Term)> {
    let mut out = Vec::new();
    collect_occurrences(t, Occurrence::root(), &mut out);
    out
}

fn collect_occurrences<'a>(t: &'a Term, at: Occurrence, out: &mut Vec<(Occurrence, &'a Term)>) {
    out.push((at.clone(), t));
    match &t.node {
        TermNode::Var(_) => {}
        TermNode::Lam { body, .. }
        | TermNode::Inj { body, .. }
        | TermNode::Mu { body, .. }
        | TermNode::Name { body, .. } => collect_occurrences(body, at.child(0), out),
        TermNode::Pair(l, r) => {
            collect_occurrences(l, at.child(0), out);
            collect_occurrences(r, at.child(1), out);
        }
        TermNode::App { fun, arg } => {
            collect_occurrences(fun, at.child(0), out);
            match arg {
                ETerm::Term(u) => collect_occurrences(u, at.child(1), out),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    collect_occurrences(left, at.child(1).child(0), out);
                    collect_occurrences(right, at.child(1).child(1), out);
                }
            }
        }
    }
}

/// Free lambda-variables of `t`.
pub fn free_lambda_vars(t: &Term) -> BTreeSet<VarName> {
    let mut out = BTreeSet::new();
    free_lvars(t, &mut Vec::new(), &mut out);
    out
}

fn free_lvars(t: &Term, bound: &mut Vec<VarName>, out: &mut BTreeSet<VarName>) {
    match &t.node {
        TermNode::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        TermNode::Lam { binder, body, .. } => {
            bound.push(binder.clone());
            free_lvars(body, bound, out);
            bound.pop();
        }
        TermNode::Inj { body, .. } | TermNode::Mu { body, .. } | TermNode::Name { body, .. } => {
            free_lvars(body, bound, out)
        }
        TermNode::Pair(l, r) => {
            free_lvars(l, bound, out);
            free_lvars(r, bound, out);
        }
        TermNode::App { fun, arg } => {
            free_lvars(fun, bound, out);
            match arg {
                ETerm::Term(u) => free_lvars(u, bound, out),
                ETerm::Proj(_) => {}
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    bound.push(left_binder.clone());
                    free_lvars(left, bound, out);
                    bound.pop();
                    bound.push(right_binder.clone());
                    free_lvars(right, bound, out);
                    bound.pop();
                }
            }
        }
    }
}

/// Free mu-variables of `t`.
pub fn free_mu_vars(t: &Term) -> BTreeSet<MuName> {
    let mut out = BTreeSet::new();
    free_mvars(t, &mut Vec::new(), &mut out);
    out
}

fn free_mvars(t: &Term, bound: &mut Vec<MuName>, out: &mut BTreeSet<MuName>) {
    match &t.node {
        TermNode::Var(_) => {}
        TermNode::Mu { binder, body, .. } => {
            bound.push(binder.clone());
            free_mvars(body, bound, out);
            bound.pop();
        }
        TermNode::Name { name, body } => {
            if !bound.contains(name) {
                out.insert(name.clone());
            }
            free_mvars(body, bound, out);
        }
        TermNode::Lam { body, .. } | TermNode::Inj { body, .. } => free_mvars(body, bound, out),
        TermNode::Pair(l, r) => {
            free_mvars(l, bound, out);
            free_mvars(r, bound, out);
        }
        TermNode::App { fun, arg } => {
            free_mvars(fun, bound, out);
            match arg {
                ETerm::Term(u) => free_mvars(u, bound, out),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    free_mvars(left, bound, out);
                    free_mvars(right, bound, out);
                }
            }
        }
    }
}

/// Every lambda-variable name occurring in `t`, free or as a binder
/// (including case binders). Fresh names drawn outside this set can be
/// used for renaming without capturing anything.
pub fn all_lambda_names(t: &Term) -> BTreeSet<VarName> {
    let mut out = BTreeSet::new();
    collect_lambda_names(t, &mut out);
    out
}

fn collect_lambda_names(t: &Term, out: &mut BTreeSet<VarName>) {
    match &t.node {
        TermNode::Var(x) => {
            out.insert(x.clone());
        }
        TermNode::Lam { binder, body, .. } => {
            out.insert(binder.clone());
            collect_lambda_names(body, out);
        }
        TermNode::Inj { body, .. } | TermNode::Mu { body, .. } | TermNode::Name { body, .. } => {
            collect_lambda_names(body, out)
        }
        TermNode::Pair(l, r) => {
            collect_lambda_names(l, out);
            collect_lambda_names(r, out);
        }
        TermNode::App { fun, arg } => {
            collect_lambda_names(fun, out);
            match arg {
                ETerm::Term(u) => collect_lambda_names(u, out),
                ETerm::Proj(_) => {}
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    out.insert(left_binder.clone());
                    out.insert(right_binder.clone());
                    collect_lambda_names(left, out);
                    collect_lambda_names(right, out);
                }
            }
        }
    }
}

/// Every mu-variable name occurring in `t`, free or as a binder.
pub fn all_mu_names(t: &Term) -> BTreeSet<MuName> {
    let mut out = BTreeSet::new();
    collect_mu_names(t, &mut out);
    out
}

fn collect_mu_names(t: &Term, out: &mut BTreeSet<MuName>) {
    match &t.node {
        TermNode::Var(_) => {}
        TermNode::Mu { binder, body, .. } => {
            out.insert(binder.clone());
            collect_mu_names(body, out);
        }
        TermNode::Name { name, body } => {
            out.insert(name.clone());
            collect_mu_names(body, out);
        }
        TermNode::Lam { body, .. } | TermNode::Inj { body, .. } => collect_mu_names(body, out),
        TermNode::Pair(l, r) => {
            collect_mu_names(l, out);
            collect_mu_names(r, out);
        }
        TermNode::App { fun, arg } => {
            collect_mu_names(fun, out);
            match arg {
                ETerm::Term(u) => collect_mu_names(u, out),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    collect_mu_names(left, out);
                    collect_mu_names(right, out);
                }
            }
        }
    }
}

/// Free mu-variables of an E-term.
pub fn free_mu_vars_eterm(e: &ETerm) -> BTreeSet<MuName> {
    match e {
        ETerm::Term(t) => free_mu_vars(t),
        ETerm::Proj(_) => BTreeSet::new(),
        ETerm::Case { left, right, .. } => {
            let mut out = free_mu_vars(left);
            out.extend(free_mu_vars(right));
            out
        }
    }
}

/// Free lambda-variables of an E-term.
pub fn free_lambda_vars_eterm(e: &ETerm) -> BTreeSet<VarName> {
    match e {
        ETerm::Term(t) => free_lambda_vars(t),
        ETerm::Proj(_) => BTreeSet::new(),
        ETerm::Case {
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let mut out = free_lambda_vars(left);
            out.remove(left_binder);
            let mut r = free_lambda_vars(right);
            r.remove(right_binder);
            out.extend(r);
            out
        }
    }
}

/// Returns `t` with `extra` unioned into its root labels.
pub fn with_extra_labels(mut t: Term, extra: &BTreeSet<MarkerId>) -> Term {
    t.labels.extend(extra.iter().copied());
    t
}

/// Adds `marker` to the labels of every node addressed in `occs`.
pub fn mark_occurrences(t: &Term, occs: &BTreeSet<Occurrence>, marker: MarkerId) -> Term {
    let mut cur = t.clone();
    for occ in occs {
        cur = modify_at(&cur, occ, |mut sub| {
            sub.labels.insert(marker);
            sub
        })
        .expect("marking a valid occurrence");
    }
    cur
}

/// Preorder list of occurrences carrying `marker`.
pub fn marked_occurrences(t: &Term, marker: MarkerId) -> Vec<Occurrence> {
    term_occurrences(t)
        .into_iter()
        .filter(|(_, sub)| sub.labels.contains(&marker))
        .map(|(occ, _)| occ)
        .collect()
}

/// Removes `marker` from every node of `t`.
pub fn strip_marker(t: &Term, marker: MarkerId) -> Term {
    map_labels(t, &|labels| {
        labels.remove(&marker);
    })
}

/// Removes all labels from every node of `t`.
pub fn strip_all_labels(t: &Term) -> Term {
    map_labels(t, &|labels| labels.clear())
}

fn map_labels(t: &Term, f: &impl Fn(&mut BTreeSet<MarkerId>)) -> Term {
    let mut out = t.clone();
    apply_labels(&mut out, f);
    out
}

fn apply_labels(t: &mut Term, f: &impl Fn(&mut BTreeSet<MarkerId>)) {
    f(&mut t.labels);
    match &mut t.node {
        TermNode::Var(_) => {}
        TermNode::Lam { body, .. }
        | TermNode::Inj { body, .. }
        | TermNode::Mu { body, .. }
        | TermNode::Name { body, .. } => apply_labels(body, f),
        TermNode::Pair(l, r) => {
            apply_labels(l, f);
            apply_labels(r, f);
        }
        TermNode::App { fun, arg } => {
            apply_labels(fun, f);
            match arg {
                ETerm::Term(u) => apply_labels(u, f),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    apply_labels(left, f);
                    apply_labels(right, f);
                }
            }
        }
    }
}
