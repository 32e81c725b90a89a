//! Classical natural-deduction typing: judgments `Γ ⊢ t : A ; Δ`.
//!
//! Checking is Church-style (binders must carry annotations for [`infer`]),
//! while reduction runs on terms whose annotations are ignored. [`check`]
//! is the bidirectional variant used to re-check reducts against a known
//! formula; it needs annotations only where the expected type cannot be
//! propagated, and reports such spots as [`TypeError::Reconstruction`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::{ETerm, Index, MuName, Occurrence, Term, TermNode, VarName};

/// A formula: `A ::= atom | # | A -> B | A & B | A | B`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(String),
    Bottom,
    Arrow(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn arrow(a: Formula, b: Formula) -> Formula {
        Formula::Arrow(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::print_formula(self))
    }
}

/// The pair of contexts of a judgment: lambda-variable assumptions and
/// mu-variable assumptions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ContextPair {
    pub gamma: BTreeMap<VarName, Formula>,
    pub delta: BTreeMap<MuName, Formula>,
}

impl ContextPair {
    pub fn empty() -> ContextPair {
        ContextPair::default()
    }

    pub fn with_var(&self, x: VarName, a: Formula) -> ContextPair {
        let mut out = self.clone();
        out.gamma.insert(x, a);
        out
    }

    pub fn with_mu(&self, a: MuName, f: Formula) -> ContextPair {
        let mut out = self.clone();
        out.delta.insert(a, f);
        out
    }
}

impl fmt::Display for ContextPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gamma: Vec<String> = self
            .gamma
            .iter()
            .map(|(x, a)| format!("{}:{}", x, a))
            .collect();
        let delta: Vec<String> = self
            .delta
            .iter()
            .map(|(a, f)| format!("{}:{}", a, f))
            .collect();
        write!(f, "{} ; {}", gamma.join(", "), delta.join(", "))
    }
}

/// Typing rule names.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TypingRule {
    Ax,
    ArrowI,
    ArrowE,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    BotI,
    BotE,
}

impl fmt::Display for TypingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypingRule::Ax => "ax",
            TypingRule::ArrowI => "->i",
            TypingRule::ArrowE => "->e",
            TypingRule::AndI => "&i",
            TypingRule::AndE1 => "&e1",
            TypingRule::AndE2 => "&e2",
            TypingRule::OrI1 => "|i1",
            TypingRule::OrI2 => "|i2",
            TypingRule::OrE => "|e",
            TypingRule::BotI => "#i",
            TypingRule::BotE => "#e",
        };
        write!(f, "{}", s)
    }
}

/// A derivation tree. Each node instantiates exactly its rule schema;
/// [`validate_derivation`] re-checks this.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: TypingRule,
    pub context: ContextPair,
    pub term: Term,
    pub formula: Formula,
    pub premises: Vec<Derivation>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("{at}: unbound variable {name}")]
    Unbound { at: Occurrence, name: VarName },
    #[error("{at}: unbound mu-variable {name}")]
    UnboundMu { at: Occurrence, name: MuName },
    #[error("{at}: missing annotation on {what}")]
    MissingAnnotation { at: Occurrence, what: &'static str },
    #[error("{at}: expected {expected} but found {found}")]
    Mismatch {
        at: Occurrence,
        expected: Formula,
        found: Formula,
    },
    #[error("{at}: {found} is not {needed}")]
    NotEliminable {
        at: Occurrence,
        found: Formula,
        needed: &'static str,
    },
    #[error("{at}: a {ctor} cannot have type {expected}")]
    ShapeMismatch {
        at: Occurrence,
        ctor: &'static str,
        expected: Formula,
    },
    #[error("{at}: cannot reconstruct the type of this subterm")]
    Reconstruction { at: Occurrence },
    #[error("derivation node does not instantiate rule {rule}: {detail}")]
    BadDerivation { rule: TypingRule, detail: String },
}

fn node(
    rule: TypingRule,
    ctx: &ContextPair,
    term: &Term,
    formula: Formula,
    premises: Vec<Derivation>,
) -> Derivation {
    Derivation {
        rule,
        context: ctx.clone(),
        term: term.clone(),
        formula,
        premises,
    }
}

/// Syntax-directed inference for annotated terms.
pub fn infer(ctx: &ContextPair, t: &Term) -> Result<(Formula, Derivation), TypeError> {
    let d = infer_at(ctx, t, &Occurrence::root())?;
    Ok((d.formula.clone(), d))
}

fn infer_at(ctx: &ContextPair, t: &Term, at: &Occurrence) -> Result<Derivation, TypeError> {
    match &t.node {
        TermNode::Var(x) => {
            let a = ctx.gamma.get(x).ok_or_else(|| TypeError::Unbound {
                at: at.clone(),
                name: x.clone(),
            })?;
            Ok(node(TypingRule::Ax, ctx, t, a.clone(), vec![]))
        }
        TermNode::Lam { binder, ann, body } => {
            let a = ann.clone().ok_or(TypeError::MissingAnnotation {
                at: at.clone(),
                what: "lambda binder",
            })?;
            let inner = ctx.with_var(binder.clone(), a.clone());
            let p = infer_at(&inner, body, &at.child(0))?;
            let b = p.formula.clone();
            Ok(node(TypingRule::ArrowI, ctx, t, Formula::arrow(a, b), vec![p]))
        }
        TermNode::Pair(l, r) => {
            let pl = infer_at(ctx, l, &at.child(0))?;
            let pr = infer_at(ctx, r, &at.child(1))?;
            let formula = Formula::and(pl.formula.clone(), pr.formula.clone());
            Ok(node(TypingRule::AndI, ctx, t, formula, vec![pl, pr]))
        }
        TermNode::Inj { index, ann, body } => {
            let other = ann.clone().ok_or(TypeError::MissingAnnotation {
                at: at.clone(),
                what: "injection",
            })?;
            let p = infer_at(ctx, body, &at.child(0))?;
            let (rule, formula) = match index {
                Index::One => (TypingRule::OrI1, Formula::or(p.formula.clone(), other)),
                Index::Two => (TypingRule::OrI2, Formula::or(other, p.formula.clone())),
            };
            Ok(node(rule, ctx, t, formula, vec![p]))
        }
        TermNode::Mu { binder, ann, body } => {
            let a = ann.clone().ok_or(TypeError::MissingAnnotation {
                at: at.clone(),
                what: "mu binder",
            })?;
            let inner = ctx.with_mu(binder.clone(), a.clone());
            let p = infer_at(&inner, body, &at.child(0))?;
            if p.formula != Formula::Bottom {
                return Err(TypeError::Mismatch {
                    at: at.child(0),
                    expected: Formula::Bottom,
                    found: p.formula,
                });
            }
            Ok(node(TypingRule::BotE, ctx, t, a, vec![p]))
        }
        TermNode::Name { name, body } => {
            let a = ctx
                .delta
                .get(name)
                .ok_or_else(|| TypeError::UnboundMu {
                    at: at.clone(),
                    name: name.clone(),
                })?
                .clone();
            let p = infer_at(ctx, body, &at.child(0))?;
            if p.formula != a {
                return Err(TypeError::Mismatch {
                    at: at.child(0),
                    expected: a,
                    found: p.formula,
                });
            }
            Ok(node(TypingRule::BotI, ctx, t, Formula::Bottom, vec![p]))
        }
        TermNode::App { fun, arg } => match arg {
            ETerm::Term(u) => {
                let pf = infer_at(ctx, fun, &at.child(0))?;
                let Formula::Arrow(a, b) = pf.formula.clone() else {
                    return Err(TypeError::NotEliminable {
                        at: at.child(0),
                        found: pf.formula,
                        needed: "an arrow",
                    });
                };
                let pa = infer_at(ctx, u, &at.child(1))?;
                if pa.formula != *a {
                    return Err(TypeError::Mismatch {
                        at: at.child(1),
                        expected: *a,
                        found: pa.formula,
                    });
                }
                Ok(node(TypingRule::ArrowE, ctx, t, *b, vec![pf, pa]))
            }
            ETerm::Proj(index) => {
                let pf = infer_at(ctx, fun, &at.child(0))?;
                let Formula::And(a1, a2) = pf.formula.clone() else {
                    return Err(TypeError::NotEliminable {
                        at: at.child(0),
                        found: pf.formula,
                        needed: "a product",
                    });
                };
                let (rule, formula) = match index {
                    Index::One => (TypingRule::AndE1, *a1),
                    Index::Two => (TypingRule::AndE2, *a2),
                };
                Ok(node(rule, ctx, t, formula, vec![pf]))
            }
            ETerm::Case {
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let pf = infer_at(ctx, fun, &at.child(0))?;
                let Formula::Or(a, b) = pf.formula.clone() else {
                    return Err(TypeError::NotEliminable {
                        at: at.child(0),
                        found: pf.formula,
                        needed: "a sum",
                    });
                };
                let lctx = ctx.with_var(left_binder.clone(), *a);
                let pl = infer_at(&lctx, left, &at.child(1).child(0))?;
                let rctx = ctx.with_var(right_binder.clone(), *b);
                let pr = infer_at(&rctx, right, &at.child(1).child(1))?;
                if pl.formula != pr.formula {
                    return Err(TypeError::Mismatch {
                        at: at.child(1).child(1),
                        expected: pl.formula,
                        found: pr.formula,
                    });
                }
                let formula = pl.formula.clone();
                Ok(node(TypingRule::OrE, ctx, t, formula, vec![pf, pl, pr]))
            }
        },
    }
}

/// Bidirectional checking of `t` against `expected`. Annotations are used
/// where present (and must agree with the expected formula); missing
/// annotations are tolerated wherever the expected type determines them.
pub fn check(ctx: &ContextPair, t: &Term, expected: &Formula) -> Result<Derivation, TypeError> {
    check_at(ctx, t, expected, &Occurrence::root())
}

fn check_at(
    ctx: &ContextPair,
    t: &Term,
    expected: &Formula,
    at: &Occurrence,
) -> Result<Derivation, TypeError> {
    match (&t.node, expected) {
        (TermNode::Lam { binder, ann, body }, Formula::Arrow(a, b)) => {
            if let Some(ann) = ann {
                if ann != a.as_ref() {
                    return Err(TypeError::Mismatch {
                        at: at.clone(),
                        expected: (**a).clone(),
                        found: ann.clone(),
                    });
                }
            }
            let inner = ctx.with_var(binder.clone(), (**a).clone());
            let p = check_at(&inner, body, b, &at.child(0))?;
            Ok(node(TypingRule::ArrowI, ctx, t, expected.clone(), vec![p]))
        }
        (TermNode::Lam { .. }, _) => Err(TypeError::ShapeMismatch {
            at: at.clone(),
            ctor: "lambda",
            expected: expected.clone(),
        }),
        (TermNode::Pair(l, r), Formula::And(a, b)) => {
            let pl = check_at(ctx, l, a, &at.child(0))?;
            let pr = check_at(ctx, r, b, &at.child(1))?;
            Ok(node(TypingRule::AndI, ctx, t, expected.clone(), vec![pl, pr]))
        }
        (TermNode::Pair(..), _) => Err(TypeError::ShapeMismatch {
            at: at.clone(),
            ctor: "pair",
            expected: expected.clone(),
        }),
        (TermNode::Inj { index, ann, body }, Formula::Or(a, b)) => {
            let (own, other, rule) = match index {
                Index::One => (a, b, TypingRule::OrI1),
                Index::Two => (b, a, TypingRule::OrI2),
            };
            if let Some(ann) = ann {
                if ann != other.as_ref() {
                    return Err(TypeError::Mismatch {
                        at: at.clone(),
                        expected: (**other).clone(),
                        found: ann.clone(),
                    });
                }
            }
            let p = check_at(ctx, body, own, &at.child(0))?;
            Ok(node(rule, ctx, t, expected.clone(), vec![p]))
        }
        (TermNode::Inj { .. }, _) => Err(TypeError::ShapeMismatch {
            at: at.clone(),
            ctor: "injection",
            expected: expected.clone(),
        }),
        (TermNode::Mu { binder, ann, body }, _) => {
            if let Some(ann) = ann {
                if ann != expected {
                    return Err(TypeError::Mismatch {
                        at: at.clone(),
                        expected: expected.clone(),
                        found: ann.clone(),
                    });
                }
            }
            let inner = ctx.with_mu(binder.clone(), expected.clone());
            let p = check_at(&inner, body, &Formula::Bottom, &at.child(0))?;
            Ok(node(TypingRule::BotE, ctx, t, expected.clone(), vec![p]))
        }
        (TermNode::Name { name, body }, Formula::Bottom) => {
            let a = ctx
                .delta
                .get(name)
                .ok_or_else(|| TypeError::UnboundMu {
                    at: at.clone(),
                    name: name.clone(),
                })?
                .clone();
            let p = check_at(ctx, body, &a, &at.child(0))?;
            Ok(node(TypingRule::BotI, ctx, t, Formula::Bottom, vec![p]))
        }
        (TermNode::Name { .. }, _) => Err(TypeError::ShapeMismatch {
            at: at.clone(),
            ctor: "named term",
            expected: expected.clone(),
        }),
        (TermNode::App { fun, arg }, _) => check_app(ctx, t, fun, arg, expected, at),
        (TermNode::Var(_), _) => {
            let d = infer_at(ctx, t, at)?;
            if &d.formula != expected {
                return Err(TypeError::Mismatch {
                    at: at.clone(),
                    expected: expected.clone(),
                    found: d.formula,
                });
            }
            Ok(d)
        }
    }
}

fn check_app(
    ctx: &ContextPair,
    t: &Term,
    fun: &Term,
    arg: &ETerm,
    expected: &Formula,
    at: &Occurrence,
) -> Result<Derivation, TypeError> {
    // Prefer plain inference of the whole application; fall back to
    // propagating the expected type where the function fails to infer.
    match infer_at(ctx, t, at) {
        Ok(d) => {
            if &d.formula != expected {
                return Err(TypeError::Mismatch {
                    at: at.clone(),
                    expected: expected.clone(),
                    found: d.formula,
                });
            }
            Ok(d)
        }
        Err(e @ (TypeError::Mismatch { .. } | TypeError::Unbound { .. } | TypeError::UnboundMu { .. })) => {
            Err(e)
        }
        Err(_) => match arg {
            // (f u) : B with f not inferable: infer the argument instead
            // and check f against A -> B.
            ETerm::Term(u) => {
                let pa = infer_at(ctx, u, &at.child(1))
                    .map_err(|_| TypeError::Reconstruction { at: at.clone() })?;
                let fty = Formula::arrow(pa.formula.clone(), expected.clone());
                let pf = check_at(ctx, fun, &fty, &at.child(0))?;
                Ok(node(TypingRule::ArrowE, ctx, t, expected.clone(), vec![pf, pa]))
            }
            // Projections and cases need the eliminated formula itself;
            // without an inferable scrutinee there is nothing to propagate.
            ETerm::Proj(_) | ETerm::Case { .. } => {
                Err(TypeError::Reconstruction { at: at.clone() })
            }
        },
    }
}

/// Drops every annotation in `t` (labels are kept).
pub fn erase(t: &Term) -> Term {
    let mut out = t.clone();
    erase_in_place(&mut out);
    out
}

fn erase_in_place(t: &mut Term) {
    match &mut t.node {
        TermNode::Var(_) => {}
        TermNode::Lam { ann, body, .. } => {
            *ann = None;
            erase_in_place(body);
        }
        TermNode::Inj { ann, body, .. } => {
            *ann = None;
            erase_in_place(body);
        }
        TermNode::Mu { ann, body, .. } => {
            *ann = None;
            erase_in_place(body);
        }
        TermNode::Name { body, .. } => erase_in_place(body),
        TermNode::Pair(l, r) => {
            erase_in_place(l);
            erase_in_place(r);
        }
        TermNode::App { fun, arg } => {
            erase_in_place(fun);
            match arg {
                ETerm::Term(u) => erase_in_place(u),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    erase_in_place(left);
                    erase_in_place(right);
                }
            }
        }
    }
}

/// The formula assigned to the subterm at `occ` by a derivation, if the
/// path addresses a term with its own derivation node.
pub fn formula_at<'a>(d: &'a Derivation, occ: &Occurrence) -> Option<&'a Formula> {
    let mut cur = d;
    let mut path = occ.0.as_slice();
    while let Some((&i, rest)) = path.split_first() {
        let premise = match (&cur.term.node, i) {
            (TermNode::Lam { .. }, 0)
            | (TermNode::Inj { .. }, 0)
            | (TermNode::Mu { .. }, 0)
            | (TermNode::Name { .. }, 0) => cur.premises.get(0),
            (TermNode::Pair(..), 0) => cur.premises.get(0),
            (TermNode::Pair(..), 1) => cur.premises.get(1),
            (TermNode::App { .. }, 0) => cur.premises.get(0),
            (TermNode::App { arg, .. }, 1) => match arg {
                ETerm::Term(_) => cur.premises.get(1),
                ETerm::Proj(_) => return None,
                ETerm::Case { .. } => {
                    let (&j, rest2) = rest.split_first()?;
                    let p = cur.premises.get(1 + j)?;
                    cur = p;
                    path = rest2;
                    continue;
                }
            },
            _ => None,
        }?;
        cur = premise;
        path = rest;
    }
    Some(&cur.formula)
}

/// Re-checks that every node of a derivation instantiates its rule schema.
pub fn validate_derivation(d: &Derivation) -> Result<(), TypeError> {
    let fail = |detail: String| TypeError::BadDerivation {
        rule: d.rule,
        detail,
    };
    let premise = |i: usize| -> Result<&Derivation, TypeError> {
        d.premises
            .get(i)
            .ok_or_else(|| fail(format!("missing premise {}", i)))
    };
    match d.rule {
        TypingRule::Ax => {
            let TermNode::Var(x) = &d.term.node else {
                return Err(fail("term is not a variable".into()));
            };
            if d.context.gamma.get(x) != Some(&d.formula) {
                return Err(fail(format!("{} not bound to {}", x, d.formula)));
            }
            if !d.premises.is_empty() {
                return Err(fail("ax has no premises".into()));
            }
        }
        TypingRule::ArrowI => {
            let TermNode::Lam { binder, body, .. } = &d.term.node else {
                return Err(fail("term is not a lambda".into()));
            };
            let Formula::Arrow(a, b) = &d.formula else {
                return Err(fail("conclusion is not an arrow".into()));
            };
            let p = premise(0)?;
            if p.formula != **b
                || p.context.gamma.get(binder) != Some(a)
                || !same_term(&p.term, body)
            {
                return Err(fail("premise does not match ->i schema".into()));
            }
        }
        TypingRule::ArrowE => {
            let TermNode::App {
                fun,
                arg: ETerm::Term(u),
            } = &d.term.node
            else {
                return Err(fail("term is not an application to a term".into()));
            };
            let pf = premise(0)?;
            let pa = premise(1)?;
            let Formula::Arrow(a, b) = &pf.formula else {
                return Err(fail("function premise is not an arrow".into()));
            };
            if **b != d.formula || pa.formula != **a {
                return Err(fail("formulas do not match ->e schema".into()));
            }
            if !same_term(&pf.term, fun) || !same_term(&pa.term, u) {
                return Err(fail("premise terms do not match".into()));
            }
        }
        TypingRule::AndI => {
            let TermNode::Pair(l, r) = &d.term.node else {
                return Err(fail("term is not a pair".into()));
            };
            let Formula::And(a, b) = &d.formula else {
                return Err(fail("conclusion is not a product".into()));
            };
            let pl = premise(0)?;
            let pr = premise(1)?;
            if pl.formula != **a || pr.formula != **b {
                return Err(fail("component formulas do not match".into()));
            }
            if !same_term(&pl.term, l) || !same_term(&pr.term, r) {
                return Err(fail("premise terms do not match".into()));
            }
        }
        TypingRule::AndE1 | TypingRule::AndE2 => {
            let TermNode::App {
                fun,
                arg: ETerm::Proj(index),
            } = &d.term.node
            else {
                return Err(fail("term is not a projection".into()));
            };
            let p = premise(0)?;
            let Formula::And(a1, a2) = &p.formula else {
                return Err(fail("premise is not a product".into()));
            };
            let want = match (d.rule, index) {
                (TypingRule::AndE1, Index::One) => a1,
                (TypingRule::AndE2, Index::Two) => a2,
                _ => return Err(fail("projection index does not match rule".into())),
            };
            if **want != d.formula || !same_term(&p.term, fun) {
                return Err(fail("premise does not match &e schema".into()));
            }
        }
        TypingRule::OrI1 | TypingRule::OrI2 => {
            let TermNode::Inj { index, body, .. } = &d.term.node else {
                return Err(fail("term is not an injection".into()));
            };
            let Formula::Or(a, b) = &d.formula else {
                return Err(fail("conclusion is not a sum".into()));
            };
            let p = premise(0)?;
            let own = match (d.rule, index) {
                (TypingRule::OrI1, Index::One) => a,
                (TypingRule::OrI2, Index::Two) => b,
                _ => return Err(fail("injection index does not match rule".into())),
            };
            if p.formula != **own || !same_term(&p.term, body) {
                return Err(fail("premise does not match |i schema".into()));
            }
        }
        TypingRule::OrE => {
            let TermNode::App {
                fun,
                arg:
                    ETerm::Case {
                        left_binder,
                        left,
                        right_binder,
                        right,
                    },
            } = &d.term.node
            else {
                return Err(fail("term is not a case application".into()));
            };
            let ps = premise(0)?;
            let pl = premise(1)?;
            let pr = premise(2)?;
            let Formula::Or(a, b) = &ps.formula else {
                return Err(fail("scrutinee premise is not a sum".into()));
            };
            if pl.formula != d.formula || pr.formula != d.formula {
                return Err(fail("branch formulas do not match conclusion".into()));
            }
            if pl.context.gamma.get(left_binder) != Some(a)
                || pr.context.gamma.get(right_binder) != Some(b)
            {
                return Err(fail("branch contexts do not bind the case variables".into()));
            }
            if !same_term(&ps.term, fun) || !same_term(&pl.term, left) || !same_term(&pr.term, right)
            {
                return Err(fail("premise terms do not match".into()));
            }
        }
        TypingRule::BotI => {
            let TermNode::Name { name, body } = &d.term.node else {
                return Err(fail("term is not a named term".into()));
            };
            if d.formula != Formula::Bottom {
                return Err(fail("conclusion is not #".into()));
            }
            let p = premise(0)?;
            if d.context.delta.get(name) != Some(&p.formula) || !same_term(&p.term, body) {
                return Err(fail("premise does not match #i schema".into()));
            }
        }
        TypingRule::BotE => {
            let TermNode::Mu { binder, body, .. } = &d.term.node else {
                return Err(fail("term is not a mu-abstraction".into()));
            };
            let p = premise(0)?;
            if p.formula != Formula::Bottom
                || p.context.delta.get(binder) != Some(&d.formula)
                || !same_term(&p.term, body)
            {
                return Err(fail("premise does not match #e schema".into()));
            }
        }
    }
    for p in &d.premises {
        validate_derivation(p)?;
    }
    Ok(())
}

fn same_term(a: &Term, b: &Term) -> bool {
    crate::subst::alpha_eq(a, b, true)
}

/// Renders the judgment `Γ ; Δ |- t : A` in its textual form.
pub fn format_judgment(ctx: &ContextPair, t: &Term, a: &Formula) -> String {
    let mut line = format!(
        "{} |- {} : {}",
        ctx,
        crate::syntax::print_term(t, true),
        a
    );
    // canonical printing never emits runs of spaces, so collapsing only
    // affects the seams left by empty contexts
    while line.contains("  ") {
        line = line.replace("  ", " ");
    }
    line.trim_start().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term};

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn infer_empty(s: &str) -> Result<Formula, TypeError> {
        infer(&ContextPair::empty(), &p(s)).map(|(a, _)| a)
    }

    #[test]
    fn identity() {
        assert_eq!(infer_empty("\\x:A.x").unwrap(), f("A -> A"));
    }

    #[test]
    fn mu_eta_like_term() {
        // Hand derivation: ax gives \x:A.x : A -> A under a:(A->A); #i
        // names it; #e abstracts. Verified below node-by-node against a
        // manually written derivation.
        let (a, d) = infer(&ContextPair::empty(), &p("mu @a:(A->A).(@a \\x:A.x)")).unwrap();
        assert_eq!(a, f("A -> A"));
        assert_eq!(d.rule, TypingRule::BotE);
        assert_eq!(d.premises[0].rule, TypingRule::BotI);
        assert_eq!(d.premises[0].formula, Formula::Bottom);
        let inner = &d.premises[0].premises[0];
        assert_eq!(inner.rule, TypingRule::ArrowI);
        assert_eq!(inner.formula, f("A -> A"));
        assert_eq!(
            inner.context.delta.get(&MuName::new("a")),
            Some(&f("A -> A"))
        );
        assert_eq!(inner.premises[0].rule, TypingRule::Ax);
        validate_derivation(&d).unwrap();
    }

    #[test]
    fn peirce_shape() {
        let t = "\\x:((A->B)->A). mu @a:A.(@a (x \\y:A. mu @b:B.(@a y)))";
        let (a, d) = infer(&ContextPair::empty(), &p(t)).unwrap();
        assert_eq!(a, f("((A -> B) -> A) -> A"));
        // Spot-check the spine: ->i over #e over #i over ->e.
        assert_eq!(d.rule, TypingRule::ArrowI);
        let mu = &d.premises[0];
        assert_eq!(mu.rule, TypingRule::BotE);
        let named = &mu.premises[0];
        assert_eq!(named.rule, TypingRule::BotI);
        assert_eq!(named.premises[0].rule, TypingRule::ArrowE);
        validate_derivation(&d).unwrap();
    }

    #[test]
    fn self_application_is_rejected() {
        let ctx = ContextPair::empty().with_var(VarName::new("x"), f("A"));
        let err = infer(&ctx, &p("(x x)")).unwrap_err();
        assert!(matches!(err, TypeError::NotEliminable { .. }));
    }

    #[test]
    fn erase_drops_annotations() {
        use crate::syntax::print_term;
        assert_eq!(print_term(&erase(&p("\\x:A.x")), true), "\\x.x");
        assert_eq!(print_term(&erase(&p("in1[B] x")), true), "in1 x");
        assert_eq!(print_term(&erase(&p("mu @a:#.x")), true), "mu @a.x");
    }

    #[test]
    fn check_reconstructs_lambda_against_arrow() {
        let d = check(&ContextPair::empty(), &p("\\x.x"), &f("A -> A")).unwrap();
        validate_derivation(&d).unwrap();
        // A beta-redex with an unannotated function checks when the
        // argument infers.
        let ctx = ContextPair::empty().with_var(VarName::new("y"), f("A"));
        let d = check(&ctx, &p("(\\x.x y)"), &f("A")).unwrap();
        validate_derivation(&d).unwrap();
        // Two unannotated lambdas: nothing to propagate from.
        let err = check(&ContextPair::empty(), &p("(\\x.x \\y.y)"), &f("A -> A")).unwrap_err();
        assert!(matches!(err, TypeError::Reconstruction { .. }));
    }

    #[test]
    fn check_unannotated_mu() {
        let ctx = ContextPair::empty().with_var(VarName::new("y"), f("A"));
        let d = check(&ctx, &p("mu @a.(@a y)"), &f("A")).unwrap();
        assert_eq!(d.rule, TypingRule::BotE);
        validate_derivation(&d).unwrap();
    }

    #[test]
    fn formula_at_navigates_cases() {
        let ctx = ContextPair::empty().with_var(VarName::new("s"), f("A | B"));
        let t = p("(s [x. in2[B] x, y. in1[A] y])");
        let (a, d) = infer(&ctx, &t).unwrap();
        assert_eq!(a, f("B | A"));
        assert_eq!(
            formula_at(&d, &Occurrence(vec![0])).unwrap(),
            &f("A | B")
        );
        assert_eq!(
            formula_at(&d, &Occurrence(vec![1, 0])).unwrap(),
            &f("B | A")
        );
        assert_eq!(
            formula_at(&d, &Occurrence(vec![1, 0, 0])).unwrap(),
            &f("A")
        );
    }

    #[test]
    fn judgment_format() {
        let ctx = ContextPair::empty()
            .with_var(VarName::new("x"), f("A"))
            .with_mu(MuName::new("a"), f("C"));
        let s = format_judgment(&ctx, &p("x"), &f("A"));
        assert_eq!(s, "x:A ; @a:C |- x : A");
    }
}
