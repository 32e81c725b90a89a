//! Capture-avoiding substitution and alpha-equivalence.
//!
//! Three substitution forms are provided:
//! - [`subst_var`]: `t[x:=v]`, ordinary substitution for a lambda-variable;
//! - [`mu_subst_arg`]: `t[a:=*e]`, rewriting each `(@a v)` to `(@a (v e))`;
//! - [`mu_subst_fun`]: `t[a:=_*V]`, rewriting each `(@a u)` to `(@a (V u))`.
//!
//! Both mu-substitutions rewrite innermost-first: the body of a named
//! subterm is rewritten before the wrapping application is added, so
//! nested names such as `(@a (@a x))` unfold to `(@a ((@a (x e)) e))`.
//! Binders named `a` shadow: nothing is rewritten under a rebinding.
//!
//! Bound variables are renamed on demand with the smallest fresh suffix
//! (`y` becomes `y1`, then `y2`, ...), which keeps printing deterministic.

use std::collections::BTreeSet;

use crate::term::{
    all_lambda_names, all_mu_names, free_lambda_vars, free_lambda_vars_eterm, free_mu_vars,
    free_mu_vars_eterm, is_value, ETerm, MuName, Term, TermError, TermNode, VarName,
};

fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|k| format!("{}{}", stem, k))
        .find(|cand| !taken(cand))
        .expect("unbounded name supply")
}

/// A lambda-variable based on `base` that avoids everything in `avoid`.
pub fn fresh_var(base: &VarName, avoid: &BTreeSet<VarName>) -> VarName {
    VarName::new(fresh_name(base.as_str(), |c| {
        avoid.contains(&VarName::new(c))
    }))
}

/// A mu-variable based on `base` that avoids everything in `avoid`.
pub fn fresh_mu(base: &MuName, avoid: &BTreeSet<MuName>) -> MuName {
    MuName::new(fresh_name(base.as_str(), |c| avoid.contains(&MuName::new(c))))
}

/// Renames free occurrences of the lambda-variable `old` to `new`.
/// The caller must pick `new` fresh for the whole term (it must occur
/// neither free nor as a binder); no capture check is made.
pub fn rename_var(t: &Term, old: &VarName, new: &VarName) -> Term {
    let mut out = t.clone();
    rename_var_in(&mut out, old, new);
    out
}

fn rename_var_in(t: &mut Term, old: &VarName, new: &VarName) {
    match &mut t.node {
        TermNode::Var(x) => {
            if x == old {
                *x = new.clone();
            }
        }
        TermNode::Lam { binder, body, .. } => {
            if binder != old {
                rename_var_in(body, old, new);
            }
        }
        TermNode::Inj { body, .. } | TermNode::Mu { body, .. } | TermNode::Name { body, .. } => {
            rename_var_in(body, old, new)
        }
        TermNode::Pair(l, r) => {
            rename_var_in(l, old, new);
            rename_var_in(r, old, new);
        }
        TermNode::App { fun, arg } => {
            rename_var_in(fun, old, new);
            match arg {
                ETerm::Term(u) => rename_var_in(u, old, new),
                ETerm::Proj(_) => {}
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    if left_binder != old {
                        rename_var_in(left, old, new);
                    }
                    if right_binder != old {
                        rename_var_in(right, old, new);
                    }
                }
            }
        }
    }
}

/// Renames free occurrences of the mu-variable `old` to `new`.
pub fn rename_mu(t: &Term, old: &MuName, new: &MuName) -> Term {
    let mut out = t.clone();
    rename_mu_in(&mut out, old, new);
    out
}

fn rename_mu_in(t: &mut Term, old: &MuName, new: &MuName) {
    match &mut t.node {
        TermNode::Var(_) => {}
        TermNode::Mu { binder, body, .. } => {
            if binder != old {
                rename_mu_in(body, old, new);
            }
        }
        TermNode::Name { name, body } => {
            if name == old {
                *name = new.clone();
            }
            rename_mu_in(body, old, new);
        }
        TermNode::Lam { body, .. } | TermNode::Inj { body, .. } => rename_mu_in(body, old, new),
        TermNode::Pair(l, r) => {
            rename_mu_in(l, old, new);
            rename_mu_in(r, old, new);
        }
        TermNode::App { fun, arg } => {
            rename_mu_in(fun, old, new);
            match arg {
                ETerm::Term(u) => rename_mu_in(u, old, new),
                ETerm::Proj(_) => {}
                ETerm::Case { left, right, .. } => {
                    rename_mu_in(left, old, new);
                    rename_mu_in(right, old, new);
                }
            }
        }
    }
}

/// Names a substitution must stay clear of: the payload's free variables
/// plus the substitution target itself (a binder renamed to the target
/// name would start capturing the substitution).
struct Avoid {
    lambda: BTreeSet<VarName>,
    mu: BTreeSet<MuName>,
}

impl Avoid {
    fn of_term(t: &Term) -> Avoid {
        Avoid {
            lambda: free_lambda_vars(t),
            mu: free_mu_vars(t),
        }
    }

    fn of_eterm(e: &ETerm) -> Avoid {
        Avoid {
            lambda: free_lambda_vars_eterm(e),
            mu: free_mu_vars_eterm(e),
        }
    }

    fn with_lambda_target(mut self, x: &VarName) -> Avoid {
        self.lambda.insert(x.clone());
        self
    }

    fn with_mu_target(mut self, a: &MuName) -> Avoid {
        self.mu.insert(a.clone());
        self
    }
}

/// Renames `binder` of `body` if it would capture a payload variable.
/// The replacement avoids every name in the body, bound or free: renaming
/// to a name that occurs as an inner binder would capture occurrences
/// under that binder.
fn unshadow_lam(binder: &VarName, body: &Term, avoid: &Avoid) -> Option<(VarName, Term)> {
    if !avoid.lambda.contains(binder) {
        return None;
    }
    let mut taken = avoid.lambda.clone();
    taken.extend(all_lambda_names(body));
    let fresh = fresh_var(binder, &taken);
    Some((fresh.clone(), rename_var(body, binder, &fresh)))
}

fn unshadow_mu(binder: &MuName, body: &Term, avoid: &Avoid) -> Option<(MuName, Term)> {
    if !avoid.mu.contains(binder) {
        return None;
    }
    let mut taken = avoid.mu.clone();
    taken.extend(all_mu_names(body));
    let fresh = fresh_mu(binder, &taken);
    Some((fresh.clone(), rename_mu(body, binder, &fresh)))
}

/// Capture-avoiding substitution `t[x:=v]`. The replaced occurrence's
/// labels are kept on the root of each inserted copy of `v`.
pub fn subst_var(t: &Term, x: &VarName, v: &Term) -> Term {
    let avoid = Avoid::of_term(v).with_lambda_target(x);
    subst_var_go(t, x, v, &avoid)
}

fn subst_var_go(t: &Term, x: &VarName, v: &Term, avoid: &Avoid) -> Term {
    let mut out = t.clone();
    out.node = match &t.node {
        TermNode::Var(y) => {
            if y == x {
                let mut copy = v.clone();
                copy.labels.extend(t.labels.iter().copied());
                return copy;
            }
            t.node.clone()
        }
        TermNode::Lam { binder, ann, body } => {
            if binder == x {
                t.node.clone()
            } else {
                let (binder, body) = match unshadow_lam(binder, body, avoid) {
                    Some((b, t2)) => (b, t2),
                    None => (binder.clone(), (**body).clone()),
                };
                TermNode::Lam {
                    binder,
                    ann: ann.clone(),
                    body: Box::new(subst_var_go(&body, x, v, avoid)),
                }
            }
        }
        TermNode::Mu { binder, ann, body } => {
            let (binder, body) = match unshadow_mu(binder, body, avoid) {
                Some((b, t2)) => (b, t2),
                None => (binder.clone(), (**body).clone()),
            };
            TermNode::Mu {
                binder,
                ann: ann.clone(),
                body: Box::new(subst_var_go(&body, x, v, avoid)),
            }
        }
        TermNode::Inj { index, ann, body } => TermNode::Inj {
            index: *index,
            ann: ann.clone(),
            body: Box::new(subst_var_go(body, x, v, avoid)),
        },
        TermNode::Name { name, body } => TermNode::Name {
            name: name.clone(),
            body: Box::new(subst_var_go(body, x, v, avoid)),
        },
        TermNode::Pair(l, r) => TermNode::Pair(
            Box::new(subst_var_go(l, x, v, avoid)),
            Box::new(subst_var_go(r, x, v, avoid)),
        ),
        TermNode::App { fun, arg } => TermNode::App {
            fun: Box::new(subst_var_go(fun, x, v, avoid)),
            arg: subst_var_eterm(arg, x, v, avoid),
        },
    };
    out
}

fn subst_var_eterm(e: &ETerm, x: &VarName, v: &Term, avoid: &Avoid) -> ETerm {
    match e {
        ETerm::Term(u) => ETerm::Term(Box::new(subst_var_go(u, x, v, avoid))),
        ETerm::Proj(i) => ETerm::Proj(*i),
        ETerm::Case {
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let do_branch = |binder: &VarName, body: &Term| {
                if binder == x {
                    (binder.clone(), body.clone())
                } else {
                    let (binder, body) = match unshadow_lam(binder, body, avoid) {
                        Some((b, t2)) => (b, t2),
                        None => (binder.clone(), body.clone()),
                    };
                    (binder.clone(), subst_var_go(&body, x, v, avoid))
                }
            };
            let (lb, l) = do_branch(left_binder, left);
            let (rb, r) = do_branch(right_binder, right);
            ETerm::Case {
                left_binder: lb,
                left: Box::new(l),
                right_binder: rb,
                right: Box::new(r),
            }
        }
    }
}

enum MuPayload<'a> {
    /// `t[a:=*e]`: wrap the named body as `(v e)`.
    Arg(&'a ETerm),
    /// `t[a:=_*V]`: wrap the named body as `(V u)`.
    Fun(&'a Term),
}

impl MuPayload<'_> {
    fn wrap(&self, body: Term) -> Term {
        match self {
            MuPayload::Arg(e) => Term::app(body, (*e).clone()),
            MuPayload::Fun(v) => Term::app_term((*v).clone(), body),
        }
    }
}

/// The structural mu-substitution `t[a:=*e]`.
pub fn mu_subst_arg(t: &Term, a: &MuName, e: &ETerm) -> Term {
    let avoid = Avoid::of_eterm(e).with_mu_target(a);
    mu_subst_go(t, a, &MuPayload::Arg(e), &avoid)
}

/// The symmetric mu-substitution `t[a:=_*V]`; `v` must be a value.
pub fn mu_subst_fun(t: &Term, a: &MuName, v: &Term) -> Result<Term, TermError> {
    if !is_value(v) {
        return Err(TermError::NonValue);
    }
    let avoid = Avoid::of_term(v).with_mu_target(a);
    Ok(mu_subst_go(t, a, &MuPayload::Fun(v), &avoid))
}

fn mu_subst_go(t: &Term, a: &MuName, payload: &MuPayload, avoid: &Avoid) -> Term {
    let mut out = t.clone();
    out.node = match &t.node {
        TermNode::Var(_) => t.node.clone(),
        TermNode::Name { name, body } => {
            let inner = mu_subst_go(body, a, payload, avoid);
            let body = if name == a {
                payload.wrap(inner)
            } else {
                inner
            };
            TermNode::Name {
                name: name.clone(),
                body: Box::new(body),
            }
        }
        TermNode::Mu { binder, ann, body } => {
            if binder == a {
                // a rebinding shadows: nothing to rewrite below
                t.node.clone()
            } else {
                let (binder, body) = match unshadow_mu(binder, body, avoid) {
                    Some((b, t2)) => (b, t2),
                    None => (binder.clone(), (**body).clone()),
                };
                TermNode::Mu {
                    binder,
                    ann: ann.clone(),
                    body: Box::new(mu_subst_go(&body, a, payload, avoid)),
                }
            }
        }
        TermNode::Lam { binder, ann, body } => {
            let (binder, body) = match unshadow_lam(binder, body, avoid) {
                Some((b, t2)) => (b, t2),
                None => (binder.clone(), (**body).clone()),
            };
            TermNode::Lam {
                binder,
                ann: ann.clone(),
                body: Box::new(mu_subst_go(&body, a, payload, avoid)),
            }
        }
        TermNode::Inj { index, ann, body } => TermNode::Inj {
            index: *index,
            ann: ann.clone(),
            body: Box::new(mu_subst_go(body, a, payload, avoid)),
        },
        TermNode::Pair(l, r) => TermNode::Pair(
            Box::new(mu_subst_go(l, a, payload, avoid)),
            Box::new(mu_subst_go(r, a, payload, avoid)),
        ),
        TermNode::App { fun, arg } => {
            let arg = match arg {
                ETerm::Term(u) => ETerm::Term(Box::new(mu_subst_go(u, a, payload, avoid))),
                ETerm::Proj(i) => ETerm::Proj(*i),
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    let do_branch = |binder: &VarName, body: &Term| {
                        let (binder, body) = match unshadow_lam(binder, body, avoid) {
                            Some((b, t2)) => (b, t2),
                            None => (binder.clone(), body.clone()),
                        };
                        (binder, mu_subst_go(&body, a, payload, avoid))
                    };
                    let (lb, l) = do_branch(left_binder, left);
                    let (rb, r) = do_branch(right_binder, right);
                    ETerm::Case {
                        left_binder: lb,
                        left: Box::new(l),
                        right_binder: rb,
                        right: Box::new(r),
                    }
                }
            };
            TermNode::App {
                fun: Box::new(mu_subst_go(fun, a, payload, avoid)),
                arg,
            }
        }
    };
    out
}

/// Renames every binder of `t` (lambda, case and mu binders) that clashes
/// with the given name sets. Renaming preserves the tree structure, so
/// occurrence paths into `t` stay valid. Used before pushing a payload
/// under the binders of a host term.
pub fn freshen_clashing_binders(
    t: &Term,
    avoid_lambda: &BTreeSet<VarName>,
    avoid_mu: &BTreeSet<MuName>,
) -> Term {
    let mut out = t.clone();
    out.node = match &t.node {
        TermNode::Var(_) => t.node.clone(),
        TermNode::Lam { binder, ann, body } => {
            let (binder, body) = freshen_lam(binder, body, avoid_lambda);
            TermNode::Lam {
                binder,
                ann: ann.clone(),
                body: Box::new(freshen_clashing_binders(&body, avoid_lambda, avoid_mu)),
            }
        }
        TermNode::Mu { binder, ann, body } => {
            let (binder, body) = if avoid_mu.contains(binder) {
                let mut taken = avoid_mu.clone();
                taken.extend(all_mu_names(body));
                let fresh = fresh_mu(binder, &taken);
                (fresh.clone(), rename_mu(body, binder, &fresh))
            } else {
                (binder.clone(), (**body).clone())
            };
            TermNode::Mu {
                binder,
                ann: ann.clone(),
                body: Box::new(freshen_clashing_binders(&body, avoid_lambda, avoid_mu)),
            }
        }
        TermNode::Inj { index, ann, body } => TermNode::Inj {
            index: *index,
            ann: ann.clone(),
            body: Box::new(freshen_clashing_binders(body, avoid_lambda, avoid_mu)),
        },
        TermNode::Name { name, body } => TermNode::Name {
            name: name.clone(),
            body: Box::new(freshen_clashing_binders(body, avoid_lambda, avoid_mu)),
        },
        TermNode::Pair(l, r) => TermNode::Pair(
            Box::new(freshen_clashing_binders(l, avoid_lambda, avoid_mu)),
            Box::new(freshen_clashing_binders(r, avoid_lambda, avoid_mu)),
        ),
        TermNode::App { fun, arg } => {
            let arg = match arg {
                ETerm::Term(u) => {
                    ETerm::Term(Box::new(freshen_clashing_binders(u, avoid_lambda, avoid_mu)))
                }
                ETerm::Proj(i) => ETerm::Proj(*i),
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    let (lb, l) = freshen_lam(left_binder, left, avoid_lambda);
                    let (rb, r) = freshen_lam(right_binder, right, avoid_lambda);
                    ETerm::Case {
                        left_binder: lb,
                        left: Box::new(freshen_clashing_binders(&l, avoid_lambda, avoid_mu)),
                        right_binder: rb,
                        right: Box::new(freshen_clashing_binders(&r, avoid_lambda, avoid_mu)),
                    }
                }
            };
            TermNode::App {
                fun: Box::new(freshen_clashing_binders(fun, avoid_lambda, avoid_mu)),
                arg,
            }
        }
    };
    out
}

fn freshen_lam(binder: &VarName, body: &Term, avoid: &BTreeSet<VarName>) -> (VarName, Term) {
    if avoid.contains(binder) {
        let mut taken = avoid.clone();
        taken.extend(all_lambda_names(body));
        let fresh = fresh_var(binder, &taken);
        (fresh.clone(), rename_var(body, binder, &fresh))
    } else {
        (binder.clone(), body.clone())
    }
}

// ---------------------------------------------------------------------------
// Alpha equivalence

#[derive(Default)]
struct Bindings {
    lambda: Vec<(VarName, VarName)>,
    mu: Vec<(MuName, MuName)>,
}

fn var_matches<T: PartialEq>(stack: &[(T, T)], x: &T, y: &T) -> bool {
    for (a, b) in stack.iter().rev() {
        if a == x || b == y {
            return a == x && b == y;
        }
    }
    x == y
}

/// Alpha-equivalence of terms. With `respect_labels`, marker labels and
/// binder annotations must agree as well.
pub fn alpha_eq(a: &Term, b: &Term, respect_labels: bool) -> bool {
    alpha_term(a, b, &mut Bindings::default(), respect_labels)
}

fn alpha_term(a: &Term, b: &Term, ctx: &mut Bindings, strict: bool) -> bool {
    if strict && a.labels != b.labels {
        return false;
    }
    match (&a.node, &b.node) {
        (TermNode::Var(x), TermNode::Var(y)) => var_matches(&ctx.lambda, x, y),
        (
            TermNode::Lam {
                binder: x,
                ann: anx,
                body: bx,
            },
            TermNode::Lam {
                binder: y,
                ann: any,
                body: by,
            },
        ) => {
            if strict && anx != any {
                return false;
            }
            ctx.lambda.push((x.clone(), y.clone()));
            let r = alpha_term(bx, by, ctx, strict);
            ctx.lambda.pop();
            r
        }
        (
            TermNode::Mu {
                binder: x,
                ann: anx,
                body: bx,
            },
            TermNode::Mu {
                binder: y,
                ann: any,
                body: by,
            },
        ) => {
            if strict && anx != any {
                return false;
            }
            ctx.mu.push((x.clone(), y.clone()));
            let r = alpha_term(bx, by, ctx, strict);
            ctx.mu.pop();
            r
        }
        (
            TermNode::Inj {
                index: ix,
                ann: anx,
                body: bx,
            },
            TermNode::Inj {
                index: iy,
                ann: any,
                body: by,
            },
        ) => ix == iy && (!strict || anx == any) && alpha_term(bx, by, ctx, strict),
        (TermNode::Name { name: x, body: bx }, TermNode::Name { name: y, body: by }) => {
            var_matches(&ctx.mu, x, y) && alpha_term(bx, by, ctx, strict)
        }
        (TermNode::Pair(lx, rx), TermNode::Pair(ly, ry)) => {
            alpha_term(lx, ly, ctx, strict) && alpha_term(rx, ry, ctx, strict)
        }
        (TermNode::App { fun: fx, arg: ax }, TermNode::App { fun: fy, arg: ay }) => {
            alpha_term(fx, fy, ctx, strict) && alpha_eterm(ax, ay, ctx, strict)
        }
        _ => false,
    }
}

fn alpha_eterm(a: &ETerm, b: &ETerm, ctx: &mut Bindings, strict: bool) -> bool {
    match (a, b) {
        (ETerm::Term(x), ETerm::Term(y)) => alpha_term(x, y, ctx, strict),
        (ETerm::Proj(i), ETerm::Proj(j)) => i == j,
        (
            ETerm::Case {
                left_binder: lx,
                left: ltx,
                right_binder: rx,
                right: rtx,
            },
            ETerm::Case {
                left_binder: ly,
                left: lty,
                right_binder: ry,
                right: rty,
            },
        ) => {
            ctx.lambda.push((lx.clone(), ly.clone()));
            let l = alpha_term(ltx, lty, ctx, strict);
            ctx.lambda.pop();
            if !l {
                return false;
            }
            ctx.lambda.push((rx.clone(), ry.clone()));
            let r = alpha_term(rtx, rty, ctx, strict);
            ctx.lambda.pop();
            r
        }
        _ => false,
    }
}

/// A string that is identical for two terms exactly when they are
/// alpha-equivalent (in the chosen label mode). Used to deduplicate
/// reduct sets.
pub fn canonical_key(t: &Term, respect_labels: bool) -> String {
    let mut out = String::new();
    let mut ctx = KeyCtx {
        lambda: Vec::new(),
        mu: Vec::new(),
        strict: respect_labels,
    };
    key_term(t, &mut ctx, &mut out);
    out
}

struct KeyCtx {
    lambda: Vec<VarName>,
    mu: Vec<MuName>,
    strict: bool,
}

fn key_labels(t: &Term, ctx: &KeyCtx, out: &mut String) {
    if ctx.strict && !t.labels.is_empty() {
        out.push('{');
        for m in &t.labels {
            out.push_str(&format!("{:?},", m));
        }
        out.push('}');
    }
}

fn key_ann(ann: &Option<crate::typing::Formula>, ctx: &KeyCtx, out: &mut String) {
    if ctx.strict {
        if let Some(f) = ann {
            out.push(':');
            out.push_str(&crate::syntax::print_formula(f));
        }
    }
}

fn key_term(t: &Term, ctx: &mut KeyCtx, out: &mut String) {
    key_labels(t, ctx, out);
    match &t.node {
        TermNode::Var(x) => {
            match ctx.lambda.iter().rposition(|b| b == x) {
                Some(i) => out.push_str(&format!("v{}", ctx.lambda.len() - 1 - i)),
                None => out.push_str(&format!("f:{}", x.as_str())),
            };
        }
        TermNode::Lam { binder, ann, body } => {
            out.push_str("(l");
            key_ann(ann, ctx, out);
            out.push(' ');
            ctx.lambda.push(binder.clone());
            key_term(body, ctx, out);
            ctx.lambda.pop();
            out.push(')');
        }
        TermNode::Mu { binder, ann, body } => {
            out.push_str("(m");
            key_ann(ann, ctx, out);
            out.push(' ');
            ctx.mu.push(binder.clone());
            key_term(body, ctx, out);
            ctx.mu.pop();
            out.push(')');
        }
        TermNode::Name { name, body } => {
            out.push_str("(n");
            match ctx.mu.iter().rposition(|b| b == name) {
                Some(i) => out.push_str(&format!("b{}", ctx.mu.len() - 1 - i)),
                None => out.push_str(&format!("g:{}", name.as_str())),
            }
            out.push(' ');
            key_term(body, ctx, out);
            out.push(')');
        }
        TermNode::Pair(l, r) => {
            out.push_str("(p ");
            key_term(l, ctx, out);
            out.push(' ');
            key_term(r, ctx, out);
            out.push(')');
        }
        TermNode::Inj { index, ann, body } => {
            out.push_str(&format!("(i{}", index.as_usize()));
            key_ann(ann, ctx, out);
            out.push(' ');
            key_term(body, ctx, out);
            out.push(')');
        }
        TermNode::App { fun, arg } => {
            out.push_str("(a ");
            key_term(fun, ctx, out);
            out.push(' ');
            match arg {
                ETerm::Term(u) => key_term(u, ctx, out),
                ETerm::Proj(i) => out.push_str(&format!("pr{}", i.as_usize())),
                ETerm::Case {
                    left_binder,
                    left,
                    right_binder,
                    right,
                } => {
                    out.push_str("(c ");
                    ctx.lambda.push(left_binder.clone());
                    key_term(left, ctx, out);
                    ctx.lambda.pop();
                    out.push(' ');
                    ctx.lambda.push(right_binder.clone());
                    key_term(right, ctx, out);
                    ctx.lambda.pop();
                    out.push(')');
                }
            }
            out.push(')');
        }
    }
}
