//! Redex discovery and one-step/multi-step reduction.
//!
//! Reduction is a relation closed under arbitrary contexts: the
//! call-by-value restriction is on rule shape, not on evaluation position.
//!
//! Call-by-value rules:
//!
//! ```text
//! (\x.t V)                 |> beta_v    t[x:=V]
//! (<V1,V2> pi)             |> pi_v      Vi
//! (ini V [x1.t1,x2.t2])    |> D_v       ti[xi:=V]
//! ((t [x1.t1,x2.t2]) e)    |> delta     (t [x1.(t1 e),x2.(t2 e)])
//! (V (t [x1.t1,x2.t2]))    |> delta_v'  (t [x1.(V t1),x2.(V t2)])
//! (mu @a.t e)              |> mu        mu @a.t[a:=*e]
//! (V mu @a.t)              |> mu_v'     mu @a.t[a:=_*V]
//! ```
//!
//! Call-by-name drops the value restrictions on the three logical rules
//! and has no primed rules. `delta` and `mu` are shared verbatim.
//!
//! A mu-contraction drops the annotation of the contracted binder: the
//! binder's formula changes with the elimination and untyped reduction
//! cannot know the new one. Callers holding a derivation can re-annotate.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::subst::{fresh_mu, mu_subst_arg, mu_subst_fun, subst_var};
use crate::term::{
    self, free_mu_vars, free_mu_vars_eterm, is_value, modify_at, term_at, ETerm, Index, Occurrence,
    Term, TermError, TermNode,
};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Mode {
    Cbv,
    Cbn,
}

/// Rule identifiers, mode-tagged: `delta` and `mu` are shared between the
/// modes, the others are not.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleId {
    BetaV,
    PiV,
    DV,
    Delta,
    DeltaPrimeV,
    Mu,
    MuPrimeV,
    Beta,
    Pi,
    D,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::BetaV => "beta_v",
            RuleId::PiV => "pi_v",
            RuleId::DV => "D_v",
            RuleId::Delta => "delta",
            RuleId::DeltaPrimeV => "delta_v'",
            RuleId::Mu => "mu",
            RuleId::MuPrimeV => "mu_v'",
            RuleId::Beta => "beta",
            RuleId::Pi => "pi",
            RuleId::D => "D",
        };
        write!(f, "{}", s)
    }
}

/// A redex position: the subterm at `occurrence` matches `rule`'s
/// left-hand shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RedexSite {
    pub occurrence: Occurrence,
    pub rule: RuleId,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("no {rule} redex at {at}")]
    InvalidSite { at: Occurrence, rule: RuleId },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// True iff the term is a case application `(t [x.u,y.v])`.
pub fn is_case_app(t: &Term) -> bool {
    matches!(
        &t.node,
        TermNode::App {
            arg: ETerm::Case { .. },
            ..
        }
    )
}

/// The rules whose left-hand side matches at the root of `t`.
pub fn rules_at(t: &Term, mode: Mode) -> Vec<RuleId> {
    let TermNode::App { fun, arg } = &t.node else {
        return Vec::new();
    };
    let mut out = Vec::new();
    match mode {
        Mode::Cbv => {
            match (&fun.node, arg) {
                (TermNode::Lam { .. }, ETerm::Term(v)) if is_value(v) => out.push(RuleId::BetaV),
                (TermNode::Pair(l, r), ETerm::Proj(_)) if is_value(l) && is_value(r) => {
                    out.push(RuleId::PiV)
                }
                (TermNode::Inj { body, .. }, ETerm::Case { .. }) if is_value(body) => {
                    out.push(RuleId::DV)
                }
                _ => {}
            }
            if is_case_app(fun) {
                out.push(RuleId::Delta);
            }
            if matches!(&fun.node, TermNode::Mu { .. }) {
                out.push(RuleId::Mu);
            }
            if is_value(fun) {
                if let ETerm::Term(u) = arg {
                    if is_case_app(u) {
                        out.push(RuleId::DeltaPrimeV);
                    }
                    if matches!(&u.node, TermNode::Mu { .. }) {
                        out.push(RuleId::MuPrimeV);
                    }
                }
            }
        }
        Mode::Cbn => {
            match (&fun.node, arg) {
                (TermNode::Lam { .. }, ETerm::Term(_)) => out.push(RuleId::Beta),
                (TermNode::Pair(..), ETerm::Proj(_)) => out.push(RuleId::Pi),
                (TermNode::Inj { .. }, ETerm::Case { .. }) => out.push(RuleId::D),
                _ => {}
            }
            if is_case_app(fun) {
                out.push(RuleId::Delta);
            }
            if matches!(&fun.node, TermNode::Mu { .. }) {
                out.push(RuleId::Mu);
            }
        }
    }
    out
}

/// All redex sites of `t`, any depth, in path-lexicographic order
/// (rule-id order within one occurrence).
pub fn find_redexes(t: &Term, mode: Mode) -> Vec<RedexSite> {
    term::term_occurrences(t)
        .into_iter()
        .flat_map(|(occ, sub)| {
            rules_at(sub, mode).into_iter().map(move |rule| RedexSite {
                occurrence: occ.clone(),
                rule,
            })
        })
        .collect()
}

/// Contracts the redex at the root of `redex`. The redex root's labels are
/// carried onto the root of the contractum.
pub fn contract_root(redex: &Term, rule: RuleId) -> Result<Term, ReduceError> {
    let invalid = || ReduceError::InvalidSite {
        at: Occurrence::root(),
        rule,
    };
    let TermNode::App { fun, arg } = &redex.node else {
        return Err(invalid());
    };
    let outer = &redex.labels;
    let result = match rule {
        RuleId::BetaV | RuleId::Beta => {
            let (TermNode::Lam { binder, body, .. }, ETerm::Term(v)) = (&fun.node, arg) else {
                return Err(invalid());
            };
            if rule == RuleId::BetaV && !is_value(v) {
                return Err(invalid());
            }
            subst_var(body, binder, v)
        }
        RuleId::PiV | RuleId::Pi => {
            let (TermNode::Pair(l, r), ETerm::Proj(index)) = (&fun.node, arg) else {
                return Err(invalid());
            };
            if rule == RuleId::PiV && !(is_value(l) && is_value(r)) {
                return Err(invalid());
            }
            match index {
                Index::One => (**l).clone(),
                Index::Two => (**r).clone(),
            }
        }
        RuleId::DV | RuleId::D => {
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
                return Err(invalid());
            };
            if rule == RuleId::DV && !is_value(body) {
                return Err(invalid());
            }
            match index {
                Index::One => subst_var(left, left_binder, body),
                Index::Two => subst_var(right, right_binder, body),
            }
        }
        RuleId::Delta => {
            let TermNode::App {
                fun: scrut,
                arg:
                    ETerm::Case {
                        left_binder,
                        left,
                        right_binder,
                        right,
                    },
            } = &fun.node
            else {
                return Err(invalid());
            };
            // the branch binders scope over the copied payload now
            let avoid = crate::term::free_lambda_vars_eterm(arg);
            let (lb, left) = unshadow_branch(left_binder, left, &avoid);
            let (rb, right) = unshadow_branch(right_binder, right, &avoid);
            let mut inner = (**fun).clone();
            inner.node = TermNode::App {
                fun: scrut.clone(),
                arg: ETerm::Case {
                    left_binder: lb,
                    left: Box::new(Term::app(left, arg.clone())),
                    right_binder: rb,
                    right: Box::new(Term::app(right, arg.clone())),
                },
            };
            inner
        }
        RuleId::DeltaPrimeV => {
            if !is_value(fun) {
                return Err(invalid());
            }
            let ETerm::Term(u) = arg else {
                return Err(invalid());
            };
            let TermNode::App {
                fun: scrut,
                arg:
                    ETerm::Case {
                        left_binder,
                        left,
                        right_binder,
                        right,
                    },
            } = &u.node
            else {
                return Err(invalid());
            };
            let avoid = crate::term::free_lambda_vars(fun);
            let (lb, left) = unshadow_branch(left_binder, left, &avoid);
            let (rb, right) = unshadow_branch(right_binder, right, &avoid);
            let mut inner = (**u).clone();
            inner.node = TermNode::App {
                fun: scrut.clone(),
                arg: ETerm::Case {
                    left_binder: lb,
                    left: Box::new(Term::app_term((**fun).clone(), left)),
                    right_binder: rb,
                    right: Box::new(Term::app_term((**fun).clone(), right)),
                },
            };
            inner
        }
        RuleId::Mu => {
            let TermNode::Mu { binder, body, .. } = &fun.node else {
                return Err(invalid());
            };
            let (binder, body) = unshadow_for_payload(binder, body, &free_mu_vars_eterm(arg));
            let mut out = (**fun).clone();
            out.node = TermNode::Mu {
                binder: binder.clone(),
                ann: None,
                body: Box::new(mu_subst_arg(&body, &binder, arg)),
            };
            out
        }
        RuleId::MuPrimeV => {
            if !is_value(fun) {
                return Err(invalid());
            }
            let ETerm::Term(u) = arg else {
                return Err(invalid());
            };
            let TermNode::Mu { binder, body, .. } = &u.node else {
                return Err(invalid());
            };
            let (binder, body) = unshadow_for_payload(binder, body, &free_mu_vars(fun));
            let mut out = (**u).clone();
            out.node = TermNode::Mu {
                binder: binder.clone(),
                ann: None,
                body: Box::new(mu_subst_fun(&body, &binder, fun).expect("checked value")),
            };
            out
        }
    };
    Ok(term::with_extra_labels(result, outer))
}

fn unshadow_branch(
    binder: &crate::term::VarName,
    body: &Term,
    payload_free: &std::collections::BTreeSet<crate::term::VarName>,
) -> (crate::term::VarName, Term) {
    if !payload_free.contains(binder) {
        return (binder.clone(), body.clone());
    }
    let mut taken = payload_free.clone();
    taken.extend(crate::term::all_lambda_names(body));
    let fresh = crate::subst::fresh_var(binder, &taken);
    (fresh.clone(), crate::subst::rename_var(body, binder, &fresh))
}

fn unshadow_for_payload(
    binder: &crate::term::MuName,
    body: &Term,
    payload_free: &std::collections::BTreeSet<crate::term::MuName>,
) -> (crate::term::MuName, Term) {
    if !payload_free.contains(binder) {
        return (binder.clone(), body.clone());
    }
    let mut taken = payload_free.clone();
    taken.extend(crate::term::all_mu_names(body));
    let fresh = fresh_mu(binder, &taken);
    let renamed = crate::subst::rename_mu(body, binder, &fresh);
    (fresh, renamed)
}

/// Contracts the redex at `site`.
pub fn contract(t: &Term, site: &RedexSite) -> Result<Term, ReduceError> {
    let sub = term_at(t, &site.occurrence)?;
    if !rules_at(sub, mode_of(site.rule)).contains(&site.rule) {
        return Err(ReduceError::InvalidSite {
            at: site.occurrence.clone(),
            rule: site.rule,
        });
    }
    let contracted = contract_root(sub, site.rule)?;
    Ok(modify_at(t, &site.occurrence, |_| contracted)?)
}

fn mode_of(rule: RuleId) -> Mode {
    match rule {
        RuleId::Beta | RuleId::Pi | RuleId::D => Mode::Cbn,
        RuleId::Delta | RuleId::Mu => Mode::Cbv, // shared shape; cbv check subsumes
        _ => Mode::Cbv,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// First redex in the deterministic order.
    Lo,
    /// Uniform choice among sites by a seeded generator.
    Random(u64),
}

/// A reduction trace: `steps[i]` holds the site contracted in the i-th
/// step and the resulting term. `exhausted` is set when fuel ran out with
/// redexes remaining.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial: Term,
    pub steps: Vec<(RedexSite, Term)>,
    pub exhausted: bool,
}

impl ReductionTrace {
    pub fn final_term(&self) -> &Term {
        self.steps.last().map(|(_, t)| t).unwrap_or(&self.initial)
    }
}

/// Repeatedly contracts the strategy's chosen redex until no redex remains
/// or `fuel` steps were taken.
pub fn normalize(t: &Term, mode: Mode, strategy: Strategy, fuel: usize) -> ReductionTrace {
    let mut rng = match strategy {
        Strategy::Lo => None,
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut trace = ReductionTrace {
        initial: t.clone(),
        steps: Vec::new(),
        exhausted: false,
    };
    let mut cur = t.clone();
    loop {
        let sites = find_redexes(&cur, mode);
        if sites.is_empty() {
            return trace;
        }
        if trace.steps.len() >= fuel {
            trace.exhausted = true;
            return trace;
        }
        let site = match &mut rng {
            None => sites[0].clone(),
            Some(rng) => sites.choose(rng).expect("nonempty").clone(),
        };
        cur = contract(&cur, &site).expect("site from find_redexes");
        trace.steps.push((site, cur.clone()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_eq;
    use crate::syntax::{parse_term, print_term};

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn pp(t: &Term) -> String {
        print_term(t, false)
    }

    #[test]
    fn find_redexes_examples() {
        // the stuck-shape that motivates mu_v': the argument is not a
        // value, but the function is
        let sites = find_redexes(&p("(\\x.x mu @a.(@a y))"), Mode::Cbv);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].occurrence, Occurrence::root());
        assert_eq!(sites[0].rule, RuleId::MuPrimeV);

        let sites = find_redexes(&p("((u [x1.t1,x2.t2]) y)"), Mode::Cbv);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].rule, RuleId::Delta);

        assert!(find_redexes(&p("(x y)"), Mode::Cbv).is_empty());

        // beta_v requires a value argument; beta does not
        assert!(find_redexes(&p("(\\x.x (y z))"), Mode::Cbv).is_empty());
        let sites = find_redexes(&p("(\\x.x (y z))"), Mode::Cbn);
        assert_eq!(sites[0].rule, RuleId::Beta);
    }

    #[test]
    fn contract_examples() {
        let t = p("(mu @a.(@a x) y)");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::Mu,
        };
        assert_eq!(pp(&contract(&t, &site).unwrap()), "mu @a.(@a (x y))");

        let t = p("(z (u [x1.t1,x2.t2]))");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::DeltaPrimeV,
        };
        assert_eq!(
            pp(&contract(&t, &site).unwrap()),
            "(u [x1.(z t1),x2.(z t2)])"
        );

        let t = p("(in1 y [x1.x1, x2.(x2 z)])");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::DV,
        };
        assert_eq!(pp(&contract(&t, &site).unwrap()), "y");

        let t = p("(x mu @a.(@a y))");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::MuPrimeV,
        };
        assert_eq!(pp(&contract(&t, &site).unwrap()), "mu @a.(@a (x y))");
    }

    #[test]
    fn contract_rejects_wrong_site() {
        let t = p("(x y)");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::BetaV,
        };
        assert!(matches!(
            contract(&t, &site),
            Err(ReduceError::InvalidSite { .. })
        ));
    }

    #[test]
    fn mu_contraction_avoids_capture() {
        // the argument has a free again: binder must be renamed
        let t = p("(mu @a.(@a x) (@a y))");
        let site = RedexSite {
            occurrence: Occurrence::root(),
            rule: RuleId::Mu,
        };
        let r = contract(&t, &site).unwrap();
        assert_eq!(pp(&r), "mu @a1.(@a1 (x (@a y)))");
    }

    #[test]
    fn normalize_two_step_check() {
        // beta_v fires, then (y p1) is normal
        let trace = normalize(&p("((\\x.x y) p1)"), Mode::Cbv, Strategy::Lo, 10);
        assert_eq!(trace.steps.len(), 1);
        assert!(!trace.exhausted);
        assert_eq!(pp(trace.final_term()), "(y p1)");
    }

    #[test]
    fn normalize_fuel_zero() {
        let trace = normalize(&p("(\\x.x y)"), Mode::Cbv, Strategy::Lo, 0);
        assert!(trace.steps.is_empty());
        assert!(trace.exhausted);
        // a normal form does not exhaust fuel 0
        let trace = normalize(&p("(x y)"), Mode::Cbv, Strategy::Lo, 0);
        assert!(!trace.exhausted);
    }

    #[test]
    fn normalize_permutative_example() {
        let trace = normalize(
            &p("(((u [x.v,y.w]) [r.p,s.q]) e)"),
            Mode::Cbv,
            Strategy::Lo,
            10,
        );
        assert!(!trace.exhausted);
        let normal = p("(u [x.(v [r.(p e),s.(q e)]), y.(w [r.(p e),s.(q e)])])");
        assert!(alpha_eq(trace.final_term(), &normal, false));
    }

    #[test]
    fn cbv_value_argument_distinction() {
        // (\x.x y): y is a value, beta_v applies
        let sites = find_redexes(&p("(\\x.x y)"), Mode::Cbv);
        assert_eq!(sites[0].rule, RuleId::BetaV);
        // pair of non-values is not a pi_v redex
        assert!(find_redexes(&p("(<(x y),z> p1)"), Mode::Cbv).is_empty());
        let sites = find_redexes(&p("(<(x y),z> p1)"), Mode::Cbn);
        assert_eq!(sites[0].rule, RuleId::Pi);
    }

    #[test]
    fn random_strategy_is_seed_deterministic() {
        let t = p("((\\x.x y) [u.(\\z.z u), v.v])");
        let a = normalize(&t, Mode::Cbv, Strategy::Random(42), 50);
        let b = normalize(&t, Mode::Cbv, Strategy::Random(42), 50);
        assert_eq!(a.steps.len(), b.steps.len());
        for ((sa, ta), (sb, tb)) in a.steps.iter().zip(b.steps.iter()) {
            assert_eq!(sa, sb);
            assert!(alpha_eq(ta, tb, true));
        }
    }
}
