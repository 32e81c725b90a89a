//! Seeded random generation of terms and the property suites.
//!
//! Generation is deterministic per seed; suite items draw their seeds from
//! the base seed plus the item index, so corpora partition identically no
//! matter how many workers process them. Untyped generation produces open
//! terms (free lambda- and mu-variables): confluence is an untyped
//! property. Typed generation is derivation-directed.
//!
//! Fuel-limited cases are reported as skips, never silently dropped; a
//! suite aborts when more than 20% of its cases skip.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::parallel::{
    check_confluence_tile, check_diamond, check_key_lemma, is_parallel_reduct, parallel_reducts,
    Membership, ReductBudget, Verdict,
};
use crate::reduction::{contract, find_redexes, normalize, Mode, RuleId, Strategy};
use crate::segments::{
    buds, enumerate_segment_trees_capped, is_segment_occurrence, validate_wood, wood_substitute,
    wrap_marked, Payload, SegmentTree, SegmentWood,
};
use crate::subst::{mu_subst_arg, mu_subst_fun, subst_var};
use crate::syntax::{parse_term, print_term};
use crate::term::{
    free_lambda_vars, free_mu_vars, is_value, mark_occurrences, modify_at, ETerm, Index,
    MarkerId, MuName, Term, TermNode, VarName,
};
use crate::typing::{check, formula_at, infer, ContextPair, Formula, TypeError};

/// Configuration of the random term generator.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Node-count bound for generated terms.
    pub max_size: usize,
    /// Names used for free lambda-variables (and leaf variables).
    pub free_var_pool: Vec<String>,
    /// Probability mass of mu-shapes (mu-abstractions and named terms).
    pub mu_bias: f64,
    /// Probability mass of case applications.
    pub case_bias: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_size: 10,
            free_var_pool: ["x", "y", "z", "u", "v", "w"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            mu_bias: 0.25,
            case_bias: 0.25,
        }
    }
}

impl GenConfig {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..self.clone()
        }
    }
}

const MU_POOL: [&str; 3] = ["a", "b", "c"];

struct TermGen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    lam_scope: Vec<VarName>,
    mu_scope: Vec<MuName>,
    next_binder: usize,
}

impl<'a> TermGen<'a> {
    fn new(cfg: &'a GenConfig) -> TermGen<'a> {
        assert!(
            cfg.mu_bias >= 0.0 && cfg.case_bias >= 0.0 && cfg.mu_bias + cfg.case_bias <= 1.0,
            "generator biases must be nonnegative and sum to at most 1"
        );
        TermGen {
            cfg,
            rng: cfg.rng(),
            lam_scope: Vec::new(),
            mu_scope: Vec::new(),
            next_binder: 0,
        }
    }

    fn leaf_var(&mut self) -> Term {
        if !self.lam_scope.is_empty() && self.rng.gen_bool(0.5) {
            let i = self.rng.gen_range(0..self.lam_scope.len());
            Term::var(self.lam_scope[i].as_str())
        } else {
            let pool = &self.cfg.free_var_pool;
            let i = self.rng.gen_range(0..pool.len().max(1));
            Term::var(pool.get(i).cloned().unwrap_or_else(|| "x".into()))
        }
    }

    fn fresh_lam_binder(&mut self) -> String {
        if self.rng.gen_bool(0.3) {
            let pool = &self.cfg.free_var_pool;
            pool[self.rng.gen_range(0..pool.len().max(1))].clone()
        } else {
            self.next_binder += 1;
            format!("k{}", self.next_binder)
        }
    }

    fn fresh_mu_binder(&mut self) -> String {
        if self.rng.gen_bool(0.3) {
            MU_POOL[self.rng.gen_range(0..MU_POOL.len())].to_string()
        } else {
            self.next_binder += 1;
            format!("d{}", self.next_binder)
        }
    }

    fn mu_name(&mut self) -> String {
        if !self.mu_scope.is_empty() && self.rng.gen_bool(0.7) {
            let i = self.rng.gen_range(0..self.mu_scope.len());
            self.mu_scope[i].as_str().to_string()
        } else {
            MU_POOL[self.rng.gen_range(0..MU_POOL.len())].to_string()
        }
    }

    /// Splits `total` into `parts` positive sizes.
    fn split(&mut self, total: usize, parts: usize) -> Vec<usize> {
        let mut out = vec![1usize; parts];
        let mut rest = total.saturating_sub(parts);
        while rest > 0 {
            let i = self.rng.gen_range(0..parts);
            out[i] += 1;
            rest -= 1;
        }
        out
    }

    fn term(&mut self, size: usize) -> Term {
        if size <= 1 {
            return self.leaf_var();
        }
        let roll: f64 = self.rng.gen();
        if roll < self.cfg.mu_bias {
            if self.rng.gen_bool(0.5) {
                let binder = self.fresh_mu_binder();
                self.mu_scope.push(MuName::new(binder.clone()));
                let body = self.term(size - 1);
                self.mu_scope.pop();
                return Term::mu(binder, body);
            }
            let name = self.mu_name();
            return Term::name(name, self.term(size - 1));
        }
        if roll < self.cfg.mu_bias + self.cfg.case_bias && size >= 4 {
            let sizes = self.split(size - 1, 3);
            let scrut = self.term(sizes[0]);
            let lb = self.fresh_lam_binder();
            self.lam_scope.push(VarName::new(lb.clone()));
            let left = self.term(sizes[1]);
            self.lam_scope.pop();
            let rb = self.fresh_lam_binder();
            self.lam_scope.push(VarName::new(rb.clone()));
            let right = self.term(sizes[2]);
            self.lam_scope.pop();
            return Term::app(scrut, ETerm::case(lb, left, rb, right));
        }
        match self.rng.gen_range(0..5) {
            0 => {
                let binder = self.fresh_lam_binder();
                self.lam_scope.push(VarName::new(binder.clone()));
                let body = self.term(size - 1);
                self.lam_scope.pop();
                Term::lam(binder, body)
            }
            1 if size >= 3 => {
                let sizes = self.split(size - 1, 2);
                Term::app_term(self.term(sizes[0]), self.term(sizes[1]))
            }
            2 => {
                let index = if self.rng.gen_bool(0.5) { Index::One } else { Index::Two };
                Term::app(self.term(size - 1), ETerm::Proj(index))
            }
            3 if size >= 3 => {
                let sizes = self.split(size - 1, 2);
                Term::pair(self.term(sizes[0]), self.term(sizes[1]))
            }
            _ => {
                let index = if self.rng.gen_bool(0.5) { Index::One } else { Index::Two };
                Term::inj(index, self.term(size - 1))
            }
        }
    }

    fn value(&mut self, size: usize) -> Term {
        if size <= 1 {
            return self.leaf_var();
        }
        match self.rng.gen_range(0..4) {
            0 => {
                let binder = self.fresh_lam_binder();
                self.lam_scope.push(VarName::new(binder.clone()));
                let body = self.term(size - 1);
                self.lam_scope.pop();
                Term::lam(binder, body)
            }
            1 if size >= 3 => {
                let sizes = self.split(size - 1, 2);
                Term::pair(self.value(sizes[0]), self.value(sizes[1]))
            }
            2 => {
                let index = if self.rng.gen_bool(0.5) { Index::One } else { Index::Two };
                Term::inj(index, self.value(size - 1))
            }
            _ => {
                let name = self.mu_name();
                Term::name(name, self.term(size - 1))
            }
        }
    }

    fn eterm(&mut self, size: usize) -> ETerm {
        match self.rng.gen_range(0..4) {
            0 => ETerm::Proj(if self.rng.gen_bool(0.5) { Index::One } else { Index::Two }),
            1 if size >= 3 => {
                let sizes = self.split(size.saturating_sub(1).max(2), 2);
                let lb = self.fresh_lam_binder();
                let rb = self.fresh_lam_binder();
                ETerm::case(lb, self.term(sizes[0]), rb, self.term(sizes[1]))
            }
            _ => ETerm::term(self.term(size)),
        }
    }
}

/// Generates a size-bounded term over the full grammar, deterministically
/// per seed.
pub fn gen_term(cfg: &GenConfig) -> Term {
    TermGen::new(cfg).term(cfg.max_size)
}

/// Generates a value of the value grammar.
pub fn gen_value(cfg: &GenConfig) -> Term {
    TermGen::new(cfg).value(cfg.max_size)
}

/// Generates an E-term (used by the substitution-lemma suite).
pub fn gen_eterm(cfg: &GenConfig) -> ETerm {
    let mut g = TermGen::new(cfg);
    let size = cfg.max_size;
    g.eterm(size)
}

// ---------------------------------------------------------------------------
// Typed generation

/// Goal formulas over three atoms, connective depth at most 3. The top
/// level is always a connective (a bare atom has no closed inhabitant)
/// and leans towards arrows, which populate the context when introduced.
pub fn gen_goal(rng: &mut ChaCha8Rng) -> Formula {
    match rng.gen_range(0..10) {
        0..=5 => Formula::arrow(gen_formula(rng, 2), gen_formula(rng, 2)),
        6 | 7 => Formula::or(gen_formula(rng, 2), gen_formula(rng, 2)),
        8 => Formula::and(gen_formula(rng, 2), gen_formula(rng, 2)),
        _ => Formula::arrow(
            Formula::arrow(gen_formula(rng, 1), gen_formula(rng, 1)),
            gen_formula(rng, 2),
        ),
    }
}

fn gen_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let atoms = ["A", "B", "C"];
    if depth == 0 || rng.gen_bool(0.4) {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    match rng.gen_range(0..7) {
        0 | 1 => Formula::arrow(gen_formula(rng, depth - 1), gen_formula(rng, depth - 1)),
        2 | 3 => Formula::and(gen_formula(rng, depth - 1), gen_formula(rng, depth - 1)),
        4 | 5 => Formula::or(gen_formula(rng, depth - 1), gen_formula(rng, depth - 1)),
        _ => Formula::Bottom,
    }
}

struct TypedGen {
    rng: ChaCha8Rng,
    next_var: usize,
    /// Node budget per search; unprovable goals otherwise force a full
    /// exponential backtrack.
    fuel: usize,
}

impl TypedGen {
    /// Elimination premises prefer formulas already in scope: that makes
    /// the axiom rule reachable and produces elimination-of-introduction
    /// redexes.
    fn premise_formula(&mut self, gamma: &[(VarName, Formula)]) -> Formula {
        if !gamma.is_empty() && self.rng.gen_bool(0.5) {
            gamma[self.rng.gen_range(0..gamma.len())].1.clone()
        } else {
            gen_formula(&mut self.rng, 1)
        }
    }

    fn attempt(
        &mut self,
        gamma: &[(VarName, Formula)],
        delta: &[(MuName, Formula)],
        goal: &Formula,
        depth: usize,
    ) -> Option<Term> {
        if self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        #[derive(Clone, Copy, PartialEq)]
        enum Move {
            Ax,
            Intro,
            Mu,
            NameIntro,
            ArrowElim,
            AndElim,
            OrElim,
        }
        let axioms: Vec<&VarName> = gamma
            .iter()
            .filter(|(_, a)| a == goal)
            .map(|(x, _)| x)
            .collect();
        let mut moves: Vec<(Move, u32)> = Vec::new();
        if !axioms.is_empty() {
            moves.push((Move::Ax, 4));
        }
        if depth > 0 {
            match goal {
                Formula::Arrow(..) | Formula::And(..) | Formula::Or(..) => {
                    moves.push((Move::Intro, 5))
                }
                Formula::Bottom => {
                    if !delta.is_empty() {
                        moves.push((Move::NameIntro, 5));
                    }
                }
                Formula::Atom(_) => {}
            }
            if *goal != Formula::Bottom {
                moves.push((Move::Mu, 2));
            }
            moves.push((Move::ArrowElim, 1));
            moves.push((Move::AndElim, 1));
            moves.push((Move::OrElim, 1));
        }
        if moves.is_empty() {
            return None;
        }
        // try moves in a weighted random order until one succeeds
        let mut order: Vec<Move> = Vec::new();
        let mut pending = moves;
        while !pending.is_empty() {
            let total: u32 = pending.iter().map(|(_, w)| w).sum();
            let mut pick = self.rng.gen_range(0..total);
            let idx = pending
                .iter()
                .position(|(_, w)| {
                    if pick < *w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .unwrap();
            order.push(pending.remove(idx).0);
        }
        for mv in order {
            let got = match mv {
                Move::Ax => {
                    let x = axioms[self.rng.gen_range(0..axioms.len())];
                    Some(Term::var(x.as_str()))
                }
                Move::Intro => self.intro(gamma, delta, goal, depth),
                Move::Mu => {
                    let binder = VarName::new(format!("m{}", self.next_var));
                    self.next_var += 1;
                    let name = MuName::new(binder.as_str());
                    let mut delta2 = delta.to_vec();
                    delta2.push((name.clone(), goal.clone()));
                    self.attempt(gamma, &delta2, &Formula::Bottom, depth - 1)
                        .map(|body| Term::mu_ann(name.as_str(), goal.clone(), body))
                }
                Move::NameIntro => {
                    let (a, f) = &delta[self.rng.gen_range(0..delta.len())];
                    self.attempt(gamma, delta, &f.clone(), depth - 1)
                        .map(|body| Term::name(a.as_str(), body))
                }
                Move::ArrowElim => {
                    let dom = self.premise_formula(gamma);
                    let fun =
                        self.attempt(gamma, delta, &Formula::arrow(dom.clone(), goal.clone()), depth - 1)?;
                    let arg = self.attempt(gamma, delta, &dom, depth - 1)?;
                    Some(Term::app_term(fun, arg))
                }
                Move::AndElim => {
                    let other = self.premise_formula(gamma);
                    let (conj, index) = if self.rng.gen_bool(0.5) {
                        (Formula::and(goal.clone(), other), Index::One)
                    } else {
                        (Formula::and(other, goal.clone()), Index::Two)
                    };
                    self.attempt(gamma, delta, &conj, depth - 1)
                        .map(|t| Term::app(t, ETerm::Proj(index)))
                }
                Move::OrElim => {
                    let a = self.premise_formula(gamma);
                    let b = self.premise_formula(gamma);
                    let scrut =
                        self.attempt(gamma, delta, &Formula::or(a.clone(), b.clone()), depth - 1)?;
                    let xl = VarName::new(format!("m{}", self.next_var));
                    self.next_var += 1;
                    let xr = VarName::new(format!("m{}", self.next_var));
                    self.next_var += 1;
                    let mut gl = gamma.to_vec();
                    gl.push((xl.clone(), a));
                    let left = self.attempt(&gl, delta, goal, depth - 1)?;
                    let mut gr = gamma.to_vec();
                    gr.push((xr.clone(), b));
                    let right = self.attempt(&gr, delta, goal, depth - 1)?;
                    Some(Term::app(
                        scrut,
                        ETerm::case(xl.as_str(), left, xr.as_str(), right),
                    ))
                }
            };
            if got.is_some() {
                return got;
            }
        }
        None
    }

    fn intro(
        &mut self,
        gamma: &[(VarName, Formula)],
        delta: &[(MuName, Formula)],
        goal: &Formula,
        depth: usize,
    ) -> Option<Term> {
        match goal {
            Formula::Arrow(a, b) => {
                let binder = VarName::new(format!("m{}", self.next_var));
                self.next_var += 1;
                let mut gamma2 = gamma.to_vec();
                gamma2.push((binder.clone(), (**a).clone()));
                self.attempt(&gamma2, delta, b, depth - 1)
                    .map(|body| Term::lam_ann(binder.as_str(), (**a).clone(), body))
            }
            Formula::And(a, b) => {
                let l = self.attempt(gamma, delta, a, depth - 1)?;
                let r = self.attempt(gamma, delta, b, depth - 1)?;
                Some(Term::pair(l, r))
            }
            Formula::Or(a, b) => {
                let (own, other, index) = if self.rng.gen_bool(0.5) {
                    (a, b, Index::One)
                } else {
                    (b, a, Index::Two)
                };
                self.attempt(gamma, delta, own, depth - 1)
                    .map(|body| Term::inj_ann(index, (**other).clone(), body))
            }
            _ => None,
        }
    }
}

/// Derivation-directed generation of an annotated term inhabiting `goal`
/// in the empty context. Returns `None` when the bounded search fails.
pub fn gen_typed_term(cfg: &GenConfig, goal: &Formula) -> Option<Term> {
    let mut g = TypedGen {
        rng: cfg.rng(),
        next_var: 0,
        fuel: 0,
    };
    let depth = cfg.max_size.clamp(2, 8);
    for _ in 0..12 {
        g.fuel = 3000;
        if let Some(t) = g.attempt(&[], &[], goal, depth) {
            return Some(t);
        }
    }
    None
}

/// Samples goals until one generates; most sampled formulas are not
/// classical theorems, and generation failure is reported, not fatal.
pub fn gen_typed_term_any_goal(cfg: &GenConfig) -> Option<(Formula, Term)> {
    let mut rng = cfg.rng();
    for attempt in 0..16u64 {
        let goal = gen_goal(&mut rng);
        let item = cfg.with_seed(cfg.seed ^ (0xD00D + attempt));
        if let Some(t) = gen_typed_term(&item, &goal) {
            return Some((goal, t));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Suites

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Diamond,
    KeyLemma,
    Confluence,
    Subject,
    Values,
    Subst,
    Roundtrip,
    Woods,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Diamond => "diamond",
            Suite::KeyLemma => "key-lemma",
            Suite::Confluence => "confluence",
            Suite::Subject => "subject",
            Suite::Values => "values",
            Suite::Subst => "subst",
            Suite::Roundtrip => "roundtrip",
            Suite::Woods => "woods",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::all().into_iter().find(|suite| suite.name() == s)
    }

    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Diamond,
            Suite::KeyLemma,
            Suite::Confluence,
            Suite::Subject,
            Suite::Values,
            Suite::Subst,
            Suite::Roundtrip,
            Suite::Woods,
        ]
    }
}

/// Configuration of one suite execution.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub gen: GenConfig,
    pub count: usize,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            gen: GenConfig::default(),
            count: 100,
            jobs: 1,
        }
    }
}

/// Per-case result.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CaseOutcome {
    Pass,
    Fail(String),
    Inconclusive(String),
    Skip(String),
}

/// Aggregated suite results. `run = passed + failed + inconclusive +
/// skipped` always holds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub witnesses: Vec<String>,
    pub wall: Duration,
    /// Set when more than 20% of the cases skipped.
    pub aborted: bool,
}

impl SuiteReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>6} {:>12} {:>6}",
            "suite", "run", "pass", "fail", "inconclusive", "skip"
        );
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>6} {:>6} {:>12} {:>6}",
            self.suite, self.run, self.passed, self.failed, self.inconclusive, self.skipped
        );
        out
    }

    pub fn result_line(&self) -> String {
        format!(
            "RESULT suite={} pass={} fail={} inconclusive={} skip={}",
            self.suite, self.passed, self.failed, self.inconclusive, self.skipped
        )
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && !self.aborted
    }
}

fn suite_budget() -> ReductBudget {
    ReductBudget::default()
}

/// Pairs tried per term in the diamond suite.
pub const DIAMOND_PAIR_CAP: usize = 50;

/// Runs the named suite over a generated corpus. Each item's seed is the
/// base seed plus its index, so reports are deterministic and independent
/// of `jobs`.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let outcomes = run_cases(suite, cfg);
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        run: outcomes.len(),
        passed: 0,
        failed: 0,
        inconclusive: 0,
        skipped: 0,
        witnesses: Vec::new(),
        wall: start.elapsed(),
        aborted: false,
    };
    for (index, outcome) in outcomes.iter().enumerate() {
        let seed = cfg.gen.seed.wrapping_add(index as u64);
        match outcome {
            CaseOutcome::Pass => report.passed += 1,
            CaseOutcome::Fail(w) => {
                report.failed += 1;
                report
                    .witnesses
                    .push(format!("suite={} seed={} {}", suite.name(), seed, w));
            }
            CaseOutcome::Inconclusive(w) => {
                report.inconclusive += 1;
                report
                    .witnesses
                    .push(format!("suite={} seed={} inconclusive: {}", suite.name(), seed, w));
            }
            CaseOutcome::Skip(w) => {
                report.skipped += 1;
                report
                    .witnesses
                    .push(format!("suite={} seed={} skip: {}", suite.name(), seed, w));
            }
        }
    }
    report.aborted = report.skipped * 5 > report.run;
    report
}

fn run_cases(suite: Suite, cfg: &SuiteConfig) -> Vec<CaseOutcome> {
    let indices: Vec<usize> = (0..cfg.count).collect();
    if cfg.jobs <= 1 {
        return indices.iter().map(|&i| run_case(suite, cfg, i)).collect();
    }
    let jobs = cfg.jobs.min(cfg.count.max(1));
    let mut slots: Vec<Option<CaseOutcome>> = vec![None; cfg.count];
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| indices.iter().copied().skip(w).step_by(jobs).collect())
            .collect();
        let mut handles = Vec::new();
        for chunk in chunks {
            let cfg = cfg.clone();
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|i| (i, run_case(suite, &cfg, i)))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (i, outcome) in h.join().expect("suite worker panicked") {
                slots[i] = Some(outcome);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("all slots filled")).collect()
}

fn run_case(suite: Suite, cfg: &SuiteConfig, index: usize) -> CaseOutcome {
    let item = cfg.gen.with_seed(cfg.gen.seed.wrapping_add(index as u64));
    match suite {
        Suite::Roundtrip => roundtrip_case(&item),
        Suite::Values => values_case(&item),
        Suite::KeyLemma => verdict_outcome(check_key_lemma(&gen_term(&item), &suite_budget())),
        Suite::Diamond => verdict_outcome(check_diamond(
            &gen_term(&item),
            &suite_budget(),
            DIAMOND_PAIR_CAP,
        )),
        Suite::Confluence => confluence_case(&item, index),
        Suite::Subject => subject_case(&item),
        Suite::Subst => subst_case(&item),
        Suite::Woods => woods_case(&item),
    }
}

fn verdict_outcome(v: Verdict) -> CaseOutcome {
    match v {
        Verdict::Pass => CaseOutcome::Pass,
        Verdict::Fail { witness } => CaseOutcome::Fail(witness),
        Verdict::Inconclusive => CaseOutcome::Inconclusive("budget overflow".into()),
    }
}

fn roundtrip_case(cfg: &GenConfig) -> CaseOutcome {
    let t = gen_term(cfg);
    let printed = print_term(&t, false);
    match parse_term(&printed) {
        Ok(back) if crate::subst::alpha_eq(&back, &t, false) => CaseOutcome::Pass,
        Ok(back) => CaseOutcome::Fail(format!(
            "term={} reparsed={}",
            printed,
            print_term(&back, false)
        )),
        Err(e) => CaseOutcome::Fail(format!("term={} parse error: {}", printed, e)),
    }
}

fn values_case(cfg: &GenConfig) -> CaseOutcome {
    let v = gen_value(cfg);
    let strategies = [
        Strategy::Lo,
        Strategy::Random(cfg.seed),
        Strategy::Random(cfg.seed ^ 0x9e3779b9),
        Strategy::Random(cfg.seed.wrapping_mul(3)),
        Strategy::Random(cfg.seed.rotate_left(17) | 1),
    ];
    for strategy in strategies {
        let trace = normalize(&v, Mode::Cbv, strategy, 20);
        for (site, term) in &trace.steps {
            if !is_value(term) {
                return CaseOutcome::Fail(format!(
                    "value={} lost value-hood after {} at {}: {}",
                    print_term(&v, false),
                    site.rule,
                    site.occurrence,
                    print_term(term, false)
                ));
            }
        }
    }
    CaseOutcome::Pass
}

fn confluence_case(cfg: &GenConfig, index: usize) -> CaseOutcome {
    let t = gen_term(cfg);
    let k = 1 + index % 3;
    let out = check_confluence_tile(&t, k, k, cfg.seed ^ 0xC0FFEE, &suite_budget());
    match out.verdict {
        Verdict::Pass => {
            if out.common.is_some() {
                CaseOutcome::Pass
            } else {
                CaseOutcome::Fail(format!("no common reduct for {}", print_term(&t, false)))
            }
        }
        Verdict::Fail { witness } => CaseOutcome::Fail(witness),
        Verdict::Inconclusive => CaseOutcome::Inconclusive("budget overflow".into()),
    }
}

/// One subject-reduction case: infer the generated term, contract every
/// call-by-value redex once, re-annotate the contracted mu-binder from the
/// original derivation, and re-check the reduct at the original formula.
fn subject_case(cfg: &GenConfig) -> CaseOutcome {
    let Some((goal, t)) = gen_typed_term_any_goal(cfg) else {
        return CaseOutcome::Skip("typed generation failed".into());
    };
    let ctx = ContextPair::empty();
    let (formula, derivation) = match infer(&ctx, &t) {
        Ok(ok) => ok,
        Err(e) => {
            return CaseOutcome::Fail(format!(
                "generated term does not type: {} ({})",
                print_term(&t, true),
                e
            ))
        }
    };
    if formula != goal {
        return CaseOutcome::Fail(format!(
            "generated term infers {} instead of {}",
            formula, goal
        ));
    }
    let mut diagnostics = Vec::new();
    for site in find_redexes(&t, Mode::Cbv) {
        let reduct = match contract(&t, &site) {
            Ok(r) => r,
            Err(e) => return CaseOutcome::Fail(format!("contract failed: {}", e)),
        };
        // mu-contractions lose the binder's formula; the derivation knows
        // the type of the whole redex, which is the new binder type
        let reduct = if matches!(site.rule, RuleId::Mu | RuleId::MuPrimeV) {
            match formula_at(&derivation, &site.occurrence) {
                Some(phi) => {
                    let phi = phi.clone();
                    modify_at(&reduct, &site.occurrence, |mut sub| {
                        if let TermNode::Mu { ann, .. } = &mut sub.node {
                            *ann = Some(phi);
                        }
                        sub
                    })
                    .expect("redex site is a valid occurrence")
                }
                None => {
                    diagnostics.push(format!("no derivation formula at {}", site.occurrence));
                    reduct
                }
            }
        } else {
            reduct
        };
        match check(&ctx, &reduct, &formula) {
            Ok(_) => {}
            Err(TypeError::Reconstruction { at }) => diagnostics.push(format!(
                "reconstruction needed at {} in {}",
                at,
                print_term(&reduct, true)
            )),
            Err(e) => {
                return CaseOutcome::Fail(format!(
                    "reduct fails to re-check at {}: {} (rule {} at {}, reduct {})",
                    formula,
                    e,
                    site.rule,
                    site.occurrence,
                    print_term(&reduct, true)
                ))
            }
        }
    }
    if diagnostics.is_empty() {
        CaseOutcome::Pass
    } else {
        CaseOutcome::Inconclusive(diagnostics.join("; "))
    }
}

/// One substitution-lemma case, all three forms: parallel reduction
/// commutes with substitution.
fn subst_case(cfg: &GenConfig) -> CaseOutcome {
    let budget = suite_budget();
    let t = gen_term(cfg);
    let value_cfg = GenConfig {
        max_size: 4,
        ..cfg.with_seed(cfg.seed ^ 0xABCD)
    };
    let v = gen_value(&value_cfg);
    let t_reducts = sample(parallel_reducts(&t, &budget).terms, 8);
    let v_reducts = sample(parallel_reducts(&v, &budget).terms, 4);

    let x = free_lambda_vars(&t)
        .into_iter()
        .next()
        .unwrap_or_else(|| VarName::new("x"));
    let lhs = subst_var(&t, &x, &v);
    for t2 in &t_reducts {
        for v2 in &v_reducts {
            let rhs = subst_var(t2, &x, v2);
            match is_parallel_reduct(&lhs, &rhs, &budget) {
                Membership::Member => {}
                Membership::NotMember => {
                    return CaseOutcome::Fail(format!(
                        "var form: {} does not parallel-reduce to {}",
                        print_term(&lhs, false),
                        print_term(&rhs, false)
                    ))
                }
                Membership::Inconclusive => {
                    return CaseOutcome::Inconclusive("budget overflow (var form)".into())
                }
            }
        }
    }

    let a = free_mu_vars(&t)
        .into_iter()
        .next()
        .unwrap_or_else(|| MuName::new("a"));
    let e = gen_eterm(&GenConfig {
        max_size: 3,
        ..cfg.with_seed(cfg.seed ^ 0xEEEE)
    });
    let e_reducts = sample(ereducts_of(&e, &budget), 4);
    let lhs = mu_subst_arg(&t, &a, &e);
    for t2 in &t_reducts {
        for e2 in &e_reducts {
            let rhs = mu_subst_arg(t2, &a, e2);
            match is_parallel_reduct(&lhs, &rhs, &budget) {
                Membership::Member => {}
                Membership::NotMember => {
                    return CaseOutcome::Fail(format!(
                        "arg form: {} does not parallel-reduce to {}",
                        print_term(&lhs, false),
                        print_term(&rhs, false)
                    ))
                }
                Membership::Inconclusive => {
                    return CaseOutcome::Inconclusive("budget overflow (arg form)".into())
                }
            }
        }
    }

    let lhs = mu_subst_fun(&t, &a, &v).expect("generated value");
    for t2 in &t_reducts {
        for v2 in &v_reducts {
            let rhs = mu_subst_fun(t2, &a, v2).expect("values close under reduction");
            match is_parallel_reduct(&lhs, &rhs, &budget) {
                Membership::Member => {}
                Membership::NotMember => {
                    return CaseOutcome::Fail(format!(
                        "fun form: {} does not parallel-reduce to {}",
                        print_term(&lhs, false),
                        print_term(&rhs, false)
                    ))
                }
                Membership::Inconclusive => {
                    return CaseOutcome::Inconclusive("budget overflow (fun form)".into())
                }
            }
        }
    }
    CaseOutcome::Pass
}

fn sample<T>(mut v: Vec<T>, n: usize) -> Vec<T> {
    v.truncate(n);
    v
}

fn ereducts_of(e: &ETerm, budget: &ReductBudget) -> Vec<ETerm> {
    match e {
        ETerm::Proj(i) => vec![ETerm::Proj(*i)],
        ETerm::Term(t) => parallel_reducts(t, budget)
            .terms
            .into_iter()
            .map(|t| ETerm::Term(Box::new(t)))
            .collect(),
        ETerm::Case {
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let ls = sample(parallel_reducts(left, budget).terms, 4);
            let rs = sample(parallel_reducts(right, budget).terms, 4);
            let mut out = Vec::new();
            for l in &ls {
                for r in &rs {
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

/// One wood-lemma case: build bud-equal woods `Q1 <= Q2` (trunk-pieces of
/// `Q1` a subset of those of `Q2`), transfer `Q2` through a parallel step
/// by markers, and check `t[V/Q1]` parallel-reduces to `t'[V'/Q2]`.
fn woods_case(cfg: &GenConfig) -> CaseOutcome {
    let budget = suite_budget();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3030);
    let t = gen_term(cfg);
    let (q1, q2) = match build_wood_pair(&t, &mut rng) {
        Some(pair) => pair,
        None => return CaseOutcome::Skip("no usable woods in generated term".into()),
    };
    debug_assert!(validate_wood(&t, &q1).is_ok());
    debug_assert!(validate_wood(&t, &q2).is_ok());
    if q1.buds() != q2.buds() || !q1.trunk_pieces().is_subset(&q2.trunk_pieces()) {
        return CaseOutcome::Fail("wood pair violates its own construction".into());
    }
    let v = gen_value(&GenConfig {
        max_size: 3,
        ..cfg.with_seed(cfg.seed ^ 0x5151)
    });
    let v_reducts = sample(parallel_reducts(&v, &budget).terms, 3);

    // transfer Q2 through a parallel step of t via markers
    let marker = MarkerId::fresh();
    let q2_acceptors = match crate::segments::wood_acceptors(&t, &q2) {
        Ok(a) => a,
        Err(e) => return CaseOutcome::Fail(format!("wood acceptors: {}", e)),
    };
    let marked = mark_occurrences(&t, &q2_acceptors, marker);
    let inner = sample(parallel_reducts(&marked, &budget).terms, 6);

    let lhs = match wood_substitute(&t, &q1, &Payload::Fun(v.clone())) {
        Ok(l) => l,
        Err(e) => return CaseOutcome::Fail(format!("wood substitute: {}", e)),
    };
    for t2 in &inner {
        for v2 in &v_reducts {
            let rhs = wrap_marked(t2, marker, &Payload::Fun(v2.clone()));
            match is_parallel_reduct(&lhs, &rhs, &budget) {
                Membership::Member => {}
                Membership::NotMember => {
                    return CaseOutcome::Fail(format!(
                        "{} does not parallel-reduce to {}",
                        print_term(&lhs, false),
                        print_term(&rhs, false)
                    ))
                }
                Membership::Inconclusive => {
                    return CaseOutcome::Inconclusive("budget overflow".into())
                }
            }
        }
    }
    CaseOutcome::Pass
}

/// Picks bud-equal woods `Q1 <= Q2` in `t`: for each bud, `Q2` takes a
/// segment-tree where possible and `Q1` takes a rooted subtree or demotes
/// the bud to a proper-bud.
fn build_wood_pair(t: &Term, rng: &mut ChaCha8Rng) -> Option<(SegmentWood, SegmentWood)> {
    let mut q1 = SegmentWood::default();
    let mut q2 = SegmentWood::default();
    let mut used_any_tree = false;
    for bud in buds(t).into_iter().take(4) {
        // the root bud is always usable; keep it so every term yields a
        // wood pair
        if !bud.is_root() && !rng.gen_bool(0.8) {
            continue;
        }
        let is_seg = is_segment_occurrence(t, &bud).unwrap_or(false);
        if is_seg {
            let (trees, _) = match enumerate_segment_trees_capped(t, &bud, 8) {
                Ok(ts) => ts,
                Err(_) => continue,
            };
            // trees are sorted by size; the last is the largest available
            let big = trees.last().cloned()?;
            let small = if rng.gen_bool(0.5) {
                // any enumerated tree whose members lie inside the big one
                let subtrees: Vec<&SegmentTree> = trees
                    .iter()
                    .filter(|tr| tr.members.is_subset(&big.members))
                    .collect();
                Some((*subtrees[rng.gen_range(0..subtrees.len())]).clone())
            } else {
                None // demote to proper-bud in Q1
            };
            q2.trees.push(big);
            match small {
                Some(tree) => q1.trees.push(tree),
                None => {
                    q1.proper_buds.insert(bud.clone());
                }
            }
            used_any_tree = true;
        } else {
            q1.proper_buds.insert(bud.clone());
            q2.proper_buds.insert(bud.clone());
        }
    }
    if q1.buds().is_empty() && !used_any_tree {
        return None;
    }
    Some((q1, q2))
}

// ---------------------------------------------------------------------------
