//! Command-line dispatch for the `lmv` binary.
//!
//! Exit codes: 0 success, 1 property/type failure, 2 parse or flag error,
//! 3 fuel exhausted. Results go to standard output, diagnostics to the
//! error stream; parse errors are printed as `line:col: message`.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::harness::{run_suite, GenConfig, Suite, SuiteConfig};
use crate::parallel::{parallel_reducts, complete_development, ReductBudget};
use crate::reduction::{find_redexes, contract, normalize, Mode, RedexSite, Strategy};
use crate::segments::{acceptors, enumerate_segment_trees, SegmentError};
use crate::subst::canonical_key;
use crate::syntax::{parse_term, print_term};
use crate::term::{term_at, Occurrence, Term};

use crate::typing::{format_judgment, infer, ContextPair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lmv", disable_help_subcommand = true)]
#[command(about = "call-by-value lambda-mu calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    Cbv,
    Cbn,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Cbv => Mode::Cbv,
            ModeArg::Cbn => Mode::Cbn,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum StrategyArg {
    Lo,
    Random,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a term and print its canonical form.
    Parse {
        /// Input file, `-` for standard input.
        input: String,
        /// Print binder and injection annotations.
        #[arg(long)]
        annot: bool,
    },
    /// Type-check an annotated term in the empty context.
    Check { input: String },
    /// Contract one redex.
    Step {
        input: String,
        #[arg(long, value_enum, default_value = "cbv")]
        mode: ModeArg,
        /// Redex position as dot-separated child indices (`root` for the
        /// whole term).
        #[arg(long)]
        at: Option<String>,
        #[arg(long, value_enum, default_value = "lo")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduce to normal form (or until fuel runs out), printing the trace.
    Normalize {
        input: String,
        #[arg(long, value_enum, default_value = "cbv")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "lo")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Print the complete development of the term.
    Develop { input: String },
    /// Enumerate parallel reducts.
    Reducts {
        input: String,
        #[arg(long, default_value_t = 200)]
        max: usize,
    },
    /// Enumerate the segment-trees from the term's root.
    Segtrees { input: String },
    /// Run a property suite over generated terms.
    Fuzz {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// Runs the CLI against explicit streams; the binary wires the real ones.
pub fn run(args: &[String], stdin: &str, stdout: &mut String, stderr: &mut String) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("lmv".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not failures
            return if e.use_stderr() {
                let _ = write!(stderr, "{}", e);
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e);
                EXIT_OK
            };
        }
    };
    macro_rules! term_or_exit {
        ($input:expr) => {
            match read_term($input, stdin) {
                Ok(t) => t,
                Err(msg) => {
                    let _ = writeln!(stderr, "{}", msg);
                    return EXIT_USAGE;
                }
            }
        };
    }
    match cli.cmd {
        Cmd::Parse { input, annot } => {
            let t = term_or_exit!(&input);
            let _ = writeln!(stdout, "{}", print_term(&t, annot));
            EXIT_OK
        }
        Cmd::Check { input } => {
            let t = term_or_exit!(&input);
            match infer(&ContextPair::empty(), &t) {
                Ok((formula, _)) => {
                    let _ = writeln!(
                        stdout,
                        "{}",
                        format_judgment(&ContextPair::empty(), &t, &formula)
                    );
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(stderr, "type error: {}", e);
                    EXIT_FAILURE
                }
            }
        }
        Cmd::Step {
            input,
            mode,
            at,
            strategy,
            seed,
        } => {
            let t = term_or_exit!(&input);
            let mode = Mode::from(mode);
            let site = match at {
                Some(path) => {
                    let occ = match Occurrence::parse(&path) {
                        Ok(occ) => occ,
                        Err(e) => {
                            let _ = writeln!(stderr, "{}", e);
                            return EXIT_USAGE;
                        }
                    };
                    let sub = match term_at(&t, &occ) {
                        Ok(sub) => sub,
                        Err(e) => {
                            let _ = writeln!(stderr, "{}", e);
                            return EXIT_USAGE;
                        }
                    };
                    match crate::reduction::rules_at(sub, mode).first() {
                        Some(&rule) => RedexSite {
                            occurrence: occ,
                            rule,
                        },
                        None => {
                            let _ = writeln!(stderr, "no redex at {}", occ);
                            return EXIT_FAILURE;
                        }
                    }
                }
                None => {
                    let sites = find_redexes(&t, mode);
                    if sites.is_empty() {
                        let _ = writeln!(stderr, "already in normal form");
                        return EXIT_OK;
                    }
                    match strategy {
                        StrategyArg::Lo => sites[0].clone(),
                        StrategyArg::Random => {
                            use rand::seq::SliceRandom;
                            use rand::SeedableRng;
                            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                            sites.choose(&mut rng).expect("nonempty").clone()
                        }
                    }
                }
            };
            match contract(&t, &site) {
                Ok(next) => {
                    let _ = writeln!(
                        stdout,
                        "{}  {}  {}",
                        site.occurrence,
                        site.rule,
                        print_term(&next, false)
                    );
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(stderr, "{}", e);
                    EXIT_FAILURE
                }
            }
        }
        Cmd::Normalize {
            input,
            mode,
            strategy,
            seed,
            fuel,
        } => {
            let t = term_or_exit!(&input);
            let strategy = match strategy {
                StrategyArg::Lo => Strategy::Lo,
                StrategyArg::Random => Strategy::Random(seed),
            };
            let trace = normalize(&t, Mode::from(mode), strategy, fuel);
            for (site, term) in &trace.steps {
                let _ = writeln!(
                    stdout,
                    "{}  {}  {}",
                    site.occurrence,
                    site.rule,
                    print_term(term, false)
                );
            }
            if trace.exhausted {
                let _ = writeln!(stderr, "fuel exhausted after {} steps", trace.steps.len());
                EXIT_FUEL
            } else {
                EXIT_OK
            }
        }
        Cmd::Develop { input } => {
            let t = term_or_exit!(&input);
            let _ = writeln!(stdout, "{}", print_term(&complete_development(&t), false));
            EXIT_OK
        }
        Cmd::Reducts { input, max } => {
            let t = term_or_exit!(&input);
            let budget = ReductBudget {
                max_reducts: max,
                ..ReductBudget::default()
            };
            let set = parallel_reducts(&t, &budget);
            let mut lines: Vec<(String, String)> = set
                .terms
                .iter()
                .map(|r| (canonical_key(r, false), print_term(r, false)))
                .collect();
            lines.sort();
            for (_, line) in lines {
                let _ = writeln!(stdout, "{}", line);
            }
            if set.overflowed {
                let _ = writeln!(stderr, "reduct budget exceeded; list is partial");
            }
            EXIT_OK
        }
        Cmd::Segtrees { input } => {
            let t = term_or_exit!(&input);
            match enumerate_segment_trees(&t, &Occurrence::root(), 64) {
                Ok(trees) => {
                    for (i, tree) in trees.iter().enumerate() {
                        let members = paths(tree.members.iter());
                        let accs = acceptors(&t, tree).expect("tree from enumeration");
                        let _ = writeln!(
                            stdout,
                            "tree {}: members: {}; acceptors: {}",
                            i,
                            members,
                            paths(accs.iter())
                        );
                    }
                    EXIT_OK
                }
                Err(e @ SegmentError::CapExceeded { .. }) => {
                    let _ = writeln!(stderr, "{}", e);
                    EXIT_FAILURE
                }
                Err(e) => {
                    let _ = writeln!(stderr, "{}", e);
                    EXIT_FAILURE
                }
            }
        }
        Cmd::Fuzz {
            suite,
            count,
            size,
            seed,
            jobs,
        } => {
            let Some(suite) = Suite::from_name(&suite) else {
                let _ = writeln!(
                    stderr,
                    "unknown suite `{}`; one of: {}",
                    suite,
                    Suite::all()
                        .iter()
                        .map(|s| s.name())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                return EXIT_USAGE;
            };
            let cfg = SuiteConfig {
                gen: GenConfig {
                    seed,
                    max_size: size,
                    ..GenConfig::default()
                },
                count,
                jobs: jobs.max(1),
            };
            let report = run_suite(suite, &cfg);
            let _ = write!(stdout, "{}", report.table());
            for w in report.witnesses.iter().take(10) {
                let _ = writeln!(stdout, "witness: {}", w);
            }
            if report.aborted {
                let _ = writeln!(stderr, "suite aborted: more than 20% of cases skipped");
            }
            let _ = writeln!(stdout, "{}", report.result_line());
            if report.ok() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn paths<'a>(occs: impl Iterator<Item = &'a Occurrence>) -> String {
    let v: Vec<String> = occs.map(|o| o.to_string()).collect();
    if v.is_empty() {
        "none".to_string()
    } else {
        v.join(", ")
    }
}

fn read_term(input: &str, stdin: &str) -> Result<Term, String> {
    let text = if input == "-" {
        stdin.to_string()
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("cannot read {}: {}", input, e))?
    };
    parse_term(text.trim()).map_err(|e| e.to_string())
}
