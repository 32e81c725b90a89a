//! Subject reduction: typing survives call-by-value steps.
//!
//! ```bash
//! cargo run -p lmv --example subject_reduction
//! ```

use lmv::reduction::{contract, find_redexes, Mode, RuleId};
use lmv::term::{modify_at, TermNode};
use lmv::typing::{check, format_judgment, formula_at};
use lmv::{infer, parse_term, print_term, ContextPair};

fn main() {
    // a beta_v redex under an annotated lambda
    let t = parse_term("((\\x:A -> A.x \\y:A.y) z)").unwrap();
    let ctx = ContextPair::empty().with_var(lmv::VarName::new("z"), lmv::Formula::atom("A"));
    let (formula, derivation) = infer(&ctx, &t).unwrap();
    println!("{}", format_judgment(&ctx, &t, &formula));

    for site in find_redexes(&t, Mode::Cbv) {
        let mut reduct = contract(&t, &site).unwrap();
        // a mu-contraction drops the binder's annotation: its type changes
        // with the elimination. The derivation of the original term knows
        // the type of the redex, which is the new binder type.
        if matches!(site.rule, RuleId::Mu | RuleId::MuPrimeV) {
            let phi = formula_at(&derivation, &site.occurrence).unwrap().clone();
            reduct = modify_at(&reduct, &site.occurrence, |mut sub| {
                if let TermNode::Mu { ann, .. } = &mut sub.node {
                    *ann = Some(phi);
                }
                sub
            })
            .unwrap();
        }
        check(&ctx, &reduct, &formula).unwrap();
        println!(
            "step {} at {} re-checks: {}",
            site.rule,
            site.occurrence,
            format_judgment(&ctx, &reduct, &formula)
        );
    }

    // the same discipline on a mu_v' step
    let t = parse_term("(\\w:A.w mu @a:A.(@a z))").unwrap();
    let (formula, derivation) = infer(&ctx, &t).unwrap();
    println!("\n{}", format_judgment(&ctx, &t, &formula));
    let site = &find_redexes(&t, Mode::Cbv)[0];
    let mut reduct = contract(&t, site).unwrap();
    let phi = formula_at(&derivation, &site.occurrence).unwrap().clone();
    reduct = modify_at(&reduct, &site.occurrence, |mut sub| {
        if let TermNode::Mu { ann, .. } = &mut sub.node {
            *ann = Some(phi);
        }
        sub
    })
    .unwrap();
    check(&ctx, &reduct, &formula).unwrap();
    println!(
        "step {} re-checks: {}",
        site.rule,
        print_term(&reduct, true)
    );
}
