//! Checking the diamond property and confluence tiling.
//!
//! ```bash
//! cargo run -p lmv --example diamond_confluence
//! ```

use lmv::parallel::{
    check_confluence_tile, check_diamond, check_key_lemma, ReductBudget, Verdict,
};
use lmv::{parse_term, print_term};

fn main() {
    let budget = ReductBudget::default();
    let t = parse_term("(((u [x.v,y.w]) [r.p,s.q]) e)").unwrap();

    // key lemma: every parallel reduct reaches the development in one step
    match check_key_lemma(&t, &budget) {
        Verdict::Pass => println!("key lemma: pass"),
        Verdict::Fail { witness } => println!("key lemma: FAIL {witness}"),
        Verdict::Inconclusive => println!("key lemma: inconclusive"),
    }

    // diamond: any two parallel reducts join at the development
    match check_diamond(&t, &budget, 50) {
        Verdict::Pass => println!("diamond:   pass"),
        Verdict::Fail { witness } => println!("diamond:   FAIL {witness}"),
        Verdict::Inconclusive => println!("diamond:   inconclusive"),
    }

    // confluence: two random three-step chains complete to a common
    // reduct by development tiling
    let out = check_confluence_tile(&t, 3, 3, 0xFEED, &budget);
    match out.verdict {
        Verdict::Pass => println!(
            "tiling:    pass, common reduct {}",
            print_term(&out.common.unwrap(), false)
        ),
        Verdict::Fail { witness } => println!("tiling:    FAIL {witness}"),
        Verdict::Inconclusive => println!("tiling:    inconclusive"),
    }
}
