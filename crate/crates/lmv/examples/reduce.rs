//! Redex discovery and reduction in both modes.
//!
//! ```bash
//! cargo run -p lmv --example reduce
//! ```

use lmv::reduction::{find_redexes, normalize, Mode, Strategy};
use lmv::{parse_term, print_term};

fn main() {
    // the motivating shape for the symmetric rules: the argument of the
    // beta-redex is a mu-abstraction, not a value, so beta_v cannot fire;
    // mu_v' can, because the function is a value
    let stuck = parse_term("(\\x.x mu @a.(@a y))").unwrap();
    for site in find_redexes(&stuck, Mode::Cbv) {
        println!("cbv redex at {}: {}", site.occurrence, site.rule);
    }
    for site in find_redexes(&stuck, Mode::Cbn) {
        println!("cbn redex at {}: {}", site.occurrence, site.rule);
    }

    // the permutative example reduces by two delta steps
    let t = parse_term("(((u [x.v,y.w]) [r.p,s.q]) e)").unwrap();
    println!("\nnormalizing {}", print_term(&t, false));
    let trace = normalize(&t, Mode::Cbv, Strategy::Lo, 100);
    for (site, term) in &trace.steps {
        println!("  {}  {}  {}", site.occurrence, site.rule, print_term(term, false));
    }
    println!("exhausted: {}", trace.exhausted);

    // a call-by-value diverger only ever runs out of fuel
    let omega = parse_term("(\\x.(x x) \\x.(x x))").unwrap();
    let trace = normalize(&omega, Mode::Cbv, Strategy::Lo, 25);
    println!(
        "\nomega: {} steps taken, exhausted = {}",
        trace.steps.len(),
        trace.exhausted
    );
}
