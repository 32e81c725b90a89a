//! Complete developments: all redexes contracted at once.
//!
//! ```bash
//! cargo run -p lmv --example complete_development
//! ```

use lmv::parallel::complete_development;
use lmv::{parse_term, print_term};

fn main() {
    for src in [
        // two nested permutative redexes develop in one pass
        "(((u [x.v,y.w]) [r.p,s.q]) e)",
        // the development of a structural redex follows the maximal
        // segment-tree of the operand, so the value lands on both named
        // positions at once
        "(z (u [x. mu @a.(@a <x,(@a w)>), y. v]))",
        // logical redexes
        "(\\x.<x,x> y)",
        "((<\\x.x,z> p1) w)",
        // normal forms are fixed points
        "mu @a.(@a \\x.x)",
    ] {
        let t = parse_term(src).unwrap();
        println!("t  = {}", print_term(&t, false));
        println!("t* = {}\n", print_term(&complete_development(&t), false));
    }
}
