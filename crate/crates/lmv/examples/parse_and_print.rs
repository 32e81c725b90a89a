//! Parsing and canonical printing.
//!
//! ```bash
//! cargo run -p lmv --example parse_and_print
//! ```

use lmv::{parse_formula, parse_term, print_term};

fn main() {
    // terms print in a canonical form: fully parenthesized applications,
    // `\x.` and `mu @a.` binders, `(@a t)` naming
    for src in [
        "(u [x. mu @a.(@a <x,(@a w)>), y. v])",
        "\\x . ( x   p1 )",
        "mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))",
    ] {
        let t = parse_term(src).unwrap();
        println!("{:40} => {}", src, print_term(&t, false));
    }

    // annotations are kept and printed on demand
    let t = parse_term("\\x:((A->B)->A). mu @a:A.(@a (x \\y:A. mu @b:B.(@a y)))").unwrap();
    println!("plain:     {}", print_term(&t, false));
    println!("annotated: {}", print_term(&t, true));

    // formulas: & binds tighter than |, which binds tighter than ->
    let f = parse_formula("A & B | C -> A").unwrap();
    println!("formula:   {}", f);

    // errors carry line:col positions
    let err = parse_term("(u [x.v, y)").unwrap_err();
    println!("error:     {}", err);
}
