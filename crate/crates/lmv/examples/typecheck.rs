//! Classical natural-deduction typing.
//!
//! ```bash
//! cargo run -p lmv --example typecheck
//! ```

use lmv::typing::{format_judgment, validate_derivation};
use lmv::{erase, infer, parse_term, print_term, ContextPair};

fn main() {
    // Peirce's law, inhabited with a mu-abstraction
    let peirce = parse_term("\\x:((A->B)->A). mu @a:A.(@a (x \\y:A. mu @b:B.(@a y)))").unwrap();
    let ctx = ContextPair::empty();
    let (formula, derivation) = infer(&ctx, &peirce).unwrap();
    println!("{}", format_judgment(&ctx, &peirce, &formula));

    // every node of the produced derivation instantiates its rule schema
    validate_derivation(&derivation).unwrap();
    println!("derivation validates: {} rule applications", count(&derivation));

    // reduction works on erased terms; erase drops the annotations
    println!("erased: {}", print_term(&erase(&peirce), true));

    // ill-typed terms are rejected with a position
    let bad = parse_term("\\x:A.(x x)").unwrap();
    println!("\\x:A.(x x) fails: {}", infer(&ctx, &bad).unwrap_err());
}

fn count(d: &lmv::typing::Derivation) -> usize {
    1 + d.premises.iter().map(count).sum::<usize>()
}
