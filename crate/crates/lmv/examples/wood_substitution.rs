//! Segment-woods: buds, restriction, and wood substitution.
//!
//! ```bash
//! cargo run -p lmv --example wood_substitution
//! ```

use lmv::parallel::{is_parallel_reduct, ReductBudget};
use lmv::segments::{buds, enumerate_segment_trees, restrict_tree_to, wood_substitute, Payload};
use lmv::term::{replace_at, term_at, Occurrence, Subterm};
use lmv::{parse_term, print_term};

fn main() {
    // two nested mu-abstractions; the inner one is named by the outer
    // binder, which also names a deeper injection
    let t = parse_term("mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))").unwrap();
    let r_occ = Occurrence(vec![0, 0]);
    let r = term_at(&t, &r_occ).unwrap().clone();
    println!("t = {}", print_term(&t, false));
    println!("r = {} (at {})\n", print_term(&r, false), r_occ);

    let bud_list: Vec<String> = buds(&r).iter().map(|b| b.to_string()).collect();
    println!("buds of r: {{{}}}", bud_list.join(", "));

    // restricting each segment-tree of t to r yields a segment-wood in r:
    // members inside r stay trunk-pieces, acceptors whose predecessor
    // lies outside become proper-buds
    let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
    for (i, tree) in trees.iter().enumerate() {
        let wood = restrict_tree_to(&t, tree, &r_occ).unwrap();
        println!(
            "wood {}: {} trunk-pieces, proper-buds {{{}}}",
            i,
            wood.trunk_pieces().len(),
            wood.proper_buds
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        // wrap every acceptor of the wood with a value and splice the
        // result back into t
        let sub = wood_substitute(&r, &wood, &Payload::Fun(parse_term("V").unwrap())).unwrap();
        let full = replace_at(&t, &r_occ, Subterm::Term(sub)).unwrap();
        println!("t[V/wood {}] = {}\n", i, print_term(&full, false));
    }

    // the substitution along the smaller wood parallel-reduces to the one
    // along the larger wood: they share their bud set
    let q1 = restrict_tree_to(&t, &trees[0], &r_occ).unwrap();
    let q2 = restrict_tree_to(&t, &trees[1], &r_occ).unwrap();
    let v = Payload::Fun(parse_term("V").unwrap());
    let sub = |q| {
        let s = wood_substitute(&r, q, &v).unwrap();
        replace_at(&t, &r_occ, Subterm::Term(s)).unwrap()
    };
    let verdict = is_parallel_reduct(&sub(&q1), &sub(&q2), &ReductBudget::default());
    println!("t[V/Q1] > t[V/Q2]: {:?}", verdict);
}
