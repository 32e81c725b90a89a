//! Segment-trees and extended structural reduction.
//!
//! ```bash
//! cargo run -p lmv --example segment_trees
//! ```

use lmv::segments::{acceptors, enumerate_segment_trees, extended_structural_reduce};
use lmv::term::{Occurrence, Term};
use lmv::{parse_term, print_term};

fn main() {
    // a case application whose first branch is a mu-abstraction with two
    // named subterms: two segment-trees grow from the root
    let t = parse_term("(u [x. mu @a.(@a <x,(@a w)>), y. v])").unwrap();
    println!("t = {}\n", print_term(&t, false));

    let trees = enumerate_segment_trees(&t, &Occurrence::root(), 64).unwrap();
    for (i, tree) in trees.iter().enumerate() {
        let members: Vec<String> = tree.members.iter().map(|m| m.to_string()).collect();
        let accs: Vec<String> = acceptors(&t, tree)
            .unwrap()
            .iter()
            .map(|a| a.to_string())
            .collect();
        println!("tree {}: members {{{}}}", i, members.join(", "));
        println!("        acceptors {{{}}}", accs.join(", "));
    }

    // pushing a value onto the acceptors of each tree erases the
    // application; the larger the tree, the deeper the value travels
    let app = Term::app_term(Term::var("V"), t);
    println!("\n(V t) along each tree:");
    for tree in &trees {
        let reduced = extended_structural_reduce(&app, tree).unwrap();
        println!("  {}", print_term(&reduced, false));
    }
}
