//! Enumerating parallel reducts.
//!
//! ```bash
//! cargo run -p lmv --example parallel_reducts
//! ```

use lmv::parallel::{complete_development, is_parallel_reduct, parallel_reducts, ReductBudget};
use lmv::{alpha_eq, parse_term, print_term};

fn main() {
    let t = parse_term("(((u [x.v,y.w]) [r.p,s.q]) e)").unwrap();
    let budget = ReductBudget::default();
    let set = parallel_reducts(&t, &budget);
    println!("{} parallel reducts of {}:", set.terms.len(), print_term(&t, false));
    let mut lines: Vec<String> = set.terms.iter().map(|r| print_term(r, false)).collect();
    lines.sort();
    for line in lines {
        println!("  {}", line);
    }

    // the development is always among them, and the two one-step
    // permutative reducts both reach it in one more parallel step
    let tstar = complete_development(&t);
    assert!(set.terms.iter().any(|r| alpha_eq(r, &tstar, false)));
    let t1 = parse_term("((u [x.(v [r.p,s.q]), y.(w [r.p,s.q])]) e)").unwrap();
    let t2 = parse_term("((u [x.v,y.w]) [r.(p e),s.(q e)])").unwrap();
    println!("\nt*  = {}", print_term(&tstar, false));
    println!("t1 > t*: {:?}", is_parallel_reduct(&t1, &tstar, &budget));
    println!("t2 > t*: {:?}", is_parallel_reduct(&t2, &tstar, &budget));
}
