#[path = "support/properties.rs"]
mod properties;

use properties::*;

fn pass(check: Check) {
    match check {
        Ok(summary) => eprintln!("{summary}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn free_reduction_and_homomorphism_laws() {
    pass(free_reduction_and_homomorphisms(1000, 0x5eed));
}

#[test]
fn monoid_order_and_breadth_first_expansion() {
    pass(endo_order(6));
}

#[test]
fn reduction_is_a_preorder_matching_the_diagonal_oracle() {
    pass(reduction_laws(150, 7));
}

#[test]
fn strategies_agree_on_fixtures() {
    pass(strategy_independence());
}

#[test]
fn low_index_does_not_depend_on_level() {
    pass(level_invariance(4));
}

#[test]
fn low_index_matches_brute_force() {
    pass(brute_force_oracle(3, 2));
}

#[test]
fn low_index_matches_brute_force_with_folding() {
    pass(brute_force_oracle(4, 0));
}
