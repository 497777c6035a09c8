mod common;

use common::props;

const CASES: u32 = 256;

#[test]
fn free_reduction() {
    props::free_reduction(CASES).unwrap();
}

#[test]
fn tau_is_a_homomorphism_on_the_subgroup() {
    props::tau_homomorphism(CASES).unwrap();
}

#[test]
fn schreier_rank_formula() {
    props::schreier_rank(CASES).unwrap();
}

#[test]
fn v_resolution_matches_direct_actions() {
    props::v_resolution(CASES).unwrap();
}

#[test]
fn leadsto_is_a_preorder() {
    props::leadsto_order(CASES).unwrap();
}

#[test]
fn lattice_closure_is_a_fixed_point() {
    props::lattice_fixed_point(CASES).unwrap();
}

#[test]
fn hermite_and_smith_forms_are_unimodular() {
    props::normal_forms(CASES).unwrap();
}

#[test]
fn composition_laws() {
    props::composition_laws(CASES).unwrap();
}

#[test]
fn verified_tables_satisfy_instantiations() {
    props::presentation_consistency(CASES).unwrap();
}
