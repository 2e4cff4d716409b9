use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::model::{LtsBuilder, Weight};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn a_loop() -> Product {
    let p = LtsBuilder::new("P").transition("q0", "a", "q0").build().unwrap();
    Product::new(vec![p], 0, false).unwrap()
}

#[test]
fn a_loop_has_one_state_and_minimal_dfa() {
    let (ep, nfa) = interface_nfa(&a_loop(), DEFAULT_STATE_BOUND).unwrap();
    assert_eq!(ep.num_states(), 1);
    let d = project_determinize(&nfa);
    assert_eq!(d.num_live_states(), 1);
    assert!(d.accepts(&[0, 0, 0]));
    let m = minimize(&d);
    assert_eq!(m, minimize(&m));
    assert_eq!(m.num_live_states(), 1);
}

#[test]
fn silent_only_system_accepts_only_empty_word() {
    let p = LtsBuilder::new("P").state("p").action("x").build().unwrap();
    let q = LtsBuilder::new("Q").transition("q", "b", "q").build().unwrap();
    let prod = Product::new(vec![p, q], 0, false).unwrap();
    let (_, nfa) = interface_nfa(&prod, DEFAULT_STATE_BOUND).unwrap();
    let d = minimize(&project_determinize(&nfa));
    assert_eq!(d.num_live_states(), 1);
    assert!(d.accepts(&[]));
    assert!(!d.accepts(&[0]));
    assert!(divergent_states(&nfa).iter().all(|&x| x));
}

#[test]
fn no_silent_moves_means_no_divergence() {
    let (_, nfa) = interface_nfa(&a_loop(), DEFAULT_STATE_BOUND).unwrap();
    assert!(divergent_states(&nfa).iter().all(|&x| !x));
}

#[test]
fn extended_language_is_detected() {
    let a = LtsBuilder::new("P").transition("s", "a", "s").action("b").build().unwrap();
    let b = LtsBuilder::new("P").transition("s", "a", "s").transition("s", "b", "t").build().unwrap();
    let da = project_determinize(&interface_nfa(&Product::new(vec![a], 0, false).unwrap(), 100).unwrap().1);
    let db = project_determinize(&interface_nfa(&Product::new(vec![b], 0, false).unwrap(), 100).unwrap().1);
    assert_eq!(equivalent(&da, &da), Ok(()));
    let w = equivalent(&da, &db).unwrap_err();
    assert_eq!(w, vec![1]);
    assert_eq!(da.alphabet[w[0] as usize], "b");
}

#[test]
fn state_bound_is_enforced() {
    let p = LtsBuilder::new("P").transition("a", "x", "b").transition("b", "x", "c").build().unwrap();
    let prod = Product::new(vec![p], 0, false).unwrap();
    assert_eq!(explore(&prod, 2).unwrap_err(), OracleError::StateBoundExceeded(2));
    assert_eq!(explore(&prod, 3).unwrap().num_states(), 3);
}

#[test]
fn single_weighted_transition() {
    let p = LtsBuilder::new("P").weighted_transition("q0", "a", "q1", Weight::integer(3)).build().unwrap();
    let prod = Product::new(vec![p], 0, true).unwrap();
    let (_, nfa) = interface_nfa(&prod, 100).unwrap();
    let m = min_weight_per_trace(&nfa, 4);
    assert_eq!(m.len(), 2);
    assert_eq!(m[&Vec::new()], Weight::ZERO);
    assert_eq!(m[&vec![0]], Weight::integer(3));
}

#[test]
fn silent_costs_are_added() {
    let p = LtsBuilder::new("P").transition("s", "a", "t").build().unwrap();
    let q = LtsBuilder::new("Q")
        .weighted_transition("x", "h", "y", Weight::new(1, 2))
        .weighted_transition("y", "a", "z", Weight::integer(2))
        .weighted_transition("x", "a", "z", Weight::integer(5))
        .build()
        .unwrap();
    let prod = Product::new(vec![p, q], 0, true).unwrap();
    let (_, nfa) = interface_nfa(&prod, 100).unwrap();
    let m = min_weight_per_trace(&nfa, 2);
    assert_eq!(m[&vec![0]], Weight::new(5, 2));
    assert_eq!(names(&["a"]), nfa.alphabet);
}

#[test]
fn reach_sets_follow_silent_moves() {
    let p = LtsBuilder::new("P").transition("s", "a", "t").build().unwrap();
    let q = LtsBuilder::new("Q").transition("x", "h", "y").transition("y", "a", "z").build().unwrap();
    let prod = Product::new(vec![p, q], 0, false).unwrap();
    let (_, nfa) = interface_nfa(&prod, 100).unwrap();
    assert_eq!(reach_sets(&nfa, &[]).unwrap().len(), 2);
    assert_eq!(reach_sets(&nfa, &[0]).unwrap().len(), 1);
    assert_eq!(reach_sets(&nfa, &[0, 0]), None);
}
