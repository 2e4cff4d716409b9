use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::*;
use crate::model::LtsBuilder;

fn a_loop() -> Product {
    let p = LtsBuilder::new("P").transition("q0", "a", "q0").build().unwrap();
    Product::new(vec![p], 0, false).unwrap()
}

fn silent_loop() -> Product {
    let p = LtsBuilder::new("P").state("p0").build().unwrap();
    let q = LtsBuilder::new("Q").transition("q0", "b", "q0").build().unwrap();
    Product::new(vec![p, q], 0, false).unwrap()
}

#[test]
fn initial_prefix_of_a_loop() {
    let prod = a_loop();
    let prefix = initial_prefix(&prod, Strategy::Full);
    assert_eq!(prefix.conditions().len(), 1);
    assert_eq!(possible_extensions(&prod, &prefix, 0, &HashSet::new()).len(), 1);
}

#[test]
fn initial_conditions_are_pairwise_concurrent() {
    let comps = ["a", "b", "c"]
        .iter()
        .enumerate()
        .map(|(k, a)| LtsBuilder::new(alloc::format!("P{k}")).transition("s", a, "t").build().unwrap())
        .collect();
    let prod = Product::new(comps, 0, false).unwrap();
    let prefix = initial_prefix(&prod, Strategy::Full);
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(prefix.conditions_concurrent(x, y), x != y);
        }
    }
    let total: usize = (0..3).map(|c| possible_extensions(&prod, &prefix, c, &HashSet::new()).len()).sum();
    assert_eq!(total, 3);
}

#[test]
fn a_loop_golden_run() {
    let prod = a_loop();
    let prefix = unfold(&prod, Strategy::Full, Limits::default()).unwrap();
    assert_eq!(prefix.events().len(), 2);
    assert_eq!(prefix.event(0).status, EventStatus::Normal);
    assert_eq!(prefix.event(1).status, EventStatus::Cutoff { companion: 0 });
    assert_eq!(prefix.num_cutoffs(), 1);
    assert_eq!(prefix.is_cutoff(1), Some(0));
    assert_eq!(prefix.is_cutoff(0), None);
    assert!(prefix.strong_cause(0, 1));
    assert!(!prefix.strong_cause(1, 1));
    assert!(!prefix.event_concurrent(0, 0));
}

#[test]
fn a_loop_cut_of_first_event() {
    let prod = a_loop();
    let prefix = unfold(&prod, Strategy::Full, Limits::default()).unwrap();
    let info = prefix.compute_cut_and_ind(0);
    assert_eq!(info.cut, vec![1]);
    assert_eq!(info.ind[&1].ones().collect::<Vec<_>>(), vec![0]);
}

#[test]
fn silent_loop_golden_run() {
    let prod = silent_loop();
    let prefix = unfold(&prod, Strategy::Full, Limits::default()).unwrap();
    assert_eq!(prefix.events().len(), 2);
    assert_eq!(prefix.event(0).status, EventStatus::Normal);
    assert_eq!(prefix.event(1).status, EventStatus::Candidate { blocks: vec![0] });
    assert_eq!(prefix.candidate_blocks(1, 1), vec![0]);
    assert_eq!(prefix.candidate_blocks(0, 0), Vec::<EventId>::new());
    assert_eq!(prefix.final_candidates().collect::<Vec<_>>(), vec![1]);
    assert_eq!(prefix.num_freed(), 0);
}

#[test]
fn def1_diverges_on_silent_loop() {
    let prod = silent_loop();
    let err = unfold(&prod, Strategy::Def1, Limits { max_events: 100, ..Limits::default() }).unwrap_err();
    assert_eq!(err, UnfoldError::EventLimit { limit: 100 });
}

#[test]
fn never_communicating_events_are_concurrent() {
    let p = LtsBuilder::new("P").transition("s", "a", "t").build().unwrap();
    let q = LtsBuilder::new("Q").transition("s", "b", "t").build().unwrap();
    let prod = Product::new(vec![p, q], 0, false).unwrap();
    let prefix = unfold(&prod, Strategy::Full, Limits::default()).unwrap();
    assert_eq!(prefix.events().len(), 2);
    assert!(prefix.event_concurrent(0, 1));
}

#[test]
fn idle_condition_has_no_extensions() {
    let p = LtsBuilder::new("P").transition("s", "a", "t").build().unwrap();
    let q = LtsBuilder::new("Q").state("z").action("c").build().unwrap();
    let prod = Product::new(vec![p, q], 0, false).unwrap();
    let prefix = initial_prefix(&prod, Strategy::Full);
    assert!(possible_extensions(&prod, &prefix, 1, &HashSet::new()).is_empty());
}

#[test]
fn tiebreak_seed_does_not_change_the_prefix() {
    let p = LtsBuilder::new("P").transition("s", "a", "t").transition("t", "c", "s").build().unwrap();
    let q = LtsBuilder::new("Q").transition("s", "b", "t").transition("t", "c", "s").build().unwrap();
    let prod = Product::new(vec![p, q], 0, false).unwrap();
    let run = |seed| {
        let cfg = UnfoldConfig { tiebreak_seed: seed, ..Default::default() };
        let pr = unfold_with(&prod, &cfg, &NoDeadline).unwrap();
        pr.events().iter().map(|e| (e.gt.clone(), e.inputs.clone(), e.status.clone())).collect::<Vec<_>>()
    };
    assert_eq!(run(0), run(12345));
}
