mod common;

use std::collections::{BTreeMap, BTreeSet};

use netsum_core::oracle::{
    divergent_states, equivalent, interface_nfa, min_weight_per_trace, minimize, project_determinize, Dfa, Nfa,
    DEFAULT_STATE_BOUND,
};
use netsum_core::{Product, StateId, Weight};
use proptest::prelude::*;

/// Moore refinement on the reachable part; returns the number of classes.
fn moore_classes(d: &Dfa) -> usize {
    let k = d.alphabet.len();
    let mut reach = BTreeSet::from([d.initial]);
    let mut stack = vec![d.initial];
    while let Some(s) = stack.pop() {
        for &t in &d.delta[s as usize] {
            if reach.insert(t) {
                stack.push(t);
            }
        }
    }
    let mut class: BTreeMap<u32, usize> = reach.iter().map(|&s| (s, usize::from(d.accepting(s)))).collect();
    loop {
        let sig = |s: u32| (class[&s], (0..k).map(|l| class[&d.delta[s as usize][l]]).collect::<Vec<_>>());
        let sigs: BTreeSet<_> = reach.iter().map(|&s| sig(s)).collect();
        let index: BTreeMap<_, usize> = sigs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let next: BTreeMap<u32, usize> = reach.iter().map(|&s| (s, index[&sig(s)])).collect();
        let before: BTreeSet<usize> = class.values().copied().collect();
        if sigs.len() == before.len() {
            return sigs.len();
        }
        class = next;
    }
}

fn dfa() -> impl Strategy<Value = Dfa> {
    (1usize..=7, 1usize..=3).prop_flat_map(|(n, k)| {
        (prop::collection::vec(prop::collection::vec(0..n as u32, k), n), prop::option::of(0..n as u32)).prop_map(
            move |(delta, sink)| Dfa { alphabet: (0..k).map(|l| format!("x{l}")).collect(), delta, initial: 0, sink },
        )
    })
}

fn words(k: usize, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..k as u32 {
                let mut w2: Vec<u32> = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Global states reachable by `word` over the interface alphabet, with
/// every other action silent.
fn simulate(p: &Product, alphabet: &[String], word: &[u32]) -> BTreeSet<Vec<StateId>> {
    let silent = |a: &str| !alphabet.iter().any(|x| x == a);
    let close = |set: BTreeSet<Vec<StateId>>| {
        let mut out = set.clone();
        let mut stack: Vec<_> = set.into_iter().collect();
        while let Some(s) = stack.pop() {
            for (a, t) in common::brute_successors(p, &s) {
                if silent(&a) && out.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        out
    };
    let mut cur = close(BTreeSet::from([p.initial_state()]));
    for &l in word {
        let mut next = BTreeSet::new();
        for s in &cur {
            for (a, t) in common::brute_successors(p, s) {
                if a == alphabet[l as usize] {
                    next.insert(t);
                }
            }
        }
        cur = close(next);
    }
    cur
}

/// An infinite silent path from `s` exists iff a silent path of length
/// `n` does (some state repeats).
fn bounded_divergent(nfa: &Nfa, s: u32) -> bool {
    let n = nfa.num_states();
    let mut layer = BTreeSet::from([s]);
    for _ in 0..n {
        layer = layer.iter().flat_map(|&x| nfa.eps[x as usize].iter().map(|e| e.0)).collect();
        if layer.is_empty() {
            return false;
        }
    }
    true
}

fn small_nfa() -> impl Strategy<Value = Nfa> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, k)| {
        let eps = prop::collection::vec(prop::collection::vec((0..n as u32, 0i64..=6), 0..3), n);
        let moves = prop::collection::vec(prop::collection::vec((0..k as u32, 0..n as u32, 0i64..=6), 0..3), n);
        (eps, moves).prop_map(move |(eps, moves)| Nfa {
            alphabet: (0..k).map(|l| format!("x{l}")).collect(),
            initial: 0,
            eps: eps.into_iter().map(|v| v.into_iter().map(|(t, w)| (t, Weight::integer(w))).collect()).collect(),
            moves: moves
                .into_iter()
                .map(|v| v.into_iter().map(|(l, t, w)| (l, t, Weight::integer(w))).collect())
                .collect(),
        })
    })
}

/// Minimal weight per visible word over all paths of at most `moves` steps.
fn enumerate_paths(nfa: &Nfa, moves: usize, max_word: usize) -> BTreeMap<Vec<u32>, Weight> {
    let mut best: BTreeMap<Vec<u32>, Weight> = BTreeMap::new();
    let mut frontier = vec![(nfa.initial, Vec::new(), Weight::ZERO)];
    for step in 0..=moves {
        let mut next = Vec::new();
        for (s, word, w) in frontier {
            let e = best.entry(word.clone()).or_insert(w);
            if w < *e {
                *e = w;
            }
            if step == moves {
                continue;
            }
            for &(t, c) in &nfa.eps[s as usize] {
                next.push((t, word.clone(), w + c));
            }
            if word.len() < max_word {
                for &(l, t, c) in &nfa.moves[s as usize] {
                    let mut w2 = word.clone();
                    w2.push(l);
                    next.push((t, w2, w + c));
                }
            }
        }
        frontier = next;
    }
    best
}

proptest! {
    #[test]
    fn hopcroft_agrees_with_moore(d in dfa()) {
        let m = minimize(&d);
        prop_assert_eq!(m.num_states(), moore_classes(&d));
        prop_assert_eq!(equivalent(&d, &m), Ok(()));
        for w in words(d.alphabet.len(), 5) {
            prop_assert_eq!(d.accepts(&w), m.accepts(&w));
        }
    }

    #[test]
    fn membership_matches_simulation(p in common::product(false)) {
        let (_, nfa) = interface_nfa(&p, DEFAULT_STATE_BOUND).unwrap();
        let d = project_determinize(&nfa);
        for w in words(nfa.alphabet.len(), 5) {
            prop_assert_eq!(d.accepts(&w), !simulate(&p, &nfa.alphabet, &w).is_empty(), "word {:?}", w);
        }
    }

    #[test]
    fn divergence_matches_bounded_search(p in common::product(false)) {
        let (_, nfa) = interface_nfa(&p, DEFAULT_STATE_BOUND).unwrap();
        let div = divergent_states(&nfa);
        for s in 0..nfa.num_states() as u32 {
            prop_assert_eq!(div[s as usize], bounded_divergent(&nfa, s), "state {}", s);
        }
    }

    /// With at most three states, a cheapest realisation of a word of
    /// length two needs at most eight moves.
    #[test]
    fn min_weights_match_path_enumeration(nfa in small_nfa()) {
        prop_assert_eq!(min_weight_per_trace(&nfa, 2), enumerate_paths(&nfa, 10, 2));
    }
}
