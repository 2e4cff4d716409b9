//! Small random products for property tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use netsum_core::{Lts, LtsBuilder, Product, StateId, Weight};
use proptest::prelude::*;

pub const ACTIONS: [&str; 4] = ["a", "b", "c", "d"];

/// `(states, alphabet mask, transitions as (src, action, dst, weight))`.
type Shape = (usize, u8, Vec<(usize, usize, usize, i64)>);

fn component() -> impl Strategy<Value = Shape> {
    (1usize..=3, 1u8..16, prop::collection::vec((0usize..3, 0usize..4, 0usize..3, 0i64..=10), 2..12))
}

fn build(j: usize, (states, mask, trans): &Shape, weighted: bool) -> Lts {
    let name = |k: usize| format!("s{k}");
    let mut b = LtsBuilder::new(format!("C{j}"));
    for k in 0..*states {
        b = b.state(&name(k));
    }
    let mut seen = Vec::new();
    for &(src, a, dst, w) in trans {
        let (src, dst) = (src % states, dst % states);
        if mask & (1 << a) == 0 || seen.contains(&(src, a, dst)) {
            continue;
        }
        seen.push((src, a, dst));
        let w = if weighted { Weight::integer(w) } else { Weight::ZERO };
        b = b.weighted_transition(&name(src), ACTIONS[a], &name(dst), w);
    }
    for (a, act) in ACTIONS.iter().enumerate() {
        if mask & (1 << a) != 0 && !seen.iter().any(|s| s.1 == a) {
            b = b.action(act);
        }
    }
    b.build().expect("generated components are well-formed")
}

/// One to three components of at most three states over four actions;
/// component 0 is the interface.
pub fn product(weighted: bool) -> impl Strategy<Value = Product> {
    prop::collection::vec(component(), 1..=3).prop_map(move |shapes| {
        let comps = shapes.iter().enumerate().map(|(j, s)| build(j, s, weighted)).collect();
        Product::new(comps, 0, weighted).expect("generated products are well-formed")
    })
}

/// All (action, successor) pairs by exhaustive choice of one local move per
/// component owning the action.
pub fn brute_successors(p: &Product, state: &[StateId]) -> BTreeSet<(String, Vec<StateId>)> {
    let names: BTreeSet<&str> = p.components().iter().flat_map(|c| c.actions().iter().map(String::as_str)).collect();
    let mut out = BTreeSet::new();
    for a in names {
        let owners: Vec<usize> = (0..p.num_components()).filter(|&j| p.components()[j].has_action(a)).collect();
        let mut partial: Vec<Vec<StateId>> = vec![state.to_vec()];
        for &j in &owners {
            let lts = &p.components()[j];
            let mut next = Vec::new();
            for s in &partial {
                for t in lts.transitions() {
                    if t.src == state[j] && lts.actions()[t.action] == a {
                        let mut s2 = s.clone();
                        s2[j] = t.dst;
                        next.push(s2);
                    }
                }
            }
            partial = next;
        }
        for s in partial {
            out.insert((a.to_string(), s));
        }
    }
    out
}
