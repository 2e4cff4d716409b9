//! Explicit-state reference semantics.
//!
//! Nothing here uses the unfolder or the summariser: the reachable global
//! states are enumerated by breadth-first search, non-interface actions are
//! hidden, and everything else is classical automata theory. Because both
//! sides of every comparison are finite-state, equality of finite-trace
//! languages also gives equality of infinite traces (an infinite word is a
//! trace iff all of its finite prefixes are, by König's lemma on the
//! finitely branching run tree).

mod dfa;
mod weights;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::model::{ActionId, Product, StateId, Weight};

pub use dfa::{equivalent, minimize, project_determinize, Dfa};
pub use weights::{
    compare_divergence, compare_min_weights, divergent_states, min_weight_per_trace, reach_sets, silent_closure,
    WeightMismatch,
};

pub const DEFAULT_STATE_BOUND: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("more than {0} reachable global states")]
    StateBoundExceeded(usize),
}

/// Reachable part of a product.
#[derive(Clone, Debug)]
pub struct ExplicitProduct {
    pub states: Vec<Vec<StateId>>,
    /// Outgoing `(action, weight, target)` per state.
    pub transitions: Vec<Vec<(ActionId, Weight, u32)>>,
    pub action_names: Vec<String>,
}

impl ExplicitProduct {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Hides every action not named in `alphabet` (sorted names).
    pub fn hide(&self, alphabet: &[String]) -> Nfa {
        let letter: Vec<Option<u32>> =
            self.action_names.iter().map(|a| alphabet.binary_search(a).ok().map(|k| k as u32)).collect();
        let mut eps = vec![Vec::new(); self.states.len()];
        let mut moves = vec![Vec::new(); self.states.len()];
        for (s, out) in self.transitions.iter().enumerate() {
            for &(a, w, t) in out {
                match letter[a.index()] {
                    Some(l) => moves[s].push((l, t, w)),
                    None => eps[s].push((t, w)),
                }
            }
        }
        Nfa { alphabet: alphabet.to_vec(), initial: 0, eps, moves }
    }
}

/// Breadth-first enumeration of the reachable global states; state 0 is the
/// initial one.
pub fn explore(product: &Product, bound: usize) -> Result<ExplicitProduct, OracleError> {
    let mut index: HashMap<Vec<StateId>, u32> = HashMap::new();
    let mut states = vec![product.initial_state()];
    index.insert(states[0].clone(), 0);
    let mut transitions = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let mut out = Vec::new();
        for (gt, succ) in product.global_successors(&states[head]) {
            let id = match index.get(&succ) {
                Some(&id) => id,
                None => {
                    if states.len() >= bound {
                        return Err(OracleError::StateBoundExceeded(bound));
                    }
                    let id = states.len() as u32;
                    index.insert(succ.clone(), id);
                    states.push(succ);
                    id
                }
            };
            out.push((gt.action, gt.weight, id));
        }
        transitions.push(out);
        head += 1;
    }
    let action_names = (0..product.num_actions()).map(|a| product.action_name(ActionId(a as u32)).into()).collect();
    Ok(ExplicitProduct { states, transitions, action_names })
}

/// Automaton over a named alphabet with weighted silent moves.
#[derive(Clone, Debug)]
pub struct Nfa {
    pub alphabet: Vec<String>,
    pub initial: u32,
    pub eps: Vec<Vec<(u32, Weight)>>,
    /// `(letter, target, weight)`.
    pub moves: Vec<Vec<(u32, u32, Weight)>>,
}

impl Nfa {
    pub fn num_states(&self) -> usize {
        self.eps.len()
    }

    /// Silent-successor closure of `set`, as a sorted state list.
    pub fn eps_closure(&self, set: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<u32> = Vec::new();
        for &s in set {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            out.push(s);
            for &(t, _) in &self.eps[s as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Closed successor set of `set` under `letter`.
    pub fn step(&self, set: &[u32], letter: u32) -> Vec<u32> {
        let mut next = Vec::new();
        for &s in set {
            for &(l, t, _) in &self.moves[s as usize] {
                if l == letter {
                    next.push(t);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        self.eps_closure(&next)
    }

    /// Whether `word` (letters) is a finite trace.
    pub fn accepts(&self, word: &[u32]) -> bool {
        let mut set = self.eps_closure(&[self.initial]);
        for &l in word {
            set = self.step(&set, l);
            if set.is_empty() {
                return false;
            }
        }
        true
    }
}

/// Explores `product` and hides everything outside its interface alphabet.
pub fn interface_nfa(product: &Product, bound: usize) -> Result<(ExplicitProduct, Nfa), OracleError> {
    let ep = explore(product, bound)?;
    let nfa = ep.hide(product.interface_lts().actions());
    Ok((ep, nfa))
}

#[cfg(test)]
mod tests;
