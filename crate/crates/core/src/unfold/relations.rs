//! Causality, concurrency, cuts and the cut-off rules, all read-only.

use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use super::prefix::{CondId, EventId, EventStatus, Prefix};

/// Result of the reverse-topological walk over a local configuration.
#[derive(Clone, Debug)]
pub struct CutInfo {
    /// Events of `[e]`, descending ids.
    pub past: Vec<EventId>,
    /// `M(e)` indexed by component.
    pub cut: Vec<CondId>,
    /// `ind(b) = { j | b <= M(e)_j }` for every condition met by the walk.
    pub ind: HashMap<CondId, FixedBitSet>,
}

impl Prefix {
    /// Events of the local configuration generated by the producers of
    /// `inputs`, plus nothing else, in descending id order.
    pub fn past_of_inputs(&self, inputs: &[CondId]) -> Vec<EventId> {
        let mut seen = FixedBitSet::with_capacity(self.events.len());
        let mut stack: Vec<EventId> = inputs.iter().filter_map(|&b| self.condition(b).producer).collect();
        let mut out = Vec::new();
        while let Some(e) = stack.pop() {
            if seen.put(e as usize) {
                continue;
            }
            out.push(e);
            for &b in &self.events[e as usize].inputs {
                if let Some(p) = self.condition(b).producer {
                    if !seen.contains(p as usize) {
                        stack.push(p);
                    }
                }
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `[e]` as a bitset over event ids.
    pub fn local_configuration(&self, e: EventId) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.events.len());
        set.insert(e as usize);
        for x in self.past_of_inputs(&self.events[e as usize].inputs) {
            set.insert(x as usize);
        }
        set
    }

    /// Walks `[e]` from its maximal events downwards, marking consumed
    /// conditions; unconsumed outputs and unconsumed initial conditions form
    /// the cut.
    pub fn compute_cut_and_ind(&self, e: EventId) -> CutInfo {
        let mut past = self.past_of_inputs(&self.events[e as usize].inputs);
        past.insert(0, e);
        let n = self.n_components;
        let mut cut = vec![CondId::MAX; n];
        let mut ind: HashMap<CondId, FixedBitSet> = HashMap::new();
        let singleton = |j: usize| {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(j);
            s
        };
        for &x in &past {
            let ev = &self.events[x as usize];
            let mut acc = FixedBitSet::with_capacity(n);
            for &b in &ev.outputs {
                let set = ind.entry(b).or_insert_with(|| {
                    let j = self.conditions[b as usize].component as usize;
                    cut[j] = b;
                    singleton(j)
                });
                acc.union_with(set);
            }
            for &b in &ev.inputs {
                ind.insert(b, acc.clone());
            }
        }
        for b in self.initial_conditions() {
            if !ind.contains_key(&b) {
                let j = self.conditions[b as usize].component as usize;
                cut[j] = b;
                ind.insert(b, singleton(j));
            }
        }
        CutInfo { past, cut, ind }
    }

    /// `e_prime ≪ e`, using the walk of `e`. `info` must come from
    /// `compute_cut_and_ind(e)`.
    pub fn strong_cause_with(&self, e_prime: EventId, e: EventId, info: &CutInfo) -> bool {
        if e_prime == e || !info.past.contains(&e_prime) {
            return false;
        }
        let cut_p = &self.events[e_prime as usize].cut;
        let mut d = FixedBitSet::with_capacity(self.n_components);
        for (j, (a, b)) in cut_p.iter().zip(&info.cut).enumerate() {
            if a != b {
                d.insert(j);
            }
        }
        d.ones().all(|j| match info.ind.get(&cut_p[j]) {
            Some(s) => d.is_subset(s),
            None => false,
        })
    }

    pub fn strong_cause(&self, e_prime: EventId, e: EventId) -> bool {
        let info = self.compute_cut_and_ind(e);
        self.strong_cause_with(e_prime, e, &info)
    }

    /// Inputs disjoint and pairwise concurrent.
    pub fn event_concurrent(&self, e1: EventId, e2: EventId) -> bool {
        let a = &self.events[e1 as usize].inputs;
        let b = &self.events[e2 as usize].inputs;
        a.iter().all(|&x| b.iter().all(|&y| x != y && self.conditions_concurrent(x, y)))
    }

    /// A condition is concurrent with an event iff it is concurrent with all
    /// of the event's inputs.
    pub fn condition_event_concurrent(&self, s: CondId, e: EventId) -> bool {
        self.events[e as usize].inputs.iter().all(|&b| self.conditions_concurrent(s, b))
    }

    /// Non-cut-off interface events with id below `horizon` concurrent with `e`.
    pub fn con_i(&self, e: EventId, horizon: EventId) -> Vec<EventId> {
        (0..horizon)
            .filter(|&x| {
                let ev = &self.events[x as usize];
                ev.is_interface && !matches!(ev.status, EventStatus::Cutoff { .. }) && self.event_concurrent(x, e)
            })
            .collect()
    }

    /// Earliest non-cut-off interface event inserted before `e` with the same
    /// global state, if `e` is an interface event.
    pub fn is_cutoff(&self, e: EventId) -> Option<EventId> {
        let ev = &self.events[e as usize];
        if !ev.is_interface {
            return None;
        }
        (0..e).find(|&x| {
            let other = &self.events[x as usize];
            other.is_interface && !matches!(other.status, EventStatus::Cutoff { .. }) && other.st == ev.st
        })
    }

    /// Blockers of a non-interface event `e` with respect to the prefix made
    /// of events with id below `horizon` (plus `e` itself).
    pub fn candidate_blocks(&self, e: EventId, horizon: EventId) -> Vec<EventId> {
        let info = self.compute_cut_and_ind(e);
        self.candidate_blocks_with(e, horizon, &info)
    }

    pub(crate) fn candidate_blocks_with(&self, e: EventId, horizon: EventId, info: &CutInfo) -> Vec<EventId> {
        let ev = &self.events[e as usize];
        if ev.is_interface {
            return Vec::new();
        }
        let mut con: Option<Vec<EventId>> = None;
        let mut blocks = Vec::new();
        for &x in info.past.iter().rev() {
            if x == e || x >= horizon {
                continue;
            }
            let other = &self.events[x as usize];
            if other.st != ev.st || other.ip != ev.ip || !self.strong_cause_with(x, e, info) {
                continue;
            }
            let con = con.get_or_insert_with(|| self.con_i(e, horizon));
            if con.iter().all(|&c| self.event_concurrent(c, x)) {
                blocks.push(x);
            }
        }
        blocks
    }

    /// `e' < e` with equal state and interface predecessor, no other test.
    pub(crate) fn def2_companion(&self, e: EventId, info: &CutInfo) -> Option<EventId> {
        let ev = &self.events[e as usize];
        info.past
            .iter()
            .rev()
            .copied()
            .find(|&x| x != e && self.events[x as usize].st == ev.st && self.events[x as usize].ip == ev.ip)
    }
}
