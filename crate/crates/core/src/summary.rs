//! Interface projection of a finished prefix, folding, divergence and
//! weight annotations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

use crate::model::{LocalTransition, Lts, ModelError, Product, Weight};
use crate::unfold::{CondId, EventId, EventStatus, Prefix, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SummaryError {
    #[error("divergence marking needs a prefix built with strategy full, got {0}")]
    StrategyMismatch(&'static str),
    #[error("event {0} has a negative interface cost")]
    NegativeEventCost(EventId),
}

/// The interface conditions and events of a prefix. Every event has exactly
/// one interface input and one interface output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterfaceNet {
    pub conditions: Vec<CondId>,
    /// `(event, input, output)`.
    pub events: Vec<(EventId, CondId, CondId)>,
}

pub fn interface_projection(prefix: &Prefix) -> InterfaceNet {
    let i = prefix.interface() as u32;
    let conditions = (0..prefix.conditions().len() as CondId).filter(|&b| prefix.condition(b).component == i).collect();
    let pick = |list: &[CondId]| *list.iter().find(|&&b| prefix.condition(b).component == i).unwrap();
    let events = prefix
        .events()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_interface)
        .map(|(id, e)| (id as EventId, pick(&e.inputs), pick(&e.outputs)))
        .collect();
    InterfaceNet { conditions, events }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SummaryTransition {
    pub src: usize,
    /// Index into [`Summary::alphabet`].
    pub action: usize,
    pub dst: usize,
    pub weight: Option<Weight>,
}

/// Folded interface LTS. State 0 is initial; states are numbered by the
/// smallest condition id in their class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    /// Interface alphabet, sorted.
    pub alphabet: Vec<String>,
    /// Interface conditions of each state.
    pub classes: Vec<Vec<CondId>>,
    pub transitions: Vec<SummaryTransition>,
    pub divergent: Option<BTreeSet<usize>>,
}

impl Summary {
    pub fn num_states(&self) -> usize {
        self.classes.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn is_weighted(&self) -> bool {
        self.transitions.iter().any(|t| t.weight.is_some())
    }

    /// State holding condition `b`.
    pub fn state_of(&self, b: CondId) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&b))
    }

    pub fn state_name(k: usize) -> String {
        let mut s = String::from("S");
        s.push_str(&k.to_string());
        s
    }

    /// The summary as a plain component named `name`.
    pub fn to_lts(&self, name: &str) -> Result<Lts, ModelError> {
        let states = (0..self.num_states()).map(Summary::state_name).collect();
        let transitions = self
            .transitions
            .iter()
            .map(|t| LocalTransition {
                src: t.src as u32,
                action: t.action,
                dst: t.dst as u32,
                weight: t.weight.unwrap_or(Weight::ZERO),
            })
            .collect();
        Lts::new(name, states, self.alphabet.clone(), transitions, 0)
    }

    /// The summary as a one-component product, for the oracle.
    pub fn to_product(&self, name: &str) -> Result<Product, ModelError> {
        Product::new(alloc::vec![self.to_lts(name)?], 0, self.is_weighted())
    }
}

fn classes(prefix: &Prefix, net: &InterfaceNet) -> (Vec<Vec<CondId>>, HashMap<CondId, usize>) {
    let mut index: HashMap<CondId, usize> = HashMap::new();
    let mut rep_index: HashMap<CondId, usize> = HashMap::new();
    let mut classes: Vec<Vec<CondId>> = Vec::new();
    for &b in &net.conditions {
        let r = prefix.class_of(b);
        let k = *rep_index.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(b);
        index.insert(b, k);
    }
    (classes, index)
}

fn alphabet(product: &Product) -> Vec<String> {
    product.interface_lts().actions().to_vec()
}

fn local_action(product: &Product, prefix: &Prefix, e: EventId) -> usize {
    let i = product.interface();
    let t = prefix.event(e).gt.part(i).expect("interface event");
    product.local(i, t).action
}

/// Quotient of the interface net by the cut-off equivalence.
pub fn fold(product: &Product, prefix: &Prefix, net: &InterfaceNet) -> Summary {
    let (classes, index) = classes(prefix, net);
    let set: BTreeSet<(usize, usize, usize)> =
        net.events.iter().map(|&(e, b, b2)| (index[&b], local_action(product, prefix, e), index[&b2])).collect();
    let transitions =
        set.into_iter().map(|(src, action, dst)| SummaryTransition { src, action, dst, weight: None }).collect();
    Summary { alphabet: alphabet(product), classes, transitions, divergent: None }
}

/// Folding with interface costs `c([e]) - c([e'])`, `e'` the producer of the
/// interface input of `e`. Parallel transitions keep their minimum weight.
pub fn weighted_fold(product: &Product, prefix: &Prefix, net: &InterfaceNet) -> Result<Summary, SummaryError> {
    let (classes, index) = classes(prefix, net);
    let mut best: BTreeMap<(usize, usize, usize), Weight> = BTreeMap::new();
    for &(e, b, b2) in &net.events {
        let base = match prefix.condition(b).producer {
            Some(p) => prefix.event(p).cost,
            None => Weight::ZERO,
        };
        let w = prefix.event(e).cost - base;
        if w.is_negative() {
            return Err(SummaryError::NegativeEventCost(e));
        }
        let key = (index[&b], local_action(product, prefix, e), index[&b2]);
        best.entry(key).and_modify(|x| *x = (*x).min(w)).or_insert(w);
    }
    let transitions = best
        .into_iter()
        .map(|((src, action, dst), w)| SummaryTransition { src, action, dst, weight: Some(w) })
        .collect();
    Ok(Summary { alphabet: alphabet(product), classes, transitions, divergent: None })
}

/// Interface conditions concurrent with a surviving candidate and, for one
/// of its blockers, either concurrent with it or equal to its i-predecessor.
/// The second case only adds conditions when the blocker is itself an
/// interface event, which cannot be concurrent with any interface condition.
pub fn divergent_conditions(prefix: &Prefix, net: &InterfaceNet) -> Result<BTreeSet<CondId>, SummaryError> {
    if prefix.strategy() != Strategy::Full {
        return Err(SummaryError::StrategyMismatch(prefix.strategy().name()));
    }
    let mut dc = BTreeSet::new();
    for e in prefix.final_candidates() {
        let EventStatus::Candidate { blocks } = &prefix.event(e).status else { continue };
        for &s in &net.conditions {
            if dc.contains(&s) || !prefix.condition_event_concurrent(s, e) {
                continue;
            }
            if blocks.iter().any(|&b| prefix.event(b).ip == s || prefix.condition_event_concurrent(s, b)) {
                dc.insert(s);
            }
        }
    }
    Ok(dc)
}

/// Summary states containing a divergent condition.
pub fn divergent_classes(
    prefix: &Prefix,
    summary: &Summary,
    net: &InterfaceNet,
) -> Result<BTreeSet<usize>, SummaryError> {
    let dc = divergent_conditions(prefix, net)?;
    Ok(dc.into_iter().filter_map(|b| summary.state_of(b)).collect())
}
