//! Prefix construction with cut-offs, cut-off candidates and freeing.
//!
//! Extensions are inserted by increasing local-configuration size, ties
//! broken by action name, local transitions and input condition ids. That key
//! is unique per extension, so the order is total and independent of the
//! order in which extensions are discovered.

mod prefix;
mod relations;

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use fixedbitset::FixedBitSet;
use hashbrown::{HashMap, HashSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dsu::Dsu;
use crate::model::{ActionId, Product, StateId, Weight};

pub use prefix::{CondId, Condition, Event, EventId, EventStatus, Liveness, Prefix, Strategy};
pub use relations::CutInfo;

/// Wall-clock budget supplied by the caller (the core crate has no clock).
pub trait Deadline {
    fn expired(&self) -> bool;
}

pub struct NoDeadline;

impl Deadline for NoDeadline {
    fn expired(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_events: usize,
    /// Budget for the per-condition concurrency sets, which grow
    /// quadratically with the number of conditions.
    pub max_co_bytes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_events: 1_000_000, max_co_bytes: 1 << 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnfoldConfig {
    pub strategy: Strategy,
    pub limits: Limits,
    /// Shuffles discovery order and the last key field; results must not
    /// depend on it.
    pub tiebreak_seed: u64,
}

impl Default for UnfoldConfig {
    fn default() -> Self {
        UnfoldConfig { strategy: Strategy::Full, limits: Limits::default(), tiebreak_seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error("event limit of {limit} exceeded")]
    EventLimit { limit: usize },
    #[error("time limit exceeded after {events} events")]
    TimeLimit { events: usize },
    #[error("memory limit of {limit} bytes for concurrency sets exceeded after {events} events")]
    MemoryLimit { limit: usize, events: usize },
    #[error("internal consistency violation: {0}")]
    Internal(&'static str),
}

/// `(parts, inputs)`, which identifies an extension.
pub type ExtensionKey = (Vec<(u32, u32)>, Vec<CondId>);

/// A possible extension awaiting insertion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub past_size: u32,
    pub action: ActionId,
    /// `(component, local transition)`, component order.
    pub parts: Vec<(u32, u32)>,
    /// One condition per part, same order.
    pub inputs: Vec<CondId>,
    pub tiebreak: u64,
}

pub fn unfold(product: &Product, strategy: Strategy, limits: Limits) -> Result<Prefix, UnfoldError> {
    unfold_with(product, &UnfoldConfig { strategy, limits, tiebreak_seed: 0 }, &NoDeadline)
}

pub fn unfold_with<D: Deadline + ?Sized>(
    product: &Product,
    config: &UnfoldConfig,
    deadline: &D,
) -> Result<Prefix, UnfoldError> {
    let mut b = Builder::new(product, config);
    let initial: Vec<CondId> = b.prefix.initial_conditions().collect();
    for c in initial {
        let exts = b.possible_extensions(c);
        b.enqueue(exts);
    }
    while let Some(Reverse(ext)) = b.pending.pop() {
        b.add_event(ext)?;
        if b.prefix.events.len() > config.limits.max_events {
            return Err(UnfoldError::EventLimit { limit: config.limits.max_events });
        }
        if b.co_bytes > config.limits.max_co_bytes {
            return Err(UnfoldError::MemoryLimit { limit: config.limits.max_co_bytes, events: b.prefix.events.len() });
        }
        if deadline.expired() {
            return Err(UnfoldError::TimeLimit { events: b.prefix.events.len() });
        }
    }
    Ok(b.prefix)
}

/// Prefix with the initial conditions only.
pub fn initial_prefix(product: &Product, strategy: Strategy) -> Prefix {
    let n = product.num_components();
    let mut conditions = Vec::with_capacity(n);
    for (j, c) in product.components().iter().enumerate() {
        let mut co = FixedBitSet::with_capacity(n);
        co.insert_range(..);
        co.remove(j);
        conditions.push(Condition {
            component: j as u32,
            state: c.initial(),
            producer: None,
            co,
            live: Liveness::Live,
            consumers: Vec::new(),
        });
    }
    Prefix {
        n_components: n,
        interface: product.interface(),
        strategy,
        conditions,
        events: Vec::new(),
        freed: 0,
        equiv: Dsu::new(n),
    }
}

/// Every extension using the live condition `c` together with other live,
/// pairwise concurrent conditions, skipping those in `known`.
pub fn possible_extensions(
    product: &Product,
    prefix: &Prefix,
    c: CondId,
    known: &HashSet<ExtensionKey>,
) -> Vec<Extension> {
    let cond = prefix.condition(c);
    let j = cond.component as usize;
    let mut out = Vec::new();
    if cond.live != Liveness::Live {
        return out;
    }
    // live partners of c, per component
    let mut partners: HashMap<u32, Vec<CondId>> = HashMap::new();
    for x in cond.co.ones() {
        let xc = prefix.condition(x as CondId);
        if xc.live == Liveness::Live {
            partners.entry(xc.component).or_default().push(x as CondId);
        }
    }
    let moves = product.outgoing(j, cond.state);
    let mut k = 0;
    while k < moves.len() {
        let a = moves[k].0;
        let mut end = k;
        while end < moves.len() && moves[end].0 == a {
            end += 1;
        }
        let own: Vec<u32> = moves[k..end].iter().map(|m| m.1).collect();
        k = end;
        let parts = product.participants(a);
        // per participant: (condition, local transition) options
        let mut options: Vec<Vec<(CondId, u32)>> = Vec::with_capacity(parts.len());
        let mut feasible = true;
        for &p in parts {
            let opts: Vec<(CondId, u32)> = if p as usize == j {
                own.iter().map(|&t| (c, t)).collect()
            } else {
                let mut v = Vec::new();
                if let Some(list) = partners.get(&p) {
                    for &x in list {
                        for m in product.local_moves(p as usize, prefix.condition(x).state, a) {
                            v.push((x, m.1));
                        }
                    }
                }
                v
            };
            if opts.is_empty() {
                feasible = false;
                break;
            }
            options.push(opts);
        }
        if !feasible {
            continue;
        }
        let mut chosen: Vec<(CondId, u32)> = Vec::with_capacity(parts.len());
        extend_choices(prefix, parts, &options, &mut chosen, &mut |chosen| {
            let parts_v: Vec<(u32, u32)> = parts.iter().zip(chosen).map(|(&p, &(_, t))| (p, t)).collect();
            let inputs: Vec<CondId> = chosen.iter().map(|&(x, _)| x).collect();
            if known.contains(&(parts_v.clone(), inputs.clone())) {
                return;
            }
            let past_size = prefix.past_of_inputs(&inputs).len() as u32 + 1;
            out.push(Extension { past_size, action: a, parts: parts_v, inputs, tiebreak: 0 });
        });
    }
    out
}

type Emit<'a> = dyn FnMut(&[(CondId, u32)]) + 'a;

fn extend_choices(
    prefix: &Prefix,
    parts: &[u32],
    options: &[Vec<(CondId, u32)>],
    chosen: &mut Vec<(CondId, u32)>,
    emit: &mut Emit<'_>,
) {
    let depth = chosen.len();
    if depth == parts.len() {
        emit(chosen);
        return;
    }
    for &(x, t) in &options[depth] {
        // options of different slots belong to different components
        if chosen.iter().all(|&(y, _)| prefix.conditions_concurrent(x, y)) {
            chosen.push((x, t));
            extend_choices(prefix, parts, options, chosen, emit);
            chosen.pop();
        }
    }
}

struct Builder<'p> {
    product: &'p Product,
    strategy: Strategy,
    prefix: Prefix,
    pending: BinaryHeap<Reverse<Extension>>,
    known: HashSet<ExtensionKey>,
    /// First non-cut-off interface event per global state.
    first_by_state: HashMap<Vec<StateId>, EventId>,
    candidates: Vec<EventId>,
    rng: ChaCha8Rng,
    /// Approximate heap size of all `co` sets.
    co_bytes: usize,
}

impl<'p> Builder<'p> {
    fn new(product: &'p Product, config: &UnfoldConfig) -> Self {
        Builder {
            product,
            strategy: config.strategy,
            prefix: initial_prefix(product, config.strategy),
            pending: BinaryHeap::new(),
            known: HashSet::new(),
            first_by_state: HashMap::new(),
            candidates: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(config.tiebreak_seed),
            co_bytes: 0,
        }
    }

    fn possible_extensions(&self, c: CondId) -> Vec<Extension> {
        possible_extensions(self.product, &self.prefix, c, &self.known)
    }

    fn enqueue(&mut self, mut exts: Vec<Extension>) {
        exts.shuffle(&mut self.rng);
        for mut ext in exts {
            if self.known.insert((ext.parts.clone(), ext.inputs.clone())) {
                ext.tiebreak = rand::Rng::random(&mut self.rng);
                self.pending.push(Reverse(ext));
            }
        }
    }

    fn add_event(&mut self, ext: Extension) -> Result<EventId, UnfoldError> {
        let product = self.product;
        let id = self.prefix.events.len() as EventId;
        if ext.inputs.iter().any(|&b| self.prefix.condition(b).live != Liveness::Live) {
            return Err(UnfoldError::Internal("extension with a non-live input"));
        }
        let gt = product.make_global(ext.action, ext.parts.clone());
        let is_interface = gt.participates(product.interface());

        // concurrency of the new outputs: common partners of all inputs
        let mut common = self.prefix.condition(ext.inputs[0]).co.clone();
        for &b in &ext.inputs[1..] {
            common.intersect_with(&self.prefix.condition(b).co);
        }
        let first_out = self.prefix.conditions.len() as CondId;
        let outputs: Vec<CondId> = (0..ext.parts.len() as CondId).map(|k| first_out + k).collect();
        let total = first_out as usize + outputs.len();
        for (k, &(comp, t)) in ext.parts.iter().enumerate() {
            let mut co = common.clone();
            co.grow(total);
            self.co_bytes += total.div_ceil(8);
            for &o in &outputs {
                if o != outputs[k] {
                    co.insert(o as usize);
                }
            }
            self.prefix.conditions.push(Condition {
                component: comp,
                state: product.local(comp as usize, t).dst,
                producer: Some(id),
                co,
                live: Liveness::Live,
                consumers: Vec::new(),
            });
            self.prefix.equiv.push();
        }
        for x in common.ones() {
            let co = &mut self.prefix.conditions[x].co;
            self.co_bytes += total.saturating_sub(co.len()).div_ceil(8);
            co.grow(total);
            for &o in &outputs {
                co.insert(o as usize);
            }
        }
        for &b in &ext.inputs {
            self.prefix.conditions[b as usize].consumers.push(id);
        }
        self.prefix.events.push(prefix::Event {
            gt,
            inputs: ext.inputs.clone(),
            outputs: outputs.clone(),
            past_size: ext.past_size,
            cut: Vec::new(),
            st: Vec::new(),
            ip: 0,
            is_interface,
            status: EventStatus::Normal,
            cost: Weight::ZERO,
        });

        let info = self.prefix.compute_cut_and_ind(id);
        if info.past.len() as u32 != ext.past_size {
            return Err(UnfoldError::Internal("past size mismatch"));
        }
        let st: Vec<StateId> = info.cut.iter().map(|&b| self.prefix.condition(b).state).collect();
        let cost: Weight = info.past.iter().map(|&x| self.prefix.events[x as usize].gt.weight).sum();
        {
            let ev = &mut self.prefix.events[id as usize];
            ev.ip = info.cut[product.interface()];
            ev.cut = info.cut.clone();
            ev.st = st.clone();
            ev.cost = cost;
        }

        let status = if is_interface {
            match self.first_by_state.get(&st) {
                Some(&companion) => EventStatus::Cutoff { companion },
                None => {
                    self.first_by_state.insert(st, id);
                    EventStatus::Normal
                }
            }
        } else {
            match self.strategy {
                Strategy::Def1 => EventStatus::Normal,
                Strategy::Def2 => match self.prefix.def2_companion(id, &info) {
                    Some(c) => EventStatus::Candidate { blocks: alloc::vec![c] },
                    None => EventStatus::Normal,
                },
                Strategy::Full => {
                    let blocks = self.prefix.candidate_blocks_with(id, id, &info);
                    if blocks.is_empty() {
                        EventStatus::Normal
                    } else {
                        EventStatus::Candidate { blocks }
                    }
                }
            }
        };

        match &status {
            EventStatus::Cutoff { companion } => {
                for &o in &outputs {
                    self.prefix.conditions[o as usize].live = Liveness::Dead;
                }
                let a = self.prefix.events[id as usize].ip as usize;
                let b = self.prefix.events[*companion as usize].ip as usize;
                self.prefix.equiv.union(a, b);
            }
            EventStatus::Candidate { .. } => {
                for &o in &outputs {
                    self.prefix.conditions[o as usize].live = Liveness::Frozen;
                }
                self.candidates.push(id);
            }
            _ => {}
        }
        let normal = status == EventStatus::Normal;
        self.prefix.events[id as usize].status = status;

        if normal {
            for &o in &outputs {
                let exts = self.possible_extensions(o);
                self.enqueue(exts);
            }
            if is_interface && self.strategy == Strategy::Full {
                self.free_candidates(id);
            }
        }
        Ok(id)
    }

    /// Drops blockers that `x` is not concurrent with, for every candidate
    /// that `x` is concurrent with; candidates left without blockers revive.
    fn free_candidates(&mut self, x: EventId) {
        let mut freed = Vec::new();
        for &c in &self.candidates {
            if !self.prefix.event_concurrent(x, c) {
                continue;
            }
            let keep: Vec<bool> = match &self.prefix.events[c as usize].status {
                EventStatus::Candidate { blocks } => {
                    blocks.iter().map(|&b| self.prefix.event_concurrent(x, b)).collect()
                }
                _ => continue,
            };
            if let EventStatus::Candidate { blocks } = &mut self.prefix.events[c as usize].status {
                let mut it = keep.iter();
                blocks.retain(|_| *it.next().unwrap());
                if blocks.is_empty() {
                    freed.push(c);
                }
            }
        }
        if freed.is_empty() {
            return;
        }
        self.candidates.retain(|c| !freed.contains(c));
        for c in freed {
            self.prefix.events[c as usize].status = EventStatus::Freed;
            self.prefix.freed += 1;
            let outputs = self.prefix.events[c as usize].outputs.clone();
            for &o in &outputs {
                self.prefix.conditions[o as usize].live = Liveness::Live;
            }
            for &o in &outputs {
                let exts = self.possible_extensions(o);
                self.enqueue(exts);
            }
        }
    }
}

#[cfg(test)]
mod tests;
