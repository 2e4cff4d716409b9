use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::dsu::Dsu;
use crate::model::{GlobalTransition, StateId, Weight};

pub type CondId = u32;
pub type EventId = u32;

/// Whether a condition may feed new extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Liveness {
    Live,
    /// Output of a cut-off candidate; revived if the candidate is freed.
    Frozen,
    /// Output of a cut-off.
    Dead,
}

#[derive(Clone, Debug)]
pub struct Condition {
    pub component: u32,
    pub state: StateId,
    /// `None` for the initial conditions.
    pub producer: Option<EventId>,
    /// Conditions concurrent with this one (symmetric, irreflexive).
    pub co: FixedBitSet,
    pub live: Liveness,
    /// Events having this condition as input.
    pub consumers: Vec<EventId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventStatus {
    Normal,
    Cutoff {
        companion: EventId,
    },
    /// Frozen by the listed blockers. Under `def2` the list has one entry and
    /// is never revisited.
    Candidate {
        blocks: Vec<EventId>,
    },
    Freed,
}

#[derive(Clone, Debug)]
pub struct Event {
    pub gt: GlobalTransition,
    /// One per participating component, in component order.
    pub inputs: Vec<CondId>,
    pub outputs: Vec<CondId>,
    pub past_size: u32,
    /// `M(e)`, indexed by component.
    pub cut: Vec<CondId>,
    /// State labels of `cut`.
    pub st: Vec<StateId>,
    /// Interface condition of `cut`.
    pub ip: CondId,
    pub is_interface: bool,
    pub status: EventStatus,
    /// Total weight of the local configuration.
    pub cost: Weight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Full,
    Def1,
    Def2,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Full => "full",
            Strategy::Def1 => "def1",
            Strategy::Def2 => "def2",
        }
    }
}

impl core::str::FromStr for Strategy {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "full" => Ok(Strategy::Full),
            "def1" => Ok(Strategy::Def1),
            "def2" => Ok(Strategy::Def2),
            _ => Err(()),
        }
    }
}

/// A branching-process prefix of a product.
#[derive(Clone, Debug)]
pub struct Prefix {
    pub(crate) n_components: usize,
    pub(crate) interface: usize,
    pub(crate) strategy: Strategy,
    pub(crate) conditions: Vec<Condition>,
    pub(crate) events: Vec<Event>,
    pub(crate) freed: usize,
    /// Union-find over condition ids; only interface conditions are merged.
    pub(crate) equiv: Dsu,
}

impl Prefix {
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn num_components(&self) -> usize {
        self.n_components
    }

    pub fn interface(&self) -> usize {
        self.interface
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn condition(&self, b: CondId) -> &Condition {
        &self.conditions[b as usize]
    }

    pub fn event(&self, e: EventId) -> &Event {
        &self.events[e as usize]
    }

    /// Initial conditions, one per component, in component order.
    pub fn initial_conditions(&self) -> core::ops::Range<CondId> {
        0..self.n_components as CondId
    }

    pub fn num_cutoffs(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.status, EventStatus::Cutoff { .. })).count()
    }

    /// Candidates still frozen at the end of the run.
    pub fn final_candidates(&self) -> impl Iterator<Item = EventId> + '_ {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.status, EventStatus::Candidate { .. }))
            .map(|(i, _)| i as EventId)
    }

    pub fn num_freed(&self) -> usize {
        self.freed
    }

    pub fn is_interface_condition(&self, b: CondId) -> bool {
        self.conditions[b as usize].component as usize == self.interface
    }

    /// Representative of `b` in the cut-off equivalence.
    pub fn class_of(&self, b: CondId) -> CondId {
        self.equiv.find_const(b as usize) as CondId
    }

    pub fn conditions_concurrent(&self, a: CondId, b: CondId) -> bool {
        self.conditions[a as usize].co.contains(b as usize)
    }
}
