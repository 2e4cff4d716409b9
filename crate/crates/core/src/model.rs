//! Components, products and global transitions.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Sub};
use core::str::FromStr;

use hashbrown::HashSet;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Index of a state inside one component.
pub type StateId = u32;

/// Product-wide action identifier. Identifiers follow the lexicographic order
/// of action names, so comparing ids compares names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Exact nonnegative transition cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<i64>);

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Weight {
        Weight(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Weight {
        Weight(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::ZERO
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid weight literal `{0}`")]
pub struct ParseWeightError(pub String);

/// Accepts integers, finite decimals (`2.25`) and fractions (`7/3`), all
/// parsed exactly. A leading `-` is accepted so callers can report negative
/// weights precisely.
impl FromStr for Weight {
    type Err = ParseWeightError;

    fn from_str(s: &str) -> Result<Weight, ParseWeightError> {
        let bad = || ParseWeightError(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let value = if let Some((n, d)) = body.split_once('/') {
            let n: i64 = parse_digits(n).ok_or_else(bad)?;
            let d: i64 = parse_digits(d).ok_or_else(bad)?;
            if d == 0 {
                return Err(bad());
            }
            Ratio::new(n, d)
        } else if let Some((int, frac)) = body.split_once('.') {
            if frac.is_empty() && int.is_empty() {
                return Err(bad());
            }
            let i = if int.is_empty() { 0 } else { parse_digits(int).ok_or_else(bad)? };
            let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            let f = if frac.is_empty() { 0 } else { parse_digits(frac).ok_or_else(bad)? };
            let n = i.checked_mul(scale).and_then(|x| x.checked_add(f)).ok_or_else(bad)?;
            Ratio::new(n, scale)
        } else {
            Ratio::from_integer(parse_digits(body).ok_or_else(bad)?)
        };
        Ok(Weight(if neg { -value } else { value }))
    }
}

fn parse_digits(s: &str) -> Option<i64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("component `{component}`: initial state {initial} out of range")]
    BadInitial { component: String, initial: StateId },
    #[error("component `{component}`: duplicate state `{state}`")]
    DuplicateState { component: String, state: String },
    #[error("component `{component}`: unknown state `{state}`")]
    UnknownState { component: String, state: String },
    #[error("component `{component}`: transition index {index} refers to an invalid state or action")]
    BadTransition { component: String, index: usize },
    #[error("component `{component}`: duplicate transition {src} --{action}--> {dst}")]
    DuplicateTransition { component: String, src: String, action: String, dst: String },
    #[error("component `{component}`: negative weight {weight}")]
    NegativeWeight { component: String, weight: Weight },
    #[error("component `{component}`: alphabet must be sorted and duplicate-free")]
    UnsortedActions { component: String },
    #[error("component `{component}` has no states")]
    NoStates { component: String },
    #[error("product has no components")]
    NoComponents,
    #[error("duplicate component name `{0}`")]
    DuplicateComponent(String),
    #[error("interface index {interface} out of range for {components} components")]
    InterfaceOutOfRange { interface: usize, components: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTransition {
    pub src: StateId,
    /// Index into [`Lts::actions`].
    pub action: usize,
    pub dst: StateId,
    pub weight: Weight,
}

/// One sequential component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    name: String,
    states: Vec<String>,
    actions: Vec<String>,
    transitions: Vec<LocalTransition>,
    initial: StateId,
}

impl Lts {
    /// Validates and builds a component. `actions` must be sorted and free of
    /// duplicates; [`LtsBuilder`] takes care of that.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        actions: Vec<String>,
        transitions: Vec<LocalTransition>,
        initial: StateId,
    ) -> Result<Lts, ModelError> {
        let name = name.into();
        if states.is_empty() {
            return Err(ModelError::NoStates { component: name });
        }
        {
            let mut seen = HashSet::new();
            for s in &states {
                if !seen.insert(s.as_str()) {
                    return Err(ModelError::DuplicateState { component: name, state: s.clone() });
                }
            }
        }
        if initial as usize >= states.len() {
            return Err(ModelError::BadInitial { component: name, initial });
        }
        let mut sorted = actions.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != actions {
            return Err(ModelError::UnsortedActions { component: name });
        }
        let mut triples = HashSet::new();
        for (index, t) in transitions.iter().enumerate() {
            if t.src as usize >= states.len() || t.dst as usize >= states.len() || t.action >= actions.len() {
                return Err(ModelError::BadTransition { component: name, index });
            }
            if t.weight.is_negative() {
                return Err(ModelError::NegativeWeight { component: name, weight: t.weight });
            }
            if !triples.insert((t.src, t.action, t.dst)) {
                return Err(ModelError::DuplicateTransition {
                    src: states[t.src as usize].clone(),
                    action: actions[t.action].clone(),
                    dst: states[t.dst as usize].clone(),
                    component: name,
                });
            }
        }
        Ok(Lts { name, states, actions, transitions, initial })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s as usize]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| i as StateId)
    }

    /// Sorted alphabet.
    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn has_action(&self, a: &str) -> bool {
        self.actions.binary_search_by(|x| x.as_str().cmp(a)).is_ok()
    }

    pub fn transitions(&self) -> &[LocalTransition] {
        &self.transitions
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_weighted(&self) -> bool {
        self.transitions.iter().any(|t| !t.weight.is_zero())
    }

    /// Whether `word` (over this component's alphabet) is a trace.
    pub fn has_trace<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current = vec![false; self.states.len()];
        current[self.initial as usize] = true;
        for a in word {
            let Ok(ai) = self.actions.binary_search_by(|x| x.as_str().cmp(a.as_ref())) else {
                return false;
            };
            let mut next = vec![false; self.states.len()];
            let mut any = false;
            for t in &self.transitions {
                if t.action == ai && current[t.src as usize] {
                    next[t.dst as usize] = true;
                    any = true;
                }
            }
            if !any {
                return false;
            }
            current = next;
        }
        true
    }
}

/// Incremental constructor for [`Lts`]. States are created on first mention;
/// the first state is initial unless [`LtsBuilder::initial`] says otherwise.
#[derive(Clone, Debug, Default)]
pub struct LtsBuilder {
    name: String,
    states: Vec<String>,
    extra_actions: Vec<String>,
    transitions: Vec<(StateId, String, StateId, Weight)>,
    initial: Option<String>,
}

impl LtsBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        LtsBuilder { name: name.into(), ..Default::default() }
    }

    fn intern(&mut self, s: &str) -> StateId {
        match self.states.iter().position(|x| x == s) {
            Some(i) => i as StateId,
            None => {
                self.states.push(s.to_string());
                (self.states.len() - 1) as StateId
            }
        }
    }

    pub fn state(mut self, s: &str) -> Self {
        self.intern(s);
        self
    }

    pub fn initial(mut self, s: &str) -> Self {
        self.intern(s);
        self.initial = Some(s.to_string());
        self
    }

    /// Adds an action to the alphabet without any transition.
    pub fn action(mut self, a: &str) -> Self {
        self.extra_actions.push(a.to_string());
        self
    }

    pub fn transition(self, src: &str, action: &str, dst: &str) -> Self {
        self.weighted_transition(src, action, dst, Weight::ZERO)
    }

    pub fn weighted_transition(mut self, src: &str, action: &str, dst: &str, w: Weight) -> Self {
        let s = self.intern(src);
        let d = self.intern(dst);
        self.transitions.push((s, action.to_string(), d, w));
        self
    }

    pub fn build(self) -> Result<Lts, ModelError> {
        let mut actions: Vec<String> =
            self.transitions.iter().map(|t| t.1.clone()).chain(self.extra_actions.iter().cloned()).collect();
        actions.sort();
        actions.dedup();
        let transitions = self
            .transitions
            .into_iter()
            .map(|(src, a, dst, weight)| LocalTransition {
                src,
                action: actions.binary_search(&a).expect("action collected above"),
                dst,
                weight,
            })
            .collect();
        let initial = match &self.initial {
            Some(s) => self.states.iter().position(|x| x == s).unwrap_or(0) as StateId,
            None => 0,
        };
        Lts::new(self.name, self.states, actions, transitions, initial)
    }
}

/// A synchronised transition of the product. Only participating components
/// appear in `parts`; every other component contributes the idle entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalTransition {
    pub action: ActionId,
    /// `(component, local transition index)`, sorted by component.
    pub parts: Vec<(u32, u32)>,
    pub weight: Weight,
}

impl GlobalTransition {
    /// Local transition of component `j`, or `None` for the idle entry.
    pub fn part(&self, j: usize) -> Option<u32> {
        self.parts.binary_search_by(|p| p.0.cmp(&(j as u32))).ok().map(|i| self.parts[i].1)
    }

    pub fn participates(&self, j: usize) -> bool {
        self.part(j).is_some()
    }
}

/// A finite trace, optionally with its minimal realisation cost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace {
    pub word: Vec<ActionId>,
    pub weight: Option<Weight>,
}

/// Subsequence of `word` keeping exactly the letters accepted by `keep`.
pub fn project_word<T: Clone>(word: &[T], mut keep: impl FnMut(&T) -> bool) -> Vec<T> {
    word.iter().filter(|x| keep(x)).cloned().collect()
}

/// Parallel composition by rendez-vous on shared action names, with one
/// distinguished interface component.
#[derive(Clone, Debug)]
pub struct Product {
    components: Vec<Lts>,
    interface: usize,
    weighted: bool,
    action_names: Vec<String>,
    participants: Vec<Vec<u32>>,
    /// `local_to_global[j][k]` is the id of `components[j].actions()[k]`.
    local_to_global: Vec<Vec<ActionId>>,
    /// `outgoing[j][s]`: `(action, local transition)` pairs sorted by action.
    outgoing: Vec<Vec<Vec<(ActionId, u32)>>>,
}

impl Product {
    /// `interface` is a zero-based component index.
    pub fn new(components: Vec<Lts>, interface: usize, weighted: bool) -> Result<Product, ModelError> {
        if components.is_empty() {
            return Err(ModelError::NoComponents);
        }
        if interface >= components.len() {
            return Err(ModelError::InterfaceOutOfRange { interface, components: components.len() });
        }
        {
            let mut names = HashSet::new();
            for c in &components {
                if !names.insert(c.name()) {
                    return Err(ModelError::DuplicateComponent(c.name().to_string()));
                }
            }
        }
        let mut action_names: Vec<String> = components.iter().flat_map(|c| c.actions().iter().cloned()).collect();
        action_names.sort();
        action_names.dedup();
        let id_of = |a: &str| ActionId(action_names.binary_search_by(|x| x.as_str().cmp(a)).unwrap() as u32);
        let local_to_global: Vec<Vec<ActionId>> =
            components.iter().map(|c| c.actions().iter().map(|a| id_of(a)).collect()).collect();
        let mut participants = vec![Vec::new(); action_names.len()];
        for (j, ids) in local_to_global.iter().enumerate() {
            for a in ids {
                participants[a.index()].push(j as u32);
            }
        }
        let outgoing = components
            .iter()
            .zip(&local_to_global)
            .map(|(c, ids)| {
                let mut out = vec![Vec::new(); c.num_states()];
                for (k, t) in c.transitions().iter().enumerate() {
                    out[t.src as usize].push((ids[t.action], k as u32));
                }
                for o in &mut out {
                    o.sort();
                }
                out
            })
            .collect();
        Ok(Product { components, interface, weighted, action_names, participants, local_to_global, outgoing })
    }

    pub fn components(&self) -> &[Lts] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn interface(&self) -> usize {
        self.interface
    }

    pub fn interface_lts(&self) -> &Lts {
        &self.components[self.interface]
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.index()]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_names.binary_search_by(|x| x.as_str().cmp(name)).ok().map(|i| ActionId(i as u32))
    }

    /// Components taking part in `a`, ascending.
    pub fn participants(&self, a: ActionId) -> &[u32] {
        &self.participants[a.index()]
    }

    pub fn participates(&self, j: usize, a: ActionId) -> bool {
        self.participants[a.index()].binary_search(&(j as u32)).is_ok()
    }

    pub fn is_interface_action(&self, a: ActionId) -> bool {
        self.participates(self.interface, a)
    }

    /// Global ids of component `j`'s alphabet, ascending.
    pub fn alphabet(&self, j: usize) -> &[ActionId] {
        &self.local_to_global[j]
    }

    pub fn interface_alphabet(&self) -> &[ActionId] {
        self.alphabet(self.interface)
    }

    pub fn initial_state(&self) -> Vec<StateId> {
        self.components.iter().map(|c| c.initial()).collect()
    }

    pub fn local(&self, j: usize, t: u32) -> &LocalTransition {
        &self.components[j].transitions()[t as usize]
    }

    /// `(action, local transition)` pairs leaving state `s` of component `j`.
    pub fn outgoing(&self, j: usize, s: StateId) -> &[(ActionId, u32)] {
        &self.outgoing[j][s as usize]
    }

    /// Local transitions of component `j` leaving `s` with label `a`.
    pub fn local_moves(&self, j: usize, s: StateId, a: ActionId) -> &[(ActionId, u32)] {
        let out = self.outgoing(j, s);
        let lo = out.partition_point(|x| x.0 < a);
        let hi = out.partition_point(|x| x.0 <= a);
        &out[lo..hi]
    }

    /// Builds the global transition for an explicit choice of local moves.
    pub fn make_global(&self, action: ActionId, parts: Vec<(u32, u32)>) -> GlobalTransition {
        let weight = parts.iter().map(|&(j, t)| self.local(j as usize, t).weight).sum();
        GlobalTransition { action, parts, weight }
    }

    /// All global transitions enabled at `state`, with their successors.
    pub fn global_successors(&self, state: &[StateId]) -> Vec<(GlobalTransition, Vec<StateId>)> {
        let mut result = Vec::new();
        for a in 0..self.num_actions() {
            let a = ActionId(a as u32);
            let parts = self.participants(a);
            let choices: Vec<&[(ActionId, u32)]> =
                parts.iter().map(|&j| self.local_moves(j as usize, state[j as usize], a)).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; parts.len()];
            'odometer: loop {
                let chosen: Vec<(u32, u32)> =
                    parts.iter().zip(&idx).zip(&choices).map(|((&j, &k), c)| (j, c[k].1)).collect();
                let mut succ = state.to_vec();
                for &(j, t) in &chosen {
                    succ[j as usize] = self.local(j as usize, t).dst;
                }
                result.push((self.make_global(a, chosen), succ));
                let mut pos = parts.len();
                loop {
                    if pos == 0 {
                        break 'odometer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        result
    }

    /// Whether `word` is a trace of the product (explicit simulation).
    pub fn has_trace(&self, word: &[ActionId]) -> bool {
        let mut current: Vec<Vec<StateId>> = vec![self.initial_state()];
        for &a in word {
            let mut next: Vec<Vec<StateId>> = Vec::new();
            for s in &current {
                for (gt, succ) in self.global_successors(s) {
                    if gt.action == a && !next.contains(&succ) {
                        next.push(succ);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        true
    }

    /// Projection of `word` onto component `j`'s alphabet, as names.
    pub fn project_names(&self, word: &[ActionId], j: usize) -> Vec<&str> {
        project_word(word, |a| self.participates(j, *a)).into_iter().map(|a| self.action_name(a)).collect()
    }
}

impl PartialEq for Product {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && self.interface == other.interface && self.weighted == other.weighted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;

    fn loop_a() -> Lts {
        LtsBuilder::new("P").transition("q0", "a", "q0").build().unwrap()
    }

    #[test]
    fn weight_parsing_is_exact() {
        assert_eq!("2.5".parse::<Weight>().unwrap(), Weight::new(5, 2));
        assert_eq!("3".parse::<Weight>().unwrap(), Weight::integer(3));
        assert_eq!("1/3".parse::<Weight>().unwrap(), Weight::new(1, 3));
        assert_eq!("0.10".parse::<Weight>().unwrap(), Weight::new(1, 10));
        assert!("-1".parse::<Weight>().unwrap().is_negative());
        assert!("1/0".parse::<Weight>().is_err());
        assert!("x".parse::<Weight>().is_err());
        assert!(".".parse::<Weight>().is_err());
        assert_eq!(Weight::new(7, 2).to_string(), "7/2");
    }

    #[test]
    fn lts_rejects_duplicates_and_negative_weights() {
        let dup = LtsBuilder::new("P").transition("a", "x", "b").transition("a", "x", "b").build();
        assert!(matches!(dup, Err(ModelError::DuplicateTransition { .. })));
        let neg = LtsBuilder::new("P").weighted_transition("a", "x", "b", Weight::integer(-1)).build();
        assert!(matches!(neg, Err(ModelError::NegativeWeight { .. })));
        // same pair, different labels is fine
        assert!(LtsBuilder::new("P").transition("a", "x", "b").transition("a", "y", "b").build().is_ok());
    }

    #[test]
    fn product_rejects_bad_interface() {
        assert!(matches!(Product::new(vec![loop_a()], 1, false), Err(ModelError::InterfaceOutOfRange { .. })));
        assert!(matches!(Product::new(vec![], 0, false), Err(ModelError::NoComponents)));
    }

    #[test]
    fn independent_loops_give_disjoint_union() {
        let p = LtsBuilder::new("P").transition("p", "a", "p").build().unwrap();
        let q = LtsBuilder::new("Q").transition("q", "b", "q").build().unwrap();
        let prod = Product::new(vec![p, q], 0, false).unwrap();
        let succ = prod.global_successors(&prod.initial_state());
        let labels: BTreeSet<&str> = succ.iter().map(|(g, _)| prod.action_name(g.action)).collect();
        assert_eq!(succ.len(), 2);
        assert_eq!(labels.into_iter().collect::<Vec<_>>(), vec!["a", "b"]);
    }

    #[test]
    fn single_component_single_transition() {
        let p = LtsBuilder::new("P").transition("q0", "a", "q1").build().unwrap();
        let prod = Product::new(vec![p], 0, false).unwrap();
        let succ = prod.global_successors(&[0]);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.parts, vec![(0, 0)]);
        assert_eq!(succ[0].1, vec![1]);
        assert!(prod.global_successors(&[1]).is_empty());
    }

    #[test]
    fn synchronised_weights_add_up() {
        let p = LtsBuilder::new("P").weighted_transition("p", "a", "p2", Weight::new(1, 2)).build().unwrap();
        let q = LtsBuilder::new("Q").weighted_transition("q", "a", "q2", Weight::integer(3)).build().unwrap();
        let prod = Product::new(vec![p, q], 0, true).unwrap();
        let succ = prod.global_successors(&[0, 0]);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.weight, Weight::new(7, 2));
        assert_eq!(succ[0].0.part(1), Some(0));
    }

    #[test]
    fn project_word_filters() {
        let w: Vec<char> = "ifcdab".chars().collect();
        let keep: BTreeSet<char> = ['i', 'a', 'b', 'e'].into_iter().collect();
        let p: alloc::string::String = project_word(&w, |c| keep.contains(c)).into_iter().collect();
        assert_eq!(p, "iab");
        assert!(project_word::<char>(&[], |_| true).is_empty());
        assert_eq!("x".to_string(), "x");
    }
}
