//! Seeded random systems for differential testing.
//!
//! Every profile stays within at most 4 components with at most 5 states
//! each, at most 6 actions overall, and at most 2 actions shared by any pair
//! of components. Component 0 is the interface.

use netsum_core::model::{Lts, LtsBuilder, Product, Weight};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    /// Inclusive ranges.
    pub components: (usize, usize),
    pub states: (usize, usize),
    pub actions: (usize, usize),
    /// Relative odds of an action having 0, 1 or 2 partners besides its
    /// owner.
    pub partner_odds: [u32; 3],
    pub max_shared_per_pair: usize,
    /// Random transitions per (component, action).
    pub transitions_per_action: (usize, usize),
    pub self_loop_prob: f64,
    /// Probability that an action's owner is the interface.
    pub interface_bias: f64,
    /// Start every component with a cycle through all of its states.
    pub cyclic: bool,
    pub weighted: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            components: (1, 4),
            states: (1, 5),
            actions: (1, 6),
            partner_odds: [5, 4, 1],
            max_shared_per_pair: 2,
            transitions_per_action: (0, 2),
            self_loop_prob: 0.0,
            interface_bias: 0.0,
            cyclic: false,
            weighted: false,
        }
    }
}

impl RandomSpec {
    pub fn weighted() -> Self {
        RandomSpec { weighted: true, ..Default::default() }
    }

    /// Four small cyclic components with many synchronisations. Systems
    /// where an interface event runs concurrently with a silent loop are
    /// far more frequent here than under the default profile.
    pub fn concurrent() -> Self {
        RandomSpec {
            components: (4, 4),
            states: (1, 3),
            actions: (4, 6),
            partner_odds: [0, 2, 3],
            transitions_per_action: (1, 2),
            self_loop_prob: 0.2,
            interface_bias: 0.2,
            cyclic: true,
            ..Default::default()
        }
    }
}

const ACTIONS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// A rational in `[0, 10]` with denominator 1, 2, 3 or 4.
fn random_weight(rng: &mut ChaCha8Rng) -> Weight {
    let den = rng.random_range(1..=4i64);
    Weight::new(rng.random_range(0..=10 * den), den)
}

pub fn random_product(seed: u64, spec: &RandomSpec) -> Product {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(spec.components.0.max(1)..=spec.components.1.clamp(1, 4));
    let num_actions = rng.random_range(spec.actions.0.max(1)..=spec.actions.1.clamp(1, ACTIONS.len()));

    let mut shared = vec![vec![0usize; n]; n];
    let mut participants: Vec<Vec<usize>> = Vec::with_capacity(num_actions);
    let total: u32 = spec.partner_odds.iter().sum::<u32>().max(1);
    for _ in 0..num_actions {
        let owner = if rng.random_bool(spec.interface_bias) { 0 } else { rng.random_range(0..n) };
        let mut parts = vec![owner];
        let r = rng.random_range(0..total);
        let extra = if r < spec.partner_odds[0] {
            0
        } else if r < spec.partner_odds[0] + spec.partner_odds[1] {
            1
        } else {
            2
        };
        for _ in 0..extra {
            let others: Vec<usize> = (0..n).filter(|j| !parts.contains(j)).collect();
            let Some(&j) = others.choose(&mut rng) else { break };
            if parts.iter().all(|&p| shared[p][j] < spec.max_shared_per_pair) {
                for &p in &parts {
                    shared[p][j] += 1;
                    shared[j][p] += 1;
                }
                parts.push(j);
            }
        }
        participants.push(parts);
    }

    let components: Vec<Lts> = (0..n)
        .map(|j| {
            let states = rng.random_range(spec.states.0.max(1)..=spec.states.1.clamp(1, 5));
            let name = |k: usize| format!("s{k}");
            let mut b = LtsBuilder::new(format!("P{j}"));
            for k in 0..states {
                b = b.state(&name(k));
            }
            let mine: Vec<usize> = (0..num_actions).filter(|&a| participants[a].contains(&j)).collect();
            // (action, src, dst) already present
            let mut used: Vec<(usize, usize, usize)> = Vec::new();
            let weight = |rng: &mut ChaCha8Rng| if spec.weighted { random_weight(rng) } else { Weight::ZERO };
            if spec.cyclic && !mine.is_empty() {
                for k in 0..states {
                    let a = *mine.choose(&mut rng).expect("non-empty");
                    let t = (k + 1) % states;
                    used.push((a, k, t));
                    let w = weight(&mut rng);
                    b = b.weighted_transition(&name(k), ACTIONS[a], &name(t), w);
                }
            }
            for &a in &mine {
                if spec.cyclic && used.iter().any(|u| u.0 == a) && rng.random_bool(0.5) {
                    continue;
                }
                let (lo, hi) = spec.transitions_per_action;
                let count = rng.random_range(lo..=hi.max(lo));
                for _ in 0..count {
                    let src = rng.random_range(0..states);
                    let dst = if rng.random_bool(spec.self_loop_prob) { src } else { rng.random_range(0..states) };
                    if used.contains(&(a, src, dst)) {
                        continue;
                    }
                    used.push((a, src, dst));
                    let w = weight(&mut rng);
                    b = b.weighted_transition(&name(src), ACTIONS[a], &name(dst), w);
                }
                if !used.iter().any(|u| u.0 == a) {
                    b = b.action(ACTIONS[a]);
                }
            }
            b.build().expect("generated components are well-formed")
        })
        .collect();
    Product::new(components, 0, spec.weighted).expect("generated products are well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_product() {
        let spec = RandomSpec::weighted();
        assert_eq!(random_product(7, &spec), random_product(7, &spec));
    }

    fn check_bounds(spec: &RandomSpec) {
        for seed in 0..300 {
            let p = random_product(seed, spec);
            assert!(p.num_components() <= 4);
            assert!(p.num_actions() <= 6);
            assert!(p.components().iter().all(|c| c.num_states() <= 5));
            for x in 0..p.num_components() {
                for y in x + 1..p.num_components() {
                    let both = p.alphabet(x).iter().filter(|a| p.alphabet(y).contains(a)).count();
                    assert!(both <= 2, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn bounds_hold() {
        check_bounds(&RandomSpec::default());
        check_bounds(&RandomSpec::weighted());
        check_bounds(&RandomSpec::concurrent());
    }

    #[test]
    fn weights_are_small_rationals() {
        let p = random_product(3, &RandomSpec::weighted());
        for c in p.components() {
            for t in c.transitions() {
                assert!(!t.weight.is_negative() && t.weight <= Weight::integer(10));
                assert!([1, 2, 3, 4].iter().any(|d| d % t.weight.denom() == 0));
            }
        }
    }
}
