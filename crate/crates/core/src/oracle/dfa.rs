use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use super::Nfa;

/// Complete deterministic automaton; every state except `sink` accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    /// `delta[s][letter]`.
    pub delta: Vec<Vec<u32>>,
    pub initial: u32,
    pub sink: Option<u32>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// States other than the sink.
    pub fn num_live_states(&self) -> usize {
        self.delta.len() - usize::from(self.sink.is_some())
    }

    pub fn accepting(&self, s: u32) -> bool {
        Some(s) != self.sink
    }

    pub fn accepts(&self, word: &[u32]) -> bool {
        let mut s = self.initial;
        for &l in word {
            s = self.delta[s as usize][l as usize];
        }
        self.accepting(s)
    }
}

/// Subset construction over silent closures. All non-empty subsets accept;
/// the empty subset becomes the sink.
pub fn project_determinize(nfa: &Nfa) -> Dfa {
    let k = nfa.alphabet.len();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let start = nfa.eps_closure(&[nfa.initial]);
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut head = 0;
    while head < subsets.len() {
        let mut row = Vec::with_capacity(k);
        for l in 0..k as u32 {
            let next = nfa.step(&subsets[head], l);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len() as u32;
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        head += 1;
    }
    let sink = index.get(&Vec::new()).copied();
    Dfa { alphabet: nfa.alphabet.clone(), delta, initial: 0, sink }
}

/// Hopcroft partition refinement, then renumbering in breadth-first order
/// from the initial state.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let n = dfa.num_states();
    let k = dfa.alphabet.len();
    let mut inv: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; k];
    for (s, row) in dfa.delta.iter().enumerate() {
        for (l, &t) in row.iter().enumerate() {
            inv[l][t as usize].push(s as u32);
        }
    }
    let mut block_of = vec![0u32; n];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let acc: Vec<u32> = (0..n as u32).filter(|&s| dfa.accepting(s)).collect();
    let rej: Vec<u32> = (0..n as u32).filter(|&s| !dfa.accepting(s)).collect();
    for part in [acc, rej] {
        if !part.is_empty() {
            let b = blocks.len() as u32;
            for &s in &part {
                block_of[s as usize] = b;
            }
            blocks.push(part);
        }
    }
    let mut work: VecDeque<(u32, u32)> = VecDeque::new();
    for b in 0..blocks.len() as u32 {
        for l in 0..k as u32 {
            work.push_back((b, l));
        }
    }
    let mut hits = vec![0usize; n];
    while let Some((b, l)) = work.pop_front() {
        let mut pre: Vec<u32> = Vec::new();
        for &t in &blocks[b as usize] {
            pre.extend_from_slice(&inv[l as usize][t as usize]);
        }
        let mut touched: Vec<u32> = Vec::new();
        for &s in &pre {
            let y = block_of[s as usize] as usize;
            if hits[y] == 0 {
                touched.push(y as u32);
            }
            hits[y] += 1;
        }
        let pre_set: HashSet<u32> = pre.iter().copied().collect();
        for y in touched {
            let yi = y as usize;
            let count = hits[yi];
            hits[yi] = 0;
            if count == blocks[yi].len() {
                continue;
            }
            let (inside, outside): (Vec<u32>, Vec<u32>) = blocks[yi].iter().copied().partition(|s| pre_set.contains(s));
            let new_id = blocks.len() as u32;
            let (keep, moved) = if inside.len() <= outside.len() { (outside, inside) } else { (inside, outside) };
            for &s in &moved {
                block_of[s as usize] = new_id;
            }
            blocks[yi] = keep;
            blocks.push(moved);
            // whether or not (y, c) is pending, queueing the smaller half suffices
            for c in 0..k as u32 {
                work.push_back((new_id, c));
            }
        }
    }
    // renumber reachable blocks breadth-first
    let mut order: Vec<u32> = vec![u32::MAX; blocks.len()];
    let mut queue = VecDeque::new();
    let mut reps: Vec<u32> = Vec::new();
    let b0 = block_of[dfa.initial as usize];
    order[b0 as usize] = 0;
    queue.push_back(b0);
    reps.push(blocks[b0 as usize][0]);
    while let Some(b) = queue.pop_front() {
        let rep = blocks[b as usize][0] as usize;
        for l in 0..k {
            let t = block_of[dfa.delta[rep][l] as usize];
            if order[t as usize] == u32::MAX {
                order[t as usize] = reps.len() as u32;
                reps.push(blocks[t as usize][0]);
                queue.push_back(t);
            }
        }
    }
    let delta = reps
        .iter()
        .map(|&r| dfa.delta[r as usize].iter().map(|&t| order[block_of[t as usize] as usize]).collect())
        .collect();
    let sink = dfa.sink.and_then(|s| {
        let o = order[block_of[s as usize] as usize];
        (o != u32::MAX).then_some(o)
    });
    Dfa { alphabet: dfa.alphabet.clone(), delta, initial: 0, sink }
}

/// `Ok` if both automata accept the same words, otherwise a shortest word
/// accepted by exactly one of them. Alphabets must coincide.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Result<(), Vec<u32>> {
    assert_eq!(d1.alphabet, d2.alphabet, "equivalence needs equal alphabets");
    let k = d1.alphabet.len();
    // pair -> (predecessor pair, letter)
    type Parents = HashMap<(u32, u32), Option<((u32, u32), u32)>>;
    let mut parent: Parents = HashMap::new();
    let start = (d1.initial, d2.initial);
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        if d1.accepting(p.0) != d2.accepting(p.1) {
            let mut word = Vec::new();
            let mut cur = p;
            while let Some(&Some((prev, l))) = parent.get(&cur) {
                word.push(l);
                cur = prev;
            }
            word.reverse();
            return Err(word);
        }
        if !d1.accepting(p.0) {
            continue;
        }
        for l in 0..k as u32 {
            let q = (d1.delta[p.0 as usize][l as usize], d2.delta[p.1 as usize][l as usize]);
            if !parent.contains_key(&q) {
                parent.insert(q, Some((p, l)));
                queue.push_back(q);
            }
        }
    }
    Ok(())
}
