//! Silent cycles and min-plus trace weights.

use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use hashbrown::HashSet;

use super::Nfa;
use crate::model::Weight;

/// States from which an infinite silent path starts: those reaching a
/// silent cycle through silent moves.
pub fn divergent_states(nfa: &Nfa) -> Vec<bool> {
    let n = nfa.num_states();
    let comp = silent_sccs(nfa);
    let mut size = vec![0usize; n];
    for &c in &comp {
        size[c as usize] += 1;
    }
    let mut div = vec![false; n];
    for s in 0..n {
        let cyclic = size[comp[s] as usize] > 1 || nfa.eps[s].iter().any(|&(t, _)| t as usize == s);
        div[s] = cyclic;
    }
    // backward closure along silent moves
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    for s in 0..n {
        for &(t, _) in &nfa.eps[s] {
            rev[t as usize].push(s as u32);
        }
    }
    let mut stack: Vec<u32> = (0..n as u32).filter(|&s| div[s as usize]).collect();
    while let Some(t) = stack.pop() {
        for &s in &rev[t as usize] {
            if !div[s as usize] {
                div[s as usize] = true;
                stack.push(s);
            }
        }
    }
    div
}

/// Iterative Tarjan over silent edges; returns a component id per state.
fn silent_sccs(nfa: &Nfa) -> Vec<u32> {
    let n = nfa.num_states();
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (state, next edge position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < nfa.eps[v].len() {
                let w = nfa.eps[v][*pos].0 as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap() as usize;
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Least-weight silent extension of a cost vector (multi-source Dijkstra;
/// weights are nonnegative, so this is exact).
pub fn silent_closure(nfa: &Nfa, v: &mut [Option<Weight>]) {
    let mut heap: BinaryHeap<Reverse<(Weight, u32)>> =
        v.iter().enumerate().filter_map(|(s, w)| w.map(|w| Reverse((w, s as u32)))).collect();
    while let Some(Reverse((w, s))) = heap.pop() {
        if v[s as usize] != Some(w) {
            continue;
        }
        for &(t, c) in &nfa.eps[s as usize] {
            let nw = w + c;
            if v[t as usize].is_none_or(|old| nw < old) {
                v[t as usize] = Some(nw);
                heap.push(Reverse((nw, t)));
            }
        }
    }
}

fn initial_vector(nfa: &Nfa) -> Vec<Option<Weight>> {
    let mut v = vec![None; nfa.num_states()];
    v[nfa.initial as usize] = Some(Weight::ZERO);
    silent_closure(nfa, &mut v);
    v
}

fn step_vector(nfa: &Nfa, v: &[Option<Weight>], letter: u32) -> Vec<Option<Weight>> {
    let mut next: Vec<Option<Weight>> = vec![None; v.len()];
    for (s, w) in v.iter().enumerate() {
        let Some(w) = *w else { continue };
        for &(l, t, c) in &nfa.moves[s] {
            if l == letter {
                let nw = w + c;
                if next[t as usize].is_none_or(|old| nw < old) {
                    next[t as usize] = Some(nw);
                }
            }
        }
    }
    silent_closure(nfa, &mut next);
    next
}

/// Minimal realisation weight of every trace of length at most `max_len`.
pub fn min_weight_per_trace(nfa: &Nfa, max_len: usize) -> BTreeMap<Vec<u32>, Weight> {
    let mut out = BTreeMap::new();
    let mut word = Vec::new();
    walk(nfa, &initial_vector(nfa), max_len, &mut word, &mut out);
    out
}

fn walk(nfa: &Nfa, v: &[Option<Weight>], left: usize, word: &mut Vec<u32>, out: &mut BTreeMap<Vec<u32>, Weight>) {
    let Some(m) = v.iter().flatten().min() else { return };
    out.insert(word.clone(), *m);
    if left == 0 {
        return;
    }
    for l in 0..nfa.alphabet.len() as u32 {
        let next = step_vector(nfa, v, l);
        word.push(l);
        walk(nfa, &next, left - 1, word, out);
        word.pop();
    }
}

/// States reached by some realisation of `word` (silent moves anywhere), or
/// `None` if `word` is not a trace.
pub fn reach_sets(nfa: &Nfa, word: &[u32]) -> Option<Vec<u32>> {
    let mut set = nfa.eps_closure(&[nfa.initial]);
    for &l in word {
        set = nfa.step(&set, l);
        if set.is_empty() {
            return None;
        }
    }
    Some(set)
}

/// Finds a word of length at most `max_len`, trace of both automata, that
/// reaches a marked state in one but not in the other.
pub fn compare_divergence(
    a: &Nfa,
    a_marked: &[bool],
    b: &Nfa,
    b_marked: &[bool],
    max_len: usize,
) -> Result<(), Vec<u32>> {
    assert_eq!(a.alphabet, b.alphabet, "comparison needs equal alphabets");
    let start = (a.eps_closure(&[a.initial]), b.eps_closure(&[b.initial]));
    let mut seen: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some(((sa, sb), word)) = queue.pop_front() {
        if sa.is_empty() || sb.is_empty() {
            continue;
        }
        let da = sa.iter().any(|&s| a_marked[s as usize]);
        let db = sb.iter().any(|&s| b_marked[s as usize]);
        if da != db {
            return Err(word);
        }
        if word.len() == max_len {
            continue;
        }
        for l in 0..a.alphabet.len() as u32 {
            let next = (a.step(&sa, l), b.step(&sb, l));
            if seen.insert(next.clone()) {
                let mut w = word.clone();
                w.push(l);
                queue.push_back((next, w));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMismatch {
    pub word: Vec<u32>,
    pub left: Option<Weight>,
    pub right: Option<Weight>,
}

type Sparse = Vec<(u32, Weight)>;

fn normalise(v: &[Option<Weight>], m: Weight) -> Sparse {
    v.iter().enumerate().filter_map(|(s, w)| w.map(|w| (s as u32, w - m))).collect()
}

/// Finds a word of length at most `max_len` whose minimal weight (or
/// membership) differs between the two automata. Vector pairs are compared
/// up to a common offset, so the search is breadth-first over distinct
/// normalised pairs.
pub fn compare_min_weights(a: &Nfa, b: &Nfa, max_len: usize) -> Result<(), WeightMismatch> {
    assert_eq!(a.alphabet, b.alphabet, "comparison needs equal alphabets");
    let mut seen: HashSet<(Sparse, Sparse)> = HashSet::new();
    let mut queue = VecDeque::from([(initial_vector(a), initial_vector(b), Vec::new())]);
    while let Some((va, vb, word)) = queue.pop_front() {
        let ma = va.iter().flatten().min().copied();
        let mb = vb.iter().flatten().min().copied();
        if ma != mb {
            return Err(WeightMismatch { word, left: ma, right: mb });
        }
        let Some(m) = ma else { continue };
        if !seen.insert((normalise(&va, m), normalise(&vb, m))) || word.len() == max_len {
            continue;
        }
        for l in 0..a.alphabet.len() as u32 {
            let mut w = word.clone();
            w.push(l);
            queue.push_back((step_vector(a, &va, l), step_vector(b, &vb, l), w));
        }
    }
    Ok(())
}
