//! Random fuzzing and benchmark tables. Cases run in parallel; results come
//! back in input order.

use std::fmt::Write as _;
use std::time::Instant;

use netsum_core::benchgen::{generate, BenchError, Family};
use netsum_core::model::{LocalTransition, Lts, Product};
use rayon::prelude::*;

use crate::pipeline::{self, Check, Options, PipelineError};
use crate::random::{random_product, RandomSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Human-readable reason.
    Fail(String),
    Error(PipelineError),
}

pub struct FuzzCase {
    pub seed: u64,
    pub product: Product,
    pub outcome: Outcome,
}

/// Verifies `product` and condenses the report to a single outcome.
pub fn check_product(product: &Product, opts: &Options) -> Outcome {
    match pipeline::verify(product, opts) {
        Err(e) => Outcome::Error(e),
        Ok(r) if r.passed() => Outcome::Pass,
        Ok(r) => {
            let mut why = Vec::new();
            if let Check::Fail(w) = &r.equivalence {
                why.push(format!("trace mismatch on [{}]", w.join(" ")));
            }
            if let Some(Check::Fail(w)) = &r.divergence {
                why.push(format!("divergence mismatch on [{}]", w.join(" ")));
            }
            if let Some(Err(m)) = &r.weights {
                why.push(format!("weight mismatch on [{}]: {:?} vs {:?}", m.word.join(" "), m.summary, m.system));
            }
            Outcome::Fail(why.join("; "))
        }
    }
}

/// Case `k` uses the generator seed `seed + k`.
pub fn fuzz(seed: u64, count: u64, spec: &RandomSpec, opts: &Options) -> Vec<FuzzCase> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let s = seed.wrapping_add(k);
            let product = random_product(s, spec);
            let outcome = check_product(&product, opts);
            FuzzCase { seed: s, product, outcome }
        })
        .collect()
}

fn rebuild(lts: &Lts, actions: Vec<String>, transitions: Vec<LocalTransition>) -> Option<Lts> {
    Lts::new(lts.name(), lts.states().to_vec(), actions, transitions, lts.initial()).ok()
}

/// Single-step reductions of `p`: drop a non-interface component, a
/// transition, an unused action or an unused state.
fn reductions(p: &Product) -> Vec<Product> {
    let mut out = Vec::new();
    let comps = p.components();
    let with = |j: usize, lts: Lts| {
        let mut c = comps.to_vec();
        c[j] = lts;
        Product::new(c, p.interface(), p.is_weighted()).ok()
    };
    for j in 0..comps.len() {
        if j == p.interface() {
            continue;
        }
        let mut c = comps.to_vec();
        c.remove(j);
        let iface = p.interface() - usize::from(j < p.interface());
        out.extend(Product::new(c, iface, p.is_weighted()));
    }
    for (j, lts) in comps.iter().enumerate() {
        for k in 0..lts.transitions().len() {
            let mut ts = lts.transitions().to_vec();
            ts.remove(k);
            out.extend(rebuild(lts, lts.actions().to_vec(), ts).and_then(|l| with(j, l)));
        }
        for a in 0..lts.actions().len() {
            if lts.transitions().iter().any(|t| t.action == a) {
                continue;
            }
            let mut actions = lts.actions().to_vec();
            actions.remove(a);
            let ts = lts
                .transitions()
                .iter()
                .map(|t| LocalTransition { action: t.action - usize::from(t.action > a), ..t.clone() })
                .collect();
            out.extend(rebuild(lts, actions, ts).and_then(|l| with(j, l)));
        }
        for s in 0..lts.num_states() as u32 {
            if s == lts.initial() || lts.transitions().iter().any(|t| t.src == s || t.dst == s) {
                continue;
            }
            let mut states = lts.states().to_vec();
            states.remove(s as usize);
            let shift = |x: u32| x - u32::from(x > s);
            let ts = lts
                .transitions()
                .iter()
                .map(|t| LocalTransition { src: shift(t.src), dst: shift(t.dst), ..t.clone() })
                .collect();
            let init = shift(lts.initial());
            out.extend(Lts::new(lts.name(), states, lts.actions().to_vec(), ts, init).ok().and_then(|l| with(j, l)));
        }
    }
    out
}

/// Greedy reduction of a failing input: applies single-step reductions for
/// as long as `still_fails` keeps holding.
pub fn shrink(product: &Product, mut still_fails: impl FnMut(&Product) -> bool) -> Product {
    let mut current = product.clone();
    'outer: loop {
        for candidate in reductions(&current) {
            if still_fails(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchData {
    pub time_s: f64,
    pub events: usize,
    pub summary_states: usize,
    pub minimized_states: usize,
    pub markings: Option<usize>,
}

pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub result: Result<BenchData, String>,
}

/// One row per `(family, n)`. Markings are computed when `opts.oracle`
/// is set; failures are recorded in the row.
pub fn bench(cases: &[(Family, usize)], opts: &Options) -> Vec<BenchRow> {
    let opts = Options { minimize: true, ..opts.clone() };
    cases
        .iter()
        .map(|&(family, n)| {
            let result = generate(family, n).map_err(|e: BenchError| e.to_string()).and_then(|product| {
                let start = Instant::now();
                let run = pipeline::summarize(&product, &opts).map_err(|e| e.to_string())?;
                Ok(BenchData {
                    time_s: start.elapsed().as_secs_f64(),
                    events: run.stats.events,
                    summary_states: run.stats.summary_states,
                    minimized_states: run.stats.minimized_states.unwrap_or_default(),
                    markings: run.stats.oracle_markings,
                })
            });
            BenchRow { family, n, result }
        })
        .collect()
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out =
        format!("{:<14} {:>8} {:>9} {:>6} {:>5} {:>9}\n", "Model", "Time/s", "Events", "|Si|", "Min.", "Markings");
    for r in rows {
        let model = format!("{}({})", r.family, r.n);
        match &r.result {
            Ok(d) => {
                let markings = d.markings.map_or_else(|| "-".to_string(), |m| m.to_string());
                let _ = writeln!(
                    out,
                    "{model:<14} {:>8.2} {:>9} {:>6} {:>5} {markings:>9}",
                    d.time_s, d.events, d.summary_states, d.minimized_states
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{model:<14} failed: {e}");
            }
        }
    }
    out
}
