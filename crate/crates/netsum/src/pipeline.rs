//! Unfold, fold and check against the explicit-state oracle.

use std::time::{Duration, Instant};

use netsum_core::model::Product;
use netsum_core::oracle::{
    compare_divergence, compare_min_weights, divergent_states, equivalent, explore, interface_nfa, minimize,
    project_determinize, Nfa, OracleError, DEFAULT_STATE_BOUND,
};
use netsum_core::summary::{divergent_classes, fold, interface_projection, weighted_fold, Summary, SummaryError};
use netsum_core::unfold::{unfold_with, Deadline, Limits, Prefix, Strategy, UnfoldConfig, UnfoldError};
use netsum_core::Weight;
use thiserror::Error;

use crate::textio::Stats;

/// Wall-clock deadline measured from construction.
pub struct Clock {
    start: Instant,
    limit: Option<Duration>,
}

impl Clock {
    pub fn new(limit: Option<Duration>) -> Self {
        Clock { start: Instant::now(), limit }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

impl Deadline for Clock {
    fn expired(&self) -> bool {
        self.limit.is_some_and(|l| self.start.elapsed() > l)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub strategy: Strategy,
    pub weighted: bool,
    pub divergence: bool,
    pub max_events: usize,
    pub max_seconds: Option<f64>,
    pub tiebreak_seed: u64,
    pub minimize: bool,
    pub oracle: bool,
    pub state_bound: usize,
    /// Word length bound for the divergence and weight checks.
    pub verify_len: usize,
    /// When false, `wall_time_ms` is reported as 0 so statistics are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            strategy: Strategy::Full,
            weighted: false,
            divergence: false,
            max_events: Limits::default().max_events,
            max_seconds: Some(300.0),
            tiebreak_seed: 0,
            minimize: false,
            oracle: false,
            state_bound: DEFAULT_STATE_BOUND,
            verify_len: 8,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid options: {0}")]
    Options(&'static str),
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    Summary(#[from] SummaryError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl PipelineError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Options(_) | PipelineError::Summary(_) => 1,
            PipelineError::Unfold(_) => 2,
            PipelineError::Oracle(_) => 3,
        }
    }
}

pub struct Run {
    pub prefix: Prefix,
    pub summary: Summary,
    pub stats: Stats,
}

fn check(product: &Product, opts: &Options) -> Result<(), PipelineError> {
    if opts.divergence && opts.strategy != Strategy::Full {
        return Err(PipelineError::Options("divergence marking needs strategy full"));
    }
    if opts.weighted && !product.is_weighted() {
        return Err(PipelineError::Options("weighted mode needs `option weighted on` in the input"));
    }
    Ok(())
}

pub fn summarize(product: &Product, opts: &Options) -> Result<Run, PipelineError> {
    check(product, opts)?;
    let clock = Clock::new(opts.max_seconds.map(Duration::from_secs_f64));
    let config = UnfoldConfig {
        strategy: opts.strategy,
        limits: Limits { max_events: opts.max_events, ..Limits::default() },
        tiebreak_seed: opts.tiebreak_seed,
    };
    let prefix = unfold_with(product, &config, &clock)?;
    let net = interface_projection(&prefix);
    let mut summary = if opts.weighted { weighted_fold(product, &prefix, &net)? } else { fold(product, &prefix, &net) };
    if opts.divergence {
        summary.divergent = Some(divergent_classes(&prefix, &summary, &net)?);
    }
    let minimized_states = if opts.minimize {
        let (_, nfa) = summary_nfa(&summary, opts.state_bound)?;
        Some(minimize(&project_determinize(&nfa)).num_live_states())
    } else {
        None
    };
    let oracle_markings = if opts.oracle { Some(explore(product, opts.state_bound)?.num_states()) } else { None };
    let stats = Stats {
        events: prefix.events().len(),
        cutoffs: prefix.num_cutoffs(),
        candidates_final: prefix.final_candidates().count(),
        summary_states: summary.num_states(),
        summary_transitions: summary.transitions.len(),
        minimized_states,
        oracle_markings,
        wall_time_ms: if opts.timing { clock.elapsed().as_millis() as u64 } else { 0 },
    };
    Ok(Run { prefix, summary, stats })
}

/// The summary as an automaton over the interface alphabet, with the
/// summary state behind each automaton state.
fn summary_nfa(summary: &Summary, bound: usize) -> Result<(Vec<usize>, Nfa), OracleError> {
    let product = summary.to_product("summary").expect("summaries are well-formed");
    let (ep, nfa) = interface_nfa(&product, bound)?;
    Ok((ep.states.iter().map(|s| s[0] as usize).collect(), nfa))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    /// A shortest word on which the two sides disagree.
    Fail(Vec<String>),
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFailure {
    pub word: Vec<String>,
    pub summary: Option<Weight>,
    pub system: Option<Weight>,
}

pub struct Report {
    pub run: Run,
    pub oracle_states: usize,
    pub equivalence: Check,
    pub divergence: Option<Check>,
    pub weights: Option<Result<(), WeightFailure>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.equivalence.passed()
            && self.divergence.as_ref().is_none_or(Check::passed)
            && self.weights.as_ref().is_none_or(Result::is_ok)
    }
}

fn names(alphabet: &[String], word: &[u32]) -> Vec<String> {
    word.iter().map(|&l| alphabet[l as usize].clone()).collect()
}

/// Summarizes and compares the summary with the oracle: trace equivalence
/// always, divergence and minimal weights when enabled.
pub fn verify(product: &Product, opts: &Options) -> Result<Report, PipelineError> {
    let run = summarize(product, opts)?;
    let (ep, system) = interface_nfa(product, opts.state_bound)?;
    let (classes, summary) = summary_nfa(&run.summary, opts.state_bound)?;
    debug_assert_eq!(system.alphabet, summary.alphabet);
    let alphabet = system.alphabet.clone();

    let equivalence = match equivalent(&project_determinize(&summary), &project_determinize(&system)) {
        Ok(()) => Check::Pass,
        Err(w) => Check::Fail(names(&alphabet, &w)),
    };
    let divergence = run.summary.divergent.as_ref().map(|marked| {
        let left: Vec<bool> = classes.iter().map(|k| marked.contains(k)).collect();
        let right = divergent_states(&system);
        match compare_divergence(&summary, &left, &system, &right, opts.verify_len) {
            Ok(()) => Check::Pass,
            Err(w) => Check::Fail(names(&alphabet, &w)),
        }
    });
    let weights = opts.weighted.then(|| {
        compare_min_weights(&summary, &system, opts.verify_len).map_err(|m| WeightFailure {
            word: names(&alphabet, &m.word),
            summary: m.left,
            system: m.right,
        })
    });
    Ok(Report { run, oracle_states: ep.num_states(), equivalence, divergence, weights })
}
