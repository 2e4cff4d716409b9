use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netsum::batch::{self, Outcome};
use netsum::pipeline::{self, Check, Options, PipelineError};
use netsum::random::RandomSpec;
use netsum::textio::{self, System};
use netsum_core::benchgen::{generate, Family};
use netsum_core::unfold::{Strategy, UnfoldError};

/// Interface summaries of synchronised LTS products.
#[derive(Parser)]
#[command(name = "netsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the summary of a system.
    Summarize {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare the summary with the explicit-state oracle.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Verify random systems; failing inputs go to the corpus directory.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'n', default_value_t = 100)]
        count: u64,
        #[arg(long, default_value = "fuzz-corpus")]
        corpus: PathBuf,
        /// Generator profile: `default` or `concurrent`.
        #[arg(long, default_value = "default", value_parser = ["default", "concurrent"])]
        profile: String,
        /// Also write a greedily shrunk copy of each failing input.
        #[arg(long)]
        shrink: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Summarize benchmark families and print a table.
    Bench {
        /// `Family:n,n,...`, e.g. `Dp:6,8` (repeatable).
        #[arg(long = "family", value_parser = parse_bench)]
        families: Vec<(Family, Vec<usize>)>,
        /// Write each generated system as `<Family>_<n>.sys` here.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the statistics JSON of a summarize run.
    Stats {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value = "full", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Use transition weights (input must declare `option weighted on`).
    #[arg(long)]
    weighted: bool,
    /// Mark divergent summary states (strategy full only).
    #[arg(long)]
    divergence: bool,
    #[arg(long, default_value_t = 1_000_000)]
    max_events: usize,
    #[arg(long, default_value_t = 300.0)]
    max_seconds: f64,
    /// Count reachable global states with the oracle.
    #[arg(long)]
    oracle: bool,
    /// Report the size of the minimal DFA of the summary.
    #[arg(long)]
    minimize: bool,
    #[arg(long, default_value_t = 0)]
    tiebreak_seed: u64,
    #[arg(long, default_value_t = netsum_core::oracle::DEFAULT_STATE_BOUND)]
    state_bound: usize,
    /// Word length bound for divergence and weight checks.
    #[arg(long, default_value_t = 8)]
    verify_len: usize,
    /// Report `wall_time_ms` as 0.
    #[arg(long)]
    no_timing: bool,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options {
            strategy: self.strategy,
            weighted: self.weighted,
            divergence: self.divergence,
            max_events: self.max_events,
            max_seconds: Some(self.max_seconds),
            tiebreak_seed: self.tiebreak_seed,
            minimize: self.minimize,
            oracle: self.oracle,
            state_bound: self.state_bound,
            verify_len: self.verify_len,
            timing: !self.no_timing,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Summary as DOT (`-` for stdout).
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Statistics JSON (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Summary as a `.sys` document (`-` for stdout; the default output).
    #[arg(long)]
    sys: Option<PathBuf>,
    /// Prefix as DOT.
    #[arg(long)]
    prefix_dot: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|_| format!("unknown strategy `{s}` (expected full, def1 or def2)"))
}

fn parse_bench(s: &str) -> Result<(Family, Vec<usize>), String> {
    let (f, ns) = s.split_once(':').ok_or("expected Family:n,n,...")?;
    let family: Family = f.parse().map_err(|e| format!("{e}"))?;
    let ns = ns
        .split(',')
        .map(|n| n.trim().parse::<usize>().map_err(|e| format!("bad parameter `{n}`: {e}")))
        .collect::<Result<_, _>>()?;
    Ok((family, ns))
}

const INPUT_ERROR: u8 = 1;
const VERIFY_FAILED: u8 = 4;

fn load(path: &Path) -> Result<System, u8> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    let text = text.map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INPUT_ERROR
    })?;
    textio::parse_system(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INPUT_ERROR
    })
}

fn write_out(path: &Path, text: &str) -> Result<(), u8> {
    if path.as_os_str() == "-" {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INPUT_ERROR
    })
}

fn report_error(e: &PipelineError, strategy: Strategy) -> u8 {
    eprintln!("error: {e}");
    if strategy == Strategy::Def1 && matches!(e, PipelineError::Unfold(UnfoldError::EventLimit { .. })) {
        eprintln!("note: def1 cut-offs need not terminate when the system has divergent (silent infinite) behaviour");
    }
    e.exit_code() as u8
}

fn summarize(input: &Path, run: &RunArgs, out: &OutArgs) -> Result<(), u8> {
    let sys = load(input)?;
    let result = pipeline::summarize(&sys.product, &run.options()).map_err(|e| report_error(&e, run.strategy))?;
    let component = sys.product.interface_lts().name();
    let any = out.dot.is_some() || out.json.is_some() || out.sys.is_some() || out.prefix_dot.is_some();
    if let Some(p) = &out.sys {
        write_out(p, &textio::serialize_summary(&sys.name, component, &result.summary))?;
    } else if !any {
        print!("{}", textio::serialize_summary(&sys.name, component, &result.summary));
    }
    if let Some(p) = &out.dot {
        write_out(p, &textio::summary_dot(&result.summary))?;
    }
    if let Some(p) = &out.prefix_dot {
        write_out(p, &textio::prefix_dot(&sys.product, &result.prefix))?;
    }
    if let Some(p) = &out.json {
        write_out(p, &(textio::stats_json(&result.stats) + "\n"))?;
    }
    Ok(())
}

fn verify(input: &Path, run: &RunArgs) -> Result<(), u8> {
    let sys = load(input)?;
    let report = pipeline::verify(&sys.product, &run.options()).map_err(|e| report_error(&e, run.strategy))?;
    match &report.equivalence {
        Check::Pass => println!("EQUIVALENT"),
        Check::Fail(w) => println!("NOT EQUIVALENT: counterexample [{}]", w.join(" ")),
    }
    match &report.divergence {
        Some(Check::Pass) => println!("divergence: consistent up to length {}", run.verify_len),
        Some(Check::Fail(w)) => println!("divergence: mismatch on [{}]", w.join(" ")),
        None => {}
    }
    match &report.weights {
        Some(Ok(())) => println!("weights: consistent up to length {}", run.verify_len),
        Some(Err(m)) => {
            let show = |w: Option<netsum_core::Weight>| w.map_or_else(|| "none".into(), |w| w.to_string());
            println!(
                "weights: mismatch on [{}]: summary {} vs system {}",
                m.word.join(" "),
                show(m.summary),
                show(m.system)
            );
        }
        None => {}
    }
    if report.passed() {
        Ok(())
    } else {
        Err(VERIFY_FAILED)
    }
}

struct FuzzArgs<'a> {
    seed: u64,
    count: u64,
    corpus: &'a Path,
    profile: &'a str,
    shrink: bool,
}

fn fuzz(args: FuzzArgs<'_>, run: &RunArgs) -> Result<(), u8> {
    let FuzzArgs { seed, count, corpus, profile, shrink } = args;
    let mut spec = if profile == "concurrent" { RandomSpec::concurrent() } else { RandomSpec::default() };
    spec.weighted = run.weighted;
    let opts = run.options();
    let cases = batch::fuzz(seed, count, &spec, &opts);
    let mut failed = 0;
    for c in &cases {
        let why = match &c.outcome {
            Outcome::Pass => continue,
            Outcome::Fail(w) => w.clone(),
            Outcome::Error(e) => e.to_string(),
        };
        failed += 1;
        println!("seed {}: {why}", c.seed);
        let path = corpus.join(format!("{}_seed{}.sys", run.strategy.name(), c.seed));
        let doc = format!("# {why}\n{}", textio::serialize_system(&format!("seed{}", c.seed), &c.product));
        if let Err(e) = fs::create_dir_all(corpus).and_then(|_| fs::write(&path, doc)) {
            eprintln!("error: {}: {e}", path.display());
        }
        if shrink {
            let small = batch::shrink(&c.product, |p| batch::check_product(p, &opts) != Outcome::Pass);
            let path = corpus.join(format!("{}_seed{}_min.sys", run.strategy.name(), c.seed));
            let doc = format!(
                "# shrunk from seed {}\n{}",
                c.seed,
                textio::serialize_system(&format!("seed{}_min", c.seed), &small)
            );
            if let Err(e) = fs::write(&path, doc) {
                eprintln!("error: {}: {e}", path.display());
            }
        }
    }
    println!("{}/{} passed", cases.len() - failed, cases.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(VERIFY_FAILED)
    }
}

fn bench(families: &[(Family, Vec<usize>)], emit: Option<&Path>, run: &RunArgs) -> Result<(), u8> {
    let cases: Vec<(Family, usize)> = families.iter().flat_map(|(f, ns)| ns.iter().map(move |&n| (*f, n))).collect();
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| {
            eprintln!("error: {}: {e}", dir.display());
            INPUT_ERROR
        })?;
        for &(f, n) in &cases {
            match generate(f, n) {
                Ok(p) => {
                    write_out(&dir.join(format!("{f}_{n}.sys")), &textio::serialize_system(&format!("{f}_{n}"), &p))?
                }
                Err(e) => eprintln!("error: {e}"),
            }
        }
    }
    print!("{}", batch::bench_table(&batch::bench(&cases, &run.options())));
    Ok(())
}

fn stats(input: &Path, run: &RunArgs) -> Result<(), u8> {
    let sys = load(input)?;
    let result = pipeline::summarize(&sys.product, &run.options()).map_err(|e| report_error(&e, run.strategy))?;
    println!("{}", textio::stats_json(&result.stats));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Summarize { input, run, out } => summarize(input, run, out),
        Command::Verify { input, run } => verify(input, run),
        Command::Fuzz { seed, count, corpus, profile, shrink, run } => {
            fuzz(FuzzArgs { seed: *seed, count: *count, corpus, profile, shrink: *shrink }, run)
        }
        Command::Bench { families, emit, run } => bench(families, emit.as_deref(), run),
        Command::Stats { input, run } => stats(input, run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
