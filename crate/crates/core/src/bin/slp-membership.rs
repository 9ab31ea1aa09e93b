use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use slp_membership::analysis::{classify_pairs, nonextendible_lengths, outer_letters, PairStatus};
use slp_membership::instance::IterationEvent;
use slp_membership::text::serialize_instance;
use slp_membership::unary::{Strategy, UnaryConfig, DEFAULT_DP_THRESHOLD};
use slp_membership::{
    brute_force_accepts, decide_observed, gen_instance, read_instance, serialize_combined, DecideOptions, Engine,
    Error, GenParams, Instance, NoObserver, Observer, PassEvent, DEFAULT_CAP,
};

/// Decide whether an automaton with grammar-compressed labels accepts a
/// grammar-compressed string.
///
/// Exit status: 0 accepted (or ok), 1 rejected, 2 error.
#[derive(Parser)]
#[command(name = "slp-membership", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership by recompression.
    Decide(DecideArgs),
    /// Decide by full decompression.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Decompression budget in letters.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_expand: usize,
    },
    /// Print outer letters, pair classes and block lengths as JSON.
    Stats {
        #[command(flatten)]
        input: Input,
    },
    /// Generate a random instance.
    Gen(GenArgs),
    /// Parse and validate, printing any invariant violations.
    Check {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Input {
    /// `foo.slp` (paired with `foo.aut` unless given), or a combined file.
    grammar: PathBuf,
    automaton: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum EngineArg {
    Recompress,
    Naive,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = EngineArg::Recompress)]
    engine: EngineArg,
    /// Write one JSON object per pass and per iteration to stderr.
    #[arg(long)]
    trace: bool,
    /// Main-loop ceiling; default 3n + 10.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Unary path lengths up to this use the dense table.
    #[arg(long, default_value_t = DEFAULT_DP_THRESHOLD)]
    unary_dp_threshold: u64,
    /// Budget, in letters, for any decompression.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_expand: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    alphabet_size: usize,
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 4)]
    max_rhs_len: usize,
    #[arg(long, default_value_t = 12)]
    log2_len: u32,
    #[arg(long)]
    deterministic: bool,
    /// Write PREFIX.slp and PREFIX.aut instead of a combined file on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct TraceWriter;

impl Observer for TraceWriter {
    fn on_pass(&mut self, _before: Option<&Instance>, after: &Instance, event: &PassEvent) {
        eprintln!("{}", event.to_json(after.alphabet()));
    }

    fn on_iteration(&mut self, event: &IterationEvent, _inst: &Instance) {
        eprintln!("{}", event.to_json());
    }
}

fn load(input: &Input) -> Result<Instance, Error> {
    read_instance(&input.grammar, input.automaton.as_deref())
}

fn verdict(accepted: bool) -> ExitCode {
    println!("{}", if accepted { "accepted" } else { "rejected" });
    ExitCode::from(if accepted { 0 } else { 1 })
}

fn run_decide(args: &DecideArgs) -> Result<ExitCode, Error> {
    let inst = load(&args.input)?;
    let opts = DecideOptions {
        max_iter: args.max_iter,
        unary: UnaryConfig {
            strategy: Strategy::Auto,
            dp_threshold: args.unary_dp_threshold,
        },
        cap: args.max_expand,
        engine: match args.engine {
            EngineArg::Recompress => Engine::Recompress,
            EngineArg::Naive => Engine::Naive,
        },
    };
    let decision = if args.trace {
        decide_observed(inst, &opts, &mut TraceWriter)?
    } else {
        decide_observed(inst, &opts, &mut NoObserver)?
    };
    Ok(verdict(decision.accepted))
}

fn run_stats(input: &Input) -> Result<ExitCode, Error> {
    let inst = load(input)?;
    let g = &inst.grammar;
    let name = |l| g.alphabet().name(l);
    let outer = outer_letters(g);
    let mut crossing = Vec::new();
    let mut non_crossing = Vec::new();
    for class in classify_pairs(g, &inst.automaton) {
        let pair = format!("{}{}", name(class.pair.0), name(class.pair.1));
        match class.status {
            PairStatus::Crossing => crossing.push(json!({ "pair": pair, "witnesses": class.witnesses })),
            PairStatus::NonCrossing => non_crossing.push(json!(pair)),
        }
    }
    let mut blocks = BTreeMap::new();
    for a in g.alphabet().letters().filter(|a| g.occurs(*a)) {
        if let Ok(lens) = nonextendible_lengths(g, a) {
            blocks.insert(name(a), lens.iter().map(|l| l.to_string()).collect::<Vec<_>>());
        }
    }
    let sizes = inst.sizes();
    let out = json!({
        "n": inst.n(),
        "eval_len": inst.top_len().to_string(),
        "grammar_size": sizes.grammar,
        "states": sizes.states,
        "transitions": sizes.transitions,
        "outer_left": outer.left_outer.iter().map(|l| name(*l)).collect::<Vec<_>>(),
        "outer_right": outer.right_outer.iter().map(|l| name(*l)).collect::<Vec<_>>(),
        "crossing": crossing,
        "non_crossing": non_crossing,
        "block_lengths_by_letter": blocks,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(ExitCode::SUCCESS)
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn run_gen(args: &GenArgs) -> Result<ExitCode, Error> {
    let inst = gen_instance(&GenParams {
        seed: args.seed,
        n: args.n,
        alphabet_size: args.alphabet_size,
        state_count: args.states,
        max_rhs_len: args.max_rhs_len,
        target_eval_len_log2: args.log2_len,
        deterministic: args.deterministic,
    })?;
    match &args.out {
        Some(prefix) => {
            let (g, a) = serialize_instance(&inst);
            write_file(&prefix.with_extension("slp"), &g)?;
            write_file(&prefix.with_extension("aut"), &a)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(serialize_combined(&inst).as_bytes()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Decide(args) => run_decide(args),
        Command::Oracle { input, max_expand } => Ok(verdict(brute_force_accepts(&load(input)?, *max_expand)?)),
        Command::Stats { input } => run_stats(input),
        Command::Gen(args) => run_gen(args),
        Command::Check { input } => {
            // parsing already rejects violations; reaching here means clean
            let inst = load(input)?;
            println!("ok: n={} eval_len={}", inst.n(), inst.top_len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
