use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use clex::clex::{build_product_dfa, SequenceSpec};
use clex::regular::Dfa;
use clex::{solve, Limits, Outcome};
use nsp_bench::bench::{format_summary, write_records_csv, write_summary_csv};
use nsp_bench::presets::{self, OFF};
use nsp_bench::{
    build_model, generate_instance, run_benchmark, separation_model, summarize, Mode, ModelConfig,
    NspInstance, RowRule, ShiftModel,
};

const EXIT_UNSAT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "nsp-bench", version, about = "Nurse-scheduling benchmark for combined lex propagation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instances.
    Generate(GenerateArgs),
    /// Solve one instance and print the schedule.
    Solve(SolveArgs),
    /// Run modes over a batch of instances and print a summary table.
    Bench(BenchArgs),
    /// Build the product automaton of a row automaton with itself.
    CompileProduct(ProductArgs),
    /// Backtracks of the combined and decomposed models on the separation family.
    DemoSeparation(DemoArgs),
}

#[derive(Args, Clone)]
struct ShapeArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    nurses: usize,
    #[arg(long, default_value_t = 28)]
    days: usize,
    /// Demand range `lo,hi` per day and shift.
    #[arg(long, default_value = "10,20", value_parser = parse_range)]
    demand: (usize, usize),
    /// Day/evening/night/off shifts instead of work/off.
    #[arg(long)]
    shifts: bool,
}

impl ShapeArgs {
    fn model(&self) -> ShiftModel {
        if self.shifts {
            ShiftModel::Shifts
        } else {
            ShiftModel::Boolean
        }
    }

    fn generate(&self, count: usize) -> Vec<(String, NspInstance)> {
        (0..count)
            .map(|i| {
                let seed = self.seed + i as u64;
                let inst = generate_instance(seed, self.nurses, self.days, self.demand.0..=self.demand.1, self.model());
                (format!("seed{seed}"), inst)
            })
            .collect()
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output file, or directory when `--count` is above 1. Prints to stdout
    /// when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RuleArgs {
    /// Sequence rule `l,u,k` on working days; repeatable.
    #[arg(long, value_parser = parse_triple)]
    seq: Vec<(usize, usize, usize)>,
    /// Use all six built-in Boolean Sequence triples.
    #[arg(long)]
    triples: bool,
    /// Row automaton file.
    #[arg(long)]
    dfa: Option<PathBuf>,
    /// Built-in row automaton (`break12`, `break12-run2`).
    #[arg(long)]
    preset: Option<String>,
}

impl RuleArgs {
    fn rules(&self) -> Result<Vec<RowRule>> {
        let mut rules: Vec<RowRule> = self
            .seq
            .iter()
            .map(|&(l, u, k)| {
                SequenceSpec::try_new(l, u, k, clex::Domain::singleton(1))
                    .map(RowRule::Sequence)
                    .with_context(|| format!("invalid Sequence rule {l},{u},{k}"))
            })
            .collect::<Result<_>>()?;
        if self.triples {
            rules.extend(presets::boolean_rules());
        }
        if let Some(path) = &self.dfa {
            let dfa = read_dfa(path)?;
            let label = path.file_stem().map_or("dfa".into(), |s| s.to_string_lossy().into_owned());
            rules.push(RowRule::Automaton {
                label,
                dfa: Arc::new(dfa),
            });
        }
        if let Some(name) = &self.preset {
            rules.push(preset(name)?);
        }
        Ok(rules)
    }
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Time limit per search, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Node limit per search.
    #[arg(long)]
    nodes: Option<u64>,
}

impl LimitArgs {
    fn limits(&self, default_timeout: Option<f64>) -> Result<Limits> {
        let mut limits = Limits::none();
        limits.max_nodes = self.nodes;
        if let Some(t) = self.timeout.or(default_timeout) {
            if !(t.is_finite() && t > 0.0) {
                bail!("timeout must be a positive number of seconds");
            }
            limits = limits.with_time(Duration::from_secs_f64(t));
        }
        Ok(limits)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    mode: Mode,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files. Combine with `--generate` or use it alone.
    instances: Vec<PathBuf>,
    /// A mode name or `all` for every mode matching the rules.
    #[arg(long, default_value = "all")]
    mode: String,
    #[command(flatten)]
    rule: RuleArgs,
    #[command(flatten)]
    limits: LimitArgs,
    /// Generate this many instances from the shape options.
    #[arg(long)]
    generate: Option<usize>,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Per-run results as comma-separated values.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary table as comma-separated values.
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct ProductArgs {
    #[arg(long)]
    dfa: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Largest instance size.
    #[arg(long, default_value_t = 8)]
    n: usize,
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[usize; N], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a non-negative integer")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| format!("expected {N} comma-separated numbers"))
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let [lo, hi] = parse_numbers(s)?;
    if lo > hi {
        return Err(format!("empty range {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn parse_triple(s: &str) -> Result<(usize, usize, usize), String> {
    let [l, u, k] = parse_numbers(s)?;
    Ok((l, u, k))
}

fn read_dfa(path: &Path) -> Result<Dfa> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn preset(name: &str) -> Result<RowRule> {
    presets::preset(name).with_context(|| {
        format!("unknown preset `{name}`, expected one of {}", presets::PRESET_NAMES.join(", "))
    })
}

fn read_instance(path: &Path) -> Result<NspInstance> {
    NspInstance::read(path).with_context(|| format!("reading {}", path.display()))
}

fn default_rule(inst: &NspInstance, mode: Mode) -> Result<RowRule> {
    if mode.uses_sequence() {
        Ok(RowRule::Sequence(SequenceSpec::boolean(2, 3, 4)))
    } else if inst.is_boolean() {
        Ok(RowRule::Automaton {
            label: "any".into(),
            dfa: Arc::new(Dfa::universal(&inst.value_domain())),
        })
    } else {
        preset("break12")
    }
}

fn generate(args: GenerateArgs) -> Result<u8> {
    let instances = args.shape.generate(args.count);
    match (&args.out, args.count) {
        (None, 1) => print!("{}", instances[0].1),
        (None, _) => bail!("--out <dir> is required with --count above 1"),
        (Some(path), 1) => instances[0].1.write(path)?,
        (Some(dir), _) => {
            fs::create_dir_all(dir)?;
            for (name, inst) in &instances {
                inst.write(dir.join(format!("{name}.txt")))?;
            }
        }
    }
    Ok(0)
}

fn shift_char(inst: &NspInstance, v: i32) -> char {
    if inst.is_boolean() {
        if v == 1 {
            '1'
        } else {
            '0'
        }
    } else {
        match v {
            OFF => '.',
            0 => 'D',
            1 => 'E',
            2 => 'N',
            _ => '?',
        }
    }
}

fn solve_cmd(args: SolveArgs) -> Result<u8> {
    let inst = read_instance(&args.instance)?;
    let rule = match args.rule.rules()?.as_slice() {
        [] => default_rule(&inst, args.mode)?,
        [one] => one.clone(),
        _ => bail!("solve takes a single rule"),
    };
    let config = ModelConfig::new(args.mode, rule, args.limits.limits(None)?);
    let mut built = build_model(&inst, &config)?;
    let stats = solve(&mut built.model, &built.order, config.limits)?;
    println!(
        "{}: {} nodes, {} backtracks, {:.1} ms",
        config.name(),
        stats.nodes,
        stats.backtracks,
        stats.wall_time.as_secs_f64() * 1000.0
    );
    match stats.outcome {
        Outcome::Solution => {
            let solution = stats.solution.as_deref().expect("solution recorded");
            for row in built.schedule(solution) {
                let line: String = row.iter().map(|&v| shift_char(&inst, v)).collect();
                println!("{line}");
            }
            Ok(0)
        }
        Outcome::Unsat => {
            println!("unsatisfiable");
            Ok(EXIT_UNSAT)
        }
        Outcome::LimitReached => {
            println!("limit reached");
            Ok(EXIT_LIMIT)
        }
    }
}

fn bench_cmd(args: BenchArgs) -> Result<u8> {
    let mut instances = Vec::new();
    for path in &args.instances {
        let name = path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
        instances.push((name, read_instance(path)?));
    }
    if let Some(count) = args.generate {
        instances.extend(args.shape.generate(count));
    }
    if instances.is_empty() {
        bail!("no instances: pass files or --generate <count>");
    }
    let mut rules = args.rule.rules()?;
    let modes: Vec<Mode> = if args.mode == "all" {
        Mode::ALL.to_vec()
    } else {
        vec![args.mode.parse().map_err(anyhow::Error::msg)?]
    };
    if rules.is_empty() {
        let sequence_modes = modes.iter().any(|m| m.uses_sequence());
        let first = &instances[0].1;
        if sequence_modes {
            rules.push(default_rule(first, Mode::ClexSeq)?);
        }
        if modes.iter().any(|m| !m.uses_sequence()) {
            rules.push(default_rule(first, Mode::ClexRegular)?);
        }
    }
    let limits = args.limits.limits(Some(60.0))?;
    let configs: Vec<ModelConfig> = rules
        .iter()
        .flat_map(|rule| {
            let sequence = matches!(rule, RowRule::Sequence(_));
            modes
                .iter()
                .filter(move |m| m.uses_sequence() == sequence)
                .map(move |&m| ModelConfig::new(m, rule.clone(), limits))
        })
        .collect();
    if configs.is_empty() {
        bail!("no mode matches the given rules");
    }

    let records = run_benchmark(&instances, &configs);
    for r in &records {
        if let nsp_bench::RunOutcome::Error(e) = &r.outcome {
            eprintln!("{} on {}: {e}", r.config, r.instance);
        }
    }
    let summary = summarize(&records);
    print!("{}", format_summary(&summary));
    if let Some(path) = &args.out {
        write_records_csv(fs::File::create(path)?, &records)?;
    }
    if let Some(path) = &args.summary_out {
        write_summary_csv(fs::File::create(path)?, &summary)?;
    }
    Ok(0)
}

fn product_cmd(args: ProductArgs) -> Result<u8> {
    let dfa = match (&args.dfa, &args.preset) {
        (Some(path), None) => read_dfa(path)?,
        (None, Some(name)) => match preset(name)? {
            RowRule::Automaton { dfa, .. } => (*dfa).clone(),
            RowRule::Sequence(_) => unreachable!("presets are automata"),
        },
        _ => bail!("give exactly one of --dfa and --preset"),
    };
    let product = build_product_dfa(&dfa, &dfa);
    eprintln!(
        "row automaton: {} states; product: {} states, {} transitions",
        dfa.num_states(),
        product.dfa.num_states(),
        product.dfa.num_transitions()
    );
    match &args.out {
        Some(path) => fs::write(path, product.dfa.to_text())?,
        None => print!("{}", product.dfa.to_text()),
    }
    Ok(0)
}

fn demo_cmd(args: DemoArgs) -> Result<u8> {
    if args.n < 2 {
        bail!("--n must be at least 2");
    }
    let mut out = io::stdout().lock();
    writeln!(out, "{:>3}  {:>10}  {:>12}", "n", "combined", "decomposed")?;
    for n in 2..=args.n {
        let mut counts = [0u64; 2];
        for (slot, combined) in [true, false].into_iter().enumerate() {
            let (mut model, order) = separation_model(n, combined);
            let stats = solve(&mut model, &order, Limits::none())?;
            counts[slot] = stats.backtracks;
        }
        writeln!(out, "{n:>3}  {:>10}  {:>12}", counts[0], counts[1])?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::CompileProduct(a) => product_cmd(a),
        Command::DemoSeparation(a) => demo_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
