//! `xlab`: command-line front end for the X-form laboratory.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use xform_lab::jsonl;
use xform_lab::learner::{LearningMachine, RunStatus};
use xform_lab::nn::{trace_training, TrainConfig};
use xform_lab::pattern::{self, Dataset, DatasetError, LabeledSample};
use xform_lab::sufficiency::{
    consistent_count, is_sufficient_with_limit, minimal_sufficient_subset, HypothesisClass, SubsetSearch,
    DEFAULT_WITNESS_LIMIT,
};
use xform_lab::{canonical_min_dnf, evaluate, parse_pattern, parse_xform, truth_table, validate_dataset, XForm};

#[derive(Parser, Debug)]
#[command(name = "xlab", version, about = "Boolean pattern spaces, X-forms, data sufficiency and learning traces")]
struct Cli {
    /// Pattern width; inferred from the input when omitted.
    #[arg(long, global = true)]
    width: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Order {
    Given,
    Lex,
    Seeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ClassSpec {
    All,
    Dnf(usize),
    List(Vec<String>),
}

fn parse_class_spec(s: &str) -> Result<ClassSpec, String> {
    if s == "all" {
        return Ok(ClassSpec::All);
    }
    if let Some(k) = s.strip_prefix("dnf:") {
        return k
            .parse::<usize>()
            .ok()
            .filter(|&k| k >= 1)
            .map(ClassSpec::Dnf)
            .ok_or_else(|| format!("bad implicant bound in {s:?}"));
    }
    if let Some(list) = s.strip_prefix("list:") {
        let items: Vec<String> = list.split(';').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect();
        if items.is_empty() {
            return Err("empty hypothesis list".into());
        }
        return Ok(ClassSpec::List(items));
    }
    Err(format!("expected all, dnf:<k> or list:<xform>;<xform>..., got {s:?}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Shape(Vec<usize>);

fn parse_shape(s: &str) -> Result<Shape, String> {
    let shape = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad layer width {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if shape.len() < 2 {
        return Err(format!("shape {s:?} needs an input width and an output layer"));
    }
    if shape.contains(&0) {
        return Err(format!("shape {s:?} has an empty layer"));
    }
    if shape[shape.len() - 1] != 1 {
        return Err(format!("shape {s:?} must end with 1"));
    }
    Ok(Shape(shape))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an X-form on one pattern.
    Eval { xform: String, pattern: String },
    /// Print the canonical minimal DNF of an X-form.
    Canon { xform: String },
    /// Print the truth table of an X-form.
    Tt { xform: String },
    /// Count consistent hypotheses and decide sufficiency of a dataset.
    Suff {
        /// JSONL file of {"pattern": ..., "label": 0|1} records
        dataset: PathBuf,
        /// Hypothesis class: all, dnf:K or list:F1;F2;...
        #[arg(long, value_parser = parse_class_spec, default_value = "all")]
        class: ClassSpec,
        /// Intended function; sufficiency requires it to be the unique consistent member
        #[arg(long)]
        target: Option<String>,
        /// Maximum number of consistent members to print
        #[arg(long, default_value_t = DEFAULT_WITNESS_LIMIT)]
        witness_limit: usize,
        /// Also report a minimum sufficient subset (requires --target).
        #[arg(long, requires = "target")]
        minimal_subset: bool,
    },
    /// Feed a dataset to the learning machine and print its trace.
    Learn {
        /// JSONL dataset
        dataset: PathBuf,
        /// Hypothesis class: all, dnf:K or list:F1;F2;...
        #[arg(long, value_parser = parse_class_spec, default_value = "all")]
        class: ClassSpec,
        /// Sample order: as given, lexicographic, or shuffled with --seed
        #[arg(long, value_enum, default_value_t = Order::Given)]
        order: Order,
    },
    /// Train a threshold network and print its X-form trajectory.
    NnTrace {
        /// JSONL dataset
        dataset: PathBuf,
        /// Layer widths, input first and a single output last, e.g. 2,3,1
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        /// Learning rate; 0 leaves the network untouched
        #[arg(long, default_value_t = 0.5)]
        lr: f64,
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        /// Initial parameters are uniform in [-s, s]
        #[arg(long, default_value_t = 0.1)]
        init_scale: f64,
        /// Write the trained network as JSON to this file.
        #[arg(long)]
        net_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(out) => match emit(cli.output.as_deref(), &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Eval { xform, pattern } => {
            let p = parse_pattern(pattern).named()?;
            let f = parse_xform(xform, p.width()).named()?;
            let v = evaluate(&f, &p).named()?;
            Ok(format!("{}\n", u8::from(v)))
        }
        Command::Canon { xform } => {
            let (f, width) = parse_with_width(xform, cli.width)?;
            let t = truth_table(&f, width).named()?;
            Ok(format!("{}\n", canonical_min_dnf(&t)))
        }
        Command::Tt { xform } => {
            let (f, width) = parse_with_width(xform, cli.width)?;
            let t = truth_table(&f, width).named()?;
            Ok(match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Rec {
                        width: usize,
                        table: String,
                    }
                    line(&Rec { width, table: t.to_string() })
                }
                Format::Table => {
                    let mut out = format!("{:<w$}  out\n", "pattern", w = width.max(7));
                    for p in pattern::enumerate_patterns(width)? {
                        out += &format!("{:<w$}  {}\n", p.to_string(), u8::from(t.output(&p)), w = width.max(7));
                    }
                    out
                }
            })
        }
        Command::Suff { dataset, class, target, witness_limit, minimal_subset } => {
            let d = read_dataset(dataset, cli.width)?;
            let class = build_class(class, d.width())?;
            let target = match target {
                Some(t) => Some(parse_xform(t, d.width()).named().context("target")?),
                None => None,
            };
            let report = match &target {
                Some(t) => is_sufficient_with_limit(&class, &d, t, *witness_limit).named()?,
                None => consistent_count(&class, &d, *witness_limit).named()?,
            };
            let mut out = match cli.format {
                Format::Json => format!("{}\n", report.to_record()),
                Format::Table => {
                    let tc = report.target_consistent.map_or("-".to_string(), |b| b.to_string());
                    let mut out = format!(
                        "consistent_count   {}\nsufficient         {}\ntarget_consistent  {}\n",
                        report.consistent_count, report.sufficient, tc
                    );
                    for w in &report.witnesses {
                        out += &format!("witness            {w}\n");
                    }
                    out
                }
            };
            if *minimal_subset {
                let t = target.as_ref().expect("clap enforces --target");
                let r = minimal_sufficient_subset(&class, &d, t, SubsetSearch::Auto).named()?;
                match cli.format {
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Sample {
                            pattern: String,
                            label: u8,
                        }
                        #[derive(Serialize)]
                        struct Rec {
                            minimal_subset: Vec<Sample>,
                            certified_minimal: bool,
                        }
                        let subset = r
                            .subset
                            .iter()
                            .map(|s| Sample { pattern: s.pattern.to_string(), label: u8::from(s.label) })
                            .collect();
                        out += &line(&Rec { minimal_subset: subset, certified_minimal: r.certified_minimal });
                    }
                    Format::Table => {
                        let items: Vec<String> =
                            r.subset.iter().map(|s| format!("{}:{}", s.pattern, u8::from(s.label))).collect();
                        out += &format!("minimal_subset     {{{}}}\n", items.join(", "));
                        out += &format!("certified_minimal  {}\n", r.certified_minimal);
                    }
                }
            }
            Ok(out)
        }
        Command::Learn { dataset, class, order } => {
            let samples = read_ordered_samples(dataset, cli.width, *order, cli.seed)?;
            let width = samples.width;
            let class = build_class(class, width)?;
            let mut machine = LearningMachine::new(width, class).named()?;
            let status = machine.run_to_convergence(samples.items).named()?;
            Ok(render_learn(&machine, status, cli.format))
        }
        Command::NnTrace { dataset, shape, lr, epochs, init_scale, net_out } => {
            let d = read_dataset(dataset, cli.width)?;
            let cfg = TrainConfig::new(*lr, *epochs, cli.seed, *init_scale).named()?;
            let (trajectory, net) = trace_training(&shape.0, &d, &cfg).named()?;
            if let Some(path) = net_out {
                std::fs::write(path, net.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(match cli.format {
                Format::Json => trajectory.entries.iter().map(|e| e.to_record() + "\n").collect(),
                Format::Table => {
                    let mut out = format!("{:>6}  {:<16}  {:>4}  xform\n", "epoch", "table", "size");
                    for e in &trajectory.entries {
                        out += &format!("{:>6}  {:<16}  {:>4}  {}\n", e.epoch, e.table.to_string(), e.xform_size, e.xform);
                    }
                    out
                }
            })
        }
    }
}

/// Error prefixed with its variant name, e.g. `VariableOutOfRange: variable b3 out of range`.
fn named<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> anyhow::Error {
    let debug = format!("{e:?}");
    let variant = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    anyhow!("{variant}: {e}")
}

trait Named<T> {
    fn named(self) -> Result<T>;
}

impl<T, E: std::fmt::Debug + std::fmt::Display> Named<T> for std::result::Result<T, E> {
    fn named(self) -> Result<T> {
        self.map_err(|e| named(&e))
    }
}

fn line<T: Serialize>(value: &T) -> String {
    jsonl::to_line(value) + "\n"
}

fn parse_with_width(text: &str, width: Option<usize>) -> Result<(XForm, usize)> {
    let width = match width {
        Some(w) => w,
        // widest index mentioned decides; anything past 16 is reported by the parser
        None => parse_xform(text, usize::MAX).named()?.max_var().max(1),
    };
    let f = parse_xform(text, width).named()?;
    Ok((f, width))
}

fn build_class(spec: &ClassSpec, width: usize) -> Result<HypothesisClass> {
    Ok(match spec {
        ClassSpec::All => HypothesisClass::all_functions(width).named()?,
        ClassSpec::Dnf(k) => HypothesisClass::bounded_dnf(width, *k).named()?,
        ClassSpec::List(items) => {
            let list = items
                .iter()
                .map(|t| parse_xform(t, width).named().with_context(|| format!("class member {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            HypothesisClass::explicit(width, list).named()?
        }
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display()))).named()?;
    Ok(BufReader::new(file))
}

fn read_dataset(path: &Path, width: Option<usize>) -> Result<Dataset> {
    pattern::load_dataset(open(path)?, width).named()
}

struct OrderedSamples {
    width: usize,
    items: Vec<LabeledSample>,
}

fn read_ordered_samples(path: &Path, width: Option<usize>, order: Order, seed: u64) -> Result<OrderedSamples> {
    let raw = pattern::read_samples(open(path)?).named()?;
    // reject conflicts and mixed widths before any learning happens
    let d = match width {
        Some(w) => Dataset::with_width(w, raw.iter().copied()),
        None => validate_dataset(&raw),
    }
    .named()?;
    let items = match order {
        Order::Given => raw,
        Order::Lex => d.samples(),
        Order::Seeded => {
            let mut s = d.samples();
            s.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            s
        }
    };
    Ok(OrderedSamples { width: d.width(), items })
}

#[derive(Serialize)]
struct StatusRecord {
    status: &'static str,
    steps: usize,
    gap: usize,
    lower: String,
    upper: String,
    consistent_remaining: Option<usize>,
}

fn render_learn(machine: &LearningMachine, status: RunStatus, format: Format) -> String {
    let summary = StatusRecord {
        status: status.as_str(),
        steps: machine.trace().len(),
        gap: machine.gap(),
        lower: machine.lower().to_string(),
        upper: machine.upper().to_string(),
        consistent_remaining: machine.consistent_remaining(),
    };
    match format {
        Format::Json => {
            let mut out: String = machine.trace().iter().map(|e| e.to_record() + "\n").collect();
            out += &line(&summary);
            out
        }
        Format::Table => {
            let w = machine.width().max(7);
            let lw = machine.trace().iter().map(|e| e.lower_after.to_string().len()).max().unwrap_or(0).max(5);
            let mut out = format!("{:>4}  {:<w$}  label  {:>4}  {:<lw$}  upper\n", "step", "pattern", "gap", "lower");
            for e in machine.trace() {
                out += &format!(
                    "{:>4}  {:<w$}  {:>5}  {:>4}  {:<lw$}  {}\n",
                    e.step,
                    e.sample.pattern.to_string(),
                    u8::from(e.sample.label),
                    e.gap,
                    e.lower_after.to_string(),
                    e.upper_after
                );
            }
            out += &format!("status: {} after {} steps, gap {}\n", summary.status, summary.steps, summary.gap);
            out
        }
    }
}
