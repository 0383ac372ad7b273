mod queries;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use somsem::cwm::{format_kb, CwmModel};
use somsem::fuzzy::{Family, FuzzyModel};
use somsem::prob::ProbModel;
use somsem::som::{train_map, SomConfig, SomMap, Stimulus};
use somsem::{io, metrics, trace, Error};

use queries::{Engines, Mode, Strategy, Summary};

const GRAMMAR: &str = "\
Query language (one statement per line, `#` starts a comment):

  concept  := concept or concept | concept and concept | not concept
            | top | bot | NAME | ( concept )
              precedence: not > and > or; and/or associate to the left

  C <= D              strict inclusion
  T(C) <= D           typicality (defeasible) inclusion
  C <= D >= 0.7       fuzzy inclusion; comparison is one of >= <= > <
  C(x) >= 0.5         fuzzy assertion about element x (or elem:ID)
  P(C)                probability of C
  P(C | D)            conditional probability
  P(C | elem:ID)      probability of C given one element
  P(elem:ID | C)      likelihood of an element
  deg(C <= D)         degree of a fuzzy inclusion
  mem(C, elem:ID)     membership degree
  plaus(Ci, Cj)       plausibility of T(Ci) <= Cj

NAME is [A-Za-z_][A-Za-z0-9_]*; ID runs to the next space, `(`, `)`, `|`, `,`
or `#`. Input stimuli keep their CSV ids; the element for map unit (r,c) is
elem:bmu@r_c.

Exit status: 0 success, 1 a query failed to parse or evaluate, 2 invalid
configuration or unreadable input.";

#[derive(Parser)]
#[command(
    name = "somsem",
    version,
    about = "Train self-organising maps and check concept inclusions against them"
)]
#[command(after_long_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a map and write it as JSON.
    Train(TrainArgs),
    /// Evaluate a query file.
    #[command(after_long_help = GRAMMAR)]
    Check(CheckArgs),
    /// Write the category-level knowledge base satisfied by a map.
    Extract(ExtractArgs),
    /// Evaluate probability queries.
    #[command(after_long_help = GRAMMAR)]
    Prob(ProbArgs),
    /// Snapshot the satisfied knowledge base during training.
    Trace(TraceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Training {
    /// Stimuli CSV with header `id,category,f1,...,fm`.
    #[arg(long)]
    input: PathBuf,
    /// Grid size as ROWSxCOLS.
    #[arg(long, value_parser = parse_grid)]
    grid: (usize, usize),
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial learning rate.
    #[arg(long)]
    lr0: Option<f64>,
    /// Initial neighborhood radius (default: half the larger grid side).
    #[arg(long)]
    sigma0: Option<f64>,
    /// Shuffle the presentation order every epoch.
    #[arg(long)]
    shuffle: bool,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    training: Training,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ModelArgs {
    /// Map file written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// The stimuli CSV the map was trained on.
    #[arg(long)]
    data: PathBuf,
    /// Extra domain elements, CSV `id,f1,...,fm`.
    #[arg(long)]
    probes: Option<PathBuf>,
    /// Specificity overrides, one `Ch > Cj` per line.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Query file in the language below.
    #[arg(long)]
    queries: PathBuf,
    /// Connective family: zadeh, goedel, lukasiewicz or product.
    #[arg(long, default_value = "zadeh")]
    logic: Family,
    /// `uniform` or a CSV of `id,mass`.
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// Write atom memberships of every domain element to this CSV.
    #[arg(long)]
    emit_membership_csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum, default_value_t = Mode::Pref)]
    mode: Mode,
    /// Use only category-level conditions; strict inclusions they cannot
    /// decide are reported as unknown.
    #[arg(long, conflicts_with = "exact")]
    fast: bool,
    /// Decide every inclusion by enumerating the domain.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct ProbArgs {
    #[command(flatten)]
    query: QueryArgs,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Minimum plausibility of emitted typicality inclusions.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    training: Training,
    /// Steps between snapshots.
    #[arg(long, default_value_t = 100)]
    every: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid grid side `{v}`"))
    };
    Ok((parse(r)?, parse(c)?))
}

/// Failure with its exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(2, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Check(a) => cmd_check(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Prob(a) => cmd_prob(a),
        Command::Trace(a) => cmd_trace(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}

fn config_for(t: &Training, stimuli: &[Stimulus]) -> somsem::Result<SomConfig> {
    let dim = stimuli
        .first()
        .map(|s| s.vector.len())
        .ok_or(Error::EmptyDataset)?;
    let mut config = SomConfig::new(t.grid.0, t.grid.1, dim);
    config.epochs = t.epochs;
    config.seed = t.seed;
    config.shuffle = t.shuffle;
    if let Some(v) = t.lr0 {
        config.lr0 = v;
    }
    if let Some(v) = t.sigma0 {
        config.sigma0 = v;
    }
    config.validate()?;
    Ok(config)
}

fn write_out(path: Option<&Path>, text: &str) -> somsem::Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", p.display()),
            ))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_train(a: TrainArgs) -> CmdResult {
    let stimuli = io::read_stimuli(&a.training.input)?;
    let config = config_for(&a.training, &stimuli)?;
    let map = train_map(config, &stimuli)?;
    write_out(Some(&a.out), &map.to_json())?;
    let stats = metrics::category_stats(&map, &stimuli)?;
    match a.format {
        Format::Text => {
            println!("category\td_max\tb\texemplars");
            for s in stats.values() {
                println!("{}\t{}\t{}\t{}", s.name, s.d_max, s.b(), s.exemplars);
            }
        }
        Format::Json => {
            let cats: Vec<_> = stats
                .values()
                .map(|s| json!({"category": s.name, "d_max": s.d_max, "b": s.b(), "exemplars": s.exemplars}))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"map": a.out, "categories": cats}))
                    .expect("json")
            );
        }
    }
    Ok(())
}

fn load_model(m: &ModelArgs) -> somsem::Result<CwmModel> {
    let map =
        SomMap::load(&m.model).map_err(|e| Error::Config(format!("{}: {e}", m.model.display())))?;
    let stimuli = io::read_stimuli(&m.data)?;
    let probes = match &m.probes {
        Some(p) => io::read_probes(p)?,
        None => Vec::new(),
    };
    let overrides = match &m.spec {
        Some(p) => io::read_specificity(p)?,
        None => Vec::new(),
    };
    CwmModel::build(&map, &stimuli, &probes, &overrides)
}

fn prob_model(fuzzy: &FuzzyModel, dist: &str) -> somsem::Result<ProbModel> {
    if dist == "uniform" {
        return ProbModel::uniform(fuzzy.clone());
    }
    let masses = io::read_distribution(dist)?;
    let (model, renormalized) = ProbModel::with_masses(fuzzy.clone(), &masses)?;
    if renormalized {
        eprintln!("warning: {dist}: masses renormalized to sum to 1");
    }
    Ok(model)
}

fn run_queries(q: &QueryArgs, mode: Mode, strategy: Strategy, require_prob: bool) -> CmdResult {
    let cwm = load_model(&q.model)?;
    let fuzzy = FuzzyModel::from_cwm(&cwm, q.logic)?;
    let prob = match prob_model(&fuzzy, &q.dist) {
        Ok(p) => Some(p),
        Err(Error::IncompatibleFamily(_)) if !require_prob => None,
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = &q.emit_membership_csv {
        write_out(Some(path), &io::membership_csv(&fuzzy)?)?;
    }
    let text = fs::read_to_string(&q.queries).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", q.queries.display()),
        ))
    })?;
    let engines = Engines {
        cwm: &cwm,
        fuzzy: &fuzzy,
        prob: prob.as_ref(),
        mode,
        strategy,
    };
    let lines = queries::run(&engines, &text);
    let summary = Summary::of(&lines);
    match q.format {
        Format::Text => {
            for l in &lines {
                println!("{}", l.text());
            }
            eprintln!("{}", summary.text());
        }
        Format::Json => {
            let results: Vec<_> = lines.iter().map(|l| l.json()).collect();
            let doc = json!({"results": results, "summary": summary.json()});
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    if summary.errors + summary.parse_errors > 0 {
        Err(Failure(1, String::new()))
    } else {
        Ok(())
    }
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let strategy = if a.exact {
        Strategy::Exact
    } else if a.fast {
        Strategy::Fast
    } else {
        Strategy::Auto
    };
    run_queries(&a.query, a.mode, strategy, false)
}

fn cmd_prob(a: ProbArgs) -> CmdResult {
    run_queries(&a.query, Mode::Pref, Strategy::Auto, true)
}

fn cmd_extract(a: ExtractArgs) -> CmdResult {
    if !(0.0..=1.0).contains(&a.threshold) {
        return Err(Failure(
            2,
            format!("threshold {} is outside [0,1]", a.threshold),
        ));
    }
    let kb = load_model(&a.model)?.extract_kb(a.threshold)?;
    write_out(a.out.as_deref(), &format_kb(&kb))?;
    Ok(())
}

fn cmd_trace(a: TraceArgs) -> CmdResult {
    let stimuli = io::read_stimuli(&a.training.input)?;
    let config = config_for(&a.training, &stimuli)?;
    let snapshots = trace::run_trace(&config, &stimuli, a.every)?;
    let text = match a.format {
        Format::Text => trace::format_text(&snapshots),
        Format::Json => trace::format_json(&snapshots),
    };
    write_out(a.out.as_deref(), &text)?;
    Ok(())
}
