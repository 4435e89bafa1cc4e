use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qregular::automata::{parse_dfa, parse_regex, Alphabet, Dfa};
use qregular::classify::{classify_with, verify_witness, ComplexityClass};
use qregular::corpus::{appendix_c_report, builtin_fixtures, fixture, run_fixtures, APPENDIX_C_GOLDEN};
use qregular::decompose::{decompose, verify_decomposition};
use qregular::exec::Strategy;
use qregular::monoid::SyntacticContext;
use qregular::query::{cost_curve, loglog_slope, CostModel, CurveRow, Decider, PredicateCharge};
use qregular::sensitivity::{build_mask_automata, sensitivity_by_length};
use qregular::{Config, Error};

/// Classifies regular languages by quantum query complexity.
#[derive(Parser)]
#[command(name = "qregular", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = qregular::monoid::DEFAULT_MONOID_CAP)]
    monoid_cap: usize,
    #[arg(long, global = true, default_value_t = qregular::flatten::DEFAULT_BLOCK_CAP)]
    block_cap: usize,
    #[arg(long, global = true, default_value_t = qregular::sensitivity::DEFAULT_MASK_CAP)]
    mask_cap: usize,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Classical,
    Grover,
}

#[derive(Clone, Copy, ValueEnum)]
enum Charge {
    Bound,
    Observed,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Extended regular expression.
    #[arg(long)]
    regex: Option<String>,
    /// DFA file.
    #[arg(long)]
    dfa: Option<PathBuf>,
    /// Built-in fixture name.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    input: Input,
    /// Space-separated symbols for --regex.
    #[arg(long, default_value = "0 1")]
    alphabet: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the language.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Decide membership of one word with the simulated algorithm.
    Decide {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Model::Grover)]
        model: Model,
        #[arg(long, value_enum, default_value_t = Charge::Bound)]
        charge: Charge,
    },
    /// Print the E, F, G, C sets of a monoid element and verify them.
    Decompose {
        #[command(flatten)]
        source: Source,
        /// Element name as printed by the multiplication table.
        #[arg(long)]
        element: String,
    },
    /// Exact sensitivity per length with a dichotomy verdict.
    Sensitivity {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Modeled cost over doubling lengths, as CSV.
    CostCurve {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 256)]
        n_min: usize,
        #[arg(long, default_value_t = 65536)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Charge::Bound)]
        charge: Charge,
    },
    /// Run the built-in fixture suite.
    Fixtures {
        /// Run every fixture (the default when no name is given).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        name: Option<String>,
        /// List fixtures instead of running them.
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Refusal(String),
    Input(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) => Failure::Refusal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(source: &Source) -> Result<Dfa, Failure> {
    let input = &source.input;
    if let Some(re) = &input.regex {
        let sigma = Alphabet::parse(&source.alphabet)?;
        return Ok(parse_regex(re, &sigma)?.to_dfa());
    }
    if let Some(path) = &input.dfa {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return Ok(parse_dfa(&text)?);
    }
    let name = input.fixture.as_deref().unwrap_or_default();
    let f = fixture(name).ok_or_else(|| Failure::Input(format!("unknown fixture `{name}`")))?;
    Ok(f.dfa()?)
}

fn charge(c: Charge) -> PredicateCharge {
    match c {
        Charge::Bound => PredicateCharge::Bound,
        Charge::Observed => PredicateCharge::Observed,
    }
}

fn classify_cmd(cli: &Cli, config: &Config, source: &Source) -> Outcome {
    let report = classify_with(&load(source)?, config)?;
    Ok(match cli.format {
        Format::Records => report.render_records(),
        Format::Text => {
            let mut out = report.render_text();
            let family = report.family();
            for (c, comp) in report.components.iter().zip(&family.components) {
                if let Some(w) = &c.witness {
                    let ctx = SyntacticContext::build(&comp.dfa, config.monoid_cap, Strategy::Sequential)?;
                    let ok = verify_witness(&ctx, w, 8);
                    writeln!(out, "  witness check to m = 8: {}", if ok { "ok" } else { "FAILED" }).unwrap();
                }
            }
            out
        }
    })
}

fn decide_cmd(cli: &Cli, config: &Config, source: &Source, word: &str, model: Model, c: Charge) -> Outcome {
    let dfa = load(source)?;
    let x = dfa.alphabet().parse_word(word)?;
    let decider = Decider::with_config(&dfa, &Config { charge: charge(c), ..*config })?;
    let model = match model {
        Model::Classical => CostModel::Classical,
        Model::Grover => CostModel::IdealGrover,
    };
    let d = decider.decide(&x, model)?;
    Ok(match cli.format {
        Format::Text => format!(
            "class: {}\naccepted: {}\nclassical reads: {}\nmodeled cost ({model}): {}\n",
            decider.class(),
            d.accepted,
            d.ledger.classical_reads,
            d.ledger.modeled_cost
        ),
        Format::Records => format!(
            "record=decision class={} accepted={} classical_reads={} modeled_cost={} model={model}\n",
            decider.class(),
            d.accepted,
            d.ledger.classical_reads,
            d.ledger.modeled_cost
        ),
    })
}

fn decompose_cmd(cli: &Cli, config: &Config, source: &Source, element: &str) -> Outcome {
    let ctx = SyntacticContext::build(&load(source)?, config.monoid_cap, config.strategy)?;
    let m = ctx
        .element_by_name(element)
        .ok_or_else(|| Failure::Input(format!("no element named `{element}`; known: {}", names(&ctx))))?;
    let sets = decompose(&ctx, m)?;
    let verified = verify_decomposition(&ctx, m)?.is_equal();
    Ok(match cli.format {
        Format::Text => format!("{}verified: {}\n", sets.render(&ctx), if verified { "yes" } else { "no" }),
        Format::Records => {
            let rendered = sets.render(&ctx);
            let fields: Vec<String> = rendered
                .lines()
                .filter_map(|l| l.split_once(" = "))
                .map(|(k, v)| format!("{k}={}", v.replace(' ', "")))
                .collect();
            format!("record=decomposition {} verified={verified}\n", fields.join(" "))
        }
    })
}

fn names(ctx: &SyntacticContext) -> String {
    (0..ctx.size()).map(|m| ctx.name(m)).collect::<Vec<_>>().join(", ")
}

fn sensitivity_cmd(config: &Config, source: &Source, n_max: usize) -> Outcome {
    let mask = build_mask_automata(&load(source)?, config.mask_cap)?;
    let profile = sensitivity_by_length(&mask, n_max);
    Ok(format!("{}# verdict: {}\n", profile.csv(), profile.verdict))
}

#[allow(clippy::too_many_arguments)]
fn cost_curve_cmd(
    cli: &Cli,
    config: &Config,
    source: &Source,
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
    c: Charge,
) -> Outcome {
    if n_min == 0 || n_min > n_max {
        return Err(Failure::Input(format!("need 0 < n-min <= n-max, got {n_min} and {n_max}")));
    }
    let decider = Decider::with_config(&load(source)?, &Config { charge: charge(c), ..*config })?;
    if decider.class() != ComplexityClass::SqrtN {
        return Err(Failure::Refusal(format!(
            "cost curves are for star-free languages (class SqrtN); this language is {}",
            decider.class()
        )));
    }
    let lengths: Vec<usize> =
        std::iter::successors(Some(n_min), |&n| n.checked_mul(2)).take_while(|&n| n <= n_max).collect();
    let rows = cost_curve(&decider, &lengths, samples.max(1), seed, config.strategy)?;
    let slope = loglog_slope(&rows.iter().map(|r| (r.n, r.modeled)).collect::<Vec<_>>());
    let summary = match slope {
        Some(s) => format!("log-log slope of modeled cost: {s:.3}"),
        None => "log-log slope of modeled cost: undefined".to_string(),
    };
    if cli.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(CurveRow::csv(&rows))
}

fn fixtures_cmd(cli: &Cli, config: &Config, name: Option<&str>, list: bool) -> Outcome {
    let mut all = builtin_fixtures();
    if let Some(name) = name {
        all.retain(|f| f.name == name);
        if all.is_empty() {
            return Err(Failure::Input(format!("unknown fixture `{name}`")));
        }
    }
    let mut out = String::new();
    if list {
        for f in &all {
            writeln!(out, "{}\t{}\t{}", f.name, f.expected, f.describe()).unwrap();
        }
        return Ok(out);
    }
    let mut failed = 0;
    for o in run_fixtures(&all, config) {
        let actual = match &o.actual {
            Ok(c) => c.to_string(),
            Err(e) => format!("error: {e}"),
        };
        failed += usize::from(!o.passed());
        match cli.format {
            Format::Text => writeln!(
                out,
                "{:<16} expected {:<10} got {:<10} {}",
                o.name,
                o.expected.to_string(),
                actual,
                verdict(o.passed())
            )
            .unwrap(),
            Format::Records => writeln!(
                out,
                "record=fixture name={} expected={} actual={} pass={}",
                o.name,
                o.expected,
                actual.replace(' ', "_"),
                o.passed()
            )
            .unwrap(),
        }
    }
    if name.is_none() || name == Some("appendix-c") {
        let golden = appendix_c_report()? == APPENDIX_C_GOLDEN;
        failed += usize::from(!golden);
        match cli.format {
            Format::Text => writeln!(out, "{:<16} golden tables {}", "appendix-c", verdict(golden)).unwrap(),
            Format::Records => writeln!(out, "record=golden name=appendix-c pass={golden}").unwrap(),
        }
    }
    if failed > 0 {
        return Err(Failure::Mismatch(format!("{out}{failed} fixture check(s) failed")));
    }
    Ok(out)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Outcome {
    let config = Config {
        monoid_cap: cli.monoid_cap,
        block_cap: cli.block_cap,
        mask_cap: cli.mask_cap,
        strategy: if cli.sequential { Strategy::Sequential } else { Strategy::Parallel },
        ..Config::default()
    };
    match &cli.command {
        Command::Classify { source } => classify_cmd(cli, &config, source),
        Command::Decide { source, word, model, charge } => decide_cmd(cli, &config, source, word, *model, *charge),
        Command::Decompose { source, element } => decompose_cmd(cli, &config, source, element),
        Command::Sensitivity { source, n_max } => sensitivity_cmd(&config, source, *n_max),
        Command::CostCurve { source, n_min, n_max, samples, seed, charge } => {
            cost_curve_cmd(cli, &config, source, *n_min, *n_max, *samples, *seed, *charge)
        }
        Command::Fixtures { all: _, name, list } => fixtures_cmd(cli, &config, name.as_deref(), *list),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            println!("{msg}");
            ExitCode::from(3)
        }
    }
}
