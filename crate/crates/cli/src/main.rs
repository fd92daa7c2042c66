mod config;
mod eval;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use toroyang_core::cartan::{CartanDatum, Root};
use toroyang_core::degeneration::{verify_vandermonde, BarPsi, Degenerator, FOrder};
use toroyang_core::qtor::{self, QEngine, RewriteLimits};
use toroyang_core::report::Report;
use toroyang_core::toroidal::Toroidal;
use toroyang_core::weyl::{minimal_expression, DEFAULT_SEARCH_BUDGET};
use toroyang_core::yangian::{self, SpanCaps, YLimits};

use config::{Config, Overrides};
use expr::{parse_expression, Dialect};

#[derive(Parser)]
#[command(name = "toroyang", version, about = "Exact computations for quantum toroidal algebras and affine Yangians")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Optional `key = value` config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Affine type, e.g. A2, C2, G2, B3.
    #[arg(long = "type", global = true)]
    affine_type: Option<String>,
    /// Truncation order D (work modulo hbar^(D+1)).
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Mode window for relation instances.
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Cap on the epsilon expansion used for kappa-orders.
    #[arg(long, global = true)]
    eps_cap: Option<i64>,
    /// Level cap for Yangian relation instances.
    #[arg(long, global = true)]
    level_cap: Option<u32>,
    /// Level cap for Serre relation instances.
    #[arg(long, global = true)]
    serre_cap: Option<u32>,
    /// Rewrite pass limit.
    #[arg(long, global = true)]
    passes: Option<usize>,
    /// Seed for sampled suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Samples per cell for sampled suites.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Treat at-cap and inconclusive results as passing.
    #[arg(long, global = true)]
    allow_at_cap: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan data of an affine type.
    Cartan {
        #[command(subcommand)]
        action: CartanAction,
    },
    /// Positive affine roots.
    Roots {
        #[command(subcommand)]
        action: RootsAction,
    },
    /// Weyl group computations.
    Weyl {
        #[command(subcommand)]
        action: WeylAction,
    },
    /// Classical toroidal Lie algebra checks.
    Toroidal {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Quantum toroidal algebra checks.
    Qtor {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Affine Yangian checks.
    Yangian {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Degeneration checks.
    Degen {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Normal form of an expression.
    Straighten {
        #[arg(long, value_enum)]
        dialect: Dialect,
        #[arg(long)]
        expr: String,
    },
    /// 𝓕-order of a quantum expression.
    Order {
        #[arg(long)]
        expr: String,
    },
}

#[derive(Subcommand)]
enum CartanAction {
    Show,
}

#[derive(Subcommand)]
enum RootsAction {
    List {
        #[arg(long, default_value_t = 1)]
        k_max: i64,
    },
}

#[derive(Subcommand)]
enum WeylAction {
    /// Shortest reflection word carrying a simple root to the given real root.
    Reduce {
        /// Finite coordinates in the simple-root basis, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        finite: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        delta: i64,
    },
}

#[derive(Subcommand)]
enum VerifyAction {
    Verify,
}

#[derive(Subcommand)]
enum SuiteAction {
    Verify {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QtorSuite {
    ClassicalLimit,
    SecondOrder,
    KeyPhi,
    KeyPhiCorrected,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DegenSuite {
    Step1,
    Vandermonde,
    KMembership,
    BkStability,
    Pi,
    PiDoubleHbar,
    Multiplicativity,
    HbarNzd,
    Pbw,
    Theta,
    Injectivity,
    All,
}

enum Failure {
    Usage(String),
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure
where
    E: std::error::Error,
{
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn datum(cfg: &Config) -> Result<CartanDatum, Failure> {
    Ok(CartanDatum::from_name(&cfg.affine_type)?)
}

fn qlimits(cfg: &Config) -> RewriteLimits {
    RewriteLimits { max_passes: cfg.passes, ..RewriteLimits::default() }
}

fn ylimits(cfg: &Config) -> YLimits {
    YLimits { max_passes: cfg.passes, ..YLimits::default() }
}

fn parse_suite<T: ValueEnum>(s: &str) -> Result<T, Failure> {
    T::from_str(s, true).map_err(|_| Failure::Usage(format!("unknown suite `{s}`")))
}

fn emit(report: Report, cfg: &Config, json: Option<&PathBuf>) -> Result<(), Failure> {
    let report = report.sorted();
    for r in &report.records {
        let orders = match (r.f_order, r.expected) {
            (Some(f), Some(e)) => format!(" order={f} expected={e}"),
            _ => String::new(),
        };
        let witness = r.witness.as_deref().map(|w| format!(" -- {w}")).unwrap_or_default();
        println!("{:<12} {} {}{orders}{witness}", r.status.to_string(), r.suite, r.instance);
    }
    println!("{}", report.tally());
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text + "\n")?;
    }
    if report.all_pass(cfg.allow_at_cap) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn qtor_report(cfg: &Config, suite: QtorSuite) -> Result<Report, Failure> {
    let d = datum(cfg)?;
    let engine = QEngine::new(&d, cfg.trunc, qlimits(cfg));
    let mut r = Report::new();
    let all = suite == QtorSuite::All;
    if all || suite == QtorSuite::ClassicalLimit {
        r.extend(qtor::verify_classical_limit_relations(&d, cfg.window, cfg.trunc));
    }
    if all || suite == QtorSuite::SecondOrder {
        r.extend(qtor::verify_qt3_second_order(&d, 6, cfg.trunc));
    }
    if all || suite == QtorSuite::KeyPhi {
        r.extend(qtor::verify_key_phi_suite(&engine, cfg.window, false));
    }
    if all || suite == QtorSuite::KeyPhiCorrected {
        r.extend(qtor::verify_key_phi_suite(&engine, cfg.window, true));
    }
    Ok(r)
}

fn degen_report(cfg: &Config, suite: DegenSuite) -> Result<Report, Failure> {
    let d = datum(cfg)?;
    let g = Degenerator::new(&d, cfg.trunc, cfg.eps_cap, qlimits(cfg));
    let all = suite == DegenSuite::All;
    let on = |s: DegenSuite| all || suite == s;
    let mut r = Report::new();
    if on(DegenSuite::Step1) {
        r.extend(g.verify_step1_exact(cfg.trunc as u32));
    }
    if on(DegenSuite::Vandermonde) {
        r.extend(verify_vandermonde(6));
    }
    if on(DegenSuite::KMembership) {
        r.extend(g.verify_k_membership(cfg.trunc as i64 - 1, cfg.window));
    }
    if on(DegenSuite::BkStability) {
        r.extend(g.verify_bk_stability(2, 2, 2, cfg.samples, cfg.seed));
    }
    if on(DegenSuite::Pi) {
        r.extend(g.verify_pi_relations(cfg.level_cap, cfg.serre_cap, 1));
    }
    if on(DegenSuite::PiDoubleHbar) {
        r.extend(g.verify_pi_relations(cfg.level_cap, cfg.serre_cap, 2));
    }
    if on(DegenSuite::Multiplicativity) {
        r.extend(g.verify_multiplicativity(cfg.samples, cfg.seed));
    }
    if on(DegenSuite::HbarNzd) {
        r.extend(g.verify_hbar_nzd(cfg.samples, cfg.seed));
    }
    if on(DegenSuite::Pbw) {
        r.extend(g.verify_pbw_evidence(cfg.samples, cfg.seed));
    }
    if on(DegenSuite::Theta) {
        r.extend(g.verify_theta(cfg.samples, cfg.seed, 1));
    }
    if on(DegenSuite::Injectivity) {
        let caps = SpanCaps { max_length: 3, max_level: cfg.level_cap, k_max: 1 };
        r.extend(BarPsi::new(&g).verify_injectivity(caps));
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let overrides = Overrides {
        affine_type: g.affine_type.clone(),
        trunc: g.trunc,
        window: g.window,
        eps_cap: g.eps_cap,
        level_cap: g.level_cap,
        serre_cap: g.serre_cap,
        passes: g.passes,
        seed: g.seed,
        samples: g.samples,
        suite: None,
        allow_at_cap: g.allow_at_cap,
    };
    let mut cfg = Config::load(g.config.as_deref(), &overrides)?;
    let json = g.json.as_ref();
    match cli.command {
        Command::Cartan { action: CartanAction::Show } => {
            let d = datum(&cfg)?;
            println!("type {}", d.affine_type);
            println!("cartan matrix a_ij:");
            for row in &d.matrix {
                println!("  {}", row.iter().map(|a| format!("{a:>3}")).collect::<String>());
            }
            println!("symmetrizers d_i:");
            for i in d.nodes() {
                println!("  d_{i} = {}", d.d(i));
            }
            Ok(())
        }
        Command::Roots { action: RootsAction::List { k_max } } => {
            let d = datum(&cfg)?;
            for (root, mult) in d.enumerate_positive_roots(k_max) {
                println!("{root}  multiplicity {mult}");
            }
            Ok(())
        }
        Command::Weyl { action: WeylAction::Reduce { finite, delta } } => {
            let d = datum(&cfg)?;
            let coords = finite.split(',').map(|s| s.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>()?;
            let root = Root::new(coords, delta);
            let (word, simple) = minimal_expression(&root, &d, DEFAULT_SEARCH_BUDGET)?;
            let letters: Vec<String> = word.letters.iter().map(|i| format!("r{i}")).collect();
            println!("{root} = {}(a_{simple})", if letters.is_empty() { String::new() } else { letters.join(" ") + " " });
            Ok(())
        }
        Command::Toroidal { action: VerifyAction::Verify } => {
            let d = datum(&cfg)?;
            emit(Toroidal::new(&d).verify_relations(cfg.window), &cfg, json)
        }
        Command::Yangian { action: VerifyAction::Verify } => {
            let d = datum(&cfg)?;
            emit(yangian::verify_relations(&d, cfg.level_cap, cfg.serre_cap, ylimits(&cfg)), &cfg, json)
        }
        Command::Qtor { action: SuiteAction::Verify { suite } } => {
            cfg.suite = suite.unwrap_or(cfg.suite.clone());
            let s = parse_suite::<QtorSuite>(&cfg.suite)?;
            emit(qtor_report(&cfg, s)?, &cfg, json)
        }
        Command::Degen { action: SuiteAction::Verify { suite } } => {
            cfg.suite = suite.unwrap_or(cfg.suite.clone());
            let s = parse_suite::<DegenSuite>(&cfg.suite)?;
            emit(degen_report(&cfg, s)?, &cfg, json)
        }
        Command::Straighten { dialect, expr } => {
            let d = datum(&cfg)?;
            let e = parse_expression(&expr, dialect)?;
            let n = match dialect {
                Dialect::Quantum => eval::straighten_quantum(&e, &d, cfg.trunc, qlimits(&cfg))?,
                Dialect::Yangian => eval::straighten_yangian(&e, &d, ylimits(&cfg))?,
                Dialect::Classical => eval::straighten_classical(&e, &d)?,
            };
            println!("{}", n.text);
            if n.complete || cfg.allow_at_cap {
                Ok(())
            } else {
                eprintln!("normal form not reached within the rewrite limits");
                Err(Failure::Check)
            }
        }
        Command::Order { expr } => {
            let d = datum(&cfg)?;
            let e = parse_expression(&expr, Dialect::Quantum)?;
            let p = eval::eval_quantum(&e, &d, cfg.trunc)?;
            let g = Degenerator::new(&d, cfg.trunc, cfg.eps_cap, qlimits(&cfg));
            match g.f_order(&p)? {
                FOrder::Exact(n) => println!("f-order {n}"),
                FOrder::AtLeast(n) if cfg.allow_at_cap => println!("f-order >= {n}"),
                FOrder::AtLeast(n) => {
                    println!("f-order >= {n}");
                    return Err(Failure::Check);
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
