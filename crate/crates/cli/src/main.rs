//! Command-line front end: constructions, verifiers, universal-graph
//! reports, exhaustive searches, embedded fixtures, and the selftest suite.
//!
//! Exit codes: 0 success / certificate valid, 1 certificate invalid,
//! 2 usage or parse errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::traits::Zero;

use epcodes_core::codes::{self, Certificate, Code};
use epcodes_core::construct;
use epcodes_core::galois::{next_prime_power, FieldSpec};
use epcodes_core::hypergraph::{
    strong_chromatic, ChromaticStatus, ColorMode, Hypergraph, DEFAULT_NODE_BUDGET,
    DEFAULT_PG_VERTEX_CAP,
};
use epcodes_core::rational;
use epcodes_core::search::{self, Outcome, SearchLimits};
use epcodes_core::selftest;
use epcodes_core::universal::{self, CoverFamily, VertexFamily};

#[derive(Parser)]
#[command(
    name = "epcodes",
    about = "Erasure codes with restricted decoding sets: constructions, verifiers, and certificates",
    version
)]
struct Cli {
    /// Seed for all randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker cap for edge-parallel verification.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or inspect a hypergraph; optionally color it.
    Hypergraph(HypergraphArgs),
    /// Construct codes (compose | pg | avg) and optionally verify them.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Verify a code against a hypergraph (exact, per-edge, or average).
    Verify(VerifyArgs),
    /// Universal-graph reports: enum | cover | color | clique | stats.
    Universal(UniversalArgs),
    /// Exhaustive minimum-alphabet search on tiny instances.
    Search(SearchArgs),
    /// Embedded reference codes.
    #[command(subcommand)]
    Fixtures(FixturesCommand),
    /// Run the built-in verification suite.
    Selftest,
}

#[derive(Args)]
struct HypergraphArgs {
    /// File path or shorthand: complete:N:K | fano-complement | pg:Q:K
    spec: String,
    /// Replace the hypergraph by its 2-section before reporting.
    #[arg(long)]
    two_section: bool,
    /// Compute a strong coloring.
    #[arg(long, value_enum)]
    color: Option<ColorArg>,
    /// Node budget for the exact coloring search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Write the hypergraph to a file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorArg {
    Exact,
    Greedy,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Color a hypergraph and compose a base code along the coloring.
    Compose(ComposeArgs),
    /// The linear code over all normalized vectors of F^k.
    Pg(PgArgs),
    /// The average-error code for the complete graph over alphabet P.
    Avg(AvgArgs),
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(long)]
    hypergraph: String,
    /// Base code (fixture name or file); defaults to a Reed-Solomon code
    /// over the smallest prime power admitting the coloring.
    #[arg(long)]
    base: Option<String>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ColorArg,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify the composed code and print the certificate.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct PgArgs {
    /// Field size (must be a prime power).
    #[arg(long)]
    field: u64,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_PG_VERTEX_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct AvgArgs {
    /// Alphabet size (must be a prime power).
    #[arg(long)]
    p: u64,
    /// Number of vertices of the complete graph.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Code to verify (fixture name or file).
    #[arg(long)]
    code: String,
    /// Hypergraph of decoding sets (file or shorthand).
    #[arg(long)]
    hypergraph: String,
    /// Per-edge error tolerance (rational, e.g. 1/3).
    #[arg(long, conflicts_with = "avg_eps")]
    eps: Option<String>,
    /// Edge-averaged error tolerance (rational).
    #[arg(long)]
    avg_eps: Option<String>,
}

#[derive(Args)]
struct UniversalArgs {
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    action: ActionArg,
    /// Samples for the stats action's seeded home sampling.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FamilyArg {
    /// Balanced vectors, exact adjacency.
    Gq,
    /// Permutation blocks, exact adjacency.
    Hq,
    /// Cyclic blocks.
    HqCyclic,
    /// Cyclic blocks at error 1/q.
    HqCyclicEps,
    /// Permutation blocks at error 1/q.
    HqEps,
    /// Unrestricted vectors at error 1/q.
    GqEps,
}

impl FamilyArg {
    fn vertex_family(self) -> VertexFamily {
        match self {
            FamilyArg::Gq => VertexFamily::Balanced,
            FamilyArg::Hq | FamilyArg::HqEps => VertexFamily::PermBlocks,
            FamilyArg::HqCyclic | FamilyArg::HqCyclicEps => VertexFamily::CyclicShifts,
            FamilyArg::GqEps => VertexFamily::Unrestricted,
        }
    }

    fn cover_family(self) -> Result<CoverFamily> {
        Ok(match self {
            FamilyArg::Gq => CoverFamily::Gq,
            FamilyArg::Hq => CoverFamily::Hq,
            FamilyArg::HqCyclicEps => CoverFamily::HqCyclicEps,
            FamilyArg::HqEps => CoverFamily::HqEps,
            FamilyArg::GqEps => CoverFamily::GqEps,
            FamilyArg::HqCyclic => {
                bail!("no canonical cover for hq-cyclic at exact adjacency; use hq-cyclic-eps")
            }
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    /// Print all vertices as digit strings, one per line.
    Enum,
    /// Print the canonical independent-set cover, one set per line.
    Cover,
    /// Color the vertex set by the cover and validate.
    Color,
    /// Extract a clique from a Reed-Solomon code.
    Clique,
    /// Counts and closed forms.
    Stats,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    hypergraph: String,
    /// Per-edge error tolerance (rational); 0 means exact decoding.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    qmax: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Where to write a found witness code.
    #[arg(long, default_value = "witness.code")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Names and shapes of the embedded codes.
    List,
    /// Print a fixture in the code file format.
    Show { name: String },
    /// Write a fixture to a file.
    Export {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes, like other line-oriented
    // tools
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Hypergraph(args) => cmd_hypergraph(args),
        Command::Construct(command) => cmd_construct(command, jobs),
        Command::Verify(args) => cmd_verify(args, jobs),
        Command::Universal(args) => cmd_universal(args, cli.seed),
        Command::Search(args) => cmd_search(args),
        Command::Fixtures(command) => cmd_fixtures(command),
        Command::Selftest => cmd_selftest(cli.seed),
    }
}

// --- input resolution ----------------------------------------------------------

fn load_hypergraph(spec: &str) -> Result<Hypergraph> {
    if spec == "fano-complement" {
        return Ok(Hypergraph::fano_complement());
    }
    if let Some(rest) = spec.strip_prefix("complete:") {
        let (n, k) = split_pair(rest)
            .with_context(|| format!("shorthand `{spec}` should be complete:N:K"))?;
        return Ok(Hypergraph::complete(n, k)?);
    }
    if let Some(rest) = spec.strip_prefix("pg:") {
        let (q, k) =
            split_pair(rest).with_context(|| format!("shorthand `{spec}` should be pg:Q:K"))?;
        let field = FieldSpec::new(q as u64)?;
        return Ok(Hypergraph::pg(&field, k, DEFAULT_PG_VERTEX_CAP)?);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("cannot read hypergraph file `{spec}`"))?;
    Hypergraph::parse(&text).with_context(|| format!("in hypergraph file `{spec}`"))
}

fn split_pair(rest: &str) -> Result<(usize, usize)> {
    let (a, b) = rest
        .split_once(':')
        .ok_or_else(|| anyhow!("expected two `:`-separated integers"))?;
    Ok((a.parse()?, b.parse()?))
}

fn load_code(spec: &str) -> Result<Code> {
    if let Some(fixture) = codes::fixture(spec) {
        return Ok(fixture.code);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("cannot read code file `{spec}` (not a fixture name either)"))?;
    Code::parse(&text).with_context(|| format!("in code file `{spec}`"))
}

fn parse_eps(text: &str, flag: &str) -> Result<BigRational> {
    rational::parse(text).map_err(|message| anyhow!("--{flag}: {message}"))
}

fn write_out(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .with_context(|| format!("cannot write `{}`", path.display()))?;
    println!("out {}", path.display());
    Ok(())
}

// --- subcommands ----------------------------------------------------------------

fn cmd_hypergraph(args: HypergraphArgs) -> Result<u8> {
    let mut g = load_hypergraph(&args.spec)?;
    if args.two_section {
        g = g.two_section();
    }
    println!("n {}", g.n());
    println!("k {}", g.k());
    println!("edges {}", g.edge_count());
    if let Some(mode) = args.color {
        let mode = match mode {
            ColorArg::Exact => ColorMode::Exact,
            ColorArg::Greedy => ColorMode::Greedy,
        };
        let result = strong_chromatic(&g, mode, args.budget);
        println!("colors {}", result.coloring.color_count());
        println!("lower_bound {}", result.lower_bound);
        println!(
            "status {}",
            match result.status {
                ChromaticStatus::Exact => "exact",
                ChromaticStatus::BoundOnly => "bound-only",
            }
        );
        println!("nodes {}", result.nodes);
        let colors: Vec<String> = result
            .coloring
            .colors()
            .iter()
            .map(|c| (c + 1).to_string())
            .collect();
        println!("coloring {}", colors.join(" "));
    }
    if let Some(path) = &args.out {
        write_out(path, &g.to_text())?;
    }
    Ok(0)
}

fn cmd_construct(command: ConstructCommand, jobs: usize) -> Result<u8> {
    match command {
        ConstructCommand::Compose(args) => {
            let g = load_hypergraph(&args.hypergraph)?;
            let mode = match args.mode {
                ColorArg::Exact => ColorMode::Exact,
                ColorArg::Greedy => ColorMode::Greedy,
            };
            let result = strong_chromatic(&g, mode, args.budget);
            let chi = result.coloring.color_count();
            println!("colors {chi}");
            let base = match &args.base {
                Some(spec) => load_code(spec)?,
                None => {
                    let base_len = chi.max(g.k());
                    let q = next_prime_power(base_len.saturating_sub(1) as u64);
                    println!("base_field {q}");
                    let field = FieldSpec::new(q)?;
                    codes::rs_code(&field, base_len, g.k())?
                }
            };
            let code = construct::compose(&g, &result.coloring, &base)?;
            emit_code(&code, args.out.as_ref())?;
            if args.verify {
                let cert = code.verify_exact_jobs(&g, jobs)?;
                print!("{cert}");
                return Ok(u8::from(!cert.valid));
            }
            Ok(0)
        }
        ConstructCommand::Pg(args) => {
            let field = FieldSpec::new(args.field)?;
            let code = construct::pg_linear_code(&field, args.k, args.cap)?;
            emit_code(&code, args.out.as_ref())?;
            if args.verify {
                let g = Hypergraph::pg(&field, args.k, args.cap)?;
                let cert = code.verify_exact_jobs(&g, jobs)?;
                print!("{cert}");
                return Ok(u8::from(!cert.valid));
            }
            Ok(0)
        }
        ConstructCommand::Avg(args) => {
            let code = construct::average_error_code(args.p, args.n)?;
            emit_code(&code, args.out.as_ref())?;
            if args.verify {
                let g = Hypergraph::complete(args.n, 2)?;
                let tolerance = BigRational::new(1.into(), (args.p as i64 + 1).into());
                println!(
                    "bound {}",
                    rational::format(&construct::average_error_lower_bound(args.p, args.n))
                );
                let cert = code.verify_avg_jobs(&g, &tolerance, jobs)?;
                print!("{cert}");
                return Ok(u8::from(!cert.valid));
            }
            Ok(0)
        }
    }
}

fn emit_code(code: &Code, out: Option<&PathBuf>) -> Result<()> {
    println!("q {}", code.q());
    println!("k {}", code.k());
    println!("n {}", code.n());
    match out {
        Some(path) => write_out(path, &code.to_text()),
        None => {
            print!("{}", code.to_text());
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs, jobs: usize) -> Result<u8> {
    let code = load_code(&args.code)?;
    let g = load_hypergraph(&args.hypergraph)?;
    println!("code {}", args.code);
    println!("hypergraph {}", args.hypergraph);
    let cert: Certificate = if let Some(eps) = &args.avg_eps {
        let eps = parse_eps(eps, "avg-eps")?;
        code.verify_avg_jobs(&g, &eps, jobs)?
    } else if let Some(eps) = &args.eps {
        let eps = parse_eps(eps, "eps")?;
        if eps.is_zero() {
            code.verify_exact_jobs(&g, jobs)?
        } else {
            code.verify_eps_jobs(&g, &eps, jobs)?
        }
    } else {
        code.verify_exact_jobs(&g, jobs)?
    };
    print!("{cert}");
    Ok(u8::from(!cert.valid))
}

fn cmd_universal(args: UniversalArgs, seed: u64) -> Result<u8> {
    let q = args.q;
    match args.action {
        ActionArg::Enum => {
            let vertices = universal::enumerate_vertices(q, args.family.vertex_family())?;
            for v in &vertices {
                println!("{v}");
            }
            Ok(0)
        }
        ActionArg::Cover => {
            let cover = universal::canonical_cover(q, args.family.cover_family()?)?;
            for set in &cover {
                println!("{set}");
            }
            Ok(0)
        }
        ActionArg::Color => {
            let family = args.family.cover_family()?;
            let vertices = universal::enumerate_vertices(q, family.vertex_family())?;
            let cover = universal::canonical_cover(q, family)?;
            let coloring = universal::coloring_from_cover(&cover, &vertices)?;
            let eps = family.epsilon(q);
            let valid = universal::validate_universal_coloring(&vertices, &coloring, &eps)?;
            println!("vertices {}", vertices.len());
            println!("cover_sets {}", cover.len());
            println!("colors {}", coloring.color_count());
            println!("epsilon {}", rational::format(&eps));
            println!("valid {valid}");
            Ok(u8::from(!valid))
        }
        ActionArg::Clique => {
            let field = FieldSpec::new(q as u64)?;
            let code = codes::rs_code(&field, q + 1, 2)?;
            let clique = universal::clique_from_mds(&code)?;
            println!("clique_size {}", clique.len());
            for v in &clique {
                println!("{v}");
            }
            Ok(0)
        }
        ActionArg::Stats => {
            let family = args.family.vertex_family();
            match universal::vertex_count(q, family) {
                Ok(count) => println!("vertices {count}"),
                Err(_) => println!("vertices overflow"),
            }
            if let Ok(cover_family) = args.family.cover_family() {
                match universal::cover_size_formula(q, cover_family) {
                    Ok(size) => println!("cover_sets {size}"),
                    Err(_) => println!("cover_sets overflow"),
                }
                println!(
                    "cover_epsilon {}",
                    rational::format(&cover_family.epsilon(q))
                );
            }
            if args.family == FamilyArg::GqEps && q >= 4 {
                let found = universal::sample_canonical_homes(q, args.samples, seed)?;
                println!("seed {seed}");
                println!("home_samples {}", args.samples);
                println!("homes_found {found}");
            }
            Ok(0)
        }
    }
}

fn cmd_search(args: SearchArgs) -> Result<u8> {
    let g = load_hypergraph(&args.hypergraph)?;
    let eps = match &args.eps {
        Some(text) => parse_eps(text, "eps")?,
        None => BigRational::zero(),
    };
    let limits = SearchLimits {
        node_budget: args.budget,
        ..SearchLimits::default()
    };
    let start = Instant::now();
    let result = search::q_exact(&g, &eps, args.qmax, &limits)?;
    let elapsed = start.elapsed().as_millis();
    match result.outcome {
        Outcome::Found((q, code)) => {
            println!("verdict found");
            println!("q {q}");
            std::fs::write(&args.out, code.to_text())
                .with_context(|| format!("cannot write `{}`", args.out.display()))?;
            println!("witness {}", args.out.display());
        }
        Outcome::Absent => println!("verdict absent"),
        Outcome::Unknown => println!("verdict unknown (budget)"),
    }
    println!("nodes {}", result.nodes);
    println!("time_ms {elapsed}");
    Ok(0)
}

fn cmd_fixtures(command: FixturesCommand) -> Result<u8> {
    match command {
        FixturesCommand::List => {
            for fx in codes::fixtures() {
                println!(
                    "{} q={} k={} n={} eps={} {}",
                    fx.name,
                    fx.code.q(),
                    fx.code.k(),
                    fx.code.n(),
                    rational::format(&fx.epsilon),
                    fx.summary
                );
            }
            Ok(0)
        }
        FixturesCommand::Show { name } => {
            let fx = codes::fixture(&name)
                .ok_or_else(|| anyhow!("unknown fixture `{name}` (try `fixtures list`)"))?;
            print!("{}", fx.code.to_text());
            Ok(0)
        }
        FixturesCommand::Export { name, out } => {
            let fx = codes::fixture(&name)
                .ok_or_else(|| anyhow!("unknown fixture `{name}` (try `fixtures list`)"))?;
            write_out(&out, &fx.code.to_text())?;
            Ok(0)
        }
    }
}

fn cmd_selftest(seed: u64) -> Result<u8> {
    let outcomes = selftest::run_all(seed);
    let mut all_passed = true;
    let mut table = String::new();
    for outcome in &outcomes {
        let verdict = if outcome.passed { "pass" } else { "fail" };
        writeln!(table, "check {} {} {}", outcome.id, outcome.name, verdict)?;
        for detail in &outcome.details {
            writeln!(table, "  {detail}")?;
        }
        all_passed &= outcome.passed;
    }
    print!("{table}");
    println!("selftest {}", if all_passed { "pass" } else { "fail" });
    Ok(u8::from(!all_passed))
}
