use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use steiner_cli::input::{load_design, load_family, write_output, FamilySource};
use steiner_cli::report::{DesignCertificate, FamilyCertificate, SearchStats};
use steiner_cli::runner::run_search;
use steiner_core::search::{
    DEFAULT_MAX_RESTARTS, DEFAULT_RESTART_NODE_LIMIT, DEFAULT_SEED, DEFAULT_TIME_LIMIT,
};
use steiner_core::{
    design_params, develop, fixture, format_design, format_family, list_fixtures, pair_coverage,
    point_replication, verify_lambda1, GroupSpec, SearchConfig,
};

// stdout writes ignore errors so a closed pipe (`| head`) is not a panic.
macro_rules! outln {
    ($($arg:tt)*) => {{ let _ = writeln!(std::io::stdout(), $($arg)*); }};
}

macro_rules! out {
    ($($arg:tt)*) => {{ let _ = write!(std::io::stdout(), $($arg)*); }};
}

/// Verify, develop and search for (v,k,1) difference families.
#[derive(Debug, Parser)]
#[command(name = "steiner", version)]
struct Cli {
    /// Print a single JSON document instead of text lines.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FamilyInput {
    /// Family file.
    #[arg(conflicts_with = "fixture", required_unless_present = "fixture")]
    path: Option<PathBuf>,

    /// Use a built-in family instead of a file.
    #[arg(long)]
    fixture: Option<String>,
}

impl FamilyInput {
    fn source(&self) -> FamilySource<'_> {
        match (&self.fixture, &self.path) {
            (Some(name), _) => FamilySource::Fixture(name),
            (None, Some(path)) => FamilySource::File(path),
            (None, None) => unreachable!("clap requires one of path or --fixture"),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the λ = 1 difference-family property.
    VerifyFamily(FamilyInput),
    /// Develop a family into a block design.
    Develop {
        #[command(flatten)]
        input: FamilyInput,
        /// Design file to write (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a design is a Steiner system S(2,k,v).
    VerifyDesign { path: PathBuf },
    /// Search for a (v,k,1) difference family.
    Search(SearchArgs),
    /// Show a group's order or the parameters of S(2,k,v).
    Info {
        #[arg(long, conflicts_with = "params", required_unless_present = "params")]
        group: Option<String>,
        #[arg(long, num_args = 2, value_names = ["V", "K"])]
        params: Option<Vec<u64>>,
    },
    /// List built-in families, or export one.
    Fixtures {
        /// Fixture to export as a family file.
        #[arg(long)]
        export: Option<String>,
        /// Output file for --export (stdout when absent).
        #[arg(long, requires = "export")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsFormat {
    Kv,
    Json,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Group, e.g. Z13 or Z5xZ5.
    #[arg(long)]
    group: String,
    #[arg(long)]
    k: usize,
    /// Number of base blocks.
    #[arg(long)]
    blocks: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RESTARTS)]
    restarts: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT.as_secs_f64())]
    time_limit: f64,
    /// Node budget per restart.
    #[arg(long, default_value_t = DEFAULT_RESTART_NODE_LIMIT)]
    node_limit: u64,
    /// Single exhaustive pass in ascending order instead of shuffled restarts.
    #[arg(long)]
    no_shuffle: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Family file to write (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write statistics to this file.
    #[arg(long)]
    stats_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StatsFormat::Kv)]
    stats_format: StatsFormat,
}

/// Process exit status: 0 certified, 1 not certified, 2 usage or input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Verified = 0,
    Failed = 1,
    Usage = 2,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Verified
        } else {
            Status::Failed
        }
    }
}

/// An error carrying the exit status it maps to.
struct Failure(Status, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(Status::Usage, e.into())
    }
}

type CmdResult = std::result::Result<Status, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(&cli) {
        Ok(s) => s,
        Err(Failure(s, e)) => {
            eprintln!("error: {e:#}");
            s
        }
    };
    ExitCode::from(status as u8)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::VerifyFamily(input) => verify_family(input, cli.json),
        Command::Develop { input, out } => develop_cmd(input, out.as_deref(), cli.json),
        Command::VerifyDesign { path } => verify_design(path, cli.json),
        Command::Search(args) => search(args, cli.json),
        Command::Info { group, params } => info(group.as_deref(), params.as_deref(), cli.json),
        Command::Fixtures { export, out } => fixtures(export.as_deref(), out.as_deref()),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn verify_family(input: &FamilyInput, json: bool) -> CmdResult {
    let family = load_family(&input.source())?;
    let report = verify_lambda1(&family);
    let cert = FamilyCertificate::new(&family, &report);
    if json {
        print_json(&cert)?;
    } else {
        let summary = format!(
            "{}/{} differences covered once",
            report.covered_once, report.nonzero_elements
        );
        if report.is_family {
            outln!("λ=1: OK ({summary})");
        } else {
            outln!(
                "λ=1: FAILED ({summary}; {} missing, {} repeated{})",
                report.missing.len(),
                report.repeated.len(),
                if report.divisibility_ok { "" } else { "; divisibility fails" }
            );
        }
        outln!("group={}", cert.group);
        outln!("k={}", cert.k);
        outln!("blocks={}", cert.blocks);
        outln!("divisibility_ok={}", cert.divisibility_ok);
        outln!("missing={}", cert.missing.len());
        outln!("repeated={}", cert.repeated.len());
        outln!("is_family={}", cert.is_family);
    }
    Ok(Status::from_bool(report.is_family))
}

fn develop_cmd(input: &FamilyInput, out: Option<&Path>, json: bool) -> CmdResult {
    let family = load_family(&input.source())?;
    let design = develop(&family).map_err(|e| Failure(Status::Failed, e.into()))?;
    write_output(out, &format_design(&design))?;
    let line = format!(
        "v={} k={} b={}",
        design.v(),
        design.k(),
        design.num_blocks()
    );
    if json {
        let doc = serde_json::json!({
            "v": design.v(),
            "k": design.k(),
            "b": design.num_blocks(),
            "duplicates_merged": design.duplicates_merged(),
        });
        if out.is_some() {
            print_json(&doc)?;
        } else {
            eprintln!("{doc}");
        }
    } else if out.is_some() {
        outln!("{line}");
        if design.duplicates_merged() > 0 {
            outln!("duplicates_merged={}", design.duplicates_merged());
        }
    } else {
        eprintln!("{line}");
    }
    Ok(Status::Verified)
}

fn verify_design(path: &Path, json: bool) -> CmdResult {
    let design = load_design(path)?;
    let report = pair_coverage(&design)?;
    let replication = point_replication(&design);
    let cert = DesignCertificate::new(
        design.v(),
        design.k(),
        design.num_blocks(),
        &report,
        &replication,
    );
    if json {
        print_json(&cert)?;
    } else {
        outln!(
            "pairs covered once: {}/{}",
            cert.pairs_covered_once, cert.pairs_total
        );
        for (m, p) in &cert.histogram {
            outln!("multiplicity {m}: {p} pairs");
        }
        outln!(
            "replication: min={} max={}",
            cert.replication_min, cert.replication_max
        );
        for (a, b, m) in cert.offending_pairs.iter().take(10) {
            outln!("offending pair {{{a}, {b}}} covered {m} times");
        }
        if cert.offending_total > 10 {
            outln!("... {} offending pairs in total", cert.offending_total);
        }
        outln!("is_steiner={}", cert.is_steiner);
    }
    Ok(Status::from_bool(report.is_steiner))
}

fn search(args: &SearchArgs, json: bool) -> CmdResult {
    let spec = GroupSpec::parse(&args.group)?;
    let mut cfg = SearchConfig::new(spec, args.k, args.blocks)?;
    cfg.seed = args.seed;
    cfg.max_restarts = args.restarts;
    cfg.candidate_shuffle = !args.no_shuffle;
    cfg.restart_node_limit = args.node_limit;
    cfg.time_limit = Some(Duration::try_from_secs_f64(args.time_limit)?);
    let outcome = run_search(&cfg, args.workers)?;

    if let Some(family) = &outcome.found {
        write_output(args.out.as_deref(), &format_family(family))?;
    }
    let stats = SearchStats::new(&outcome);
    let text = match args.stats_format {
        StatsFormat::Kv => outcome.key_values(),
        StatsFormat::Json => serde_json::to_string_pretty(&stats)? + "\n",
    };
    if let Some(path) = &args.stats_out {
        write_output(Some(path), &text)?;
    }
    // Stats share stdout only when the family went to a file.
    if args.out.is_some() {
        if json {
            print_json(&stats)?;
        } else {
            out!("{}", outcome.key_values());
        }
    } else {
        eprint!("{}", outcome.key_values());
    }
    eprintln!("elapsed_ms={}", outcome.elapsed.as_millis());
    Ok(Status::from_bool(outcome.found.is_some()))
}

fn info(group: Option<&str>, params: Option<&[u64]>, json: bool) -> CmdResult {
    if let Some(g) = group {
        let spec = GroupSpec::parse(g)?;
        let factors: Vec<String> = spec.factors().iter().map(u32::to_string).collect();
        if json {
            print_json(&serde_json::json!({
                "order": spec.order(),
                "factors": spec.factors(),
            }))?;
        } else {
            outln!("order {}, factors {}", spec.order(), factors.join(","));
        }
        return Ok(Status::Verified);
    }
    let &[v, k] = params.expect("clap requires --group or --params") else {
        unreachable!("clap enforces two values");
    };
    let p = design_params(v, k)?;
    if json {
        print_json(&serde_json::json!({
            "v": p.v, "k": p.k, "b": p.b, "r": p.r, "feasible": p.feasible,
        }))?;
    } else {
        match (p.b, p.r) {
            (Some(b), Some(r)) => outln!("b={b} r={r} feasible"),
            _ => outln!("infeasible"),
        }
    }
    Ok(Status::Verified)
}

fn fixtures(export: Option<&str>, out: Option<&Path>) -> CmdResult {
    match export {
        Some(name) => write_output(out, fixture(name)?.text)?,
        None => {
            for name in list_fixtures() {
                outln!("{name}");
            }
        }
    }
    Ok(Status::Verified)
}
