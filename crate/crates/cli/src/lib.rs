//! Command-line front end: argument parsing, input validation, dispatch to
//! the scan library, and exit-code mapping.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, invalid inputs,
//! dependent bases), 2 computation or I/O error. Every failure prints a
//! single machine-parseable line `error: <kind>: <message>` to stderr.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use orderlab_core::{
    carmichael_lambda, check_independence, factorize, is_prime, order_mod_n, relation_display,
};
use orderlab_scan::emit::OutputFormat;
use orderlab_scan::{
    baseline, conditions, corollary3, emit, ford, matthews, skalba, theorem1, theorem2, theorem4,
    BucketRule, EpsilonRule, RunnerOpts, ScanConfig, ScanError, XiMode,
};

/// Print to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Print to stderr, ignoring a closed pipe.
macro_rules! say_err {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stderr(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "orderlab", version, about = "Multiplicative-order computations and bulk scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of a modulo n: the eventual period of a, a^2, a^3, ... mod n.
    Order {
        #[arg(long)]
        a: i64,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Carmichael's lambda of n.
    Lambda {
        #[arg(long)]
        n: u64,
    },
    /// Multiplicative-independence verdict for a set of integers.
    Independence {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
    },
    /// Enumerate the exponent box over the given bases.
    Genset {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
        #[arg(long = "N")]
        box_size: u32,
    },
    /// Find m, n with p | a^m + a^n + 1.
    Skalba {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        p: u64,
    },
    /// Five-element order scan over primes up to x.
    ScanThm1 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Generator-box order scan over primes up to x.
    ScanThm2 {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
        #[arg(long = "N")]
        box_size: u32,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Skalba representations over divisors of (2*3*5*7*11)^9.
    ScanCorollary3 {
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Composite-modulus five-element scan over integers up to x.
    ScanThm4 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Per-condition failure densities for the proof-side conditions.
    ScanConditions {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Counts of primes with small joint subgroup, per y in a grid.
    ScanMatthews {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
        #[arg(long = "y-grid", value_delimiter = ',')]
        y_grid: Option<Vec<f64>>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Proportion of primes whose p - 1 has a divisor in (y, z].
    DensityDivisor {
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Fraction of primes with the order of a above sqrt(p).
    Baseline {
        #[arg(long)]
        a: i64,
        #[command(flatten)]
        scan: ScanArgs,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Scan bound (inclusive). Required unless --config supplies one.
    #[arg(long)]
    x: Option<u64>,
    /// JSON scan configuration (the `config` object of any report is
    /// reusable here); explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; falls back to ORDERLAB_THREADS, then all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Moduli per chunk (default 65536); chunks are checkpoint boundaries.
    #[arg(long)]
    chunk: Option<u64>,
    /// Output directory for report files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Both)]
    format: FormatArg,
    /// Checkpoint file; resumes when it exists.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Run the exact proof-invariant assertions while scanning.
    #[arg(long)]
    verify: bool,
    #[arg(long = "epsilon-rule", value_enum)]
    epsilon_rule: Option<EpsilonArg>,
    #[arg(long = "xi", value_enum)]
    xi_mode: Option<XiArg>,
    /// "dyadic" (default) or comma-separated interior bucket boundaries.
    #[arg(long)]
    buckets: Option<String>,
    /// Cap on listed exception rows (default 100000).
    #[arg(long = "max-exceptions")]
    max_exceptions: Option<usize>,
    /// Stop after merging this many chunks (testing hook for kill/resume).
    #[arg(long = "abort-after-chunks", hide = true)]
    abort_after_chunks: Option<u64>,
    /// Print chunk progress to stderr.
    #[arg(long)]
    progress: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum EpsilonArg {
    Default,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum XiArg {
    AtBound,
    PerModulus,
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl From<ScanError> for CliError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::InvalidConfig(_) | ScanError::Structure(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<orderlab_core::OrderError> for CliError {
    fn from(e: orderlab_core::OrderError) -> Self {
        CliError::Compute(e.to_string())
    }
}

/// Parse argv, dispatch, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            use std::io::Write;
            let _ = write!(std::io::stdout(), "{e}");
            return 0;
        }
        Err(e) => {
            let first_line = e.to_string();
            let first_line = first_line.lines().next().unwrap_or("bad arguments");
            say_err!("error: usage: {first_line}");
            return 1;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            say_err!("error: usage: {m}");
            1
        }
        Err(CliError::Compute(m)) => {
            say_err!("error: compute: {m}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Order { a, modulus } => {
            if modulus == 0 {
                return Err(CliError::Usage("modulus must be positive".into()));
            }
            if a == 0 {
                return Err(CliError::Usage("base must be nonzero".into()));
            }
            let order = order_mod_n(a, modulus, &factorize(modulus))?;
            say!("{order}");
            Ok(())
        }
        Command::Lambda { n } => {
            if n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            say!("{}", carmichael_lambda(&factorize(n)));
            Ok(())
        }
        Command::Independence { gens } => {
            let verdict = check_independence(&gens).map_err(usage)?;
            match verdict.relation {
                None => say!("independent"),
                Some(rel) => say!("dependent: {}", relation_display(&gens, &rel)),
            }
            Ok(())
        }
        Command::Genset { gens, box_size } => {
            let set = orderlab_core::build_generator_set(&gens, box_size).map_err(usage)?;
            say!("elements: {}", set.len());
            for i in 0..set.len() {
                let exps: Vec<String> = set.element(i).iter().map(|e| e.to_string()).collect();
                match set.value_exact(i) {
                    Some(v) => say!("{} -> {v}", exps.join(",")),
                    None => say!("{} -> (exceeds 128 bits)", exps.join(",")),
                }
            }
            Ok(())
        }
        Command::Skalba { a, p } => {
            if !is_prime(p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            match skalba::skalba_search(a, p)? {
                Some((m, n)) => say!("m={m} n={n}"),
                None => say!("none"),
            }
            Ok(())
        }
        Command::ScanThm1 { a, b, scan } => {
            let config = build_config(&scan, vec![a, b])?;
            let opts = runner_opts(&scan);
            let report = theorem1::scan_theorem1(a, b, &config, &opts)?;
            say!(
                "scanned {} primes: {} exceptions, {} variant exceptions, {} violations",
                report.stats.scanned,
                report.stats.exceptions,
                report.stats.variant_exceptions,
                report.violations.len()
            );
            let files = emit::emit_theorem1(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::ScanThm2 {
            gens,
            box_size,
            scan,
        } => {
            let config = build_config(&scan, gens.clone())?;
            let opts = runner_opts(&scan);
            let report = theorem2::scan_theorem2(&gens, box_size, &config, &opts)?;
            say!(
                "scanned {} primes: {} exceptions below p^{:.6}, {} violations",
                report.stats.scanned,
                report.stats.exceptions,
                report.stats.delta,
                report.violations.len()
            );
            let files = emit::emit_theorem2(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::ScanCorollary3 { scan } => {
            let config = build_config(&scan, corollary3::BASES.to_vec())?;
            let opts = runner_opts(&scan);
            let report = corollary3::scan_corollary3(&config, &opts)?;
            say!(
                "scanned {} primes: {} witnesses, {} exceptions",
                report.stats.scanned, report.stats.witnesses, report.stats.exceptions
            );
            let files = emit::emit_corollary3(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::ScanThm4 { a, b, scan } => {
            let config = build_config(&scan, vec![a, b])?;
            let opts = runner_opts(&scan);
            let report = theorem4::scan_theorem4(a, b, &config, &opts)?;
            say!(
                "scanned {} integers: {} exceptions, {} product-bound failures",
                report.stats.scanned, report.stats.exceptions, report.stats.prop_failures
            );
            let files = emit::emit_theorem4(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::ScanConditions { a, b, scan } => {
            let config = build_config(&scan, vec![a, b])?;
            let opts = runner_opts(&scan);
            let report = conditions::scan_conditions(a, b, &config, &opts)?;
            say!(
                "scanned {} primes: {} smooth-part, {} squarefree, {} order-bound failures",
                report.stats.scanned,
                report.stats.fail_smooth,
                report.stats.fail_squarefree,
                report.stats.fail_orders
            );
            let files = emit::emit_conditions(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::ScanMatthews { gens, y_grid, scan } => {
            let config = build_config(&scan, gens.clone())?;
            let opts = runner_opts(&scan);
            let grid = y_grid.unwrap_or_else(|| matthews::default_y_grid(config.x));
            let report = matthews::scan_matthews(&gens, &grid, &config, &opts)?;
            for p in &report.points {
                say!("y={} count={}", p.y, p.count);
            }
            match report.slope {
                Some(s) => say!("slope={s:.6}"),
                None => say!("slope=undefined"),
            }
            let files = emit::emit_matthews(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::DensityDivisor { y, z, scan } => {
            let config = build_config(&scan, vec![2])?;
            let opts = runner_opts(&scan);
            let report = ford::divisor_interval_density(y, z, &config, &opts)?;
            say!(
                "proportion={} (hits {} of {})",
                report.proportion, report.hits, report.scanned
            );
            match report.comparison {
                Some(c) => say!("comparison: u={:.6} eta={:.6} value={c:.6}", report.u, report.eta),
                None => say!("comparison: u={:.6} outside (0, 2)", report.u),
            }
            let files = emit::emit_divisor_density(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
        Command::Baseline { a, scan } => {
            let config = build_config(&scan, vec![a])?;
            let opts = runner_opts(&scan);
            let report = baseline::erdos_baseline(a, &config, &opts)?;
            say!(
                "scanned {} primes: fraction above sqrt(p) = {}",
                report.scanned, report.fraction_above
            );
            let files = emit::emit_baseline(&report, &scan.out, format_of(scan.format))?;
            print_files(&files);
            Ok(())
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        say!("wrote {}", f.display());
    }
}

fn format_of(arg: FormatArg) -> OutputFormat {
    match arg {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Both => OutputFormat::Both,
    }
}

fn build_config(args: &ScanArgs, bases: Vec<i64>) -> Result<ScanConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str::<ScanConfig>(&text).map_err(|e| {
                CliError::Usage(format!("bad config {}: {e}", path.display()))
            })?
        }
        None => {
            let x = args
                .x
                .ok_or_else(|| CliError::Usage("--x is required without --config".into()))?;
            ScanConfig::new(x, Vec::new())
        }
    };
    // The subcommand's own flags define the bases; other explicit flags
    // override file values.
    config.bases = bases;
    if let Some(x) = args.x {
        config.x = x;
    }
    if let Some(chunk) = args.chunk {
        config.chunk_size = chunk;
    }
    if args.verify {
        config.verify = true;
    }
    if let Some(rule) = args.epsilon_rule {
        config.epsilon_rule = match rule {
            EpsilonArg::Default => EpsilonRule::Default,
            EpsilonArg::Zero => EpsilonRule::Zero,
        };
    }
    if let Some(mode) = args.xi_mode {
        config.xi_mode = match mode {
            XiArg::AtBound => XiMode::AtBound,
            XiArg::PerModulus => XiMode::PerModulus,
        };
    }
    if let Some(buckets) = &args.buckets {
        config.buckets = parse_buckets(buckets)?;
    }
    if let Some(max) = args.max_exceptions {
        config.max_exceptions = max;
    }
    config.validate().map_err(CliError::from)?;
    Ok(config)
}

fn parse_buckets(spec: &str) -> Result<BucketRule, CliError> {
    if spec == "dyadic" {
        return Ok(BucketRule::Dyadic);
    }
    let bounds: Result<Vec<u64>, _> = spec.split(',').map(|s| s.trim().parse::<u64>()).collect();
    match bounds {
        Ok(b) if !b.is_empty() => Ok(BucketRule::Explicit(b)),
        _ => Err(CliError::Usage(format!(
            "--buckets expects \"dyadic\" or a comma-separated integer list, got {spec:?}"
        ))),
    }
}

fn runner_opts(args: &ScanArgs) -> RunnerOpts {
    let threads = args
        .threads
        .or_else(|| {
            std::env::var("ORDERLAB_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    RunnerOpts {
        threads,
        checkpoint: args.checkpoint.clone(),
        abort_after_chunks: args.abort_after_chunks,
        progress: args.progress,
    }
}
