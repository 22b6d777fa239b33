//! Command-line surface: `info`, `find`, `verify`, `plot`, `export`.
//!
//! Exit codes: 0 success (for `verify`: the rule is exact), 1 inexact rule,
//! 2 search budget exhausted, 3 infeasible rule, 64 usage error, 65 rule
//! file parse/schema failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadforge::optimizer::{search, SearchConfig, SearchReport};
use quadforge::plot::{rule_to_svg, rule_to_svg_projections};
use quadforge::polyspace::{product_exponent_set, trunk_exponent_set, Dim};
use quadforge::quadrature::{gaussian_point_count, savings};
use quadforge::ruleio::{export_csv, export_plain, Provenance, RuleFile};
use quadforge::verifier::{verify_rule, Verdict};

const EXIT_OK: i32 = 0;
const EXIT_INEXACT: i32 = 1;
const EXIT_BUDGET: i32 = 2;
const EXIT_INFEASIBLE: i32 = 3;
const EXIT_USAGE: i32 = 64;
const EXIT_PARSE: i32 = 65;

#[derive(Parser)]
#[command(
    name = "quadforge",
    version,
    about = "Compact quadrature rules for trunk-space products on the unit square and cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print space sizes, the point-count lower bound and ideal savings
    Info {
        /// Spatial dimension (2 or 3)
        #[arg(long)]
        dim: usize,
        /// Polynomial degree of the trunk space
        #[arg(long)]
        p: usize,
        /// Emit machine-readable JSON instead of the table
        #[arg(long)]
        json: bool,
    },
    /// Search for an exact rule and write it as a canonical JSON rule file
    Find {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p: usize,
        /// Manual starting point count (defaults to the lower bound)
        #[arg(long)]
        q: Option<usize>,
        /// Base seed; restart k uses seed + k
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = all cores, 1 = sequential)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Restarts per point count before q is incremented
        #[arg(long = "max-restarts", default_value_t = 500)]
        max_restarts: usize,
        /// Gradient steps per restart
        #[arg(long = "max-iters", default_value_t = 1_000_000)]
        max_iters: usize,
        /// Point counts tried before the budget is exhausted
        #[arg(long = "max-q-increments", default_value_t = 4)]
        max_q_increments: usize,
        /// Convergence threshold on L^2
        #[arg(long, default_value_t = 1e-22)]
        threshold: f64,
        /// Early-stopping window length in iterations
        #[arg(long = "stagnation-window")]
        stagnation_window: Option<usize>,
        /// Minimum improvement of the best L^2 over the window
        #[arg(long = "stagnation-eps")]
        stagnation_eps: Option<f64>,
        /// Accept exact rules that violate the (0,1) bounds or weight sum
        #[arg(long)]
        allow_infeasible: bool,
        /// Output path (defaults to <dim>d-p<p>.json)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the search report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Re-verify a rule file against the independent Gauss oracle
    Verify {
        /// Rule file path, or a bundled rule name resolved in the rules
        /// directory ($QUADFORGE_RULES_DIR, default ./rules)
        file: String,
        /// Absolute tolerance on per-basis-function errors
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Render a rule file as an SVG
    Plot {
        file: String,
        /// Output path (defaults to the rule file name with .svg)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Render a 3D rule as three axis projections
        #[arg(long)]
        projections: bool,
    },
    /// Export a rule file as text for downstream consumption
    Export {
        file: String,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        format: ExportFormat,
        /// Output path (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Plain,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Info { dim, p, json } => cmd_info(dim, p, json),
        Command::Find {
            dim,
            p,
            q,
            seed,
            threads,
            max_restarts,
            max_iters,
            max_q_increments,
            threshold,
            stagnation_window,
            stagnation_eps,
            allow_infeasible,
            out,
            json,
        } => cmd_find(FindArgs {
            dim,
            p,
            q,
            seed,
            threads,
            max_restarts,
            max_iters,
            max_q_increments,
            threshold,
            stagnation_window,
            stagnation_eps,
            allow_infeasible,
            out,
            json,
        }),
        Command::Verify { file, tolerance, json } => cmd_verify(&file, tolerance, json),
        Command::Plot { file, out, projections } => cmd_plot(&file, out, projections),
        Command::Export { file, format, out } => cmd_export(&file, format, out),
    }
}

fn parse_dim(dim: usize) -> Result<Dim, i32> {
    Dim::try_from_usize(dim).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

#[derive(Serialize)]
struct InfoSummary {
    dim: usize,
    p: usize,
    trunk_size: usize,
    product_size: usize,
    q_lower_bound: usize,
    gauss_points: usize,
    ideal_savings: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_info(dim: usize, p: usize, json: bool) -> i32 {
    let d = match parse_dim(dim) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let trunk = match trunk_exponent_set(d, p) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let product = product_exponent_set(&trunk);
    let q_min = product.len().div_ceil(d.size() + 1);
    let q_gauss = gaussian_point_count(d, p);
    let ideal = savings(q_min, d, p);
    let note = (p == 1).then(|| {
        format!(
            "heuristic bound; no exact rule smaller than the {q_gauss}-point tensor baseline is known at p=1"
        )
    });
    let summary = InfoSummary {
        dim,
        p,
        trunk_size: trunk.len(),
        product_size: product.len(),
        q_lower_bound: q_min,
        gauss_points: q_gauss,
        ideal_savings: ideal,
        note,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    } else {
        println!("space {dim}D p={p}");
        println!("  trunk size |T|    = {}", summary.trunk_size);
        println!("  product size |S|  = {}", summary.product_size);
        println!("  q lower bound     = {}", summary.q_lower_bound);
        println!("  gauss baseline q' = {}", summary.gauss_points);
        println!("  ideal savings     = {:.1}%", summary.ideal_savings * 100.0);
        if let Some(note) = &summary.note {
            println!("  note: {note}");
        }
    }
    EXIT_OK
}

struct FindArgs {
    dim: usize,
    p: usize,
    q: Option<usize>,
    seed: u64,
    threads: usize,
    max_restarts: usize,
    max_iters: usize,
    max_q_increments: usize,
    threshold: f64,
    stagnation_window: Option<usize>,
    stagnation_eps: Option<f64>,
    allow_infeasible: bool,
    out: Option<PathBuf>,
    json: bool,
}

fn cmd_find(args: FindArgs) -> i32 {
    let d = match parse_dim(args.dim) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let defaults = SearchConfig::default();
    let config = SearchConfig {
        learning_rate: 1e-2,
        max_inner_iterations: args.max_iters,
        max_restarts_per_q: args.max_restarts,
        convergence_threshold: args.threshold,
        stagnation_window: args.stagnation_window.unwrap_or(defaults.stagnation_window),
        stagnation_epsilon: args.stagnation_eps.unwrap_or(defaults.stagnation_epsilon),
        base_seed: args.seed,
        enforce_feasibility: !args.allow_infeasible,
        q_override: args.q,
        max_q_increments: args.max_q_increments,
        threads: args.threads,
        ..SearchConfig::default()
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let report = match search(d, args.p, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let out_path = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}d-p{}.json", args.dim, args.p)));

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print_search_summary(&report);
    }

    if report.converged {
        let file = RuleFile::from_search(&report, Provenance::current()).expect("converged");
        if let Err(e) = file.save(&out_path) {
            eprintln!("error: cannot write {}: {e}", out_path.display());
            return EXIT_USAGE;
        }
        if !args.json {
            println!("  rule written to   = {}", out_path.display());
        }
        EXIT_OK
    } else {
        let telemetry_path = out_path.with_extension("telemetry.json");
        let body = serde_json::to_string_pretty(&report).expect("serializable");
        if let Err(e) = std::fs::write(&telemetry_path, body + "\n") {
            eprintln!("error: cannot write {}: {e}", telemetry_path.display());
        } else if !args.json {
            println!("  telemetry written = {}", telemetry_path.display());
        }
        eprintln!(
            "search budget exhausted after {} point counts (last q = {})",
            report.per_q.len(),
            report.q_final
        );
        EXIT_BUDGET
    }
}

fn print_search_summary(report: &SearchReport) {
    println!(
        "search {}D p={}: {}",
        report.dim,
        report.p,
        if report.converged { "converged" } else { "budget exhausted" }
    );
    println!("  q attempted       = {}", report.q_attempted);
    println!("  q final           = {}", report.q_final);
    println!("  restarts used     = {}", report.restarts_used);
    println!("  final L           = {:.3e}", report.final_l);
    println!("  final L^2         = {:.3e}", report.final_l_squared);
    println!(
        "  outcomes          = converged {}, stagnated {}, iteration_cap {}, infeasible {}, aborted {}",
        report.outcomes.converged,
        report.outcomes.stagnated,
        report.outcomes.iteration_cap,
        report.outcomes.infeasible,
        report.outcomes.aborted
    );
    println!("  wall time         = {:.1} s", report.wall_time_secs);
    println!("  base seed         = {}", report.base_seed);
}

fn rules_dir() -> PathBuf {
    std::env::var_os("QUADFORGE_RULES_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("rules"))
}

fn resolve_rule_path(arg: &str) -> PathBuf {
    let direct = Path::new(arg);
    if direct.exists() {
        return direct.to_path_buf();
    }
    let named = rules_dir().join(arg);
    if named.exists() {
        return named;
    }
    rules_dir().join(format!("{arg}.json"))
}

fn load_rule_file(arg: &str) -> Result<RuleFile, i32> {
    let path = resolve_rule_path(arg);
    RuleFile::load(&path).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })
}

fn cmd_verify(file: &str, tolerance: f64, json: bool) -> i32 {
    let rule_file = match load_rule_file(file) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let report = match verify_rule(&rule_file.rule, rule_file.degree, tolerance) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        println!(
            "verify {}D p={} q={}: {}",
            report.dim, report.p, report.q, report.verdict
        );
        println!("  max |error|        = {:.3e}", report.max_abs_error);
        println!("  rms error          = {:.3e}", report.rms_error);
        println!("  weight sum dev     = {:.3e}", report.weight_sum_deviation);
        println!("  bounds ok          = {}", report.bounds_ok);
        println!("  oracle points/dim  = {}", report.oracle_points_per_dim);
        println!("  tolerance          = {:.1e}", report.tolerance);
    }
    match report.verdict {
        Verdict::Exact => EXIT_OK,
        Verdict::Inexact => EXIT_INEXACT,
        Verdict::Infeasible => EXIT_INFEASIBLE,
    }
}

fn cmd_plot(file: &str, out: Option<PathBuf>, projections: bool) -> i32 {
    let rule_file = match load_rule_file(file) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let svg = if rule_file.dimension == Dim::Three {
        if !projections {
            eprintln!("error: 3D rules need --projections to render axis projections");
            return EXIT_USAGE;
        }
        rule_to_svg_projections(&rule_file.rule)
    } else {
        rule_to_svg(&rule_file.rule)
    };
    let svg = match svg {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let out_path = out.unwrap_or_else(|| resolve_rule_path(file).with_extension("svg"));
    if let Err(e) = std::fs::write(&out_path, svg) {
        eprintln!("error: cannot write {}: {e}", out_path.display());
        return EXIT_USAGE;
    }
    println!("wrote {}", out_path.display());
    EXIT_OK
}

fn cmd_export(file: &str, format: ExportFormat, out: Option<PathBuf>) -> i32 {
    let rule_file = match load_rule_file(file) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let body = match format {
        ExportFormat::Csv => export_csv(&rule_file.rule),
        ExportFormat::Plain => export_plain(&rule_file.rule),
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            println!("wrote {}", path.display());
        }
        None => print!("{body}"),
    }
    EXIT_OK
}
