//! Command-line front end for the r-robustness toolkit.
//!
//! Exit codes: 0 accept / success, 1 reject (a robustness violation was
//! found and verified), 2 usage or input error, 3 degree precondition
//! not met, 4 internal verification failure.

mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rrobust::seeds::substream_seed;
use rrobust::{
    amplified_test, degree_witness, exact_is_r_robust_with_cap, exact_max_robustness_with_cap,
    generate_planted, sample_size, sampled_test, Digraph, Mode, PlantedSpec, Ratio, TestConfig,
    TestError, TestOutcome, TriPartition, Verdict, VertexSet, DEFAULT_EXACT_VERTEX_CAP,
};

use report::Report;

#[derive(Parser)]
#[command(
    name = "rrobust",
    about = "Decide and approximate the r-robustness of directed graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the minimum in-degree precondition (d_min > 2r + delta).
    Degree(DegreeArgs),
    /// Exact robustness by brute-force enumeration (small graphs).
    Exact(ExactArgs),
    /// Sample-based approximate robustness test.
    Test(TestArgs),
    /// Bracket the maximal robustness in an interval.
    Interval(IntervalArgs),
    /// Generate a planted-partition graph with known robustness.
    Gen(GenArgs),
    /// Reproduce the detection-power sweep over planted instances (CSV).
    Fig3(Fig3Args),
}

#[derive(Args)]
struct DegreeArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    delta: usize,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Test r-robustness for this r.
    #[arg(long, conflicts_with = "max")]
    r: Option<usize>,
    /// Report the maximal robustness instead.
    #[arg(long)]
    max: bool,
    /// Lift the vertex-count guard (enumeration is 3^n).
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    delta: usize,
    /// Overall confidence: repeat the test until the failure probability
    /// drops below sigma.
    #[arg(long, default_value = "1/3")]
    sigma: Ratio,
    /// Sample size per trial.
    #[arg(long, default_value_t = 9, conflicts_with = "guaranteed_t")]
    t: usize,
    /// Use the analysis-grade sample size instead of the practical
    /// default (enumeration is 3^t: infeasible unless delta/n is large).
    #[arg(long)]
    guaranteed_t: bool,
    #[arg(long, value_enum, default_value_t = CliMode::Random)]
    mode: CliMode,
    /// Sampling trials (random mode).
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow graphs that fail the degree precondition: a low-degree
    /// vertex then becomes the witness.
    #[arg(long)]
    arbitrary: bool,
    /// Worker threads (0 = all cores). Results are identical for any
    /// value.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct IntervalArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    delta: usize,
    /// Interval slack: the bracket width is at most (1 + beta) * delta.
    #[arg(long, default_value = "1")]
    beta: Ratio,
    #[arg(long, default_value = "1/10")]
    sigma: Ratio,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    size_a: usize,
    #[arg(long)]
    size_b: usize,
    #[arg(long)]
    rbar: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list path; the ground truth goes to `<path>.truth`.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct Fig3Args {
    /// Planted robustness values to sweep (|A| = |B| = 70 fixed).
    #[arg(long, value_delimiter = ',', conflicts_with = "size_list")]
    rbar_list: Vec<usize>,
    /// Block sizes |A| = |B| to sweep (rbar = 10 fixed).
    #[arg(long, value_delimiter = ',')]
    size_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Exhaustive,
    Random,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Exhaustive => Mode::Exhaustive,
            CliMode::Random => Mode::Random,
        }
    }
}

enum CliError {
    /// Bad input or flags (exit 2).
    Usage(String),
    /// Degree precondition not met (exit 3).
    Precondition(String),
    /// A produced witness failed re-verification (exit 4).
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) | CliError::Internal(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Degree(args) => cmd_degree(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Test(args) => cmd_test(args),
        Command::Interval(args) => cmd_interval(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Fig3(args) => cmd_fig3(args),
    }
}

fn load_graph(path: &Path) -> Result<Digraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    Digraph::parse_edge_list(&text)
        .map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))
}

fn configure_workers(workers: usize) -> Result<(), CliError> {
    if workers == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {} workers: {}", workers, e)))
}

/// Re-derives the reachability facts a witness claims before the report
/// is emitted; a mismatch is an internal error, never a silent answer.
fn verify_witness(g: &Digraph, w: &TriPartition, level: usize) -> Result<(), CliError> {
    let ok = w.is_valid_for(g.n())
        && !g.is_r_reachable(&w.a, level)
        && !g.is_r_reachable(&w.b, level);
    if ok {
        Ok(())
    } else {
        Err(CliError::Internal(format!(
            "witness failed re-verification at level {}",
            level
        )))
    }
}

fn push_witness(report: &mut Report, w: &TriPartition) {
    report.push("witness_a", &w.a);
    report.push("witness_b", &w.b);
    report.push("witness_c", &w.c);
}

fn cmd_degree(args: DegreeArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    if g.n() < 2 {
        return Err(CliError::Usage(format!("graph has {} vertices; need at least 2", g.n())));
    }
    if args.r == 0 {
        return Err(CliError::Usage("r must be positive".into()));
    }
    let (v, d_min) = g.min_in_degree();
    let bound = 2 * args.r + args.delta;
    let holds = d_min > bound;

    let mut report = Report::new("degree");
    report.push("graph_file", args.graph.display());
    report.push("n", g.n());
    report.push("m", g.m());
    report.push("r", args.r);
    report.push("delta", args.delta);
    report.push("degree_bound", bound);
    report.push("d_min", d_min);
    report.push("d_min_vertex", v);
    report.push("assumption_holds", holds);

    if holds {
        report.print(start.elapsed().as_secs_f64());
        Ok(0)
    } else {
        let a = VertexSet::singleton(v);
        let b = a.complement(g.n());
        let witness = TriPartition::new(a, b, VertexSet::empty());
        // the degree pair refutes (2r + delta + 1)-robustness
        verify_witness(&g, &witness, bound + 1)?;
        let witness_r = 1 + g.reach_index(&witness.a).max(g.reach_index(&witness.b));
        report.push("witness_vertex", v);
        report.push("witness_r", witness_r);
        push_witness(&mut report, &witness);
        report.print(start.elapsed().as_secs_f64());
        Ok(1)
    }
}

fn cmd_exact(args: ExactArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let cap = if args.force { g.n() } else { DEFAULT_EXACT_VERTEX_CAP };

    let mut report = Report::new("exact");
    report.push("graph_file", args.graph.display());
    report.push("n", g.n());
    report.push("m", g.m());

    if args.max {
        let rbar = exact_max_robustness_with_cap(&g, cap)
            .map_err(|e| CliError::Usage(format!("{} (pass --force to lift the guard)", e)))?;
        report.push("max_robustness", rbar);
        report.print(start.elapsed().as_secs_f64());
        return Ok(0);
    }

    let r = args
        .r
        .ok_or_else(|| CliError::Usage("pass --r <R> or --max".into()))?;
    let verdict = exact_is_r_robust_with_cap(&g, r, cap)
        .map_err(|e| CliError::Usage(format!("{} (pass --force to lift the guard)", e)))?;
    report.push("r", r);
    report.push("robust", verdict.is_robust());
    match verdict.witness() {
        None => {
            report.print(start.elapsed().as_secs_f64());
            Ok(0)
        }
        Some(w) => {
            verify_witness(&g, w, r)?;
            push_witness(&mut report, w);
            report.print(start.elapsed().as_secs_f64());
            Ok(1)
        }
    }
}

fn map_test_error(e: TestError) -> CliError {
    match e {
        TestError::AssumptionViolated { .. } => CliError::Precondition(format!(
            "{}; re-run with --arbitrary to fall back to the degree witness",
            e
        )),
        other => CliError::Usage(other.to_string()),
    }
}

fn cmd_test(args: TestArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    configure_workers(args.workers)?;
    let g = load_graph(&args.graph)?;
    if !args.sigma.is_proper_probability() {
        return Err(CliError::Usage("sigma must be in (0, 1)".into()));
    }

    let t = if args.guaranteed_t {
        if args.delta == 0 || args.delta > g.n() {
            return Err(CliError::Usage(format!(
                "delta = {} out of range for n = {}",
                args.delta,
                g.n()
            )));
        }
        let t = sample_size(args.delta, g.n(), Ratio::new(1, 3).unwrap());
        eprintln!(
            "warning: guaranteed sample size t = {} means up to 3^{} partitions per trial; \
             this is infeasible unless delta/n is large. The practical default is t = 9.",
            t, t
        );
        t
    } else {
        args.t
    };

    let cfg = TestConfig::practical(args.r, args.delta, args.seed)
        .with_t(t)
        .with_mode(args.mode.into())
        .with_trials(args.trials);

    let mut report = Report::new("test");
    report.push("graph_file", args.graph.display());
    report.push("n", g.n());
    report.push("m", g.m());
    report.push("r", args.r);
    report.push("delta", args.delta);
    report.push("fail_prob", cfg.fail_prob);
    report.push("sigma", args.sigma);
    report.push("t", t);
    report.push(
        "mode",
        match cfg.mode {
            Mode::Exhaustive => "exhaustive",
            Mode::Random => "random",
        },
    );
    report.push("trials", args.trials);
    report.push("seed", args.seed);
    report.push("arbitrary", args.arbitrary);

    if g.n() >= 2 {
        let (_, d_min) = g.min_in_degree();
        report.push("d_min", d_min);
        report.push("degree_bound", 2 * args.r + args.delta);
        report.push("assumption_holds", d_min > 2 * args.r + args.delta);
    }

    // degree gate: without --arbitrary it is a hard precondition; with
    // it, a failing gate is itself the (verified) witness
    let outcome: TestOutcome = if args.arbitrary {
        if args.r == 0 {
            return Err(CliError::Usage("r must be positive".into()));
        }
        if g.n() < 2 {
            return Err(CliError::Usage(format!("graph has {} vertices; need at least 2", g.n())));
        }
        match degree_witness(&g, args.r, args.delta) {
            Some(v) => {
                let a = VertexSet::singleton(v);
                let b = a.complement(g.n());
                let witness = TriPartition::new(a, b, VertexSet::empty());
                let witness_r = 1 + g.reach_index(&witness.a).max(g.reach_index(&witness.b));
                TestOutcome {
                    verdict: Verdict::Reject,
                    witness: Some(witness),
                    witness_r: Some(witness_r),
                    from_degree_check: true,
                    partitions_examined: 0,
                    trial_of_rejection: None,
                    run_of_rejection: None,
                }
            }
            None => amplified_test(&g, &cfg, args.sigma).map_err(map_test_error)?,
        }
    } else {
        amplified_test(&g, &cfg, args.sigma).map_err(map_test_error)?
    };

    report.push(
        "verdict",
        match outcome.verdict {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        },
    );
    report.push("partitions_examined", outcome.partitions_examined);

    match &outcome.witness {
        None => {
            report.print(start.elapsed().as_secs_f64());
            Ok(0)
        }
        Some(w) => {
            // sampled witnesses refute (r + delta)-robustness; degree
            // witnesses refute (2r + delta + 1)-robustness
            let level = if outcome.from_degree_check {
                2 * args.r + args.delta + 1
            } else {
                args.r + args.delta
            };
            verify_witness(&g, w, level)?;
            report.push(
                "witness_kind",
                if outcome.from_degree_check { "degree" } else { "sampled" },
            );
            report.push("refuted_level", level);
            report.push_opt("witness_r", outcome.witness_r);
            report.push_opt("trial_of_rejection", outcome.trial_of_rejection);
            report.push_opt("run_of_rejection", outcome.run_of_rejection);
            push_witness(&mut report, w);
            report.print(start.elapsed().as_secs_f64());
            Ok(1)
        }
    }
}

fn cmd_interval(args: IntervalArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    configure_workers(args.workers)?;
    let g = load_graph(&args.graph)?;
    let est = rrobust::interval_estimate(
        &g,
        args.delta,
        args.beta.num(),
        args.beta.den(),
        args.sigma,
        args.seed,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut report = Report::new("interval");
    report.push("graph_file", args.graph.display());
    report.push("n", g.n());
    report.push("m", g.m());
    report.push("delta", args.delta);
    report.push("beta", args.beta);
    report.push("sigma", args.sigma);
    report.push("seed", args.seed);
    report.push("lo", est.lo);
    report.push("hi", est.hi);
    report.push("width", est.width());
    report.push("iterations", est.iterations);
    report.push("clamped", est.clamped);
    for (i, probe) in est.probes.iter().enumerate() {
        let mut line = format!("r={} {}", probe.r, if probe.accepted { "accept" } else { "reject" });
        if probe.from_degree_check {
            line.push_str(" degree");
        }
        report.push(&format!("probe_{}", i), line);
    }
    report.print(start.elapsed().as_secs_f64());
    Ok(0)
}

fn cmd_gen(args: GenArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let spec = PlantedSpec {
        n: args.n,
        size_a: args.size_a,
        size_b: args.size_b,
        rbar: args.rbar,
        seed: args.seed,
    };
    let (g, truth) = generate_planted(&spec).map_err(|e| CliError::Usage(e.to_string()))?;

    std::fs::write(&args.out, g.write_edge_list())
        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", args.out.display(), e)))?;
    let truth_path = truth_path_for(&args.out);
    std::fs::write(&truth_path, rrobust::generators::write_ground_truth(&truth, args.rbar))
        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", truth_path.display(), e)))?;

    let mut report = Report::new("gen");
    report.push("n", args.n);
    report.push("size_a", args.size_a);
    report.push("size_b", args.size_b);
    report.push("rbar", args.rbar);
    report.push("seed", args.seed);
    report.push("m", g.m());
    report.push("graph_file", args.out.display());
    report.push("truth_file", truth_path.display());
    report.print(start.elapsed().as_secs_f64());
    Ok(0)
}

fn truth_path_for(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".truth");
    PathBuf::from(name)
}

fn cmd_fig3(args: Fig3Args) -> Result<u8, CliError> {
    let start = Instant::now();
    configure_workers(args.workers)?;

    // (label, |A| = |B|, rbar) per setting; n = 200 throughout and
    // delta = 30 (error bound 0.15)
    let settings: Vec<(String, usize, usize)> = if !args.rbar_list.is_empty() {
        args.rbar_list
            .iter()
            .map(|&rbar| (format!("rbar{}_size70", rbar), 70, rbar))
            .collect()
    } else if !args.size_list.is_empty() {
        args.size_list
            .iter()
            .map(|&size| (format!("rbar10_size{}", size), size, 10))
            .collect()
    } else {
        return Err(CliError::Usage(
            "pass --rbar-list or --size-list with at least one setting".into(),
        ));
    };

    let delta = 30;
    let mut csv = String::from("setting,rbar,threshold,detected_r,seconds\n");
    let mut report = Report::new("fig3");
    report.push("settings", settings.len());
    report.push("seed", args.seed);
    report.push("csv_file", args.out.display());

    for (idx, (label, size, rbar)) in settings.iter().enumerate() {
        let graph_seed = substream_seed(args.seed, (1000 + idx) as u64);
        let test_seed = substream_seed(args.seed, (2000 + idx) as u64);
        let spec = PlantedSpec {
            n: 200,
            size_a: *size,
            size_b: *size,
            rbar: *rbar,
            seed: graph_seed,
        };
        let (g, _) = generate_planted(&spec)
            .map_err(|e| CliError::Usage(format!("setting {}: {}", label, e)))?;
        let r = rbar + 1;
        let cfg = TestConfig::practical(r, delta, test_seed);
        let row_start = Instant::now();
        let outcome = sampled_test(&g, &cfg).map_err(map_test_error)?;
        let seconds = row_start.elapsed().as_secs_f64();

        let detected = match (&outcome.witness, outcome.witness_r) {
            (Some(w), Some(witness_r)) => {
                verify_witness(&g, w, r + delta)?;
                Some(witness_r)
            }
            _ => None,
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{:.3}",
            label,
            rbar,
            r + delta,
            detected.map(|d| d.to_string()).unwrap_or_default(),
            seconds
        );
        report.push(
            &format!("setting_{}", label),
            match detected {
                Some(d) => format!("reject detected_r={}", d),
                None => "accept".to_string(),
            },
        );
    }

    std::fs::write(&args.out, &csv)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", args.out.display(), e)))?;
    report.print(start.elapsed().as_secs_f64());
    Ok(0)
}
