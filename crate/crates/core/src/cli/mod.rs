//! Command-line front end: `gossip`, `queue`, `sweep`, `bounds` and `replay`.
//!
//! Every CSV starts with `#` lines holding the tool version and the fully
//! resolved command. `replay` reruns that command and compares the result
//! byte for byte. Worker counts and output paths are not part of the echoed
//! command since they do not change the data.
//!
//! Exit codes: 0 success, 1 usage or invalid parameters, 2 runtime failure
//! (timeslot cap hit, bound violated, replay mismatch), 3 I/O.

mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bounds::{run_check, BoundCheck};
use crate::field::FieldSpec;
use crate::gossip::{run_batch, Algorithm, GossipError, SimConfig, TimeModel, TrialResult};
use crate::graph::{load_edge_list, Graph, Topology};
use crate::queue::{run_queue_batch, Arrivals, DummyInit, QueueNetwork, RootRole, Scheduler, ServiceDist};
use crate::rng::mix_seed;
use crate::stats::{compare_growth_models, estimate_stopping, ScalingReport, StoppingEstimate};

pub use output::{g17, write_atomic, COMMAND_PREFIX, TOOL, VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "algossip", version, about = "Algebraic gossip and queueing-network experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run gossip trials, one CSV row per trial.
    Gossip(GossipArgs),
    /// Run trials of a network of queues built from a BFS tree.
    Queue(QueueArgs),
    /// Gossip trials over several sizes, summarized per size.
    Sweep(SweepArgs),
    /// Compare closed-form tail bounds with Monte Carlo tails.
    Bounds(BoundsArgs),
    /// Rerun the command echoed in a CSV header and compare the output.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Generated graph family.
    #[arg(long, requires = "n", conflicts_with = "graph")]
    topology: Option<Topology>,
    /// Number of nodes of the generated graph.
    #[arg(long, requires = "topology", value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    /// Edge-list file: first line `n <count>`, then `u v` per line.
    #[arg(long, alias = "from-graph")]
    graph: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<(Graph, Vec<String>), CliError> {
        match (&self.topology, self.n, &self.graph) {
            (Some(t), Some(n), None) => {
                let g = Graph::generate(*t, n as usize).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((g, vec!["--topology".into(), t.name().into(), "--n".into(), n.to_string()]))
            }
            (None, None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let g = load_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                Ok((g, vec!["--graph".into(), path.display().to_string()]))
            }
            _ => Err(CliError::Usage("give either --topology with --n, or --graph".into())),
        }
    }

    fn label(&self) -> String {
        self.topology.map_or_else(|| "file".into(), |t| t.name().into())
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Base seed; trial k uses a seed mixed from this and k.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GossipParams {
    /// Field size; must be prime. A message carries `ceil(r log2 q) + ceil(n log2 q)`
    /// bits, each term rounded up separately.
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value = "exchange")]
    algo: Algorithm,
    #[arg(long = "time", default_value = "async")]
    time_model: TimeModel,
    /// Timeslot cap per trial (default 64 * max_degree * n^2).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_timeslots: Option<u64>,
    /// Sync only: drop a second message from the same sender within a round.
    #[arg(long)]
    drop_duplicate_round_msgs: bool,
}

impl GossipParams {
    fn config(&self, graph: Graph, seed: u64) -> Result<SimConfig, CliError> {
        let field = FieldSpec::new(self.q).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut cfg = SimConfig::new(graph, field, self.time_model, self.algo, seed);
        cfg.max_timeslots = self.max_timeslots;
        cfg.drop_duplicate_round_msgs = self.drop_duplicate_round_msgs;
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn argv(&self, cap: Option<u64>) -> Vec<String> {
        let mut v = vec![
            "--q".into(),
            self.q.to_string(),
            "--algo".into(),
            self.algo.name().into(),
            "--time".into(),
            self.time_model.name().into(),
        ];
        if let Some(c) = cap {
            v.extend(["--max-timeslots".into(), c.to_string()]);
        }
        if self.drop_duplicate_round_msgs {
            v.push("--drop-duplicate-round-msgs".into());
        }
        v
    }
}

#[derive(Debug, Args)]
struct GossipArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    params: GossipParams,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum System {
    /// One queue per node, work-conserving.
    Tree,
    /// The tree with one active server per level.
    TreeLevel,
    /// Each level merged into one queue.
    Line,
    /// The line with every customer moved to the farthest queue.
    LineAllBack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ServiceKind {
    Geom,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoleArg {
    Sink,
    Server,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchedulerArg {
    Wc,
    Level,
}

fn parse_arrivals(s: &str) -> Result<Arrivals, String> {
    match s {
        "resident" => Ok(Arrivals::Resident),
        "farthest" => Ok(Arrivals::AllAtFarthest),
        _ => {
            let rate = s
                .strip_prefix("poisson:")
                .ok_or_else(|| format!("expected resident, farthest or poisson:<rate>, got {s:?}"))?;
            rate.parse::<f64>()
                .map(Arrivals::OpenPoisson)
                .map_err(|_| format!("bad Poisson rate {rate:?}"))
        }
    }
}

fn arrivals_name(a: Arrivals) -> String {
    match a {
        Arrivals::Resident => "resident".into(),
        Arrivals::AllAtFarthest => "farthest".into(),
        Arrivals::OpenPoisson(l) => format!("poisson:{}", g17(l)),
    }
}

#[derive(Debug, Args)]
struct QueueArgs {
    #[arg(long, value_enum)]
    system: System,
    #[command(flatten)]
    graph: GraphArgs,
    /// BFS root; customers leave the network through it.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// `sink`: the root only collects (n - 1 customers); `server`: the root
    /// is a queue too (n customers).
    #[arg(long, value_enum, default_value = "sink")]
    root_role: RoleArg,
    #[arg(long, value_enum)]
    service: ServiceKind,
    /// Success probability (geom) or rate (exp) of every server.
    #[arg(long)]
    p: f64,
    /// `resident`, `farthest` or `poisson:<rate>`.
    #[arg(long, default_value = "resident", value_parser = parse_arrivals)]
    arrivals: Arrivals,
    /// Overrides the scheduler implied by --system.
    #[arg(long, value_enum)]
    scheduler: Option<SchedulerArg>,
    /// Start every queue with an equilibrium number of dummy customers at
    /// this load.
    #[arg(long)]
    warm_start: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    topology: Topology,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    n: Vec<u64>,
    #[command(flatten)]
    params: GossipParams,
    #[command(flatten)]
    run: RunArgs,
    /// Text report with the log-log fit.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Which bound to check, or `all`.
    #[arg(long, default_value = "all")]
    check: String,
    /// Monte Carlo samples per parameter point.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// CSV written by this tool.
    file: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Also write the regenerated CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Result of a data-producing command.
struct Produced {
    csv: String,
    report: Option<String>,
    /// Set when the data is complete but signals a failure (exit 2).
    failure: Option<String>,
}

fn gossip_rows(csv: &mut String, results: &[TrialResult], q: u32, topology: &str, p: &GossipParams) {
    for (k, r) in results.iter().enumerate() {
        writeln!(
            csv,
            "{k},{},{q},{topology},{},{},{},{},{},{},{},{}",
            r.n,
            p.algo,
            p.time_model,
            r.t,
            g17(r.rounds()),
            r.messages_sent,
            r.helpful_received,
            r.helpful_node_transmissions,
            r.capped
        )
        .expect("writing to a String");
    }
}

fn gossip_error(e: GossipError) -> CliError {
    match e {
        GossipError::Config(_) | GossipError::Field(_) | GossipError::NoTrials | GossipError::NoWorkers => {
            CliError::Usage(e.to_string())
        }
        GossipError::Pool(_) => CliError::Runtime(e.to_string()),
    }
}

fn run_gossip(a: &GossipArgs) -> Result<Produced, CliError> {
    let (graph, graph_argv) = a.graph.load()?;
    let cfg = a.params.config(graph, a.run.seed)?;
    let results = run_batch(&cfg, a.run.trials as usize, a.run.workers as usize).map_err(gossip_error)?;
    let mut argv = vec!["gossip".to_string()];
    argv.extend(graph_argv);
    argv.extend(a.params.argv(Some(cfg.cap())));
    argv.extend(["--trials".into(), a.run.trials.to_string(), "--seed".into(), a.run.seed.to_string()]);
    let notes = vec![format!("graph: n={} edges={} max_degree={}", cfg.graph.n(), cfg.graph.edge_count(), cfg.graph.max_degree())];
    let mut csv = output::header(&argv, &notes);
    csv.push_str("trial,n,q,topology,algo,time_model,T,R,messages_sent,helpful_received,helpful_node_transmissions,capped\n");
    gossip_rows(&mut csv, &results, a.params.q, &a.graph.label(), &a.params);
    let capped = results.iter().filter(|r| r.capped).count();
    let failure = (capped > 0).then(|| {
        format!("{capped} of {} trials hit the timeslot cap of {}", results.len(), cfg.cap())
    });
    Ok(Produced { csv, report: None, failure })
}

fn run_queue(a: &QueueArgs) -> Result<Produced, CliError> {
    let usage = |e: crate::queue::QueueError| CliError::Usage(e.to_string());
    let (graph, graph_argv) = a.graph.load()?;
    if a.root >= graph.n() {
        return Err(CliError::Usage(format!("root {} out of range (n = {})", a.root, graph.n())));
    }
    let service = match a.service {
        ServiceKind::Geom => ServiceDist::Geometric(a.p),
        ServiceKind::Exp => ServiceDist::Exponential(a.p),
    };
    let role = match a.root_role {
        RoleArg::Sink => RootRole::Sink,
        RoleArg::Server => RootRole::Server,
    };
    let tree = QueueNetwork::tree(&graph.bfs_tree(a.root), role, service).map_err(usage)?;
    let (mut net, default_scheduler) = match a.system {
        System::Tree => (tree, SchedulerArg::Wc),
        System::TreeLevel => (tree, SchedulerArg::Level),
        System::Line => (tree.merge_tree_to_line().map_err(usage)?, SchedulerArg::Wc),
        System::LineAllBack => (tree.merge_tree_to_line().and_then(|l| l.all_back()).map_err(usage)?, SchedulerArg::Wc),
    };
    let scheduler = a.scheduler.unwrap_or(default_scheduler);
    net = net
        .with_scheduler(match scheduler {
            SchedulerArg::Wc => Scheduler::WorkConserving,
            SchedulerArg::Level => Scheduler::OnePerLevel,
        })
        .with_arrivals(a.arrivals)
        .map_err(usage)?;
    if let Some(rho) = a.warm_start {
        net = net.with_dummy_init(DummyInit::JacksonStationary(rho)).map_err(usage)?;
    }
    let results = run_queue_batch(&net, a.run.trials as usize, a.run.seed, a.run.workers as usize, false)
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    let system = a.system.to_possible_value().expect("no skipped variants").get_name().to_string();
    let name = |v: &dyn ValueEnumName| v.value_name();
    let mut argv = vec!["queue".to_string(), "--system".into(), system.clone()];
    argv.extend(graph_argv);
    argv.extend([
        "--root".into(),
        a.root.to_string(),
        "--root-role".into(),
        name(&a.root_role),
        "--service".into(),
        name(&a.service),
        "--p".into(),
        g17(a.p),
        "--arrivals".into(),
        arrivals_name(a.arrivals),
        "--scheduler".into(),
        name(&scheduler),
    ]);
    if let Some(rho) = a.warm_start {
        argv.extend(["--warm-start".into(), g17(rho)]);
    }
    argv.extend(["--trials".into(), a.run.trials.to_string(), "--seed".into(), a.run.seed.to_string()]);
    let notes = vec![format!("queues={} customers={} l_max={}", net.nodes.len(), net.customers(), net.l_max())];
    let mut csv = output::header(&argv, &notes);
    csv.push_str("trial,system,n,l_max,p,stopping_time,capped\n");
    for (k, r) in results.iter().enumerate() {
        writeln!(csv, "{k},{system},{},{},{},{},false", graph.n(), net.l_max(), g17(a.p), g17(r.stopping_time))
            .expect("writing to a String");
    }
    Ok(Produced { csv, report: None, failure: None })
}

trait ValueEnumName {
    fn value_name(&self) -> String;
}

impl<T: ValueEnum> ValueEnumName for T {
    fn value_name(&self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

fn estimate_line(n: u64, e: &StoppingEstimate) -> String {
    format!(
        "{n},{},{},{},{},{},{}",
        e.trials,
        g17(e.mean_t),
        g17(e.mean_r),
        g17(e.hp_t),
        g17(e.hp_r),
        g17(e.stderr_mean)
    )
}

fn run_sweep(a: &SweepArgs) -> Result<Produced, CliError> {
    let mut sizes = a.n.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut points = Vec::new();
    for &n in &sizes {
        let graph = Graph::generate(a.topology, n as usize).map_err(|e| CliError::Usage(e.to_string()))?;
        let cfg = a.params.config(graph, mix_seed(a.run.seed, n))?;
        let results = run_batch(&cfg, a.run.trials as usize, a.run.workers as usize).map_err(gossip_error)?;
        let est = estimate_stopping(&results, n as usize).map_err(|e| CliError::Runtime(format!("n = {n}: {e}")))?;
        points.push((n, est));
    }
    let list: Vec<String> = sizes.iter().map(u64::to_string).collect();
    let mut argv = vec!["sweep".to_string(), "--topology".into(), a.topology.name().into(), "--n".into(), list.join(",")];
    argv.extend(a.params.argv(a.params.max_timeslots));
    argv.extend(["--trials".into(), a.run.trials.to_string(), "--seed".into(), a.run.seed.to_string()]);
    let mut csv = output::header(&argv, &[]);
    csv.push_str("n,trials,mean_T,mean_R,hp_T,hp_R,stderr_mean_T\n");
    for (n, e) in &points {
        csv.push_str(&estimate_line(*n, e));
        csv.push('\n');
    }

    let mut report = format!(
        "{} {} {} q={} trials={} seed={}\n",
        a.topology, a.params.algo, a.params.time_model, a.params.q, a.run.trials, a.run.seed
    );
    for (n, e) in &points {
        writeln!(report, "n={n} mean_R={} hp_R={} stderr_R={}", g17(e.mean_r), g17(e.hp_r), g17(e.stderr_mean / *n as f64))
            .expect("writing to a String");
    }
    let as_usize: Vec<(usize, StoppingEstimate)> = points.iter().map(|(n, e)| (*n as usize, *e)).collect();
    match ScalingReport::new(as_usize) {
        Ok(s) => {
            writeln!(report, "slope={} ci95=[{}, {}] intercept={}", g17(s.slope), g17(s.slope_ci.0), g17(s.slope_ci.1), g17(s.intercept))
                .expect("writing to a String");
        }
        Err(e) => writeln!(report, "no fit: {e}").expect("writing to a String"),
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|(n, e)| (*n as f64, e.mean_r)).collect();
    if let Ok(g) = compare_growth_models(&xy) {
        writeln!(
            report,
            "fit c*n: c={} rss={}; fit c*n*ln(n): c={} rss={}",
            g17(g.c_linear),
            g17(g.rss_linear),
            g17(g.c_nlogn),
            g17(g.rss_nlogn)
        )
        .expect("writing to a String");
    }
    Ok(Produced { csv, report: Some(report), failure: None })
}

fn run_bounds(a: &BoundsArgs) -> Result<Produced, CliError> {
    let checks: Vec<BoundCheck> = if a.check == "all" {
        BoundCheck::ALL.to_vec()
    } else {
        vec![a.check.parse().map_err(CliError::Usage)?]
    };
    let argv = vec![
        "bounds".to_string(),
        "--check".into(),
        a.check.clone(),
        "--samples".into(),
        a.samples.to_string(),
        "--seed".into(),
        a.seed.to_string(),
    ];
    let mut csv = output::header(&argv, &[]);
    csv.push_str("check,params,bound,empirical,sigma,direction,holds\n");
    let mut violated = 0;
    for (i, c) in checks.into_iter().enumerate() {
        let rows = run_check(c, a.samples as usize, mix_seed(a.seed, i as u64), a.workers as usize)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        for r in rows {
            violated += usize::from(!r.holds);
            writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                r.check,
                r.params,
                g17(r.bound),
                g17(r.empirical),
                g17(r.sigma),
                r.direction.name(),
                r.holds
            )
            .expect("writing to a String");
        }
    }
    let failure = (violated > 0).then(|| format!("{violated} rows violate their bound"));
    Ok(Produced { csv, report: None, failure })
}

/// Extracts the echoed command of a CSV written by this tool.
pub fn header_command(csv: &str) -> Result<Vec<String>, CliError> {
    let mut lines = csv.lines();
    let first = lines.next().unwrap_or_default();
    let version = first
        .strip_prefix("# ")
        .and_then(|s| s.strip_prefix(TOOL))
        .map(str::trim)
        .ok_or_else(|| CliError::Usage("not a CSV written by this tool (missing version line)".into()))?;
    if version != VERSION {
        return Err(CliError::Runtime(format!("version mismatch: file written by {TOOL} {version}, this is {VERSION}")));
    }
    let command = lines
        .next()
        .and_then(|l| l.strip_prefix(COMMAND_PREFIX))
        .ok_or_else(|| CliError::Usage("missing command line in header".into()))?;
    command.split(' ').filter(|s| !s.is_empty()).map(output::decode_arg).collect()
}

fn run_replay(a: &ReplayArgs) -> Result<Produced, CliError> {
    let original = std::fs::read_to_string(&a.file).map_err(|e| CliError::Io(format!("{}: {e}", a.file.display())))?;
    let mut argv = header_command(&original)?;
    if argv.first().map(String::as_str) == Some("replay") {
        return Err(CliError::Usage("refusing to replay a replay".into()));
    }
    argv.extend(["--workers".into(), a.workers.to_string()]);
    let cli = Cli::try_parse_from(std::iter::once(TOOL.to_string()).chain(argv))
        .map_err(|e| CliError::Usage(format!("header command does not parse: {}", first_line(&e.to_string()))))?;
    let regenerated = produce(&cli.command)?;
    let failure = (regenerated.csv != original).then(|| {
        let line = original
            .lines()
            .zip(regenerated.csv.lines())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| original.lines().count().min(regenerated.csv.lines().count()))
            + 1;
        format!("replay of {} differs at line {line}", a.file.display())
    });
    Ok(Produced { csv: regenerated.csv, report: None, failure })
}

fn produce(cmd: &Command) -> Result<Produced, CliError> {
    match cmd {
        Command::Gossip(a) => run_gossip(a),
        Command::Queue(a) => run_queue(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Replay(a) => run_replay(a),
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or(s).trim()
}

fn execute(cmd: &Command) -> Result<(), CliError> {
    let produced = produce(cmd)?;
    let (out, report_path) = match cmd {
        Command::Gossip(a) => (&a.run.out, None),
        Command::Queue(a) => (&a.run.out, None),
        Command::Sweep(a) => (&a.run.out, a.report.as_ref()),
        Command::Bounds(a) => (&a.out, None),
        Command::Replay(a) => (&a.out, None),
    };
    let replaying = matches!(cmd, Command::Replay(_));
    match out {
        Some(path) => write_atomic(path, &produced.csv)?,
        None if !replaying => print!("{}", produced.csv),
        None => {}
    }
    if let (Some(path), Some(report)) = (report_path, &produced.report) {
        write_atomic(path, report)?;
    }
    match produced.failure {
        Some(msg) => Err(CliError::Runtime(msg)),
        None => {
            if let Command::Replay(a) = cmd {
                println!("replay identical: {}", a.file.display());
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr as one line.
pub fn parse_and_dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprintln!("{}", first_line(&e.to_string()));
                    1
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
