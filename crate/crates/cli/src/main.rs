use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wrw_core::estimate::{required_steps, top_degree_product, BoundInputs, Method};
use wrw_core::exact::{self, ExactCounts};
use wrw_core::experiment::{compare, exact_report, run_experiment, ExperimentConfig};
use wrw_core::graph::Delimiter;
use wrw_core::report::EstimateReport;
use wrw_core::walk::{Budget, DEFAULT_BURN_IN};
use wrw_core::{EdgeListOptions, Graph, MotifCatalog, MotifId};

#[derive(Parser)]
#[command(
    name = "wrw",
    version,
    about = "Motif concentration and count estimation by waddling random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate motif concentrations (and counts) over repeated walks.
    Estimate(EstimateArgs),
    /// Exact induced motif counts.
    Exact(ExactArgs),
    /// Estimate and compare against exact counts.
    Compare(CompareArgs),
    /// Estimate absolute motif counts.
    Count(EstimateArgs),
    /// Print the motif catalog with its path constants.
    Catalog(CatalogArgs),
    /// Steps needed for a given accuracy and confidence.
    Bound(BoundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Wrw,
    WrwGeneric,
    NoWaddle,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Connected-subgraph enumeration.
    Esu,
    /// Closed-form counts from triangles and codegrees (k = 3, 4).
    Formula,
    /// Every k-subset; at most 14 nodes.
    Brute,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    graph: PathBuf,
    /// Field separator; whitespace if omitted.
    #[arg(long)]
    delimiter: Option<char>,
    /// Run on the largest connected component instead of failing on a
    /// disconnected graph.
    #[arg(long)]
    lcc: bool,
}

impl GraphArgs {
    fn load(&self) -> Result<(Graph, String)> {
        let mut opts = EdgeListOptions::default();
        if let Some(c) = self.delimiter {
            opts.delimiter = Delimiter::Char(c);
        }
        let mut graph = Graph::load_edge_list_path(&self.graph, &opts)
            .with_context(|| format!("loading {}", self.graph.display()))?;
        if self.lcc {
            graph = graph.largest_connected_component();
        }
        let name = self
            .graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((graph, name))
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, short, value_parser = clap::value_parser!(u8).range(3..=5))]
    k: u8,
    #[arg(long, value_enum, default_value = "wrw")]
    method: MethodArg,
    /// Distinct neighbor queries per run after burn-in.
    #[arg(long, conflicts_with = "steps")]
    queries: Option<u64>,
    /// Walk steps per run after burn-in.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    runs: u32,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report only this motif (`k,m`); repeatable.
    #[arg(long = "motif")]
    motifs: Vec<MotifId>,
    /// `|V|` used for count estimates, if different from the loaded graph.
    #[arg(long)]
    node_count: Option<u64>,
    /// Subgraph cap for `--method exact`.
    #[arg(long, default_value_t = exact::DEFAULT_BUDGET)]
    cis_budget: u64,
    #[command(flatten)]
    output: OutputArgs,
}

impl EstimateArgs {
    /// Exits with a usage error when neither budget flag is given.
    fn budget(&self) -> Budget {
        match (self.queries, self.steps) {
            (Some(q), _) => Budget::Queries(q),
            (None, Some(s)) => Budget::Steps(s),
            (None, None) => Cli::command()
                .error(
                    ErrorKind::MissingRequiredArgument,
                    "one of --queries or --steps is required",
                )
                .exit(),
        }
    }

    fn method(&self) -> Method {
        match self.method {
            MethodArg::Wrw => Method::Wrw,
            MethodArg::WrwGeneric => Method::WrwGeneric,
            MethodArg::NoWaddle => Method::NoWaddle,
            MethodArg::Exact => unreachable!("exact is handled before walking"),
        }
    }

    fn run(&self, catalog: &MotifCatalog) -> Result<EstimateReport> {
        let budget = (self.method != MethodArg::Exact).then(|| self.budget());
        let (graph, name) = self.graph.load()?;
        let Some(budget) = budget else {
            let counts = exact::enumerate_exact(&graph, catalog, self.k as usize, self.cis_budget)?;
            return Ok(exact_report(&name, &counts, catalog, &self.motifs)?);
        };
        let config = ExperimentConfig {
            graph_name: name,
            k: self.k as usize,
            method: self.method(),
            budget,
            runs: self.runs,
            burn_in: self.burn_in,
            seed: self.seed,
            motifs: self.motifs.clone(),
            node_count: self.node_count,
        };
        Ok(run_experiment(&graph, catalog, &config)?.report(catalog)?)
    }
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, short, value_parser = clap::value_parser!(u8).range(3..=5))]
    k: u8,
    #[arg(long, value_enum, default_value = "esu")]
    engine: Engine,
    /// Abort enumeration after this many connected subgraphs.
    #[arg(long, default_value_t = exact::DEFAULT_BUDGET)]
    cis_budget: u64,
    #[arg(long = "motif")]
    motifs: Vec<MotifId>,
    #[command(flatten)]
    output: OutputArgs,
}

fn exact_counts(
    graph: &Graph,
    catalog: &MotifCatalog,
    k: usize,
    engine: Engine,
    budget: u64,
) -> Result<ExactCounts> {
    Ok(match engine {
        Engine::Esu => exact::enumerate_exact(graph, catalog, k, budget)?,
        Engine::Formula => exact::formula_counts(graph, catalog, k)?,
        Engine::Brute => exact::brute_force_subsets(graph, catalog, k)?,
    })
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    estimate: EstimateArgs,
    /// Exact report from `wrw exact --format json`; computed if omitted.
    #[arg(long)]
    exact_report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "esu")]
    engine: Engine,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, short, value_parser = clap::value_parser!(u8).range(3..=5))]
    k: Option<u8>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    /// Mixing time `T` of the walk.
    #[arg(long)]
    mixing_time: f64,
    /// `|S(k,m)|` or a lower bound.
    #[arg(long)]
    motif_count: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    alpha: f64,
    /// Take `D` and the top-degree product from this graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, short, value_parser = clap::value_parser!(u8).range(3..=5), default_value_t = 4)]
    k: u8,
    #[arg(long, required_unless_present = "graph")]
    degree_sum: Option<f64>,
    #[arg(long, required_unless_present = "graph")]
    top_degree_product: Option<f64>,
    /// Constant `c` in the logarithm; the default is indicative only.
    #[arg(long, default_value_t = BoundInputs::DEFAULT_C)]
    c: f64,
    /// Leading constant; the default is indicative only.
    #[arg(long, default_value_t = BoundInputs::DEFAULT_XI)]
    xi: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn write_report(report: &EstimateReport, output: &OutputArgs) -> Result<()> {
    let mut w = output.writer()?;
    match output.format {
        Format::Json => {
            report.write_json(&mut w)?;
            writeln!(w)?;
        }
        Format::Csv => report.write_csv(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn write_serialized<T: Serialize>(
    value: &T,
    rows: &[Vec<String>],
    header: &[&str],
    output: &OutputArgs,
) -> Result<()> {
    let mut w = output.writer()?;
    match output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        Format::Csv => {
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                writeln!(w, "{}", row.join(","))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CatalogRow {
    k: u8,
    m: u8,
    canonical_code: u32,
    edges: u32,
    l: usize,
    big_l: usize,
    z: u32,
    pw: u64,
    pr: std::collections::BTreeMap<usize, u64>,
}

fn catalog(args: &CatalogArgs, catalog: &MotifCatalog) -> Result<()> {
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k as usize],
        None => (3..=5).collect(),
    };
    let rows: Vec<CatalogRow> = ks
        .iter()
        .flat_map(|&k| catalog.entries(k))
        .map(|e| CatalogRow {
            k: e.id.k,
            m: e.id.m,
            canonical_code: e.canonical_code,
            edges: e.edge_count,
            l: e.shortest_cover,
            big_l: e.longest_path,
            z: e.symmetry,
            pw: e.pw,
            pr: e.pr_table.clone(),
        })
        .collect();
    let csv: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let pr =
                r.pr.iter()
                    .map(|(s, p)| format!("{s}:{p}"))
                    .collect::<Vec<_>>()
                    .join(" ");
            vec![
                r.k.to_string(),
                r.m.to_string(),
                r.canonical_code.to_string(),
                r.edges.to_string(),
                r.l.to_string(),
                r.big_l.to_string(),
                r.z.to_string(),
                r.pw.to_string(),
                pr,
            ]
        })
        .collect();
    write_serialized(
        &rows,
        &csv,
        &[
            "k",
            "m",
            "canonical_code",
            "edges",
            "l",
            "L",
            "Z",
            "Pw",
            "Pr",
        ],
        &args.output,
    )
}

fn bound(args: &BoundArgs) -> Result<()> {
    let (degree_sum, top) = match &args.graph {
        Some(path) => {
            let g = Graph::load_edge_list_path(path, &EdgeListOptions::default())
                .with_context(|| format!("loading {}", path.display()))?;
            (
                args.degree_sum.unwrap_or(g.degree_sum() as f64),
                args.top_degree_product
                    .unwrap_or(top_degree_product(&g, args.k as usize)),
            )
        }
        None => (args.degree_sum.unwrap(), args.top_degree_product.unwrap()),
    };
    let inputs = BoundInputs {
        mixing_time: args.mixing_time,
        degree_sum,
        top_degree_product: top,
        motif_count: args.motif_count,
        delta: args.delta,
        alpha: args.alpha,
        c_const: args.c,
        xi: args.xi,
    };
    let b = required_steps(&inputs)?;
    #[derive(Serialize)]
    struct Out {
        inputs: BoundInputs,
        t_min: f64,
        lower_factor: f64,
        upper_factor: f64,
        confidence: f64,
    }
    let out = Out {
        inputs,
        t_min: b.t_min,
        lower_factor: b.lower_factor,
        upper_factor: b.upper_factor,
        confidence: b.confidence,
    };
    let row = vec![
        b.t_min.to_string(),
        b.lower_factor.to_string(),
        b.upper_factor.to_string(),
        b.confidence.to_string(),
    ];
    write_serialized(
        &out,
        &[row],
        &["t_min", "lower_factor", "upper_factor", "confidence"],
        &args.output,
    )
}

fn count(args: &EstimateArgs, catalog: &MotifCatalog) -> Result<()> {
    if args.method == MethodArg::Exact {
        return write_report(&args.run(catalog)?, &args.output);
    }
    let report = args.run(catalog)?;
    let rows: Vec<Vec<String>> = report
        .motifs
        .iter()
        .map(|r| {
            vec![
                csv_field(&report.graph),
                r.k.to_string(),
                r.m.to_string(),
                r.canonical_code.to_string(),
                report.method.clone(),
                report.queries.map(|q| q.to_string()).unwrap_or_default(),
                report.runs.to_string(),
                report
                    .degree_sum_estimate
                    .map(|d| d.to_string())
                    .unwrap_or_default(),
                r.count_estimate.map(|c| c.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_serialized(
        &report,
        &rows,
        &[
            "graph",
            "k",
            "m",
            "canonical_code",
            "method",
            "Q",
            "runs",
            "degree_sum_estimate",
            "count_estimate",
        ],
        &args.output,
    )
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn compare_cmd(args: &CompareArgs, catalog: &MotifCatalog) -> Result<()> {
    let est_args = &args.estimate;
    if est_args.method == MethodArg::Exact {
        bail!("compare needs a walk method, not exact");
    }
    let estimate = est_args.run(catalog)?;
    let exact = match &args.exact_report {
        Some(p) => EstimateReport::read_json(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )?,
        None => {
            let (graph, name) = est_args.graph.load()?;
            let counts = exact_counts(
                &graph,
                catalog,
                est_args.k as usize,
                args.engine,
                est_args.cis_budget,
            )?;
            exact_report(&name, &counts, catalog, &est_args.motifs)?
        }
    };
    let cmp = compare(&estimate, &exact)?;
    let mut w = est_args.output.writer()?;
    match est_args.output.format {
        Format::Json => {
            cmp.write_json(&mut w)?;
            writeln!(w)?;
        }
        Format::Csv => cmp.write_csv(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn exact_cmd(args: &ExactArgs, catalog: &MotifCatalog) -> Result<()> {
    let (graph, name) = args.graph.load()?;
    let counts = exact_counts(
        &graph,
        catalog,
        args.k as usize,
        args.engine,
        args.cis_budget,
    )?;
    write_report(
        &exact_report(&name, &counts, catalog, &args.motifs)?,
        &args.output,
    )
}

fn run(cli: Cli) -> Result<()> {
    let catalog = MotifCatalog::shared();
    match &cli.command {
        Command::Estimate(args) => write_report(&args.run(catalog)?, &args.output),
        Command::Exact(args) => exact_cmd(args, catalog),
        Command::Compare(args) => compare_cmd(args, catalog),
        Command::Count(args) => count(args, catalog),
        Command::Catalog(args) => self::catalog(args, catalog),
        Command::Bound(args) => bound(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
