//! `splot` — Friedman tests, S-plot decompositions, post-hoc comparisons,
//! and seeded Monte Carlo studies from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

mod io;
mod report;
mod svg;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use splot_core::posthoc::{conover, nemenyi, AdjustMethod, PairwiseComparison};
use splot_core::ranking::rank_within_blocks;
use splot_core::sim::{simulate_s_moments, simulate_s_samples, simulate_type1};
use splot_core::splot::splot_analysis;
use splot_core::{
    friedman, BlockDesign, Distribution, FriedmanResult, Probability, SimConfig, TieMethod,
};
use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "splot",
    version,
    about = "Rank analysis for randomized complete block designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Friedman chi-square test on a block design
    Test(AnalysisArgs),
    /// Full S-plot analysis: JSON report plus optional SVG chart
    Splot(SplotArgs),
    /// Nemenyi / Conover pairwise post-hoc comparisons
    Posthoc(PosthocArgs),
    /// Monte Carlo study of the empirical moments of S_g under H0
    SimulateMoments(SimulateMomentsArgs),
    /// Monte Carlo study of empirical type-I-error rates
    SimulateType1(SimulateType1Args),
}

#[derive(Args)]
struct AnalysisArgs {
    /// Input CSV path, or `-` for standard input
    input: PathBuf,
    /// Input table layout
    #[arg(long, value_enum, default_value_t = io::TableFormat::Wide)]
    format: io::TableFormat,
    /// Tie-breaking strategy for within-block ranking
    #[arg(long, value_enum, default_value_t = TieArg::Average)]
    ties: TieArg,
    /// Seed for `--ties random`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write output to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SplotArgs {
    #[command(flatten)]
    base: AnalysisArgs,
    /// Family-wise significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Correction relating family alpha to the per-test alpha
    #[arg(long, value_enum, default_value_t = AdjustArg::Bonferroni)]
    adjust: AdjustArg,
    /// Also render the S-plot as SVG to this path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PosthocArgs {
    #[command(flatten)]
    base: AnalysisArgs,
    /// Family-wise significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// p-value adjustment for the Conover table
    #[arg(long, value_enum, default_value_t = AdjustArg::Bonferroni)]
    adjust: AdjustArg,
    /// Run only one procedure (default: both)
    #[arg(long, value_enum)]
    method: Option<PosthocMethod>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of groups G
    #[arg(long)]
    groups: usize,
    /// Number of blocks B
    #[arg(long)]
    blocks: usize,
    /// Null-true data generator
    #[arg(long, value_enum, default_value_t = DistArg::Normal)]
    dist: DistArg,
    /// Monte Carlo replications
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Master seed; every replication derives its stream from it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateMomentsArgs {
    #[command(flatten)]
    sim: SimulateArgs,
    /// Also dump the raw S_g samples (one column per group) to this CSV
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateType1Args {
    #[command(flatten)]
    sim: SimulateArgs,
    /// Family-wise significance level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Correction used for the S-plot decision limit
    #[arg(long, value_enum, default_value_t = AdjustArg::Bonferroni)]
    adjust: AdjustArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Average,
    First,
    Last,
    Random,
    Max,
    Min,
}

impl TieArg {
    fn to_method(self, seed: u64) -> TieMethod {
        match self {
            TieArg::Average => TieMethod::Average,
            TieArg::First => TieMethod::First,
            TieArg::Last => TieMethod::Last,
            TieArg::Random => TieMethod::Random { seed },
            TieArg::Max => TieMethod::Max,
            TieArg::Min => TieMethod::Min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdjustArg {
    Bonferroni,
    SidakExact,
    Holm,
    Hochberg,
    Hommel,
    Bh,
    By,
    None,
}

impl From<AdjustArg> for AdjustMethod {
    fn from(a: AdjustArg) -> Self {
        match a {
            AdjustArg::Bonferroni => AdjustMethod::Bonferroni,
            AdjustArg::SidakExact => AdjustMethod::SidakExact,
            AdjustArg::Holm => AdjustMethod::Holm,
            AdjustArg::Hochberg => AdjustMethod::Hochberg,
            AdjustArg::Hommel => AdjustMethod::Hommel,
            AdjustArg::Bh => AdjustMethod::Bh,
            AdjustArg::By => AdjustMethod::By,
            AdjustArg::None => AdjustMethod::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistArg {
    Normal,
    Exponential,
}

impl From<DistArg> for Distribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Normal => Distribution::Normal,
            DistArg::Exponential => Distribution::Exponential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PosthocMethod {
    Nemenyi,
    Conover,
}

/// CLI-level failures, ordered by exit code.
enum AppError {
    /// Exit 1: bad flags or flag values.
    Usage(String),
    /// Exit 2: unreadable, malformed, or degenerate input data.
    Data(String),
    /// Exit 3: a numeric routine left its domain or failed to converge.
    Numeric(String),
}

impl From<splot_core::Error> for AppError {
    fn from(e: splot_core::Error) -> Self {
        match e {
            splot_core::Error::Domain(_) | splot_core::Error::Convergence(_) => {
                AppError::Numeric(e.to_string())
            }
            splot_core::Error::InvalidDesign(_) | splot_core::Error::Degenerate(_) => {
                AppError::Data(e.to_string())
            }
        }
    }
}

impl From<io::ParseError> for AppError {
    fn from(e: io::ParseError) -> Self {
        AppError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Splot(args) => cmd_splot(args),
        Command::Posthoc(args) => cmd_posthoc(args),
        Command::SimulateMoments(args) => cmd_simulate_moments(args),
        Command::SimulateType1(args) => cmd_simulate_type1(args),
    }
}

fn read_input(path: &Path) -> Result<String, AppError> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| AppError::Data(format!("reading standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| AppError::Data(format!("reading {}: {e}", path.display())))
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| AppError::Data(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_alpha(alpha: f64) -> Result<Probability, AppError> {
    if alpha.is_finite() && 0.0 < alpha && alpha < 1.0 {
        Ok(Probability::new(alpha).expect("checked"))
    } else {
        Err(AppError::Usage(format!("--alpha must be strictly between 0 and 1, got {alpha}")))
    }
}

fn load_design(args: &AnalysisArgs) -> Result<(String, BlockDesign), AppError> {
    let text = read_input(&args.input)?;
    let design = io::parse_table(&text, args.format)?;
    Ok((text, design))
}

fn cmd_test(args: AnalysisArgs) -> Result<(), AppError> {
    let (_, design) = load_design(&args)?;
    let ranks = rank_within_blocks(&design, args.ties.to_method(args.seed));
    let result = friedman::friedman_statistic(&ranks)?;
    write_output(args.out.as_deref(), &render_friedman(&result))
}

fn render_friedman(r: &FriedmanResult) -> String {
    let mut out = String::new();
    writeln!(out, "Friedman chi-square test").unwrap();
    writeln!(out, "  blocks:    {}", r.n_blocks).unwrap();
    writeln!(out, "  groups:    {}", r.n_groups).unwrap();
    writeln!(out, "  statistic: {:.4}", r.statistic).unwrap();
    writeln!(out, "  df:        {}", r.df).unwrap();
    writeln!(out, "  p-value:   {:.4}", r.p_value.value()).unwrap();
    let sums: Vec<String> = r
        .group_labels
        .iter()
        .zip(&r.rank_sums)
        .map(|(label, sum)| format!("{label}={sum:.4}"))
        .collect();
    writeln!(out, "  rank sums: {}", sums.join(" ")).unwrap();
    out
}

fn cmd_splot(args: SplotArgs) -> Result<(), AppError> {
    let (text, design) = load_design(&args.base)?;
    let alpha = parse_alpha(args.alpha)?;
    let ties = args.base.ties.to_method(args.base.seed);
    let adjust: AdjustMethod = args.adjust.into();
    let ranks = rank_within_blocks(&design, ties);
    let friedman_result = friedman::friedman_statistic(&ranks)?;
    let splot_report = splot_analysis(&design, alpha, ties, adjust)?;
    if let Some(svg_path) = &args.svg {
        let doc = svg::render_splot_svg(&splot_report);
        std::fs::write(svg_path, doc)
            .map_err(|e| AppError::Data(format!("writing {}: {e}", svg_path.display())))?;
    }
    let bundle = report::ReportBundle {
        friedman: friedman_result,
        splot: splot_report,
        posthoc: None,
        metadata: report::Metadata::new(text.as_bytes(), args.alpha, adjust.to_string(), ties),
    };
    write_output(args.base.out.as_deref(), &report::to_json(&bundle))
}

fn cmd_posthoc(args: PosthocArgs) -> Result<(), AppError> {
    let (_, design) = load_design(&args.base)?;
    let alpha = parse_alpha(args.alpha)?;
    let ranks = rank_within_blocks(&design, args.base.ties.to_method(args.base.seed));
    let mut out = String::new();
    if args.method != Some(PosthocMethod::Conover) {
        let table = nemenyi(&ranks, alpha)?;
        out.push_str(&render_pairwise(
            &format!("Nemenyi all-pairs comparisons (alpha {:.4})", args.alpha),
            &table,
        ));
    }
    if args.method != Some(PosthocMethod::Nemenyi) {
        let adjust: AdjustMethod = args.adjust.into();
        let table = conover(&ranks, alpha, adjust)?;
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&render_pairwise(
            &format!("Conover all-pairs comparisons (alpha {:.4}, adjust {adjust})", args.alpha),
            &table,
        ));
    }
    write_output(args.base.out.as_deref(), &out)
}

fn render_pairwise(title: &str, table: &[PairwiseComparison]) -> String {
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    let pair_width = table
        .iter()
        .map(|c| c.group_i.len() + c.group_j.len() + 1)
        .max()
        .unwrap_or(4)
        .max("pair".len());
    writeln!(
        out,
        "  {:<pair_width$}  {:>10}  {:>10}  {:>8}  significant",
        "pair", "mean diff", "statistic", "p-value"
    )
    .unwrap();
    for c in table {
        writeln!(
            out,
            "  {:<pair_width$}  {:>10.4}  {:>10.4}  {:>8.4}  {}",
            format!("{}-{}", c.group_i, c.group_j),
            c.mean_rank_diff,
            c.statistic,
            c.p_value.value(),
            if c.significant { "yes" } else { "no" }
        )
        .unwrap();
    }
    out
}

fn sim_config(args: &SimulateArgs, alpha: Probability, adjust: AdjustMethod) -> SimConfig {
    SimConfig {
        n_groups: args.groups,
        n_blocks: args.blocks,
        distribution: args.dist.into(),
        family_alpha: alpha,
        replications: args.reps,
        seed: args.seed,
        adjust,
        ties: TieMethod::Average,
    }
}

fn cmd_simulate_moments(args: SimulateMomentsArgs) -> Result<(), AppError> {
    let alpha = Probability::new(0.05).expect("constant");
    let config = sim_config(&args.sim, alpha, AdjustMethod::Bonferroni);
    if let Some(dump) = &args.dump_samples {
        let samples = simulate_s_samples(&config)?;
        let mut csv = String::new();
        let header: Vec<String> = (1..=config.n_groups).map(|g| format!("s{g}")).collect();
        writeln!(csv, "{}", header.join(",")).unwrap();
        for row in &samples {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(csv, "{}", cells.join(",")).unwrap();
        }
        std::fs::write(dump, csv)
            .map_err(|e| AppError::Data(format!("writing {}: {e}", dump.display())))?;
    }
    let rows = simulate_s_moments(&config)?;
    let mut csv = String::from(
        "group,mean,variance,skewness,excess_kurtosis,\
         theoretical_mean,theoretical_variance,theoretical_skewness,theoretical_excess_kurtosis\n",
    );
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.group_index + 1,
            r.empirical.mean,
            r.empirical.variance,
            r.empirical.skewness,
            r.empirical.excess_kurtosis,
            r.theoretical.mean,
            r.theoretical.variance,
            r.theoretical.skewness,
            r.theoretical.excess_kurtosis
        )
        .unwrap();
    }
    write_output(args.sim.out.as_deref(), &csv)
}

fn cmd_simulate_type1(args: SimulateType1Args) -> Result<(), AppError> {
    let alpha = parse_alpha(args.alpha)?;
    let config = sim_config(&args.sim, alpha, args.adjust.into());
    let row = simulate_type1(&config)?;
    let mut csv = String::from(
        "groups,blocks,distribution,alpha,replications,seed,\
         rate_friedman,rate_splot,bradley_friedman,bradley_splot\n",
    );
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{}",
        config.n_groups,
        config.n_blocks,
        config.distribution,
        args.alpha,
        config.replications,
        config.seed,
        row.empirical_rate_friedman.value(),
        row.empirical_rate_splot.value(),
        row.bradley_friedman,
        row.bradley_splot
    )
    .unwrap();
    write_output(args.sim.out.as_deref(), &csv)
}
