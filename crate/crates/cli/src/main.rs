//! Command-line front end: ingest a weighted digraph, run the
//! indirect-influence transform, rank vertices, sweep λ or an edge
//! perturbation for ranking changes, regenerate the built-in reference
//! tables, and emit example adjacency files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pwp_core::analytic::{crossing_consecutive, linear_importance};
use pwp_core::error::Error;
use pwp_core::graph::{
    circuit_graph, from_edge_list_text, from_matrix_csv, linear_graph, process_matter_example,
    to_matrix_csv,
};
use pwp_core::pwp::{pwp_transform, PwpParams, DEFAULT_TOL};
use pwp_core::rankings::{
    direct_scores, indirect_scores, ranking_from_scores, ScoreKind, DEFAULT_TIE_TOL,
};
use pwp_core::sweep::{epsilon_sweep, lambda_sweep, verify_unique_crossings, SweepSpec};
use pwp_core::{Matrix, WeightedDigraph};

mod paper_tables;

/// 12 significant digits, enough to separate rankings at the default tie
/// tolerance.
fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Parser)]
#[command(
    name = "pwp",
    version,
    about = "Indirect-influence rankings and stability analysis for weighted digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Square matrix CSV, optional `#labels:` header.
    Matrix,
    /// Tab-separated `source target weight` lines.
    Edges,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Importance,
    Influence,
    Dependence,
}

impl From<KindArg> for ScoreKind {
    fn from(k: KindArg) -> ScoreKind {
        match k {
            KindArg::Importance => ScoreKind::Importance,
            KindArg::Influence => ScoreKind::Influence,
            KindArg::Dependence => ScoreKind::Dependence,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Input file; `.csv` parses as a matrix, `.tsv`/`.edges` as an edge list.
    input: PathBuf,
    /// Override the extension-based format detection.
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Args)]
struct SeriesArgs {
    /// Method parameter λ.
    #[arg(long)]
    lambda: f64,
    /// Relative series truncation tolerance (default 1e-12, or $PWP_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Cap on series terms.
    #[arg(long, default_value_t = pwp_core::pwp::DEFAULT_MAX_TERMS)]
    max_terms: usize,
}

impl SeriesArgs {
    fn params(&self) -> PwpParams {
        PwpParams {
            lambda: self.lambda,
            tol: self.tol.unwrap_or_else(default_tol),
            max_terms: self.max_terms,
        }
    }
}

/// Series tolerance default, overridable through the environment.
fn default_tol() -> f64 {
    std::env::var("PWP_TOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_TOL)
}

#[derive(Subcommand)]
enum Command {
    /// Apply the transform and write the matrix of indirect influences.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        series: SeriesArgs,
        /// Output CSV path; stdout when absent. A `<path>.json` sidecar
        /// records λ, tol, and the number of series terms.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print vertex scores and the induced ranking.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        /// Method parameter λ; required unless --direct.
        #[arg(long, required_unless_present = "direct")]
        lambda: Option<f64>,
        #[arg(long, value_enum, default_value = "importance")]
        kind: KindArg,
        /// Rank by the direct scores, bypassing the transform.
        #[arg(long)]
        direct: bool,
        /// Relative tie tolerance.
        #[arg(long, default_value_t = DEFAULT_TIE_TOL)]
        tie_tol: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Segment a parameter range into constant-ranking intervals.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Swept axis: `lambda` or `epsilon`.
        #[arg(long, value_enum)]
        param: ParamArg,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = pwp_core::sweep::DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long, default_value_t = pwp_core::sweep::DEFAULT_REFINE_TOL)]
        refine_tol: f64,
        #[arg(long, value_enum, default_value = "importance")]
        kind: KindArg,
        /// Perturbed edge as `source,target` vertex labels (ε sweeps).
        #[arg(long)]
        edge: Option<String>,
        /// λ at which ε sweeps evaluate the transform.
        #[arg(long)]
        base_lambda: Option<f64>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        /// Also write per-vertex score samples as CSV for external plotting.
        #[arg(long)]
        curves: Option<PathBuf>,
        /// For λ sweeps on a path graph: census of all importance-curve
        /// crossings against the expected one-per-pair interleaving.
        #[arg(long)]
        check_conjecture: bool,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Recompute the built-in reference examples and check them against
    /// their published values.
    PaperTables {
        /// Directory for the emitted importance-curve CSV files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Write an example adjacency matrix CSV.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Perturbation weight for the -eps families.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Perturbed edge as `source,target` 1-based vertex numbers;
        /// defaults to the placements used by the reference tables.
        #[arg(long)]
        edge: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    Lambda,
    Epsilon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Linear,
    Circuit,
    LinearEps,
    CircuitEps,
    ProcessMatter,
}

fn load_graph(args: &InputArgs) -> Result<WeightedDigraph, Error> {
    let text = std::fs::read_to_string(&args.input)?;
    let format = args.input_format.unwrap_or_else(|| {
        match args.input.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("edges") => InputFormat::Edges,
            _ => InputFormat::Matrix,
        }
    });
    let g = match format {
        InputFormat::Matrix => from_matrix_csv(&text)?,
        InputFormat::Edges => from_edge_list_text(&text)?,
    };
    if g.matrix().entries().iter().any(|&w| w < 0.0) {
        eprintln!("warning: negative weights present; scores and rankings are still defined");
    }
    Ok(g)
}

fn render_matrix_csv(labels: &[String], m: &Matrix) -> String {
    let mut out = String::new();
    out.push_str("#labels:");
    out.push_str(&labels.join(","));
    out.push('\n');
    for i in 0..m.n_rows() {
        let row: Vec<String> = (0..m.n_cols()).map(|j| fmt12(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn parse_edge_labels(g: &WeightedDigraph, s: &str) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParams(format!(
            "--edge expects `source,target`, got {s:?}"
        )));
    }
    let find = |label: &str| {
        g.label_index(label)
            .ok_or_else(|| Error::Index(format!("no vertex labeled {label:?} in the input graph")))
    };
    Ok((find(parts[0])?, find(parts[1])?))
}

fn parse_edge_numbers(s: &str, n: usize) -> Result<(usize, usize), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParams(format!(
            "--edge expects `source,target`, got {s:?}"
        )));
    }
    let parse = |tok: &str| -> Result<usize, Error> {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad vertex number {tok:?}")))?;
        if v < 1 || v > n {
            return Err(Error::Index(format!("vertex {v} out of range 1..={n}")));
        }
        Ok(v - 1)
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_transform(
    input: &InputArgs,
    series: &SeriesArgs,
    output: &Option<PathBuf>,
) -> Result<(), Error> {
    let g = load_graph(input)?;
    let t = pwp_transform(g.matrix(), &series.params())?;
    let csv = render_matrix_csv(g.labels(), &t.t);
    let sidecar = serde_json::json!({
        "lambda": t.lambda,
        "tol": series.params().tol,
        "truncation_terms": t.truncation_terms,
    });
    write_or_print(output, &csv)?;
    match output {
        Some(p) => {
            let mut sidecar_path = p.clone().into_os_string();
            sidecar_path.push(".json");
            std::fs::write(sidecar_path, format!("{sidecar}\n"))?;
        }
        None => eprintln!("{sidecar}"),
    }
    Ok(())
}

fn cmd_rank(
    input: &InputArgs,
    lambda: Option<f64>,
    kind: ScoreKind,
    direct: bool,
    tie_tol: f64,
    tol: Option<f64>,
) -> Result<(), Error> {
    let g = load_graph(input)?;
    let scores = if direct {
        direct_scores(g.matrix(), kind)?
    } else {
        let params = PwpParams {
            lambda: lambda.expect("clap enforces --lambda without --direct"),
            tol: tol.unwrap_or_else(default_tol),
            max_terms: pwp_core::pwp::DEFAULT_MAX_TERMS,
        };
        indirect_scores(&pwp_transform(g.matrix(), &params)?, kind)
    };
    let source = if direct {
        "direct".to_string()
    } else {
        format!("indirect lambda={}", lambda.unwrap())
    };
    println!("# kind={kind} source={source}");
    for (label, value) in g.labels().iter().zip(&scores.values) {
        println!("{label}\t{}", fmt12(*value));
    }
    let ranking = ranking_from_scores(&scores, tie_tol)?;
    println!("ranking: {}", ranking.display_with(g.labels()));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    input: &InputArgs,
    param: ParamArg,
    lo: f64,
    hi: f64,
    grid: usize,
    refine_tol: f64,
    kind: ScoreKind,
    edge: &Option<String>,
    base_lambda: Option<f64>,
    format: OutputFormat,
    curves: &Option<PathBuf>,
    check_conjecture: bool,
    tol: Option<f64>,
) -> Result<(), Error> {
    let g = load_graph(input)?;
    let mut spec = match param {
        ParamArg::Lambda => SweepSpec::lambda(lo, hi),
        ParamArg::Epsilon => {
            let edge = edge.as_deref().ok_or_else(|| {
                Error::InvalidParams("epsilon sweeps require --edge source,target".into())
            })?;
            let base_lambda = base_lambda.ok_or_else(|| {
                Error::InvalidParams("epsilon sweeps require --base-lambda".into())
            })?;
            SweepSpec::epsilon(parse_edge_labels(&g, edge)?, base_lambda, lo, hi)
        }
    };
    spec = spec
        .with_grid_points(grid)
        .with_refine_tol(refine_tol)
        .with_score_kind(kind);
    spec.series_tol = tol.unwrap_or_else(default_tol);

    let report = match param {
        ParamArg::Lambda => lambda_sweep(g.matrix(), &spec)?,
        ParamArg::Epsilon => epsilon_sweep(&g, &spec)?,
    };

    match format {
        OutputFormat::Table => print!("{}", report.render_table(g.labels())),
        OutputFormat::Json => println!("{}", report.to_json(g.labels())),
    }

    if let Some(curves_path) = curves {
        let csv = sample_curves(&g, &spec, param)?;
        std::fs::write(curves_path, csv)?;
    }

    if check_conjecture {
        if !matches!(param, ParamArg::Lambda) {
            return Err(Error::InvalidParams(
                "--check-conjecture applies to lambda sweeps only".into(),
            ));
        }
        let n = g.n_vertices();
        if *g.matrix() != *linear_graph(n)?.matrix() {
            return Err(Error::InvalidParams(
                "--check-conjecture requires the input to be the path graph".into(),
            ));
        }
        let census = verify_unique_crossings(n, hi, grid.max(512))?;
        println!(
            "conjecture check: {} crossings over (0, {hi}], one-per-pair: {}, interleaving order: {}",
            census.total_crossings(),
            if census.each_pair_unique { "yes" } else { "NO" },
            if census.interleaving_order_holds { "ok" } else { "VIOLATED" },
        );
        for p in &census.pairs {
            let locs: Vec<String> = p.locations.iter().map(|&x| fmt12(x)).collect();
            println!("  pair {},{}: {}", p.i, p.j, locs.join(" "));
        }
    }
    Ok(())
}

/// Per-vertex score samples over the sweep grid, one CSV row per parameter
/// value.
fn sample_curves(g: &WeightedDigraph, spec: &SweepSpec, param: ParamArg) -> Result<String, Error> {
    let mut out = String::new();
    out.push_str("param,");
    out.push_str(&g.labels().join(","));
    out.push('\n');
    let points = spec.grid_points;
    for m in 0..points {
        let t = m as f64 / (points - 1) as f64;
        let x = if spec.log_spacing {
            (spec.lo.ln() + t * (spec.hi.ln() - spec.lo.ln())).exp()
        } else {
            spec.lo + t * (spec.hi - spec.lo)
        };
        let values = match (param, spec.param) {
            (ParamArg::Lambda, _) => {
                let params = PwpParams {
                    lambda: x,
                    tol: spec.series_tol,
                    max_terms: spec.series_max_terms,
                };
                indirect_scores(&pwp_transform(g.matrix(), &params)?, spec.score_kind).values
            }
            (ParamArg::Epsilon, pwp_core::sweep::SweepParam::Epsilon { edge, base_lambda }) => {
                let gp = g.with_added_weight(edge.0, edge.1, x)?;
                let params = PwpParams {
                    lambda: base_lambda,
                    tol: spec.series_tol,
                    max_terms: spec.series_max_terms,
                };
                indirect_scores(&pwp_transform(gp.matrix(), &params)?, spec.score_kind).values
            }
            _ => unreachable!("spec.param always matches the command's param"),
        };
        out.push_str(&fmt12(x));
        for v in values {
            out.push(',');
            out.push_str(&fmt12(v));
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_generate(
    family: FamilyArg,
    n: usize,
    eps: f64,
    edge: &Option<String>,
    output: &Option<PathBuf>,
) -> Result<(), Error> {
    let g = match family {
        FamilyArg::Linear => linear_graph(n)?,
        FamilyArg::Circuit => circuit_graph(n)?,
        FamilyArg::LinearEps => {
            let base = linear_graph(n)?;
            let (s, t) = match edge {
                Some(spec) => parse_edge_numbers(spec, n)?,
                None if n == 6 => (1, 3), // the reference-table placement 2 -> 4
                None => {
                    return Err(Error::InvalidParams(
                        "--edge is required for linear-eps when n != 6".into(),
                    ))
                }
            };
            base.with_added_weight(s, t, eps)?
        }
        FamilyArg::CircuitEps => {
            let base = circuit_graph(n)?;
            let (s, t) = match edge {
                Some(spec) => parse_edge_numbers(spec, n)?,
                None if n == 6 => (2, 5), // the reference placement 3 -> 6
                None => {
                    return Err(Error::InvalidParams(
                        "--edge is required for circuit-eps when n != 6".into(),
                    ))
                }
            };
            base.with_added_weight(s, t, eps)?
        }
        FamilyArg::ProcessMatter => process_matter_example(),
    };
    write_or_print(output, &to_matrix_csv(&g))
}

/// Crossing table printed by paper-tables: analytic consecutive crossings of
/// the path graph next to the sweep-detected values.
fn crossing_table(n: usize) -> Result<String, Error> {
    let d = linear_graph(n)?.matrix().clone();
    let k = n.div_ceil(2);
    let hi = crossing_consecutive(n, k - 1)?.lambda_star * 1.5;
    let spec = SweepSpec::lambda(0.5, hi).with_refine_tol(1e-9);
    let report = lambda_sweep(&d, &spec)?;
    let mut out = String::new();
    out.push_str(&format!("consecutive crossings of the {n}-path:\n"));
    out.push_str("  i  analytic          sweep-detected    |diff|\n");
    for i in 1..k {
        let analytic = crossing_consecutive(n, i)?.lambda_star;
        let detected = report
            .crossings
            .iter()
            .map(|c| c.param)
            .min_by(|a, b| (a - analytic).abs().total_cmp(&(b - analytic).abs()))
            .ok_or_else(|| Error::InvalidParams("sweep found no crossings".into()))?;
        out.push_str(&format!(
            "  {i}  {:<17.12} {:<17.12} {:.3e}\n",
            analytic,
            detected,
            (detected - analytic).abs()
        ));
    }
    Ok(out)
}

fn cmd_paper_tables(out_dir: &Path) -> Result<bool, Error> {
    let mut all_pass = true;

    let l6 = paper_tables::reproduce_l6()?;
    print!("{}", l6.render());
    all_pass &= l6.pass;

    let c6 = paper_tables::reproduce_c6()?;
    print!("{}", c6.render());
    all_pass &= c6.pass;

    print!("{}", crossing_table(6)?);
    print!("{}", crossing_table(11)?);

    std::fs::create_dir_all(out_dir)?;
    for n in [2usize, 3, 6, 11] {
        let path = out_dir.join(format!("importance_curves_l{n}.csv"));
        let mut csv = String::from("lambda");
        for j in 1..=n {
            csv.push_str(&format!(",{j}"));
        }
        csv.push('\n');
        let samples = 300;
        for m in 0..samples {
            let lambda = 0.05 + (30.0 - 0.05) * m as f64 / (samples - 1) as f64;
            csv.push_str(&fmt12(lambda));
            for j in 1..=n {
                csv.push(',');
                csv.push_str(&fmt12(linear_importance(n, j, lambda)?));
            }
            csv.push('\n');
        }
        std::fs::write(&path, csv)?;
        println!("wrote {}", path.display());
    }

    Ok(all_pass)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // data and usage problems
        Error::Shape(_)
        | Error::Parse { .. }
        | Error::BadWeight(_)
        | Error::DuplicateEdge { .. }
        | Error::BlockStructure { .. }
        | Error::Index(_)
        | Error::InvalidParams(_)
        | Error::Io(_) => 2,
        // computation did not succeed
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, Error> = match &cli.command {
        Command::Transform {
            input,
            series,
            output,
        } => cmd_transform(input, series, output).map(|()| true),
        Command::Rank {
            input,
            lambda,
            kind,
            direct,
            tie_tol,
            tol,
        } => cmd_rank(input, *lambda, (*kind).into(), *direct, *tie_tol, *tol).map(|()| true),
        Command::Sweep {
            input,
            param,
            lo,
            hi,
            grid,
            refine_tol,
            kind,
            edge,
            base_lambda,
            format,
            curves,
            check_conjecture,
            tol,
        } => cmd_sweep(
            input,
            *param,
            *lo,
            *hi,
            *grid,
            *refine_tol,
            (*kind).into(),
            edge,
            *base_lambda,
            *format,
            curves,
            *check_conjecture,
            *tol,
        )
        .map(|()| true),
        Command::PaperTables { out_dir } => cmd_paper_tables(out_dir),
        Command::Generate {
            family,
            n,
            eps,
            edge,
            output,
        } => cmd_generate(*family, *n, *eps, edge, output).map(|()| true),
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: reproduction checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
