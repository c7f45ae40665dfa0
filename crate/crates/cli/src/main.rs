use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use antilearn::config::{check_order, RunConfig, DEFAULT_HADAMARD_ORDER};
use antilearn::report::{self, render_markdown, write_rows};
use antilearn::series::write_series;
use antilearn::{render_matrix_pgm, run_parallel, write_dataset_csv, Error, FigureSeries, Result};
use antilearn_core::data::hadamard::{dataset_from_matrix, sylvester_hadamard};
use antilearn_core::data::xor::{pyramid_xor_dataset, random_xor_dataset, xor_dataset, XorExpr};
use antilearn_core::harness::Grid;
use antilearn_core::BinaryDataset;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

/// Anti-learning datasets, classifiers and cross-validation sweeps.
#[derive(Parser)]
#[command(name = "antilearn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one of the synthetic datasets as CSV.
    Gen(GenArgs),
    /// Cross-validate classifiers over datasets and fold counts.
    Grid(Box<GridArgs>),
    /// Render a report CSV as per-classifier accuracy tables.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenDataset {
    PyramidXor,
    RandomXor,
    Hadamard,
    /// A parity tree given with --expr.
    CustomXor,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    dataset: GenDataset,
    /// Hadamard matrix order, a power of two.
    #[arg(long, default_value_t = DEFAULT_HADAMARD_ORDER)]
    order: usize,
    /// Expression such as `xor(xor(a,b),c)` over variables a..h.
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Also render the Hadamard matrix as a plain PGM image.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// key = value settings applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma list of pyramid-xor, random-xor, hadamard, hadamard-N or CSV paths.
    #[arg(long)]
    datasets: Option<String>,
    /// Comma list of nb, svm, mlp.
    #[arg(long)]
    classifiers: Option<String>,
    /// Comma list of fold counts.
    #[arg(long)]
    folds: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Flip validation predictions.
    #[arg(long, overrides_with = "no_invert")]
    invert: bool,
    #[arg(long)]
    no_invert: bool,
    /// Keep the class ratio in every fold (the default).
    #[arg(long, overrides_with = "no_stratify")]
    stratify: bool,
    #[arg(long)]
    no_stratify: bool,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Hadamard order used by the `hadamard` dataset.
    #[arg(long)]
    order: Option<usize>,
    /// Report CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-classifier figure series.
    #[arg(long)]
    series_out: Option<PathBuf>,
    /// Per-fold report CSV path.
    #[arg(long)]
    long_out: Option<PathBuf>,
    #[arg(long)]
    nb_alpha: Option<f64>,
    #[arg(long)]
    svm_c: Option<f64>,
    /// rbf, linear or poly.
    #[arg(long)]
    svm_kernel: Option<String>,
    #[arg(long)]
    svm_gamma: Option<f64>,
    #[arg(long)]
    svm_degree: Option<u32>,
    #[arg(long)]
    svm_tol: Option<f64>,
    #[arg(long)]
    svm_max_passes: Option<usize>,
    #[arg(long)]
    mlp_hidden: Option<usize>,
    #[arg(long)]
    mlp_learning_rate: Option<f64>,
    #[arg(long)]
    mlp_momentum: Option<f64>,
    #[arg(long)]
    mlp_epochs: Option<usize>,
    /// Feed 0/1 inputs to the network unscaled instead of as -1/+1.
    #[arg(long)]
    mlp_raw_inputs: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
}

/// Usage line of the subcommand named on the command line, if any.
fn usage_text() -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = std::env::args().nth(1).unwrap_or_default();
    match cmd.find_subcommand_mut(&sub) {
        Some(sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", usage_text());
            }
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen(&args),
        Command::Grid(args) => grid(&args),
        Command::Report(args) => report(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Usage(_)) {
                eprintln!("\n{}\n\nFor more information, try '--help'.", usage_text());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::Usage(message.into())
}

fn gen(args: &GenArgs) -> Result<ExitCode> {
    if args.pgm.is_some() && args.dataset != GenDataset::Hadamard {
        return Err(usage("--pgm is only available for --dataset hadamard"));
    }
    if args.expr.is_some() != (args.dataset == GenDataset::CustomXor) {
        return Err(usage("--expr goes together with --dataset custom-xor"));
    }
    let ds: BinaryDataset = match args.dataset {
        GenDataset::PyramidXor => pyramid_xor_dataset(),
        GenDataset::RandomXor => random_xor_dataset(),
        GenDataset::CustomXor => {
            let text = args.expr.as_deref().unwrap_or_default();
            let expr: XorExpr = text.parse().map_err(|e| usage(format!("--expr: {e}")))?;
            xor_dataset("custom-xor", &expr)
        }
        GenDataset::Hadamard => {
            let order = check_order(args.order).map_err(usage)?;
            let h = sylvester_hadamard(order.trailing_zeros())?;
            if let Some(path) = &args.pgm {
                render_matrix_pgm(&h, path)?;
            }
            dataset_from_matrix(&h)?
        }
    };
    write_dataset_csv(&ds, &args.out)?;
    let [neg, pos] = ds.class_counts();
    println!(
        "{}: {} rows, {} feature columns, classes {neg}/{pos} (0/1) -> {}",
        ds.name(),
        ds.len(),
        ds.width(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_config(args: &GridArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    let mut flags: Vec<(&str, String)> = Vec::new();
    let mut put = |key, value: Option<String>| {
        if let Some(v) = value {
            flags.push((key, v));
        }
    };
    put("datasets", args.datasets.clone());
    put("classifiers", args.classifiers.clone());
    put("folds", args.folds.clone());
    put("seed", args.seed.map(|v| v.to_string()));
    put("threads", args.threads.map(|v| v.to_string()));
    put("order", args.order.map(|v| v.to_string()));
    put("out", args.out.as_ref().map(|p| p.display().to_string()));
    put(
        "series_out",
        args.series_out.as_ref().map(|p| p.display().to_string()),
    );
    put(
        "long_out",
        args.long_out.as_ref().map(|p| p.display().to_string()),
    );
    put("nb_alpha", args.nb_alpha.map(|v| v.to_string()));
    put("svm_c", args.svm_c.map(|v| v.to_string()));
    // Kernel before its parameters so `--svm-kernel poly --svm-degree 2` works.
    put("svm_kernel", args.svm_kernel.clone());
    put("svm_gamma", args.svm_gamma.map(|v| v.to_string()));
    put("svm_degree", args.svm_degree.map(|v| v.to_string()));
    put("svm_tol", args.svm_tol.map(|v| v.to_string()));
    put("svm_max_passes", args.svm_max_passes.map(|v| v.to_string()));
    put("mlp_hidden", args.mlp_hidden.map(|v| v.to_string()));
    put(
        "mlp_learning_rate",
        args.mlp_learning_rate.map(|v| v.to_string()),
    );
    put("mlp_momentum", args.mlp_momentum.map(|v| v.to_string()));
    put("mlp_epochs", args.mlp_epochs.map(|v| v.to_string()));
    put(
        "mlp_scale_inputs",
        args.mlp_raw_inputs.then(|| "false".into()),
    );
    put(
        "invert",
        (args.invert || args.no_invert).then(|| args.invert.to_string()),
    );
    put(
        "stratify",
        (args.stratify || args.no_stratify).then(|| args.stratify.to_string()),
    );
    for (key, value) in flags {
        let flag = format!("--{}", key.replace('_', "-"));
        cfg.set(key, &value)
            .map_err(|m| usage(format!("{flag}: {m}")))?;
    }
    Ok(cfg)
}

fn grid(args: &GridArgs) -> Result<ExitCode> {
    let cfg = run_config(args)?;
    let (datasets, specs) = cfg.prepare()?;
    let grid = Grid::new(&datasets, &specs, &cfg.folds, cfg.seed, cfg.options())
        .map_err(|e| usage(e.to_string()))?;

    let stderr = io::stderr();
    let mut report = run_parallel(&grid, cfg.threads(), |done, total, cell| {
        let status = match &cell.result {
            Ok(r) => format!(
                "train {} val {}",
                report::acc(r.mean_train_acc),
                report::acc(r.mean_val_acc)
            ),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(
            stderr.lock(),
            "[{done:>w$}/{total}] {} {} k={}: {status}",
            cell.dataset,
            cell.algorithm,
            cell.folds,
            w = total.to_string().len()
        );
    })?;
    report.created_at = antilearn::parallel::unix_now();

    let rows = report::rows_from_report(&report);
    match &cfg.out {
        Some(path) => report::write_to_path(path, |buf| write_rows(&rows, buf))?,
        None => write_rows(&rows, io::stdout().lock()).map_err(|e| Error::io("<stdout>", e))?,
    }
    if let Some(path) = &cfg.long_out {
        report::write_to_path(path, |buf| report::write_long(&report, buf))?;
    }
    if let Some(dir) = &cfg.series_out {
        write_series(dir, &FigureSeries::from_report(&report))?;
    }

    let failed = report.failures().count();
    eprintln!(
        "{} cells, {failed} failed, seed {}",
        report.cells.len(),
        report.seed
    );
    Ok(if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn report(args: &ReportArgs) -> Result<ExitCode> {
    let rows = report::read_rows(&args.input)?;
    let mut out = io::stdout().lock();
    match args.format {
        Format::Markdown => out
            .write_all(render_markdown(&rows).as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?,
        Format::Csv => write_rows(&rows, out).map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(ExitCode::SUCCESS)
}
