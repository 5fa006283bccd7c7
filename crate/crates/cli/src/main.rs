//! Command-line front end: decide, verify and emit plot grids from JSON
//! problem files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bezout_core::pipeline::{emit_grid, run_spec, ProblemSpec, Report, RunError, Task, EXIT_INPUT};
use bezout_core::zeros::SearchRect;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bezout",
    version,
    about = "Common zeros of entire functions with polynomial densities"
)]
struct Cli {
    /// Upper bound on worker threads.
    #[arg(long, global = true, env = "BEZOUT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic verdict only.
    Decide(Io),
    /// Verdict plus the numerical cross-checks listed in the problem file.
    Verify {
        #[command(flatten)]
        io: Io,
        /// Search rectangle as `re_min,re_max,im_min,im_max`.
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
        rect: Option<SearchRect>,
        /// Newton step tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Operator grid size.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// `|F₁|` and `|F_{2,1}|` over the rectangle as CSV.
    EmitGrid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Points per axis; defaults to the problem's grid_n.
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
}

fn parse_rect(s: &str) -> Result<SearchRect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok(SearchRect::new(a, b, c, d)),
        _ => Err("expected re_min,re_max,im_min,im_max".into()),
    }
}

fn load(path: &Path) -> Result<ProblemSpec, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    Ok(ProblemSpec::parse(&text)?)
}

fn write(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

fn summarize(report: &Report) {
    if let Some(banner) = &report.banner {
        println!("{banner}");
    }
    let v = &report.verdict;
    println!("verdict: {:?} ({})", v.outcome, v.theorem);
    if let Some(reason) = &v.diagnostics.reason {
        println!("reason: {reason}");
    }
    if let Some(cmp) = &report.comparison {
        match cmp.min_distance {
            Some(d) => println!(
                "common zeros at delta {:e}: {} (min distance {d:.3e})",
                cmp.delta,
                cmp.common.len()
            ),
            None => println!("common zeros at delta {:e}: 0", cmp.delta),
        }
    }
    if let Some(op) = &report.operator {
        println!("identity residuals: {:?}", op.residuals);
    }
    for note in &report.notes {
        println!("note: {note}");
    }
}

fn execute(cli: Cli) -> Result<i32, RunError> {
    match cli.command {
        Command::Decide(io) => {
            let mut spec = load(&io.input)?;
            spec.tasks = [Task::Decide].into_iter().collect();
            let report = run_spec(&spec)?;
            write(&io.output, &report.to_json())?;
            summarize(&report);
            Ok(report.exit_code)
        }
        Command::Verify {
            io,
            rect,
            tol,
            grid,
        } => {
            let mut spec = load(&io.input)?;
            if let Some(r) = rect {
                spec.rect = SearchRect {
                    boundary_margin: spec.rect.boundary_margin,
                    ..r
                };
            }
            if let Some(t) = tol {
                spec.tol = t;
            }
            if let Some(n) = grid {
                spec.grid_n = n;
            }
            spec.validate()?;
            let report = run_spec(&spec)?;
            write(&io.output, &report.to_json())?;
            summarize(&report);
            Ok(report.exit_code)
        }
        Command::EmitGrid { input, csv, grid } => {
            let spec = load(&input)?;
            let n = grid.unwrap_or(spec.grid_n);
            write(&csv, &emit_grid(&spec, n)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("warning: thread cap ignored: {e}");
        }
    }
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
