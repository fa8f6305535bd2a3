use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rootpow::accuracy::{self, AccuracyReport};
use rootpow::distribution::{build_ztable, partition_quadrature, ZTable, DEFAULT_NUM_POINTS};
use rootpow::irls::{irls_location, IrlsProblem, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use rootpow::Lambda;

mod eval;

use eval::{fmt_f64, EvalRequest, Function, XSpec};

#[derive(Parser)]
#[command(name = "rootpow", version)]
#[command(about = "Evaluate the root power transform and the families built on it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function on a grid of x and print `x,value` CSV
    Eval {
        #[arg(long = "fn", value_enum)]
        function: Function,

        /// Shape parameter: a decimal, `inf` or `-inf`
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<Lambda>,

        /// Shape parameter for negative inputs (fpm, relu)
        #[arg(long, allow_hyphen_values = true)]
        lambda_neg: Option<Lambda>,

        /// Scale (rho, k, pdf)
        #[arg(long, default_value_t = 1.0)]
        c: f64,

        /// Comma-separated values or an inclusive range lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        x: XSpec,

        /// Partition-function table for pdf; quadrature is used otherwise
        #[arg(long)]
        ztable: Option<PathBuf>,

        /// Quadrature nodes for pdf when no table is given
        #[arg(long, default_value_t = DEFAULT_NUM_POINTS)]
        num_points: usize,
    },
    /// Geometric-mean error of the naive and stable evaluators
    Accuracy {
        /// Comma-separated lambdas; a built-in sweep when omitted
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        lambdas: Option<Vec<Lambda>>,

        #[arg(long, default_value_t = accuracy::DEFAULT_X_LO)]
        xmin: f64,

        #[arg(long, default_value_t = accuracy::DEFAULT_X_HI)]
        xmax: f64,

        /// Number of log-spaced x samples
        #[arg(long, default_value_t = accuracy::DEFAULT_N)]
        n: usize,
    },
    /// Build a partition-function lookup table and write it as JSON
    Ztable {
        #[arg(long, default_value_t = 512)]
        grid_size: usize,

        #[arg(long, default_value_t = DEFAULT_NUM_POINTS)]
        num_points: usize,

        #[arg(long)]
        output: PathBuf,
    },
    /// Robust location estimate of one-column CSV data, printed as JSON
    Irls {
        #[arg(long)]
        data: PathBuf,

        /// The first row is a header
        #[arg(long)]
        header: bool,

        #[arg(long, allow_hyphen_values = true)]
        lambda: Lambda,

        #[arg(long, default_value_t = 1.0)]
        c: f64,

        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,

        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
}

fn csv_out() -> csv::Writer<io::StdoutLock<'static>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(io::stdout().lock())
}

fn cmd_eval(req: &EvalRequest<'_>, xs: &[f64]) -> Result<()> {
    let f = req.evaluator()?;
    let rows = xs
        .iter()
        .map(|&x| Ok((x, f(x).with_context(|| format!("at x = {}", fmt_f64(x)))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv_out();
    w.write_record(["x", "value"])?;
    for (x, v) in rows {
        w.write_record([fmt_f64(x), fmt_f64(v)])?;
    }
    w.flush()?;
    Ok(())
}

fn write_report(report: &AccuracyReport) -> Result<()> {
    let mut w = csv_out();
    w.write_record(["lambda", "err_naive", "err_stable"])?;
    for row in &report.rows {
        let naive = row.err_naive.map(fmt_f64).unwrap_or_default();
        w.write_record([row.lambda.to_string(), naive, fmt_f64(row.err_stable)])?;
    }
    w.flush()?;
    Ok(())
}

/// Largest relative gap between table lookups and direct quadrature, probed
/// halfway between a spread of adjacent nodes.
fn spot_check(table: &ZTable) -> Result<f64> {
    let s = table.s_grid();
    let probes = 16.min(s.len() - 1);
    let mut worst = 0.0f64;
    for j in 0..probes {
        let i = j * (s.len() - 1) / probes;
        let lambda = Lambda::from_compactified(0.5 * (s[i] + s[i + 1]))?;
        let direct = partition_quadrature(lambda, table.num_points())?;
        worst = worst.max(((table.lookup(lambda)? - direct) / direct).abs());
    }
    Ok(worst)
}

fn cmd_ztable(grid_size: usize, num_points: usize, output: &PathBuf) -> Result<()> {
    let table = build_ztable(grid_size, num_points)?;
    let file = File::create(output).with_context(|| format!("cannot create {}", output.display()))?;
    let mut w = BufWriter::new(file);
    table.write_to(&mut w)?;
    w.flush()
        .with_context(|| format!("cannot write {}", output.display()))?;
    eprintln!(
        "wrote {}: {} nodes, {} quadrature points, max spot-check relative error {:e}",
        output.display(),
        table.len(),
        table.num_points(),
        spot_check(&table)?
    );
    Ok(())
}

fn read_observations(path: &PathBuf, header: bool) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.with_context(|| format!("cannot read {}", path.display()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 1 {
            bail!("line {line}: expected one column, found {}", rec.len());
        }
        let field = rec[0].trim();
        let v: f64 = field
            .parse()
            .with_context(|| format!("line {line}: cannot parse `{field}` as a number"))?;
        out.push(v);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval {
            function,
            lambda,
            lambda_neg,
            c,
            x,
            ztable,
            num_points,
        } => {
            let table = ztable
                .map(|p| {
                    let f = File::open(&p).with_context(|| format!("cannot open {}", p.display()))?;
                    Ok::<_, anyhow::Error>(ZTable::read_from(io::BufReader::new(f))?)
                })
                .transpose()?;
            let req = EvalRequest {
                function,
                lambda,
                lambda_neg,
                c,
                ztable: table.as_ref(),
                num_points,
            };
            cmd_eval(&req, &x.0)?;
        }
        Command::Accuracy {
            lambdas,
            xmin,
            xmax,
            n,
        } => {
            let lambdas = lambdas.unwrap_or_else(accuracy::default_sweep_lambdas);
            write_report(&accuracy::error_sweep(&lambdas, xmin, xmax, n)?)?;
        }
        Command::Ztable {
            grid_size,
            num_points,
            output,
        } => cmd_ztable(grid_size, num_points, &output)?,
        Command::Irls {
            data,
            header,
            lambda,
            c,
            tol,
            max_iters,
        } => {
            let xs = read_observations(&data, header)?;
            let problem = IrlsProblem::new(xs, lambda, c)?
                .with_tol(tol)?
                .with_max_iters(max_iters)?;
            let result = irls_location(&problem);
            println!("{}", serde_json::to_string(&result)?);
            if !result.converged {
                eprintln!("did not converge in {} iterations", result.iterations);
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rootpow: {e:#}");
            ExitCode::FAILURE
        }
    }
}
