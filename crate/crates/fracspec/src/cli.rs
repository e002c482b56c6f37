//! Command-line front end: every computation as a reproducible run emitting
//! CSV or JSON with fixed formatting (10 significant digits, scientific
//! below 1e-4) and a fixed summation/iteration order, so identical
//! invocations produce byte-identical output.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on numerical failures
//! (with a one-line JSON error record on stderr).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::asymptotics::{self, EigenfunApprox};
use crate::error::{Error, Result};
use crate::filtering::{mmse_asym, mmse_series, ChannelModel, MmseMode};
use crate::kernels::{ProcessKind, ProcessSpec};
use crate::nystrom::{self, NystromGrid};

#[derive(Parser)]
#[command(
    name = "fracspec",
    version,
    about = "Spectral analysis of fractional-process covariance operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct ProcessArgs {
    /// Process kind: fbm | fou | ifbm
    #[arg(long)]
    process: String,
    /// Hurst index, in (0, 1)
    #[arg(long)]
    hurst: f64,
    /// Drift (fOU only)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format: csv | json
    #[arg(long, default_value = "csv")]
    output: String,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form constants of the asymptotic formulas
    Constants {
        #[command(flatten)]
        process: ProcessArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical eigenvalues and frequencies on a uniform grid
    Eigs {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long = "L", default_value_t = 1000)]
        l: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-10)]
        eigen_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form eigenvalue/frequency pairs
    Asym {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numerical versus asymptotic comparison table
    Compare {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long = "L", default_value_t = 1000)]
        l: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One eigenfunction: numeric samples, asymptotic approximation and the
    /// oscillatory term alone
    Eigenfunction {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long = "L", default_value_t = 1000)]
        l: usize,
        /// Which eigenfunction (1-based)
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Number of sample intervals on [0, 1]
        #[arg(long, default_value_t = 512)]
        x_grid: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimation error of the fOU signal in white noise: series versus
    /// closed form over a noise grid
    Filtering {
        #[command(flatten)]
        process: ProcessArgs,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu: f64,
        /// Comma-separated noise intensities
        #[arg(long, default_value = "1e-8")]
        eps: String,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        /// Interior evaluation point, in (0, 1)
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Cell {
    Int(i64),
    Num(f64),
    Text(&'static str),
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

/// 10 significant digits; scientific notation below 1e-4.
fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() < 1e-4 {
        format!("{v:.9e}")
    } else {
        let magnitude = v.abs().log10().floor() as i32;
        let precision = (9 - magnitude).max(0) as usize;
        format!("{v:.precision$}")
    }
}

fn render_cell(cell: &Cell) -> Result<String> {
    Ok(match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) => {
            if !v.is_finite() {
                return Err(Error::Invalid(format!("non-finite value {v} in output")));
            }
            format_value(*v)
        }
        Cell::Text(s) => (*s).to_string(),
    })
}

fn render_csv(table: &Table) -> Result<String> {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Result<Vec<String>> = row.iter().map(render_cell).collect();
        out.push_str(&cells?.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn render_json(table: &Table) -> Result<String> {
    // Rows become objects with the CSV column names, in column order.
    let mut out = String::from("[\n");
    for (r, row) in table.rows.iter().enumerate() {
        out.push_str("  {");
        for (c, (name, cell)) in table.columns.iter().zip(row).enumerate() {
            if c > 0 {
                out.push_str(", ");
            }
            out.push('"');
            out.push_str(name);
            out.push_str("\": ");
            match cell {
                Cell::Text(s) => {
                    out.push('"');
                    out.push_str(s);
                    out.push('"');
                }
                other => out.push_str(&render_cell(other)?),
            }
        }
        out.push('}');
        if r + 1 < table.rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out.push('\n');
    Ok(out)
}

fn parse_process(args: &ProcessArgs) -> Result<ProcessSpec> {
    let kind = match args.process.as_str() {
        "fbm" => ProcessKind::Fbm,
        "fou" => ProcessKind::Fou,
        "ifbm" => ProcessKind::Ifbm,
        other => {
            return Err(Error::Invalid(format!(
                "unknown process '{other}' (expected fbm, fou or ifbm)"
            )))
        }
    };
    if !(args.hurst > 0.0 && args.hurst < 1.0) {
        return Err(Error::Invalid(format!(
            "Hurst index must satisfy H in (0, 1), got {}",
            args.hurst
        )));
    }
    ProcessSpec::new(kind, args.hurst, args.beta)
}

fn validate_l(l: usize, spec: &ProcessSpec) -> Result<()> {
    if !(8..=200_000).contains(&l) {
        return Err(Error::Invalid(format!("L must lie in [8, 200000], got {l}")));
    }
    if spec.kind() == ProcessKind::Fou && spec.hurst() < 0.5 && l > 4000 {
        return Err(Error::Invalid(
            "fOU with H < 1/2 uses a dense kernel table; L <= 4000 required".into(),
        ));
    }
    Ok(())
}

fn validate_n_max(n_max: usize) -> Result<()> {
    if !(1..=64).contains(&n_max) {
        return Err(Error::Invalid(format!("n-max must lie in [1, 64], got {n_max}")));
    }
    Ok(())
}

fn parse_eps_list(raw: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for piece in raw.split(',') {
        let v: f64 = piece
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad noise intensity '{piece}'")))?;
        if !(v > 0.0) {
            return Err(Error::Invalid(format!("noise intensity must be positive, got {v}")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Invalid("empty noise-intensity list".into()));
    }
    Ok(out)
}

fn constants_table(spec: &ProcessSpec) -> Result<Table> {
    let c = asymptotics::constants_for(spec)?;
    let mut rows: Vec<(&'static str, f64)> = vec![
        ("alpha", c.alpha),
        ("ell_h", c.ell_h),
        ("b_alpha", c.b_alpha),
        ("b0", c.b0),
        ("b1", c.b1),
        ("b2", c.b2),
        ("delta", c.delta),
        ("sigma1", c.sigma1),
        ("sigma2", c.sigma2),
        ("c_exp", c.c_exp),
        ("s_exp", c.s_exp),
        ("phase_angle", c.phase_angle),
        ("c_mean", c.c_mean),
    ];
    if let Some(aux) = c.aux {
        rows.extend([
            ("aux_a1", aux.a1),
            ("aux_b1", aux.b1),
            ("aux_a2", aux.a2),
            ("aux_b2", aux.b2),
            ("aux_a3", aux.a3),
            ("aux_b3", aux.b3),
        ]);
    }
    Ok(Table {
        columns: vec!["name", "value"],
        rows: rows
            .into_iter()
            .map(|(name, value)| vec![Cell::Text(name), Cell::Num(value)])
            .collect(),
    })
}

fn eigs_table(spec: &ProcessSpec, l: usize, n_max: usize, tol: f64) -> Result<Table> {
    let grid = NystromGrid::new(l)?;
    let estimates = nystrom::solve(spec, &grid, n_max, tol)?;
    Ok(Table {
        columns: vec!["n", "lambda_hat", "nu_hat"],
        rows: estimates
            .iter()
            .map(|e| {
                vec![
                    Cell::Int(e.n as i64),
                    Cell::Num(e.lambda_hat),
                    Cell::Num(e.nu_hat.unwrap_or(f64::NAN)),
                ]
            })
            .collect(),
    })
}

fn asym_table(spec: &ProcessSpec, n_max: usize) -> Result<Table> {
    let pairs = asymptotics::asym_pairs(spec, n_max)?;
    Ok(Table {
        columns: vec!["n", "nu_tilde", "lambda_tilde"],
        rows: pairs
            .iter()
            .map(|p| vec![Cell::Int(p.n as i64), Cell::Num(p.nu), Cell::Num(p.lambda)])
            .collect(),
    })
}

fn compare_table(spec: &ProcessSpec, l: usize, n_max: usize) -> Result<Table> {
    let rows = nystrom::compare(spec, l, n_max)?;
    Ok(Table {
        columns: vec![
            "n",
            "lambda_hat",
            "nu_hat",
            "lambda_tilde",
            "nu_tilde",
            "rel_err_lambda_pct",
            "rel_err_nu_pct",
        ],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Int(r.n as i64),
                    Cell::Num(r.lambda_hat),
                    Cell::Num(r.nu_hat),
                    Cell::Num(r.lambda_tilde),
                    Cell::Num(r.nu_tilde),
                    Cell::Num(r.rel_err_lambda * 100.0),
                    Cell::Num(r.rel_err_nu * 100.0),
                ]
            })
            .collect(),
    })
}

fn eigenfunction_table(spec: &ProcessSpec, l: usize, n: usize, x_grid: usize) -> Result<Table> {
    let grid = NystromGrid::new(l)?;
    let estimates = nystrom::solve(spec, &grid, n, nystrom::DEFAULT_EIGEN_TOL)?;
    let est = estimates
        .last()
        .ok_or_else(|| Error::Invalid("empty spectrum".into()))?;
    let phi = nystrom::vector_to_function(&est.vector, &grid, n);
    let approx = EigenfunApprox::new(spec)?;

    // Fit the exponential layer where it exists, on the numeric samples.
    let exp_fit = if spec.kind() == ProcessKind::Ifbm && spec.hurst() > 0.5 {
        let xs: Vec<f64> = grid.nodes().collect();
        approx.fit_exp_layer(n, &xs, &phi).ok()
    } else {
        None
    };

    let mut rows = Vec::with_capacity(x_grid + 1);
    for j in 0..=x_grid {
        let x = j as f64 / x_grid as f64;
        // Linear interpolation of the numeric samples onto the output grid.
        let pos = x * l as f64;
        let i0 = (pos.floor() as usize).min(l - 1);
        let frac = pos - i0 as f64;
        let numeric = phi[i0] * (1.0 - frac) + phi[i0 + 1] * frac;
        let mut asym = approx.value(n, x)?;
        if let Some(fit) = &exp_fit {
            asym += approx.exp_layer(fit, n, x)?;
        }
        let osc = approx.oscillatory(n, x)?;
        rows.push(vec![
            Cell::Num(x),
            Cell::Num(numeric),
            Cell::Num(asym),
            Cell::Num(osc),
        ]);
    }
    Ok(Table {
        columns: vec!["x", "phi_numeric", "phi_asym", "phi_osc_only"],
        rows,
    })
}

fn filtering_table(
    spec: &ProcessSpec,
    mu: f64,
    eps_list: &[f64],
    horizon: f64,
    x: f64,
) -> Result<Table> {
    let mut rows = Vec::new();
    for &eps in eps_list {
        let model = ChannelModel::new(mu, eps, horizon, *spec)?;
        for (mode, label, xx) in [
            (MmseMode::Interior, "interior", x),
            (MmseMode::Endpoint, "endpoint", 1.0),
        ] {
            let series = mmse_series(&model, mode, xx, None)?;
            let asym = mmse_asym(&model, mode)?;
            rows.push(vec![
                Cell::Num(eps),
                Cell::Text(label),
                Cell::Num(series.value),
                Cell::Num(asym.value),
                Cell::Num(series.value / asym.value),
                Cell::Int(series.n_terms.unwrap_or(0) as i64),
                Cell::Num(series.tail.unwrap_or(0.0)),
            ]);
        }
    }
    Ok(Table {
        columns: vec![
            "eps", "mode", "p_series", "p_asym", "ratio", "n_terms", "tail",
        ],
        rows,
    })
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var("FRACSPEC_THREADS") {
        let n: usize = raw
            .parse()
            .map_err(|_| Error::Invalid(format!("FRACSPEC_THREADS must be an integer >= 1, got '{raw}'")))?;
        if n < 1 {
            return Err(Error::Invalid(
                "FRACSPEC_THREADS must be an integer >= 1".into(),
            ));
        }
        // A second initialization (e.g. repeated calls in one process) keeps
        // the first pool; that is fine because the output does not depend on
        // the thread count.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    let rendered = match output.output.as_str() {
        "csv" => render_csv(table)?,
        "json" => render_json(table)?,
        other => {
            return Err(Error::Invalid(format!(
                "unknown output format '{other}' (expected csv or json)"
            )))
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(rendered.as_bytes())
                .map_err(|e| Error::Invalid(format!("stdout write failed: {e}")))
        }
    }
}

/// Validate configuration early; everything failing afterwards is a
/// numerical error, not a usage error.
fn validate(cmd: &Cmd) -> Result<ProcessSpec> {
    match cmd {
        Cmd::Constants { process, output } | Cmd::Asym { process, output, .. } => {
            check_output(output)?;
            let spec = parse_process(process)?;
            if let Cmd::Asym { n_max, .. } = cmd {
                validate_n_max(*n_max)?;
            }
            Ok(spec)
        }
        Cmd::Eigs {
            process,
            l,
            n_max,
            eigen_tol,
            output,
        } => {
            check_output(output)?;
            let spec = parse_process(process)?;
            validate_l(*l, &spec)?;
            validate_n_max(*n_max)?;
            if !(*eigen_tol > 0.0) {
                return Err(Error::Invalid("eigen-tol must be positive".into()));
            }
            Ok(spec)
        }
        Cmd::Compare {
            process,
            l,
            n_max,
            output,
        } => {
            check_output(output)?;
            let spec = parse_process(process)?;
            validate_l(*l, &spec)?;
            validate_n_max(*n_max)?;
            Ok(spec)
        }
        Cmd::Eigenfunction {
            process,
            l,
            n,
            x_grid,
            output,
        } => {
            check_output(output)?;
            let spec = parse_process(process)?;
            validate_l(*l, &spec)?;
            validate_n_max(*n)?;
            if *x_grid < 2 {
                return Err(Error::Invalid(format!("x-grid must be at least 2, got {x_grid}")));
            }
            Ok(spec)
        }
        Cmd::Filtering {
            process,
            mu,
            eps,
            horizon,
            x,
            output,
        } => {
            check_output(output)?;
            let spec = parse_process(process)?;
            if spec.kind() != ProcessKind::Fou {
                return Err(Error::Invalid(
                    "filtering is defined for the fOU signal (use --process fou)".into(),
                ));
            }
            if *mu == 0.0 {
                return Err(Error::Invalid("mu must be nonzero".into()));
            }
            if !(*horizon > 0.0) {
                return Err(Error::Invalid("horizon must be positive".into()));
            }
            if !(*x > 0.0 && *x < 1.0) {
                return Err(Error::Invalid(format!("x must lie in (0, 1), got {x}")));
            }
            parse_eps_list(eps)?;
            Ok(spec)
        }
    }
}

fn check_output(output: &OutputArgs) -> Result<()> {
    match output.output.as_str() {
        "csv" | "json" => Ok(()),
        other => Err(Error::Invalid(format!(
            "unknown output format '{other}' (expected csv or json)"
        ))),
    }
}

fn execute(cmd: &Cmd, spec: &ProcessSpec) -> Result<()> {
    match cmd {
        Cmd::Constants { output, .. } => emit(&constants_table(spec)?, output),
        Cmd::Eigs {
            l,
            n_max,
            eigen_tol,
            output,
            ..
        } => emit(&eigs_table(spec, *l, *n_max, *eigen_tol)?, output),
        Cmd::Asym { n_max, output, .. } => emit(&asym_table(spec, *n_max)?, output),
        Cmd::Compare {
            l, n_max, output, ..
        } => emit(&compare_table(spec, *l, *n_max)?, output),
        Cmd::Eigenfunction {
            l,
            n,
            x_grid,
            output,
            ..
        } => emit(&eigenfunction_table(spec, *l, *n, *x_grid)?, output),
        Cmd::Filtering {
            mu,
            eps,
            horizon,
            x,
            output,
            ..
        } => {
            let eps_list = parse_eps_list(eps)?;
            emit(&filtering_table(spec, *mu, &eps_list, *horizon, *x)?, output)
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Constants { .. } => "constants",
        Cmd::Eigs { .. } => "eigs",
        Cmd::Asym { .. } => "asym",
        Cmd::Compare { .. } => "compare",
        Cmd::Eigenfunction { .. } => "eigenfunction",
        Cmd::Filtering { .. } => "filtering",
    }
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ")
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // clap handles --help/--version through errors with exit code 0.
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };

    if let Err(err) = configure_threads() {
        eprintln!("{err}");
        return 2;
    }

    let spec = match validate(&cli.command) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("{err}");
            return 2;
        }
    };

    match execute(&cli.command, &spec) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!(
                "{{\"error\": \"numerical\", \"command\": \"{}\", \"detail\": \"{}\"}}",
                command_name(&cli.command),
                json_escape(&err.to_string())
            );
            1
        }
    }
}
