use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use subdiv_core::analysis::{analyze, reproduction_degree, DEFAULT_CAP};
use subdiv_core::engine::{
    cascade, default_oracle_box, stepwise_oracle, subdivide_once, GridData, PolyFunc,
    MAX_CASCADE_LEVEL,
};
use subdiv_core::multi_index::{up_to_total_degree, IndexBox, MultiIndex};
use subdiv_core::rational::{format_rational, parse_rational, pow, Rational};
use subdiv_core::schemes::{builtin, BUILTIN_NAMES};
use subdiv_core::{read_mask, write_mask, Mask};

#[derive(Parser, Debug)]
#[command(
    name = "subdiv",
    version,
    about = "Exact polynomial reproduction analysis for subdivision schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generation degree, parametrization shift and reproduction degree.
    Analyze {
        /// Mask document, or `-` for standard input.
        mask: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check sampled monomials against one exact subdivision step.
    Oracle {
        mask: PathBuf,
        /// Highest total degree of the tested monomials.
        #[arg(long)]
        degree: u32,
        /// Levels 0..=steps are tested.
        #[arg(long, default_value_t = 2)]
        steps: u32,
        /// Half-width of the sampling cube; defaults to support radius + 2|m|.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        radius: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the mask document of a built-in scheme.
    Scheme { name: String },
    /// Apply the subdivision operator `steps` times and print the grid as CSV.
    Subdivide {
        mask: PathBuf,
        /// Initial data as CSV (`i1,...,is,value` per line); the unit impulse if omitted.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        steps: u32,
    },
    /// Run the cascade algorithm and write `<out>.csv` (and `<out>.pgm` for bivariate masks).
    Render {
        mask: PathBuf,
        #[arg(long, default_value_t = 6)]
        steps: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invariant(String),
    #[error("cross-check disagreement: {0}")]
    Disagreement(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Disagreement(_) => 3,
        }
    }
}

impl From<subdiv_core::Error> for CliError {
    fn from(e: subdiv_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn load_mask(path: &Path) -> CliResult<Mask> {
    let text = read_input(path)?;
    read_mask(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn cmd_analyze(path: &Path, cap: u32, format: Format) -> CliResult<String> {
    let report = analyze(&load_mask(path)?, cap);
    Ok(match format {
        Format::Text => report.render_text(),
        Format::Json => format!("{:#}\n", report.to_json()),
    })
}

struct OracleRow {
    level: u32,
    monomial: MultiIndex,
    passed: bool,
    checked: usize,
    residual: Rational,
}

fn cmd_oracle(
    path: &Path,
    degree: u32,
    steps: u32,
    radius: Option<i64>,
    cap: u32,
    format: Format,
) -> CliResult<String> {
    let mask = load_mask(path)?;
    let (tau, search) = reproduction_degree(&mask, cap);
    let tau = tau.ok_or_else(|| {
        CliError::Invariant(
            "sum rules of order 1 fail; no parametrization shift to sample at".into(),
        )
    })?;
    let certified = search.degree;
    let bx = match radius {
        Some(r) => IndexBox::cube(mask.dimension(), r),
        None => default_oracle_box(&mask),
    };
    let mut rows = Vec::new();
    for j in up_to_total_degree(mask.dimension(), degree) {
        let p = PolyFunc::monomial(&j)?;
        for level in 0..=steps {
            let rep = stepwise_oracle(&mask, &p, &tau, level, &bx).map_err(|e| match e {
                subdiv_core::Error::EmptyTrustedBox => CliError::Usage(format!(
                    "{e}; use a larger --radius (at least {})",
                    mask.support_radius() + 1
                )),
                other => other.into(),
            })?;
            rows.push(OracleRow {
                level,
                monomial: j.clone(),
                passed: rep.passed,
                checked: rep.checked,
                residual: rep.worst_residual,
            });
        }
    }

    // every monomial up to the certified degree must pass, and some monomial
    // one degree higher must fail
    let d = certified.map_or(-1, i64::from);
    let mut disagreements: Vec<String> = rows
        .iter()
        .filter(|r| r.monomial.total() <= d && !r.passed)
        .map(|r| {
            format!(
                "x^{} fails at level {} below certified degree {d}",
                r.monomial, r.level
            )
        })
        .collect();
    let next = d + 1;
    if next <= i64::from(degree) && certified != Some(cap) {
        let caught = rows.iter().any(|r| r.monomial.total() == next && !r.passed);
        if !caught {
            disagreements.push(format!("every degree-{next} monomial passes"));
        }
    }

    let out = match format {
        Format::Text => {
            let mut s = format!(
                "tau: {tau}\ncertified reproduction degree: {}\n",
                certified.map_or("none".to_string(), |d| d.to_string())
            );
            s.push_str("level  monomial  result  checked  residual\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:<5}  {:<8}  {:<6}  {:<7}  {}\n",
                    r.level,
                    r.monomial.to_string(),
                    if r.passed { "pass" } else { "FAIL" },
                    r.checked,
                    format_rational(&r.residual)
                ));
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "tau": tau.components().iter().map(format_rational).collect::<Vec<_>>(),
                "certified_reproduction_degree": certified,
                "results": rows.iter().map(|r| json!({
                    "level": r.level,
                    "monomial": r.monomial.entries(),
                    "passed": r.passed,
                    "checked": r.checked,
                    "worst_residual": format_rational(&r.residual),
                })).collect::<Vec<_>>(),
            });
            format!("{doc:#}\n")
        }
    };
    if disagreements.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Disagreement(disagreements.join("; ")))
    }
}

fn cmd_scheme(name: &str) -> CliResult<String> {
    builtin(name).map(|m| write_mask(&m)).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown scheme '{name}'; available: {}",
            BUILTIN_NAMES.join(", ")
        ))
    })
}

fn parse_data(text: &str, dim: usize) -> CliResult<GridData> {
    let mut entries: Vec<(MultiIndex, Rational)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('i') {
            continue;
        }
        let bad = |msg: String| CliError::Usage(format!("data line {}: {msg}", n + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < dim + 1 {
            return Err(bad(format!("expected {} index columns and a value", dim)));
        }
        let idx = fields[..dim]
            .iter()
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|e| bad(format!("index '{f}': {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let value = parse_rational(fields[dim]).map_err(|e| bad(e.to_string()))?;
        entries.push((idx.into(), value));
    }
    if entries.is_empty() {
        return Err(CliError::Usage("data file has no values".into()));
    }
    let mut lower = entries[0].0.entries().to_vec();
    let mut upper = lower.clone();
    for (idx, _) in &entries {
        for (axis, &x) in idx.entries().iter().enumerate() {
            lower[axis] = lower[axis].min(x);
            upper[axis] = upper[axis].max(x);
        }
    }
    let bx = IndexBox::new(lower.into(), upper.into());
    let mut values = vec![Rational::from_integer(0.into()); bx.len()];
    for (idx, v) in entries {
        values[bx.offset(&idx)] = v;
    }
    Ok(GridData::from_values(bx, None, values)?)
}

fn cmd_subdivide(path: &Path, data: Option<&Path>, steps: u32) -> CliResult<String> {
    let mask = load_mask(path)?;
    if steps > MAX_CASCADE_LEVEL {
        return Err(CliError::Usage(format!(
            "--steps is limited to {MAX_CASCADE_LEVEL}"
        )));
    }
    let grid = match data {
        Some(p) => {
            let mut grid = parse_data(&read_input(p)?, mask.dimension())?;
            for _ in 0..steps {
                grid = subdivide_once(&mask, &grid)?;
            }
            grid
        }
        // the impulse has no truncation, so every output is exact
        None => cascade(&mask, steps)?,
    };
    Ok(grid.to_csv())
}

fn cmd_render(path: &Path, steps: u32, out: &Path) -> CliResult<String> {
    let mask = load_mask(path)?;
    let grid = cascade(&mask, steps)?;
    let sum = grid.sum();
    let expected = pow(&mask.symbol().value_at_one(), i64::from(steps));
    let mut csv = grid.to_csv();
    csv.push_str(&format!(
        "# sum,{},expected,{}\n",
        format_rational(&sum),
        format_rational(&expected)
    ));
    let write = |p: PathBuf, bytes: &[u8]| {
        fs::write(&p, bytes).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
    };
    let csv_path = out.with_extension("csv");
    write(csv_path.clone(), csv.as_bytes())?;
    let mut msg = format!("wrote {}\n", csv_path.display());
    if mask.dimension() == 2 {
        let pgm_path = out.with_extension("pgm");
        write(pgm_path.clone(), &grid.to_pgm()?)?;
        msg.push_str(&format!("wrote {}\n", pgm_path.display()));
    }
    if sum != expected {
        print!("{msg}");
        return Err(CliError::Disagreement(format!(
            "cascade sum {} differs from a(1)^{steps} = {}",
            format_rational(&sum),
            format_rational(&expected)
        )));
    }
    Ok(msg)
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Analyze { mask, cap, format } => cmd_analyze(&mask, cap, format),
        Command::Oracle {
            mask,
            degree,
            steps,
            radius,
            cap,
            format,
        } => cmd_oracle(&mask, degree, steps, radius, cap, format),
        Command::Scheme { name } => cmd_scheme(&name),
        Command::Subdivide { mask, data, steps } => cmd_subdivide(&mask, data.as_deref(), steps),
        Command::Render { mask, steps, out } => cmd_render(&mask, steps, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
