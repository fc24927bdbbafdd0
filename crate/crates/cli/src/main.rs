//! `implreg`: implicit regression fits and diagnostics from CSV data.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "implreg", version, about = "Implicit regression fits and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit one model and report coefficients and R².
    Fit(FitArgs),
    /// Fit every rotation of a term set, one report per pivot.
    RotateAll(FitArgs),
    /// Fit a model and report separation diagnostics.
    Diagnose(FitArgs),
    /// Write seeded synthetic data as CSV.
    Simulate(SimulateArgs),
    /// Convert between non-response (α) and response (β) coefficients.
    Convert(ConvertArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value = "text")]
    output: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// nonresponse | rotation:<term> | standard | univariate
    #[arg(long, default_value = "nonresponse")]
    model: String,
    /// Comma-separated terms, e.g. `x,y,xy,x2,y2`.
    #[arg(long, default_value = "x,y,xy,x2,y2")]
    terms: String,
    /// Column read as x.
    #[arg(long, default_value = "x")]
    x_col: String,
    /// Column read as y, and the response for standard models.
    #[arg(long, default_value = "y")]
    y_col: String,
    /// Explanatory columns for standard models; defaults to every other column.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// line | circle | ellipse | normal | uniform
    #[arg(long)]
    kind: String,
    /// Generator parameters as `key=value` pairs, e.g. `cx=0,cy=0,r=2`.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Normal noise added to each coordinate of geometric kinds.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coeffs {
    Alpha,
    Beta,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// Which form `--coeffs` is given in.
    #[arg(long, value_enum)]
    from: Coeffs,
    /// Comma-separated coefficients, response coefficient first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    coeffs: Vec<f64>,
    #[command(flatten)]
    common: Common,
}

fn emit(common: &Common, body: String) -> std::io::Result<()> {
    match &common.out_file {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn render(common: &Common, reports: &[Report], many: bool) -> String {
    match common.output {
        OutputFormat::Json if many => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        OutputFormat::Json => reports[0].to_json() + "\n",
        OutputFormat::Text => reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
    }
}

fn run(cli: Cli) -> i32 {
    let (common, reports, many) = match cli.command {
        Command::Fit(a) => {
            let r = commands::fit(&a);
            (a.common, vec![r], false)
        }
        Command::Diagnose(a) => {
            let r = commands::diagnose(&a);
            (a.common, vec![r], false)
        }
        Command::RotateAll(a) => match commands::rotate_all(&a) {
            Ok(rs) => (a.common, rs, true),
            Err(r) => (a.common, vec![r], false),
        },
        Command::Convert(a) => {
            let r = commands::convert(&a);
            (a.common, vec![r], false)
        }
        Command::Simulate(a) => return commands::simulate(&a),
    };
    let code = if many { 0 } else { reports[0].exit_code() };
    if let Some(e) = reports.iter().find_map(|r| r.error.as_ref()).filter(|_| code != 0) {
        eprintln!("implreg: {} ({})", e.message, e.kind);
        if common.output == OutputFormat::Text {
            return code;
        }
    }
    if let Err(e) = emit(&common, render(&common, &reports, many)) {
        eprintln!("implreg: cannot write report: {e}");
        return 2;
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = std::panic::catch_unwind(|| run(cli)).unwrap_or(5);
    ExitCode::from(code as u8)
}
