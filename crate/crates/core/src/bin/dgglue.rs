use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use dgglue::cli::{error_report, exit_code, run, Command, Options};
use dgglue::json::Document;
use dgglue::{Error, Field, Result};

#[derive(Parser, Debug)]
#[command(name = "dgglue", version, about = "Exact checks on finite dg categories, hypercubes and filtered algebras")]
struct Args {
    /// validate | cohomology | totalize | check-acyclic | stack | extend | gac-hom | glue |
    /// check-qff | hom-iso | ext-table | auslander | refine | refine-square | proj-dgcat
    command: String,
    /// Input document (default: stdin)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Q, F<p> or <p>; must agree with the document's field if it has one
    #[arg(long)]
    field: Option<String>,
    /// Worker threads for per-pair computations
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Largest allowed hom complex dimension in a vertex category
    #[arg(long, default_value_t = 64)]
    max_dim: usize,
    /// Largest allowed cube dimension
    #[arg(long, default_value_t = 4)]
    max_cube_dim: usize,
    /// Add wall-clock time to the report (breaks byte-identical output)
    #[arg(long)]
    timing: bool,
}

fn parse_field(s: &str) -> Result<Field> {
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let digits = s.strip_prefix("Fp").or_else(|| s.strip_prefix('F')).unwrap_or(s);
    let p: u64 = digits.parse().map_err(|_| Error::Input(format!("unknown field {s:?}")))?;
    Field::prime(p)
}

fn execute(args: &Args) -> Result<serde_json::Value> {
    let cmd = Command::from_name(&args.command).ok_or_else(|| Error::Input(format!("unknown command {:?}", args.command)))?;
    if args.parallel == 0 {
        return Err(Error::Input("--parallel needs at least one thread".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(args.parallel).build_global().map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    let field = args.field.as_deref().map(parse_field).transpose()?;
    let text = match &args.input {
        Some(p) => std::fs::read_to_string(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let start = Instant::now();
    let doc = Document::parse(&text, field)?;
    let opts = Options { max_hom_dim: args.max_dim, max_cube_dim: args.max_cube_dim };
    let mut report = run(cmd, &doc, &opts)?;
    if args.timing {
        report["elapsed_ms"] = serde_json::json!(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn emit(args: &Args, v: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("reports serialize");
    text.push('\n');
    match &args.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, code) = match execute(&args) {
        Ok(r) => (r, 0),
        Err(e) => {
            eprintln!("dgglue: {e}");
            (error_report(&e), exit_code(&e))
        }
    };
    if let Err(e) = emit(&args, &report) {
        eprintln!("dgglue: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code as u8)
}
