//! Command-line front end.
//!
//! Exit codes: 0 when every input is clean, 1 when some input has
//! error-severity diagnostics, 2 on parse, IO or usage errors and unknown
//! elements. The worst outcome across inputs wins.

use std::collections::BTreeSet;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conformance;
use crate::diagnostic::Diagnostic;
use crate::mapper::{map_context_with, MappingError, MappingOptions};
use crate::ssm::{parse_ssm, validate_with};
use crate::sysml::ast::Package;
use crate::sysml::{emit, parse_sysml, validate_package, ModelIndex, QName};
use crate::trace::{self, Direction, EdgeKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DIAGNOSTICS: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ssm2sysml", version, about = "Compile SSM models to SysML v2, lint them and query traceability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map .ssm contexts to .sysml packages, one file per context.
    Compile(CompileArgs),
    /// Run the conformance rules over .sysml files.
    Check(CheckArgs),
    /// List the elements reachable from one element.
    Trace(TraceArgs),
    /// Render the elements selected by a view.
    View(ViewArgs),
    /// Describe a conformance rule.
    Explain {
        rule: String,
    },
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// `.ssm` files to compile.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Directory for the generated files; created if missing.
    #[arg(short = 'o', long = "out-dir")]
    pub out_dir: PathBuf,
    /// Also write `<Context>.report.json` with element provenance and warnings.
    #[arg(long)]
    pub report: bool,
    /// Model the subject of this root definition with states (repeatable).
    #[arg(long = "state-pattern", value_name = "ROOT_DEFINITION")]
    pub state_pattern: Vec<String>,
    /// Give each view an expose of the transformation part and a CATWOE filter.
    #[arg(long)]
    pub populate_view: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// `.sysml` files to check.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Comma-separated rule ids to run instead of all rules.
    #[arg(long, value_delimiter = ',')]
    pub rules: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// `.sysml` file to query.
    pub model: PathBuf,
    /// Qualified name of the start element.
    #[arg(long)]
    pub from: String,
    /// Follow edges against their direction (what contributes to the start).
    #[arg(long, conflicts_with = "forward")]
    pub backward: bool,
    /// Follow edges along their direction (the default).
    #[arg(long)]
    pub forward: bool,
    /// Comma-separated edge kinds to follow (default: all).
    #[arg(long, value_delimiter = ',')]
    pub kinds: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ViewArgs {
    /// `.sysml` file holding the view.
    pub model: PathBuf,
    /// Qualified or unique simple name of the view.
    pub view: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Output streams and terminal settings for one invocation.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub color: bool,
}

/// Color from `SSM2SYSML_COLOR` (`0` or `1`), else on when stderr is a terminal.
pub fn color_from_env() -> bool {
    match std::env::var("SSM2SYSML_COLOR").as_deref() {
        Ok("1") => true,
        Ok("0") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

pub fn run(cli: Cli, io: &mut Io<'_>) -> u8 {
    let result = match cli.command {
        Command::Compile(a) => compile(&a, io),
        Command::Check(a) => check(&a, io),
        Command::Trace(a) => trace_cmd(&a, io),
        Command::View(a) => view(&a, io),
        Command::Explain { rule } => match conformance::explain(&rule) {
            Ok(text) => {
                let _ = writeln!(io.out, "{text}");
                Ok(EXIT_OK)
            }
            Err(e) => Err(e.to_string()),
        },
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_sysml(path: &Path) -> Result<Package, String> {
    let src = read(path)?;
    parse_sysml(&src, &path.display().to_string()).map_err(|e| e.to_string())
}

fn print_diagnostics(w: &mut dyn Write, diags: &[Diagnostic], file: &str, color: bool) {
    for d in diags {
        let _ = writeln!(w, "{}", d.to_text_line(file, color));
    }
}

fn compile(a: &CompileArgs, io: &mut Io<'_>) -> Result<u8, String> {
    let mut opts = MappingOptions {
        populate_view: a.populate_view,
        ..MappingOptions::default()
    };
    opts.state_pattern.extend(a.state_pattern.iter().cloned());
    std::fs::create_dir_all(&a.out_dir).map_err(|e| format!("cannot create {}: {e}", a.out_dir.display()))?;
    let mut code = EXIT_OK;
    for input in &a.inputs {
        let file = input.display().to_string();
        let ctx = match read(input).and_then(|src| parse_ssm(&src, &file).map_err(|e| e.to_string())) {
            Ok(ctx) => ctx,
            Err(msg) => {
                let _ = writeln!(io.err, "{msg}");
                code = code.max(EXIT_FAILURE);
                continue;
            }
        };
        let diags = validate_with(&ctx, &opts);
        print_diagnostics(io.err, &diags, &file, io.color);
        let (pkg, report) = match map_context_with(&ctx, &opts) {
            Ok(r) => r,
            Err(MappingError::InvalidContext { .. }) => {
                code = code.max(EXIT_DIAGNOSTICS);
                continue;
            }
            Err(e) => {
                let _ = writeln!(io.err, "{file}: error: {e}");
                code = code.max(EXIT_DIAGNOSTICS);
                continue;
            }
        };
        print_diagnostics(io.err, &report.warnings, &file, io.color);
        let text = emit(&pkg).map_err(|e| format!("{file}: {e}"))?;
        let out = a.out_dir.join(format!("{}.sysml", ctx.name));
        std::fs::write(&out, text).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
        if a.report {
            let path = a.out_dir.join(format!("{}.report.json", ctx.name));
            let json = serde_json::to_string_pretty(&report.to_json(&file)).expect("report serializes");
            std::fs::write(&path, json + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
    }
    Ok(code)
}

fn check(a: &CheckArgs, io: &mut Io<'_>) -> Result<u8, String> {
    let rules: Vec<&str> = a.rules.iter().map(String::as_str).collect();
    for r in &rules {
        conformance::rule(r).map_err(|e| e.to_string())?;
    }
    let mut code = EXIT_OK;
    let mut all: Vec<(String, Diagnostic)> = Vec::new();
    for input in &a.inputs {
        let file = input.display().to_string();
        let pkg = match load_sysml(input) {
            Ok(p) => p,
            Err(msg) => {
                let _ = writeln!(io.err, "{msg}");
                code = code.max(EXIT_FAILURE);
                continue;
            }
        };
        let mut diags = validate_package(&pkg);
        if !diags.iter().any(Diagnostic::is_error) {
            diags.extend(if rules.is_empty() {
                conformance::check(&pkg)
            } else {
                conformance::check_only(&pkg, &rules).expect("rule ids checked above")
            });
        }
        if diags.iter().any(Diagnostic::is_error) {
            code = code.max(EXIT_DIAGNOSTICS);
        }
        all.extend(diags.into_iter().map(|d| (file.clone(), d)));
    }
    match a.format {
        Format::Text => {
            for (file, d) in &all {
                let _ = writeln!(io.out, "{}", d.to_text_line(file, io.color));
            }
        }
        Format::Json => {
            let values: Vec<_> = all.iter().map(|(f, d)| d.to_json(f)).collect();
            let _ = writeln!(
                io.out,
                "{}",
                serde_json::to_string_pretty(&values).expect("diagnostics serialize")
            );
        }
    }
    Ok(code)
}

/// Finds `name` as an element path or a qualified name; otherwise reports
/// the longest prefix that does resolve.
fn locate(pkg: &Package, name: &str) -> Result<String, String> {
    let idx = ModelIndex::new(pkg);
    if let Some(id) = idx.find(name) {
        return Ok(idx.path(id).to_string());
    }
    let prefix = QName::parse(name)
        .and_then(|q| idx.longest_prefix(&q))
        .map(|(_, id)| idx.path(id).to_string())
        .unwrap_or_default();
    Err(trace::TraceError::UnknownElement {
        name: name.to_string(),
        prefix,
    }
    .to_string())
}

fn trace_cmd(a: &TraceArgs, io: &mut Io<'_>) -> Result<u8, String> {
    let kinds = if a.kinds.is_empty() {
        None
    } else {
        let mut set = BTreeSet::new();
        for k in &a.kinds {
            set.insert(EdgeKind::from_name(k).ok_or_else(|| {
                let known: Vec<_> = EdgeKind::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown edge kind `{k}` (known: {})", known.join(", "))
            })?);
        }
        Some(set)
    };
    let pkg = load_sysml(&a.model)?;
    let from = locate(&pkg, &a.from)?;
    let dir = if a.backward {
        Direction::Backward
    } else {
        Direction::Forward
    };
    let graph = trace::build_graph(&pkg);
    let found = trace::reach(&graph, &from, dir, kinds.as_ref()).map_err(|e| e.to_string())?;
    match a.format {
        Format::Text => {
            for p in &found {
                let _ = writeln!(io.out, "{p}");
            }
        }
        Format::Json => {
            let query = format!(
                "trace {from} {}",
                if a.backward { "--backward" } else { "--forward" }
            );
            let _ = writeln!(io.out, "{}", trace::query_json(&query, &found));
        }
    }
    Ok(EXIT_OK)
}

fn view(a: &ViewArgs, io: &mut Io<'_>) -> Result<u8, String> {
    let pkg = load_sysml(&a.model)?;
    let v = trace::render_view(&pkg, &a.view).map_err(|e| e.to_string())?;
    match a.format {
        Format::Text => {
            let _ = write!(io.out, "{}", v.report);
        }
        Format::Json => {
            let _ = writeln!(io.out, "{}", v.to_json());
        }
    }
    Ok(EXIT_OK)
}
