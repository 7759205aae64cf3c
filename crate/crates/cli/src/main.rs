use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use deepind_core::emit::json::emit_json_all;
use deepind_core::encode::{henry_ford, henry_ford_env};
use deepind_core::interp::{index_types, FinModel, Interp};
use deepind_core::{diagnose, emit_text, Artifact, Diagnostic, Env, Options, RuleSel, Style};

#[derive(Parser)]
#[command(name = "deepind", version, about = "Deep induction rules for GADTs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, classify and validate; print a classification table.
    Check { file: PathBuf },
    /// Print the Henry Ford encoding of each declaration.
    Encode {
        file: PathBuf,
        #[arg(long)]
        decl: Option<String>,
    },
    /// Derive liftings, rules and witnesses.
    Derive {
        file: PathBuf,
        #[arg(long)]
        decl: Option<String>,
        #[arg(long, value_enum, default_value_t = Rule::Both)]
        rule: Rule,
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        kt: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Compare liftings with the leaf oracle on a finite model.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        carrier: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Deep,
    Structural,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct EmitArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    unicode: bool,
    /// Write one file per declaration into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit statuses.
const DIAGNOSTICS: u8 = 1;
const USAGE: u8 = 2;

struct Input {
    file: String,
    source: String,
    color: bool,
}

impl Input {
    fn load(path: &Path) -> Result<Input, ExitCode> {
        match fs::read_to_string(path) {
            Ok(source) => Ok(Input {
                file: path.display().to_string(),
                source,
                color: std::env::var("DEEPIND_COLOR").is_ok_and(|v| v == "1"),
            }),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                Err(ExitCode::from(USAGE))
            }
        }
    }

    fn report(&self, ds: &[Diagnostic]) {
        let mut err = io::stderr().lock();
        for d in ds {
            let text = d.render(&self.file, &self.source);
            let text = if self.color {
                let code = d.code.as_str();
                text.replacen(code, &format!("\x1b[1;31m{code}\x1b[0m"), 1)
            } else {
                text
            };
            let _ = writeln!(err, "{text}");
        }
    }

    fn env(&self) -> Result<Env, ExitCode> {
        Env::from_source(&self.source).map_err(|ds| {
            self.report(&ds);
            ExitCode::from(DIAGNOSTICS)
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) | Err(code) => code,
    }
}

fn selected<'e>(env: &'e Env, decl: &Option<String>) -> Result<Vec<&'e deepind_core::DataDecl>, ExitCode> {
    match decl {
        None => Ok(env.module_decls().iter().collect()),
        Some(n) => match env.module_decls().iter().find(|d| &d.name == n) {
            Some(d) => Ok(vec![d]),
            None => {
                eprintln!("error: no declaration named {n}");
                Err(ExitCode::from(USAGE))
            }
        },
    }
}

fn status(failed: bool) -> ExitCode {
    if failed {
        ExitCode::from(DIAGNOSTICS)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, ExitCode> {
    match cmd {
        Cmd::Check { file } => {
            let input = Input::load(&file)?;
            let env = input.env()?;
            let mut failed = false;
            let mut out = io::stdout().lock();
            let _ = writeln!(out, "{:<16} {:>5}  {:<16} status", "name", "arity", "class");
            for d in env.module_decls() {
                let ds = diagnose(d, &env);
                let st = match ds.first() {
                    None => "ok".to_string(),
                    Some(e) => e.code.to_string(),
                };
                let _ = writeln!(
                    out,
                    "{:<16} {:>5}  {:<16} {st}",
                    d.name,
                    d.arity,
                    d.classification.as_str()
                );
                failed |= !ds.is_empty();
                input.report(&ds);
            }
            Ok(status(failed))
        }
        Cmd::Encode { file, decl } => {
            let input = Input::load(&file)?;
            let env = input.env()?;
            let mut failed = false;
            let mut blocks = Vec::new();
            for d in selected(&env, &decl)? {
                let ds = diagnose(d, &env);
                if !ds.is_empty() {
                    input.report(&ds);
                    failed = true;
                    continue;
                }
                match henry_ford(d, &env) {
                    Ok(hf) => blocks.push(hf.to_source()),
                    Err(e) => {
                        input.report(&[e]);
                        failed = true;
                    }
                }
            }
            print!("{}", blocks.concat());
            Ok(status(failed))
        }
        Cmd::Derive {
            file,
            decl,
            rule,
            witness,
            kt,
            emit,
        } => {
            let input = Input::load(&file)?;
            let env = input.env()?;
            let opts = Options {
                rules: match rule {
                    Rule::Deep => RuleSel::Deep,
                    Rule::Structural => RuleSel::Structural,
                    Rule::Both => RuleSel::Both,
                },
                witness,
                kt,
            };
            let mut failed = false;
            let mut per_decl: Vec<(String, Vec<Artifact>)> = Vec::new();
            for d in selected(&env, &decl)? {
                match deepind_core::derive(d, &env, opts) {
                    Ok(xs) => per_decl.push((d.name.clone(), xs)),
                    Err(ds) => {
                        input.report(&ds);
                        failed = true;
                    }
                }
            }
            write_artifacts(&per_decl, &emit)?;
            Ok(status(failed))
        }
        Cmd::Oracle { file, carrier, depth } => {
            let input = Input::load(&file)?;
            let env = input.env()?;
            let mut failed = false;
            let good: Vec<_> = env
                .module_decls()
                .iter()
                .filter(|d| {
                    let ds = diagnose(d, &env);
                    input.report(&ds);
                    failed |= !ds.is_empty();
                    ds.is_empty()
                })
                .map(|d| d.name.clone())
                .collect();
            let mut clean = env.clone();
            for d in env.module_decls() {
                if !good.contains(&d.name) {
                    clean.remove(&d.name);
                }
            }
            let hf = henry_ford_env(&clean).map_err(|ds| {
                input.report(&ds);
                ExitCode::from(DIAGNOSTICS)
            })?;
            let it = Interp::new(
                &hf,
                FinModel {
                    atoms: carrier,
                    depth,
                    ..Default::default()
                },
            );
            for name in &good {
                let d = hf.get(name).expect("encoded declarations keep their names");
                match it.sweep(d, &index_types(d.arity, &it)) {
                    Ok(r) => {
                        println!("{} {r}", if r.ok() { "PASS" } else { "FAIL" });
                        for line in r.disagreements.iter().chain(&r.kt_failures).take(5) {
                            println!("  {line}");
                        }
                        failed |= !r.ok();
                    }
                    Err(e) => {
                        input.report(&[e]);
                        failed = true;
                    }
                }
            }
            Ok(status(failed))
        }
    }
}

fn render(xs: &[Artifact], emit: &EmitArgs) -> String {
    match emit.format {
        Format::Json => emit_json_all(xs) + "\n",
        Format::Text => {
            let st = if emit.unicode { Style::UNICODE } else { Style::ASCII };
            xs.iter()
                .map(|a| emit_text(a, st) + "\n")
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

fn write_artifacts(per_decl: &[(String, Vec<Artifact>)], emit: &EmitArgs) -> Result<(), ExitCode> {
    let io_err = |what: &Path, e: io::Error| {
        eprintln!("error: cannot write {}: {e}", what.display());
        ExitCode::from(USAGE)
    };
    match &emit.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            let ext = if emit.format == Format::Json { "json" } else { "txt" };
            for (name, xs) in per_decl {
                let path = dir.join(format!("{name}.{ext}"));
                fs::write(&path, render(xs, emit)).map_err(|e| io_err(&path, e))?;
            }
        }
        None => {
            let all: Vec<Artifact> = per_decl.iter().flat_map(|(_, xs)| xs.iter().cloned()).collect();
            if !all.is_empty() {
                print!("{}", render(&all, emit));
            }
        }
    }
    Ok(())
}
