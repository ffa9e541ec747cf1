mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Outcome, Status};
use config::{Command, RunConfig};

/// Shape-invariant matrix superpotentials: catalog, identity checks, spectra and ladders.
#[derive(Parser)]
#[command(name = "shapeinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// List the superpotential families and physical models.
    List {
        #[arg(long)]
        dim: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check shape invariance of a family, or the reduction identity of a model.
    Verify {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<String>,
        #[command(flatten)]
        fam: FamilyParams,
        #[command(flatten)]
        labels: Labels,
        #[command(flatten)]
        common: Common,
    },
    /// Finite-difference spectrum of a model, compared with its gap formula.
    Spectrum {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        levels: Option<String>,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        phys: ModelParams,
        #[command(flatten)]
        labels: Labels,
        #[command(flatten)]
        common: Common,
    },
    /// Build the n-th excited state with raising operators and compare it with the eigenvector.
    Ladder {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        phys: ModelParams,
        #[command(flatten)]
        labels: Labels,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// table, structured-text or csv.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

macro_rules! value_group {
    ($name:ident { $($field:ident),* $(,)? }) => {
        #[derive(Args)]
        struct $name {
            $(
                #[arg(long, allow_hyphen_values = true)]
                $field: Option<String>,
            )*
        }

        impl $name {
            fn pairs(self, out: &mut Vec<(String, String)>) {
                $(
                    if let Some(v) = self.$field {
                        out.push((stringify!($field).to_string(), v));
                    }
                )*
            }
        }
    };
}

value_group!(FamilyParams { lambda, mu, mu1, mu2, mu3, c, c1, c2, c3, omega, r2, r3, nu, tau, delta });
value_group!(ModelParams { omega, lambda, mu, c, delta });
value_group!(Labels { kappa, m, j });
value_group!(Grid { n_points, xmin, xmax, eps, length, max_unknowns, states, tol });

fn push(out: &mut Vec<(String, String)>, key: &str, v: Option<String>) {
    if let Some(v) = v {
        out.push((key.to_string(), v));
    }
}

fn common_pairs(c: Common, out: &mut Vec<(String, String)>) -> Option<PathBuf> {
    push(out, "format", c.format);
    push(out, "output", c.output);
    c.config
}

fn parse(sub: Sub) -> (Command, Option<PathBuf>, Vec<(String, String)>) {
    let mut kv = Vec::new();
    match sub {
        Sub::List { dim, common } => {
            push(&mut kv, "dim", dim);
            let file = common_pairs(common, &mut kv);
            (Command::List, file, kv)
        }
        Sub::Verify { family, model, samples, tol, fam, labels, common } => {
            let file = common_pairs(common, &mut kv);
            push(&mut kv, "family", family);
            push(&mut kv, "model", model);
            push(&mut kv, "samples", samples);
            push(&mut kv, "tol", tol);
            fam.pairs(&mut kv);
            labels.pairs(&mut kv);
            (Command::Verify, file, kv)
        }
        Sub::Spectrum { model, levels, grid, phys, labels, common } => {
            let file = common_pairs(common, &mut kv);
            push(&mut kv, "model", model);
            push(&mut kv, "levels", levels);
            grid.pairs(&mut kv);
            phys.pairs(&mut kv);
            labels.pairs(&mut kv);
            (Command::Spectrum, file, kv)
        }
        Sub::Ladder { model, n, grid, phys, labels, common } => {
            let file = common_pairs(common, &mut kv);
            push(&mut kv, "model", model);
            push(&mut kv, "n", n);
            grid.pairs(&mut kv);
            phys.pairs(&mut kv);
            labels.pairs(&mut kv);
            (Command::Ladder, file, kv)
        }
    }
}

fn render(cfg: &RunConfig, out: &Outcome) -> Result<String, Failure> {
    match cfg.text("format").unwrap_or("table") {
        "table" => Ok(out.table.clone()),
        "structured-text" | "json" => {
            let mut s = serde_json::to_string_pretty(&out.document).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        "csv" => Ok(out.csv.clone()),
        other => Err(Failure::Usage(format!("unknown format '{other}' (table, structured-text, csv)"))),
    }
}

fn write(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file, flags) = parse(cli.command);
    let mut cfg = match RunConfig::build(command, file.as_deref(), flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(f) = cfg.text("format") {
        if !["table", "structured-text", "json", "csv"].contains(&f) {
            eprintln!("error: unknown format '{f}' (table, structured-text, csv)");
            return ExitCode::from(2);
        }
    }
    let result = commands::run(&mut cfg).and_then(|out| {
        let text = render(&cfg, &out)?;
        match cfg.text("output") {
            Some(path) => write(path, &text)?,
            None => print!("{text}"),
        }
        if let Some((path, csv)) = &out.states {
            write(path, csv)?;
        }
        Ok(out.status)
    });
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Tolerance) => ExitCode::from(1),
        Ok(Status::Numerical) => ExitCode::from(3),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
