use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use super::{render_structured, render_table, run_checks, select, Fills, RunOptions, TemplateSet};
use crate::covers::{dbc, family_cover, BranchSet};
use crate::diagrams::{determinant, Diagram};
use crate::slopes::{distance, solve_distance_system, Slope};
use crate::tangles::{fill_family, parse_input, BoundaryLabel, Fraction, Section};

#[derive(Parser)]
#[command(name = "dehnfill", version, about = "Slope arithmetic, tangle covers and family checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two slopes.
    Distance {
        #[arg(allow_hyphen_values = true)]
        r1: Slope,
        #[arg(allow_hyphen_values = true)]
        r2: Slope,
    },
    /// Slopes at the given distances from two anchors.
    Solve {
        /// `<slope>:<distance>`, given twice.
        #[arg(long = "anchor", allow_hyphen_values = true, value_parser = parse_anchor)]
        anchors: Vec<(Slope, u64)>,
    },
    /// Double branched cover of a tangle or link expression.
    Dbc {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Identify a filled family instance and its cover.
    Family {
        #[arg(long)]
        section: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// `<label>=<fraction>`, for example `S0=-1/2`.
        #[arg(long = "fill", value_parser = parse_fill)]
        fills: Vec<(BoundaryLabel, Fraction)>,
    },
    /// Determinant of a planar diagram read from a file.
    Det {
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Run registered checks.
    Verify {
        #[arg(long, default_value = "all")]
        check: String,
        /// `<lo>..<hi>` or a single value; replaces each check's default range.
        #[arg(long, value_parser = parse_range)]
        p: Option<RangeInclusive<i64>>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory holding `section{2,3,4}.tmpl`.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Structured,
}

fn parse_anchor(s: &str) -> Result<(Slope, u64), String> {
    let (r, d) = s.rsplit_once(':').ok_or("expected <slope>:<distance>")?;
    let r = r.parse::<Slope>().map_err(|e| e.to_string())?;
    let d = d.parse::<u64>().map_err(|e| e.to_string())?;
    Ok((r, d))
}

fn parse_label(s: &str) -> Result<BoundaryLabel, String> {
    match s {
        "S0" | "s0" => Ok(BoundaryLabel::S0),
        "S1" | "s1" => Ok(BoundaryLabel::S1),
        _ => Err(format!("unknown boundary label {s:?}")),
    }
}

fn parse_fill(s: &str) -> Result<(BoundaryLabel, Fraction), String> {
    let (l, f) = s.split_once('=').ok_or("expected <label>=<fraction>")?;
    Ok((parse_label(l.trim())?, f.trim().parse::<Fraction>().map_err(|e| e.to_string())?))
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    let r = match s.split_once("..") {
        Some((lo, hi)) => num(lo)?..=num(hi.trim_start_matches('='))?,
        None => num(s)?..=num(s)?,
    };
    if r.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(r)
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 1 when a check fails, 2 on usage or input errors.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn cli_main(argv: &[String]) -> i32 {
    run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match command {
        Command::Distance { r1, r2 } => writeln!(out, "{}", distance(r1, r2)).map_err(io)?,
        Command::Solve { anchors } => {
            let rs = solve_distance_system(&anchors).map_err(|e| e.to_string())?;
            let text: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
            writeln!(out, "{}", text.join(", ")).map_err(io)?;
        }
        Command::Dbc { expr } => {
            let item = parse_input(&expr).map_err(|e| e.to_string())?;
            let cover = dbc(&BranchSet::from(item));
            writeln!(out, "{}", cover.manifold).map_err(io)?;
            write_chain(out, &cover.chain).map_err(io)?;
        }
        Command::Family { section, p, fills } => {
            let section = Section::from_number(section).map_err(|e| e.to_string())?;
            let fills: Fills = fills.into_iter().collect();
            let id = fill_family(section, p, &fills).map_err(|e| e.to_string())?;
            let cover = family_cover(section, p, &fills).map_err(|e| e.to_string())?;
            writeln!(out, "tangle: {}", id.shape).map_err(io)?;
            writeln!(out, "claim: {} ({})", id.anchor, id.provenance).map_err(io)?;
            if id.flagged {
                writeln!(out, "note: p = {p} is outside the hyperbolic range").map_err(io)?;
            }
            writeln!(out, "cover: {}", cover.manifold).map_err(io)?;
            writeln!(out, "h1: {}", cover.manifold.h1_order()).map_err(io)?;
            writeln!(out, "flags: {:?}", cover.manifold.classify_flags()).map_err(io)?;
            write_chain(out, &cover.chain).map_err(io)?;
        }
        Command::Det { diagram } => {
            let text = std::fs::read_to_string(&diagram).map_err(|e| format!("{}: {e}", diagram.display()))?;
            let d = Diagram::parse(&text).map_err(|e| e.to_string())?;
            writeln!(out, "{}", determinant(&d).map_err(|e| e.to_string())?).map_err(io)?;
        }
        Command::Verify { check, p, format, out: path, data } => {
            let specs = select(&check);
            if specs.is_empty() {
                return Err(format!("no check matches {check:?}"));
            }
            let templates = match data {
                Some(dir) => TemplateSet::load(&dir).map_err(|e| e.to_string())?,
                None => TemplateSet::bundled(),
            };
            let reports = run_checks(&specs, &RunOptions { templates, p_range: p });
            let text = match format {
                Format::Table => render_table(&reports),
                Format::Structured => render_structured(&reports),
            };
            match path {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            return Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn write_chain(out: &mut dyn Write, chain: &[&str]) -> std::io::Result<()> {
    for name in chain {
        if let Some(r) = crate::covers::rule(name) {
            writeln!(out, "  {} [{}]: {} -> {}", r.name, r.provenance, r.pattern, r.image)?;
        }
    }
    Ok(())
}
