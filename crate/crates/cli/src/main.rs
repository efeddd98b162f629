//! `khbn`: Khovanov and Bar-Natan homology of links from the command line.

mod checks;
mod report;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use khbn::khcube::CROSSING_LIMIT;
use khbn::linkdiag::{bundled_table, from_braid, parse_pd, parse_table, Diagram, LinkTable};
use report::Invariant;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "khbn", version, about = "Khovanov and Bar-Natan homology of links")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one invariant of one diagram.
    Compute(ComputeArgs),
    /// Run a consistency check over diagrams.
    Verify(VerifyArgs),
    /// Pages of the u-adic spectral sequence.
    Sseq(SseqArgs),
}

#[derive(Args, Clone)]
pub struct Source {
    /// PD code, e.g. `PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]`, or `U`.
    #[arg(long, conflicts_with_all = ["braid", "name"])]
    pd: Option<String>,
    /// Braid word as comma-separated nonzero integers.
    #[arg(long, allow_hyphen_values = true, requires = "strands", conflicts_with = "name")]
    braid: Option<String>,
    #[arg(long)]
    strands: Option<usize>,
    /// Table entry or alias.
    #[arg(long)]
    name: Option<String>,
    /// Link table to use instead of the bundled one.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Table,
    Poincare,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    src: Source,
    #[arg(long, value_enum, default_value = "bn2")]
    invariant: Invariant,
    /// Truncation order for `bnk`.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    basepoint: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Allow more than 14 crossings.
    #[arg(long)]
    force: bool,
    /// Cache directory (also read from KHBN_CACHE_DIR).
    #[arg(long, env = "KHBN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: checks::Check,
    #[command(flatten)]
    src: Source,
    /// Run over every table entry.
    #[arg(long, conflicts_with_all = ["pd", "braid", "name"])]
    all_table: bool,
    /// Skip entries with more crossings than this.
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SseqArgs {
    #[command(flatten)]
    src: Source,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    basepoint: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    force: bool,
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// 1: a check failed.
    Check(String),
    /// 2: bad input.
    Input(anyhow::Error),
    /// 3: refused for size.
    Limit(usize),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn load_table(src: &Source) -> Result<LinkTable, Failure> {
    match &src.table {
        None => Ok(bundled_table()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_table(&text).map_err(|(line, e)| Failure::Input(anyhow::anyhow!("{}:{line}: {e}", p.display())))
        }
    }
}

pub fn parse_word(w: &str) -> anyhow::Result<Vec<i32>> {
    w.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| anyhow::anyhow!("bad braid letter `{t}`")))
        .collect()
}

/// The diagram named by the source flags, and a display name.
fn diagram(src: &Source) -> Result<(String, Diagram), Failure> {
    if let Some(pd) = &src.pd {
        return Ok((pd.clone(), parse_pd(pd)?));
    }
    if let Some(w) = &src.braid {
        let word = parse_word(w)?;
        return Ok((format!("braid {w}"), from_braid(src.strands.unwrap(), &word)?));
    }
    if let Some(n) = &src.name {
        let t = load_table(src)?;
        let e = t.get(n).ok_or_else(|| anyhow::anyhow!("no table entry named `{n}`"))?;
        return Ok((e.name.clone(), e.diagram.clone()));
    }
    Err(Failure::Input(anyhow::anyhow!("give one of --pd, --braid, --name")))
}

fn check_size(d: &Diagram, force: bool) -> Result<(), Failure> {
    if d.crossing_count() > CROSSING_LIMIT && !force {
        return Err(Failure::Limit(d.crossing_count()));
    }
    Ok(())
}

fn compute(a: &ComputeArgs) -> Result<String, Failure> {
    let (_, d) = diagram(&a.src)?;
    check_size(&d, a.force)?;
    let k = a.invariant.order(a.k)?;
    let d = match a.basepoint {
        Some(b) => d.with_basepoint(b)?,
        None => d,
    };
    let bp = (a.reduced || a.invariant == Invariant::BrcoverE2).then(|| d.effective_basepoint());
    let report = report::cached_compute(&d, a.invariant, k, a.reduced, bp, a.force, a.cache_dir.as_deref(), a.timing)?;
    Ok(match a.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Table => report.table(),
        Format::Poincare => report.poincare.clone() + "\n",
    })
}

fn sseq(a: &SseqArgs) -> Result<String, Failure> {
    use khbn::homology::bigraded_homology;
    use khbn::khcube::build_complex_unbounded;
    use khbn::sseq::{filtration_pages, verify_einfty_gr, FilteredComplex};
    let (_, d) = diagram(&a.src)?;
    check_size(&d, a.force)?;
    if a.k == 0 {
        return Err(Failure::Input(anyhow::anyhow!("--k must be at least 1")));
    }
    let bp = a.reduced.then(|| a.basepoint.unwrap_or(d.effective_basepoint()));
    let c = build_complex_unbounded(&d, a.k, a.reduced, bp)?;
    let f = FilteredComplex::u_adic(&c);
    let m = bigraded_homology(&c)?;
    let table = filtration_pages(&f, None);
    let verdict = verify_einfty_gr(&f, &m).map(|_| ()).map_err(|e| e.to_string());
    let out = report::SseqReport::new(&table, a.k, a.reduced, verdict.clone());
    let text = match a.format {
        Format::Table => out.table(),
        _ => serde_json::to_string_pretty(&out)? + "\n",
    };
    if let Err(e) = verdict {
        print!("{text}");
        return Err(Failure::Check(e));
    }
    Ok(text)
}

fn verify(a: &VerifyArgs) -> Result<String, Failure> {
    let table = load_table(&a.src)?;
    let entries: Vec<(String, Diagram)> = if a.all_table {
        table.entries.iter().map(|e| (e.name.clone(), e.diagram.clone())).collect()
    } else {
        let (name, d) = diagram(&a.src)?;
        vec![(name, d)]
    };
    let entries: Vec<_> = entries
        .into_iter()
        .filter(|(_, d)| a.max_crossings.is_none_or(|m| d.crossing_count() <= m))
        .collect();
    for (_, d) in &entries {
        check_size(d, a.force)?;
    }
    let summary = checks::run(a.check, &entries, &table)?;
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    if !summary.pass {
        print!("{text}");
        let first = summary.results.iter().find(|r| !r.pass).map(|r| format!("{}: {}", r.name, r.detail));
        return Err(Failure::Check(first.unwrap_or_default()));
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        #[cfg(feature = "parallel")]
        {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
        if n <= 1 {
            khbn::par::set_enabled(false);
        }
    }
    let result = match &cli.cmd {
        Cmd::Compute(a) => compute(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Sseq(a) => sseq(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(n)) => {
            eprintln!("error: {n} crossings exceeds the limit of {CROSSING_LIMIT}; pass --force to run anyway");
            ExitCode::from(3)
        }
    }
}
