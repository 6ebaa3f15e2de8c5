use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schubert_core::harness::{
    cmd_analyze, cmd_table, cmd_verify, replay, AnalyzeRecord, OutputFormat, RunConfig, Suite,
    VerificationReport, CACHE_ENV,
};

#[derive(Parser)]
#[command(name = "schubert", version, about = "BP decompositions and smoothness of Schubert varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré polynomial, BP decompositions, tower and smoothness of one element.
    Analyze {
        #[arg(long)]
        system: String,
        /// Reduced or unreduced word in generator labels, e.g. 2,3,2,1.
        /// Affine systems also accept a window such as [2,1,3].
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long = "J", default_value = "")]
        j: String,
        /// Decompose with respect to this K only (default: every S∖{s}, s ∉ J).
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run verification suites and emit a report.
    Verify {
        /// Suite to run; without it, every suite enabled in the config.
        #[arg(long)]
        suite: Option<String>,
        /// Comma-separated systems, e.g. B3,C3,F4,G2.
        #[arg(long, value_delimiter = ',')]
        systems: Vec<String>,
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        include_e6: bool,
        #[arg(long)]
        fail_fast: bool,
        /// TOML file with RunConfig keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, env = CACHE_ENV)]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal elements and classification rows for every J = S∖{s}.
    Table {
        #[arg(long)]
        system: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Affine type Ã_n: run a suite, or analyze one element.
    Affine {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        max_length: usize,
        #[arg(long, default_value = "billey-crites")]
        suite: String,
        /// Analyze this element (word or window) instead of running the suite.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Recompute every failure in a JSON report and check each one reproduces.
    Replay {
        report: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Analyze {
            system,
            word,
            j,
            k,
            format,
        } => {
            let rec = cmd_analyze(&system, &word, &j, k.as_deref())?;
            write_analyze(&mut stdout, &rec, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            systems,
            max_length,
            jobs,
            samples,
            seed,
            include_e6,
            fail_fast,
            config,
            cache_dir,
            format,
            out,
        } => {
            let mut cfg = match &config {
                Some(p) => RunConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
                None => RunConfig::default(),
            };
            if !systems.is_empty() {
                cfg.systems = systems;
            }
            cfg.max_length = max_length.or(cfg.max_length);
            cfg.jobs = jobs.unwrap_or(cfg.jobs);
            cfg.samples = samples.unwrap_or(cfg.samples);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.include_e6 |= include_e6;
            cfg.fail_fast |= fail_fast;
            cfg.cache_dir = cache_dir.or(cfg.cache_dir);
            if let Some(f) = format {
                cfg.format = f.into();
            }
            cfg.validate()?;
            let suites = match suite {
                Some(s) => vec![s.parse::<Suite>()?],
                None => cfg.enabled_suites()?,
            };
            let mut reports = Vec::new();
            for s in suites {
                reports.push(cmd_verify(s, &cfg)?);
            }
            let mut sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
                None => Box::new(stdout),
            };
            write_reports(&mut sink, &reports, cfg.format)?;
            Ok(if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Table { system, format } => {
            let rows = cmd_table(&system)?;
            match format {
                Format::Csv => write_csv(&mut stdout, &rows)?,
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&rows)?)?,
                Format::Text => {
                    for r in &rows {
                        writeln!(
                            stdout,
                            "s{:<2} {:<9} {:<16} {:<22} {:<28} smooth={}",
                            r.s,
                            r.kind,
                            r.row,
                            r.formula,
                            r.word,
                            if r.smooth { "yes" } else { "no" }
                        )?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Affine {
            n,
            max_length,
            suite,
            element,
            jobs,
            format,
        } => {
            let system = format!("affA{n}");
            if let Some(el) = element {
                let rec = cmd_analyze(&system, &el, "", None)?;
                write_analyze(&mut stdout, &rec, format)?;
                return Ok(ExitCode::SUCCESS);
            }
            let cfg = RunConfig {
                systems: vec![system],
                max_length: Some(max_length),
                jobs: jobs.unwrap_or(0),
                format: format.into(),
                ..RunConfig::default()
            };
            let report = cmd_verify(suite.parse()?, &cfg)?;
            let passed = report.passed();
            write_reports(&mut stdout, &[report], cfg.format)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Replay { report } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let reports: Vec<VerificationReport> = match serde_json::from_str(&text) {
                Ok(many) => many,
                Err(_) => vec![serde_json::from_str(&text).context("not a verification report")?],
            };
            let mut all_reproduce = true;
            let mut total = 0;
            for r in &reports {
                for f in &r.payload.failures {
                    total += 1;
                    let same = replay(f)?;
                    all_reproduce &= same;
                    writeln!(
                        stdout,
                        "{} {} w={} J={{{}}} K={{{}}}: {}",
                        f.suite,
                        f.system,
                        f.w,
                        f.j,
                        f.k,
                        if same { "reproduced" } else { "DIFFERS" }
                    )?;
                }
            }
            writeln!(stdout, "{total} failure records replayed")?;
            Ok(if all_reproduce { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn write_reports(out: &mut dyn Write, reports: &[VerificationReport], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(reports)?
            };
            writeln!(out, "{text}")?;
        }
        OutputFormat::Csv => {
            let rows: Vec<_> = reports.iter().flat_map(|r| r.csv_rows()).collect();
            write_csv(out, &rows)?;
        }
        OutputFormat::Text => {
            for r in reports {
                write!(out, "{}", r.to_text())?;
            }
        }
    }
    Ok(())
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeRow<'a> {
    system: &'a str,
    w: &'a str,
    #[serde(rename = "J")]
    j: &'a str,
    length: usize,
    poincare: &'a str,
    rationally_smooth: bool,
    is_bp: Option<bool>,
    smooth: bool,
    tower_factors: usize,
}

fn write_analyze(out: &mut dyn Write, rec: &AnalyzeRecord, format: Format) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(rec)?)?,
        Format::Csv => write_csv(
            out,
            &[AnalyzeRow {
                system: &rec.system,
                w: &rec.w,
                j: &rec.j,
                length: rec.length,
                poincare: &rec.poincare,
                rationally_smooth: rec.rationally_smooth,
                is_bp: rec.is_bp,
                smooth: rec.smooth,
                tower_factors: rec.tower.factors.len(),
            }],
        )?,
        Format::Text => write_analyze_text(out, rec)?,
    }
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_analyze_text(out: &mut dyn Write, rec: &AnalyzeRecord) -> Result<()> {
    writeln!(out, "system            {}", rec.system)?;
    writeln!(out, "w                 {}", rec.w)?;
    if let Some(win) = &rec.window {
        writeln!(out, "window            {win}")?;
    }
    writeln!(out, "length            {}", rec.length)?;
    writeln!(out, "J                 {{{}}}", rec.j)?;
    writeln!(out, "support           {{{}}}", rec.support)?;
    writeln!(out, "descents (L / R)  {{{}}} / {{{}}}", rec.left_descents, rec.right_descents)?;
    writeln!(out, "P_w^J             {}", rec.poincare)?;
    writeln!(out, "rationally smooth {}", yes(rec.rationally_smooth))?;
    for d in &rec.decompositions {
        writeln!(
            out,
            "K = {{{}}}: v = {}, u = {}, BP = {}{}",
            d.k,
            d.v,
            d.u,
            yes(d.is_bp),
            if d.is_grassmannian { " (Grassmannian)" } else { "" }
        )?;
    }
    if let Some(c) = &rec.grassmannian {
        writeln!(out, "grassmannian      {:?} (smooth {})", c.status, yes(c.smooth))?;
    }
    writeln!(
        out,
        "tower             {} factor(s){}",
        rec.tower.factors.len(),
        if rec.tower.complete { "" } else { ", incomplete" }
    )?;
    for f in &rec.tower.factors {
        writeln!(
            out,
            "  v = {:<20} J {{{}}} -> {{{}}}  {:?}",
            f.v, f.j_prev, f.j_next, f.class.status
        )?;
    }
    writeln!(out, "smooth            {}", yes(rec.smooth))?;
    if let Some(a) = &rec.affine {
        writeln!(
            out,
            "patterns          avoids 3412/4231: {} (horizon {}, certified {})",
            yes(a.avoids_patterns),
            a.pattern_horizon,
            yes(a.pattern_certified)
        )?;
        if a.twisted_spiral_operational {
            writeln!(out, "twisted spiral    yes (almost-maximal {})", yes(a.almost_maximal == Some(true)))?;
        }
    }
    Ok(())
}
