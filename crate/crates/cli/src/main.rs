#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use gbef_core::integrals::{load_fixture_dir, MolecularIntegrals, MoleculeFixture, Notation};
use gbef_core::pipeline::{
    read_rows_csv, run_method, scan, summarize, write_plot_csv, write_rows_csv, Method, MolecularSystem,
    PipelineConfig, ResultRow, ScanSummary,
};
use gbef_core::screening::Thresholds;
use gbef_core::solvers::correlation_decomposition;
use gbef_core::synthesis::{depth, synthesize_with, SynthesisOptions};

/// Exit status when screening keeps no group.
const EXIT_EMPTY_SELECTION: u8 = 2;

const CSV_COLUMNS: &str = "Result tables are CSV with the columns: molecule, bond_length, method, energy, \
n_parameters, depth, fci_energy, error, converged, wall_time, note. Energies are in Hartree, error is \
E - E_FCI, wall_time is seconds around the method's whole pipeline. Empty cells mean not applicable \
or failed; failures carry their message in note.";

#[derive(Parser)]
#[command(name = "gbef", version, about = "Gradient-based excitation screening for UCCSD ansatze")]
struct Cli {
    /// Worker threads for geometries and group screening [default: all cores]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank groups by their HF-point gradients and apply the thresholds
    Screen {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run methods on one geometry and append rows to a results table
    #[command(after_help = CSV_COLUMNS)]
    Run {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        methods: MethodArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// CSV to append to; printed to stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run methods over every fixture in a directory
    #[command(after_help = CSV_COLUMNS)]
    Scan {
        /// Directory of FCIDUMP files with .toml sidecars
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = NotationArg::Chemists)]
        notation: NotationArg,
        #[command(flatten)]
        methods: MethodArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Results table (CSV)
        #[arg(long)]
        out: PathBuf,
        /// Wide CSV with energy, error and parameter count per method
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Summary JSON
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Exact ground state and the correlation decomposition
    Fci {
        #[command(flatten)]
        input: Input,
        /// Write the JSON result here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a method's ansatz and report its depth
    Depth {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "GBEF")]
        method: Method,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Use ADAPT with this ε (a power of ten) instead of --method
        #[arg(long)]
        eps: Option<f64>,
        /// Cancel adjacent inverse gate pairs
        #[arg(long)]
        cancel: bool,
        /// Write the gate list, one gate per line
        #[arg(long)]
        gates: Option<PathBuf>,
    },
    /// Summarize a results table
    Report {
        /// Results CSV from `run` or `scan`
        #[arg(long)]
        input: PathBuf,
        /// Write the JSON summary here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    fcidump: PathBuf,
    #[arg(long, value_enum, default_value_t = NotationArg::Chemists)]
    notation: NotationArg,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum NotationArg {
    Chemists,
    Physicists,
}

impl From<NotationArg> for Notation {
    fn from(n: NotationArg) -> Self {
        match n {
            NotationArg::Chemists => Notation::Chemists,
            NotationArg::Physicists => Notation::Physicists,
        }
    }
}

#[derive(Args)]
struct ThresholdArgs {
    /// Drop groups with |gradient| below this
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    abs: f64,
    /// Cut at the first adjacent ratio of at least 10^mag; `inf` disables
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    mag: f64,
}

impl ThresholdArgs {
    fn get(&self) -> Result<Thresholds> {
        Ok(Thresholds::new(self.abs, self.mag)?)
    }
}

#[derive(Args)]
struct MethodArgs {
    /// Comma-separated: HF, UCCSD, GBEF, GBEF-ablation, ADAPT-e1, ADAPT-e2, ADAPT-e3, FCI
    #[arg(long, default_value = "HF,GBEF,FCI")]
    methods: String,
    /// Also run ADAPT with this ε (a power of ten)
    #[arg(long)]
    eps: Option<f64>,
}

impl MethodArgs {
    fn get(&self) -> Result<Vec<Method>> {
        let mut methods = Method::parse_list(&self.methods)?;
        if let Some(eps) = self.eps {
            let m = adapt_for_eps(eps)?;
            if !methods.contains(&m) {
                methods.push(m);
            }
        }
        Ok(methods)
    }
}

fn adapt_for_eps(eps: f64) -> Result<Method> {
    let m = -eps.log10();
    if !(eps > 0.0) || (m - m.round()).abs() > 1e-9 || m.round() < 1.0 {
        bail!("--eps must be 10^-m for a positive integer m, got {eps}");
    }
    Ok(Method::Adapt(m.round() as u32))
}

fn load_system(input: &Input) -> Result<MolecularSystem> {
    let path = &input.fcidump;
    let integrals = MolecularIntegrals::from_file(path, input.notation.into())?;
    let meta = MoleculeFixture::for_fcidump(path)?;
    let (name, bond) = match meta {
        Some(f) => (f.name, Some(f.bond_length)),
        None => (path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(), None),
    };
    Ok(MolecularSystem::new(name, bond, integrals)?)
}

fn load_dir(dir: &Path, notation: Notation) -> Result<Vec<MolecularSystem>> {
    let fixtures = load_fixture_dir(dir)?;
    if fixtures.is_empty() {
        bail!("no fixtures in {}", dir.display());
    }
    fixtures
        .iter()
        .map(|f| {
            let m = MolecularIntegrals::from_file(&f.fcidump, notation)?;
            MolecularSystem::new(f.name.clone(), Some(f.bond_length), m).with_context(|| f.label())
        })
        .collect()
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn append_rows(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let mut buf = Vec::new();
    write_rows_csv(rows, &mut buf)?;
    let text = String::from_utf8(buf)?;
    let body = if fresh { text.as_str() } else { text.split_once('\n').map_or("", |(_, rest)| rest) };
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    f.write_all(body.as_bytes())?;
    Ok(())
}

fn print_rows(rows: &[ResultRow]) {
    for r in rows {
        let bond = r.bond_length.map(|b| format!("{b:.4}")).unwrap_or_else(|| "-".into());
        let energy = r.energy.map(|e| format!("{e:.10}")).unwrap_or_else(|| "failed".into());
        let err = r.error.map(|e| format!("{:+.3e}", e)).unwrap_or_else(|| "-".into());
        let n = r.n_parameters.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        let d = r.depth.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        eprintln!(
            "{:<6} {bond:>8} {:<14} E={energy:>16} err={err:>10} params={n:>3} depth={d:>5} t={:.3}s",
            r.molecule,
            r.method.to_string(),
            r.wall_time
        );
        if let Some(note) = &r.note {
            eprintln!("       note: {note}");
        }
    }
}

fn print_summary(s: &ScanSummary) {
    eprintln!(
        "{:<14} {:>5} {:>7} {:>9} {:>12} {:>12} {:>10}",
        "method", "rows", "params", "depth", "mean|err|", "max|err|", "time(s)"
    );
    for m in &s.methods {
        let f = |x: Option<f64>, p: usize| x.map(|v| format!("{v:.p$}")).unwrap_or_else(|| "-".into());
        eprintln!(
            "{:<14} {:>5} {:>7} {:>9} {:>12} {:>12} {:>10.4}",
            m.method.to_string(),
            m.rows,
            f(m.mean_parameters, 2),
            f(m.mean_depth, 1),
            m.mean_abs_error.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into()),
            m.max_abs_error.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into()),
            m.mean_wall_time
        );
    }
    for r in &s.reductions {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.2}%")).unwrap_or_else(|| "-".into());
        let sp = r.speedup.map(|v| format!("{v:.2}x")).unwrap_or_else(|| "-".into());
        eprintln!(
            "vs {}: {} parameters {}, depth {}, speedup {sp}",
            s.baseline,
            r.method,
            f(r.parameters_percent),
            f(r.depth_percent)
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let jobs = cli.jobs.unwrap_or_else(rayon::current_num_threads);
    match cli.command {
        Command::Screen { input, thresholds, out } => {
            let sys = load_system(&input)?;
            let report = sys.screen(thresholds.get()?)?;
            write_out(out.as_deref(), &(report.to_json()? + "\n"))?;
            eprintln!("{} groups screened, {} kept: {:?}", report.n_groups(), report.kept.len(), report.kept);
            if let Some(w) = &report.warning {
                eprintln!("warning: {w}");
                return Ok(ExitCode::from(EXIT_EMPTY_SELECTION));
            }
        }
        Command::Run { input, methods, thresholds, out } => {
            let sys = load_system(&input)?;
            let cfg = PipelineConfig { thresholds: thresholds.get()?, ..PipelineConfig::default() };
            let rows: Vec<ResultRow> = methods.get()?.into_iter().map(|m| run_method(&sys, m, &cfg).row).collect();
            print_rows(&rows);
            match out {
                Some(p) => append_rows(&p, &rows)?,
                None => write_rows_csv(&rows, io::stdout())?,
            }
        }
        Command::Scan { dir, notation, methods, thresholds, out, plot, summary } => {
            let systems = load_dir(&dir, notation.into())?;
            let methods = methods.get()?;
            let cfg = PipelineConfig { thresholds: thresholds.get()?, ..PipelineConfig::default() };
            let rows = scan(&systems, &methods, &cfg, jobs)?;
            print_rows(&rows);
            write_rows_csv(&rows, File::create(&out).with_context(|| format!("creating {}", out.display()))?)?;
            if let Some(p) = plot {
                write_plot_csv(
                    &rows,
                    &methods,
                    File::create(&p).with_context(|| format!("creating {}", p.display()))?,
                )?;
            }
            let s = summarize(&rows);
            print_summary(&s);
            if let Some(p) = summary {
                write_out(Some(&p), &(serde_json::to_string_pretty(&s)? + "\n"))?;
            }
        }
        Command::Fci { input, out } => {
            let sys = load_system(&input)?;
            let fci = sys.fci()?;
            let d = correlation_decomposition(fci, &sys.sparse, sys.n_electrons())?;
            eprintln!("E_FCI = {:.12}  E_HF = {:.12}  dimension {}", fci.energy, sys.hf_energy(), fci.dimension);
            eprintln!("correlation {:.3e}, doubles sum {:.3e}, c0 = {:.6}", fci.energy - sys.hf_energy(), d.sum, d.c0);
            if let Some(w) = &d.warning {
                eprintln!("warning: {w}");
            }
            let json = serde_json::json!({
                "energy": fci.energy,
                "hf_energy": sys.hf_energy(),
                "dimension": fci.dimension,
                "residual": fci.residual,
                "decomposition": d,
            });
            write_out(out.as_deref(), &(serde_json::to_string_pretty(&json)? + "\n"))?;
        }
        Command::Depth { input, method, thresholds, eps, cancel, gates } => {
            let sys = load_system(&input)?;
            let method = match eps {
                Some(e) => adapt_for_eps(e)?,
                None => method,
            };
            let cfg = PipelineConfig { thresholds: thresholds.get()?, ..PipelineConfig::default() };
            let run = run_method(&sys, method, &cfg);
            let Some(circuit) = run.circuit else {
                bail!("{method} produced no circuit{}", run.row.note.map(|n| format!(": {n}")).unwrap_or_default());
            };
            let gc = synthesize_with(&circuit, SynthesisOptions { cancel_adjacent: cancel })?;
            let report = depth(&gc);
            if let Some(p) = gates {
                write_out(Some(&p), &gc.to_text())?;
            }
            let json = serde_json::json!({ "method": method, "parameters": circuit.n_parameters(), "depth": report });
            write_out(None, &(serde_json::to_string_pretty(&json)? + "\n"))?;
        }
        Command::Report { input, out } => {
            let rows = read_rows_csv(File::open(&input).with_context(|| format!("opening {}", input.display()))?)?;
            let s = summarize(&rows);
            print_summary(&s);
            write_out(out.as_deref(), &(serde_json::to_string_pretty(&s)? + "\n"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage errors exit 1 so that 2 keeps meaning an empty selection
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
