//! Command-line front end: `simulate`, `sweep`, `verify` and `report`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::io::config::{config_to_text, parse_config, ResolvedConfig};
use crate::io::csv::{read_diagnostics_csv, write_diagnostics_csv, write_report_csv, DIAGNOSTICS_HEADER};
use crate::lab::radial::{dyadic_p_list, fit_sharpness, sharpness_curve};
use crate::lab::report::format_number;
use crate::lab::{
    check_bernstein, check_embedding, check_log_interpolation, check_multiplier_bound,
    default_corpus, generate_all, InequalityReport,
};
use crate::solver::envelope::{gronwall_envelope, gronwall_envelope_samples, EnvelopeSample};
use crate::solver::{run_with, SolverConfig};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "LGEU_OUT";
pub const DEFAULT_OUT: &str = "lgeu_out";

#[derive(Debug, Parser)]
#[command(name = "lgeu", version, about = "Log-regularized 2D Euler: solver, diagnostics and inequality lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write diagnostics, snapshots and an envelope summary.
    Simulate(Common),
    /// Run every (gamma, n) combination in parallel, one directory per run.
    Sweep(Common),
    /// Evaluate one inequality over a corpus or the radial extremizers.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        common: Common,
    },
    /// Summarize stored diagnostics and inequality CSVs.
    Report {
        /// Directory to scan (defaults to the output root).
        #[arg(long)]
        dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Embedding,
    Loginterp,
    Multiplier,
    Bernstein,
    Sharpness,
}

impl Check {
    fn name(&self) -> &'static str {
        match self {
            Check::Embedding => "embedding",
            Check::Loginterp => "loginterp",
            Check::Multiplier => "multiplier",
            Check::Bernstein => "bernstein",
            Check::Sharpness => "sharpness",
        }
    }
}

/// Flags shared by every subcommand; each overrides the matching config key.
#[derive(Debug, Clone, Default, Args)]
struct Common {
    /// key = value configuration file.
    #[arg(long, allow_negative_numbers = true)]
    config: Option<PathBuf>,
    /// gamma (a comma-separated list for `sweep`).
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<String>,
    /// Grid size (a comma-separated list for `sweep`).
    #[arg(long, allow_negative_numbers = true)]
    n: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    cfl: Option<String>,
    /// `auto`, `dealias`, or a dyadic N.
    #[arg(long, allow_negative_numbers = true)]
    mollify: Option<String>,
    /// single_mode, shell, random_band or vortex_pair.
    #[arg(long, allow_negative_numbers = true)]
    ic: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    seed: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pmax: Option<String>,
    #[arg(long = "diag-every", allow_negative_numbers = true)]
    diag_every: Option<String>,
    #[arg(long = "snap-every", allow_negative_numbers = true)]
    snap_every: Option<String>,
    /// Corpus / random-band IC band.
    #[arg(long, allow_negative_numbers = true)]
    band: Option<String>,
    /// Multiplier-bound exponent, `2` or `inf`.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self, sweep: bool) -> Result<ResolvedConfig> {
        let text = match &self.config {
            Some(p) => fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
            None => String::new(),
        };
        let (gamma_key, n_key) = if sweep { ("gamma_list", "n_list") } else { ("gamma", "n") };
        let flags = [
            (gamma_key, &self.gamma),
            (n_key, &self.n),
            ("t_max", &self.tmax),
            ("cfl", &self.cfl),
            ("mollify", &self.mollify),
            ("ic", &self.ic),
            ("seed", &self.seed),
            ("p_max", &self.pmax),
            ("diag_interval", &self.diag_every),
            ("snapshot_interval", &self.snap_every),
            ("band", &self.band),
            ("q", &self.q),
        ];
        let mut overrides: Vec<(String, String)> = flags
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if let Some(out) = &self.out {
            overrides.push(("out".into(), out.display().to_string()));
        }
        parse_config(&text, &overrides)
    }
}

fn out_root(cfg: &ResolvedConfig) -> PathBuf {
    cfg.out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs the CLI on `argv` (including the program name) and returns the exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Simulate(common) => {
            let cfg = common.resolve(false)?;
            let dir = out_root(&cfg);
            let summary = simulate_into(&dir, &cfg.solver, &cfg)?;
            print!("{summary}");
            Ok(())
        }
        Command::Sweep(common) => sweep(&common.resolve(true)?),
        Command::Verify { check, common } => verify(check, &common.resolve(false)?),
        Command::Report { dir, common } => {
            let cfg = common.resolve(false)?;
            let dir = dir.unwrap_or_else(|| out_root(&cfg));
            let text = report(&dir, cfg.lab.ceiling)?;
            print!("{text}");
            write_text(&dir.join("report.txt"), &text)
        }
    }
}

/// One run written to `dir`: `config.txt`, `diagnostics.csv`, `snapshots/`, `summary.txt`.
fn simulate_into(dir: &Path, solver: &SolverConfig, cfg: &ResolvedConfig) -> Result<String> {
    create_dir(dir)?;
    let resolved = ResolvedConfig { solver: solver.clone(), ..cfg.clone() };
    write_text(&dir.join("config.txt"), &config_to_text(&resolved))?;
    let snap_dir = dir.join("snapshots");
    if solver.snapshot_interval > 0 {
        create_dir(&snap_dir)?;
    }
    let out = run_with(solver, |s| {
        s.write_file(snap_dir.join(format!("snap_{:08}.bin", s.step_count)))
    })?;
    write_diagnostics_csv(dir.join("diagnostics.csv"), &out.records)?;

    let mut summary = format!(
        "run n={} gamma={} t_max={} ic={}: {} steps, final t = {}\n",
        solver.n,
        solver.gamma,
        solver.t_max,
        solver.ic.kind(),
        out.final_state.step_count,
        format_number(out.final_state.t)
    );
    if out.records.len() >= 3 {
        let env = gronwall_envelope(&out.records, &out.records[0].norms, cfg.lab.ceiling)?;
        summary.push_str(&env.summary());
    } else {
        summary.push_str("gronwall envelope: fewer than 3 records, not fitted\n");
    }
    if let Some(e) = &out.blow_up {
        summary.push_str(&format!("BLOW-UP: {e}\n"));
    }
    write_text(&dir.join("summary.txt"), &summary)?;
    match out.blow_up {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

fn sweep(cfg: &ResolvedConfig) -> Result<()> {
    let root = out_root(cfg);
    let jobs: Vec<(f64, usize)> = cfg
        .lab
        .gamma_list
        .iter()
        .flat_map(|&g| cfg.lab.n_list.iter().map(move |&n| (g, n)))
        .collect();
    let results: Vec<(PathBuf, Result<String>)> = jobs
        .par_iter()
        .map(|&(gamma, n)| {
            let dir = root.join(format!("gamma_{gamma}_n_{n}"));
            let solver = SolverConfig { gamma, n, ..cfg.solver.clone() };
            let res = solver.validate().and_then(|_| simulate_into(&dir, &solver, cfg));
            (dir, res)
        })
        .collect();
    let mut first_err = None;
    for (dir, res) in results {
        match res {
            Ok(s) => print!("[{}]\n{s}", dir.display()),
            Err(e) => {
                eprintln!("[{}] error: {e}", dir.display());
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn verify(check: Check, cfg: &ResolvedConfig) -> Result<()> {
    let root = out_root(cfg);
    create_dir(&root)?;
    let s = &cfg.solver;
    if check == Check::Sharpness {
        let rows = sharpness_curve(&dyadic_p_list(s.p_max as f64))?;
        let mut csv = String::from("p,l2,lp,h1dot,ratio,ratio_sqrt_log_p,inv_sqrt_log_p\n");
        for r in &rows {
            let cols = [r.p, r.norms.l2, r.norms.lp, r.norms.h1dot, r.ratio, r.ratio_sqrt_log_p, r.inv_sqrt_log_p];
            csv.push_str(&cols.map(format_number).join(","));
            csv.push('\n');
        }
        write_text(&root.join("sharpness.csv"), &csv)?;
        let mut summary = String::from("== sharpness ==\n");
        match fit_sharpness(&rows) {
            Some(f) => summary.push_str(&format!(
                "rows {}, fitted on {} (p >= sqrt(p_min p_max))\n\
                 c  (h1dot ~ c sqrt(log p)) = {:.6} spread {:.2}%\n\
                 c' (lp ~ c' sqrt(p))       = {:.6} spread {:.2}%\n\
                 max l2 = {:.6}, min ratio*sqrt(log p) = {:.6}\n",
                rows.len(),
                f.rows_fitted,
                f.c_h1dot,
                100.0 * f.h1dot_spread,
                f.c_lp,
                100.0 * f.lp_spread,
                f.l2_max,
                f.min_ratio_sqrt_log_p
            )),
            None => summary.push_str("no rows (pmax < 4)\n"),
        }
        print!("{summary}");
        return write_text(&root.join("sharpness_summary.txt"), &summary);
    }

    let report = inequality_check(check.name(), cfg)?;
    write_report_csv(root.join(format!("{}.csv", check.name())), &report)?;
    let summary = report.summary();
    print!("{summary}");
    write_text(&root.join(format!("{}_summary.txt", check.name())), &summary)
}

/// Runs the corpus check `name` (`embedding`, `loginterp`, `multiplier` or `bernstein`)
/// on the corpus described by `cfg`.
pub fn inequality_check(name: &str, cfg: &ResolvedConfig) -> Result<InequalityReport> {
    let s = &cfg.solver;
    let grid = Grid::new(s.n)?;
    let band = cfg.lab.band.unwrap_or(s.n / 4);
    let corpus = generate_all(&default_corpus(s.seed, band), grid)?;
    let n_set = cfg.lab.n_set();
    match name {
        "embedding" => check_embedding(&corpus, s.p_max),
        "loginterp" => check_log_interpolation(&corpus, s.gamma, s.p_max),
        "multiplier" => check_multiplier_bound(&corpus, s.gamma, &n_set, cfg.lab.q),
        "bernstein" => check_bernstein(&corpus, &n_set, &cfg.lab.pq_pairs),
        other => Err(Error::param(
            "check",
            format!("unknown check `{other}` (embedding, loginterp, multiplier, bernstein)"),
        )),
    }
}

/// Renders envelope fits for every `diagnostics.csv` and maxima for every
/// inequality CSV found in `dir` and its immediate subdirectories.
pub fn report(dir: &Path, ceiling: f64) -> Result<String> {
    let mut files = Vec::new();
    let mut scan = |d: &Path| -> Result<()> {
        for entry in fs::read_dir(d).map_err(|e| Error::io(d, e))? {
            let path = entry.map_err(|e| Error::io(d, e))?.path();
            if path.extension().is_some_and(|x| x == "csv") {
                files.push(path);
            }
        }
        Ok(())
    };
    scan(dir)?;
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_dir() {
            scan(&path)?;
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Error::Format(format!("no CSV files under {}", dir.display())));
    }

    let mut out = String::new();
    for path in files {
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        out.push_str(&format!("[{}]\n", path.display()));
        if text.starts_with(DIAGNOSTICS_HEADER) {
            let rows = read_diagnostics_csv(&path)?;
            let first = rows[0];
            let last = rows[rows.len() - 1];
            out.push_str(&format!(
                "{} records, t in [{}, {}], l2 drift {:.3e}, energy drift {:.3e}\n",
                rows.len(),
                first.t,
                last.t,
                (last.l2 / first.l2 - 1.0).abs(),
                (last.energy_gamma / first.energy_gamma - 1.0).abs()
            ));
            let samples: Vec<EnvelopeSample> = rows
                .iter()
                .map(|r| EnvelopeSample { t: r.t, hm1dot: r.hm1dot, h1dot: r.h1dot })
                .collect();
            match gronwall_envelope_samples(&samples, first.l2, first.l2 + first.h1dot, ceiling) {
                Ok(env) => out.push_str(&env.summary()),
                Err(e) => out.push_str(&format!("envelope not fitted: {e}\n")),
            }
        } else if text.starts_with("function_id,") {
            out.push_str(&summarize_report_csv(&text)?);
        } else {
            out.push_str("(not a recognized CSV)\n");
        }
    }
    Ok(out)
}

fn summarize_report_csv(text: &str) -> Result<String> {
    let mut best: Option<(f64, String)> = None;
    let mut rows = 0;
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let id = line.split(',').next().unwrap_or("");
        let ratio: f64 = line
            .rsplit(',')
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad report row `{line}`")))?;
        rows += 1;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, id.to_string()));
        }
    }
    Ok(match best {
        Some((r, id)) => format!("{rows} rows, max ratio {} attained by {id}\n", format_number(r)),
        None => "0 rows\n".to_string(),
    })
}
