//! Plain `key = value` configuration.
//!
//! Blank lines and `#` comments are ignored. Every key is optional:
//!
//! | key               | default          | meaning                                      |
//! |-------------------|------------------|----------------------------------------------|
//! | n                 | 256              | grid points per dimension                    |
//! | gamma             | 1.5              | log-regularization exponent                  |
//! | t_max             | 1.0              | final time                                   |
//! | cfl               | 0.5              | CFL number                                   |
//! | mollify           | auto             | `auto`, `dealias`, or a dyadic `N <= n/3`     |
//! | ic                | random_band      | single_mode, shell, random_band, vortex_pair |
//! | seed              | 0                | random seed for ICs and corpora              |
//! | p_max             | 64               | largest `p` in the `L^p` grid                |
//! | diag_interval     | 1                | steps between diagnostics records            |
//! | snapshot_interval | 0                | steps between snapshots (0 = none)           |
//! | band              | min(8, n/4)      | random-band IC / corpus band                 |
//! | n_min, n_max      | 2, 256           | dyadic range of `N` for the lab              |
//! | q                 | inf              | multiplier-bound exponent, `2` or `inf`      |
//! | gamma_list        | 0,0.5,1.5        | sweep exponents                              |
//! | n_list            | 128              | sweep resolutions                            |
//! | ceiling           | 1e6              | envelope violation threshold                 |
//! | out               | (see CLI)        | output root                                  |

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::multiplier::is_dyadic;
use crate::solver::envelope::DEFAULT_CEILING;
use crate::solver::{InitialCondition, Mollify, SolverConfig};

pub const KEYS: [&str; 19] = [
    "n",
    "gamma",
    "t_max",
    "cfl",
    "mollify",
    "ic",
    "seed",
    "p_max",
    "diag_interval",
    "snapshot_interval",
    "band",
    "n_min",
    "n_max",
    "q",
    "gamma_list",
    "n_list",
    "ceiling",
    "out",
    "pq_pairs",
];

/// Parameters of the `verify`, `sweep` and `report` subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct LabParams {
    pub band: Option<usize>,
    pub n_min: f64,
    pub n_max: f64,
    pub q: f64,
    pub gamma_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub ceiling: f64,
    /// `(p, q)` exponent pairs for the Bernstein check.
    pub pq_pairs: Vec<(f64, f64)>,
}

impl Default for LabParams {
    fn default() -> Self {
        LabParams {
            band: None,
            n_min: 2.0,
            n_max: 256.0,
            q: f64::INFINITY,
            gamma_list: vec![0.0, 0.5, 1.5],
            n_list: vec![128],
            ceiling: DEFAULT_CEILING,
            pq_pairs: vec![(2.0, 2.0), (2.0, 4.0), (2.0, f64::INFINITY), (4.0, f64::INFINITY)],
        }
    }
}

impl LabParams {
    /// Dyadic values `n_min, 2 n_min, ..., n_max`.
    pub fn n_set(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut n = self.n_min;
        while n <= self.n_max {
            out.push(n);
            n *= 2.0;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub solver: SolverConfig,
    pub lab: LabParams,
    pub out: Option<PathBuf>,
}

fn config_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config { key: key.to_string(), reason: reason.into() }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(key, format!("cannot parse `{value}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(|s| parse(key, s.trim()))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(config_err(key, "list must be non-empty"));
    }
    Ok(items)
}

fn parse_exponent(key: &str, value: &str) -> Result<f64> {
    match value {
        "inf" | "infinity" => Ok(f64::INFINITY),
        v => parse(key, v),
    }
}

/// Splits a document into `(key, value)` pairs, rejecting malformed lines and duplicates.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(config_err(line, format!("line {}: expected `key = value`", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if !seen.insert(k.to_string()) {
            return Err(config_err(k, format!("line {}: duplicate key", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Resolves a configuration document plus overrides (applied last, e.g. CLI
/// flags) into validated solver and lab parameters.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<ResolvedConfig> {
    let mut solver = SolverConfig::default();
    let mut lab = LabParams::default();
    let mut out = None;
    let mut ic_kind = "random_band".to_string();

    for (key, value) in parse_pairs(text)?.iter().chain(overrides) {
        let (key, value) = (key.as_str(), value.as_str());
        match key {
            "n" => solver.n = parse(key, value)?,
            "gamma" => solver.gamma = parse(key, value)?,
            "t_max" => solver.t_max = parse(key, value)?,
            "cfl" => solver.cfl = parse(key, value)?,
            "mollify" => {
                solver.mollify = match value {
                    "auto" => Mollify::Auto,
                    "dealias" | "dealias-only" | "dealias_only" => Mollify::DealiasOnly,
                    v => Mollify::Dyadic(parse(key, v)?),
                }
            }
            "ic" => ic_kind = value.to_string(),
            "seed" => solver.seed = parse(key, value)?,
            "p_max" => solver.p_max = parse(key, value)?,
            "diag_interval" => solver.diag_interval = parse(key, value)?,
            "snapshot_interval" => solver.snapshot_interval = parse(key, value)?,
            "band" => lab.band = Some(parse(key, value)?),
            "n_min" => lab.n_min = parse(key, value)?,
            "n_max" => lab.n_max = parse(key, value)?,
            "q" => lab.q = parse_exponent(key, value)?,
            "gamma_list" => lab.gamma_list = parse_list(key, value)?,
            "n_list" => lab.n_list = parse_list(key, value)?,
            "ceiling" => lab.ceiling = parse(key, value)?,
            "pq_pairs" => {
                lab.pq_pairs = value
                    .split(';')
                    .map(|pair| {
                        let (p, q) = pair
                            .split_once(',')
                            .ok_or_else(|| config_err(key, format!("`{pair}` is not `p,q`")))?;
                        Ok((parse_exponent(key, p.trim())?, parse_exponent(key, q.trim())?))
                    })
                    .collect::<Result<_>>()?
            }
            "out" => out = Some(PathBuf::from(value)),
            other => {
                return Err(config_err(
                    other,
                    format!("unknown key (known keys: {})", KEYS.join(", ")),
                ))
            }
        }
    }

    solver.ic = InitialCondition::from_kind(&ic_kind, solver.seed, lab.band).map_err(as_config)?;
    solver.validate().map_err(as_config)?;
    if let Some(b) = lab.band {
        if b < 1 || b >= solver.n / 2 {
            return Err(config_err("band", format!("must lie in 1..{} for n = {}", solver.n / 2, solver.n)));
        }
    }
    for (key, v) in [("n_min", lab.n_min), ("n_max", lab.n_max)] {
        if !is_dyadic(v) {
            return Err(config_err(key, format!("{v} is not dyadic")));
        }
    }
    if lab.n_min > lab.n_max {
        return Err(config_err("n_min", "must not exceed n_max"));
    }
    if lab.q != 2.0 && lab.q != f64::INFINITY {
        return Err(config_err("q", format!("must be 2 or inf, got {}", lab.q)));
    }
    if let Some(g) = lab.gamma_list.iter().find(|g| !(**g >= 0.0) || !g.is_finite()) {
        return Err(config_err("gamma_list", format!("gamma must be finite and >= 0, got {g}")));
    }
    if let Some(n) = lab.n_list.iter().find(|n| **n < 8 || !n.is_power_of_two()) {
        return Err(config_err("n_list", format!("{n} is not a power of two >= 8")));
    }
    if !(lab.ceiling > 0.0) {
        return Err(config_err("ceiling", "must be > 0"));
    }
    Ok(ResolvedConfig { solver, lab, out })
}

fn exponent_text(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Renders a configuration that [`parse_config`] reads back to the same value.
pub fn config_to_text(c: &ResolvedConfig) -> String {
    let s = &c.solver;
    let l = &c.lab;
    let mollify = match s.mollify {
        Mollify::Auto => "auto".to_string(),
        Mollify::DealiasOnly => "dealias".to_string(),
        Mollify::Dyadic(n) => n.to_string(),
    };
    let mut lines = vec![
        format!("n = {}", s.n),
        format!("gamma = {}", s.gamma),
        format!("t_max = {}", s.t_max),
        format!("cfl = {}", s.cfl),
        format!("mollify = {mollify}"),
        format!("ic = {}", s.ic.kind()),
        format!("seed = {}", s.seed),
        format!("p_max = {}", s.p_max),
        format!("diag_interval = {}", s.diag_interval),
        format!("snapshot_interval = {}", s.snapshot_interval),
    ];
    if let Some(b) = l.band {
        lines.push(format!("band = {b}"));
    }
    lines.extend([
        format!("n_min = {}", l.n_min),
        format!("n_max = {}", l.n_max),
        format!("q = {}", exponent_text(l.q)),
        format!("gamma_list = {}", join(&l.gamma_list)),
        format!("n_list = {}", join(&l.n_list)),
        format!("ceiling = {:e}", l.ceiling),
        format!(
            "pq_pairs = {}",
            l.pq_pairs
                .iter()
                .map(|(p, q)| format!("{},{}", exponent_text(*p), exponent_text(*q)))
                .collect::<Vec<_>>()
                .join("; ")
        ),
    ]);
    if let Some(out) = &c.out {
        lines.push(format!("out = {}", out.display()));
    }
    lines.join("\n") + "\n"
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Parameter { name, reason } => Error::Config { key: name.to_string(), reason },
        other => other,
    }
}
