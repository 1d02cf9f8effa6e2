//! Corpus-wide evaluation of the embedding, log-interpolation, multiplier and
//! Bernstein inequalities. Fields are evaluated in parallel; rows keep corpus order.

use std::f64::consts::{E, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lab::corpus::CorpusField;
use crate::lab::report::{InequalityReport, ReportRow};
use crate::multiplier::{check_dyadic, check_gamma, lp_project, tgamma_unchecked, LpKind};
use crate::norms::{grad_u_sup, h1_norm, lp_norm, lp_norms_integer, sup_p_ratio};
use crate::spectral::inverse_real_part;
use crate::symbol_bound::envelope;

/// Outcome of one `(field, parameters)` evaluation.
enum Eval {
    Row(ReportRow),
    /// Zero denominator: excluded under the `0/0` convention.
    Excluded(String),
}

fn collect(mut report: InequalityReport, evals: Vec<Result<Vec<Eval>>>) -> Result<InequalityReport> {
    for batch in evals {
        for e in batch? {
            match e {
                Eval::Row(r) => report.push(r),
                Eval::Excluded(id) => report.exclude(id),
            }
        }
    }
    Ok(report)
}

fn check_nonempty(corpus: &[CorpusField]) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::param("corpus", "must contain at least one field"));
    }
    Ok(())
}

fn check_p_max(p_max: u32) -> Result<()> {
    if p_max < 2 {
        return Err(Error::param("p_max", format!("must be >= 2, got {p_max}")));
    }
    Ok(())
}

/// Per field: `max_{2 <= p <= p_max} ||f||_p / (sqrt(p) ||f||_{H^1})`.
pub fn check_embedding(corpus: &[CorpusField], p_max: u32) -> Result<InequalityReport> {
    check_nonempty(corpus)?;
    check_p_max(p_max)?;
    let evals = corpus
        .par_iter()
        .map(|c| {
            let h1 = h1_norm(&c.field);
            if h1 == 0.0 {
                return Ok(vec![Eval::Excluded(c.id.clone())]);
            }
            let norms = lp_norms_integer(&inverse_real_part(&c.field), p_max)?;
            let (p_star, ratio) = norms
                .iter()
                .enumerate()
                .map(|(i, v)| ((i + 2) as f64, v / (((i + 2) as f64).sqrt() * h1)))
                .fold((2.0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            Ok(vec![Eval::Row(ReportRow {
                function_id: c.id.clone(),
                params: vec![("p_star", p_star)],
                ratio,
            })])
        })
        .collect();
    collect(
        InequalityReport::new("embedding", vec![("p_max".into(), p_max.to_string())]),
        evals,
    )
}

/// Per field: `||grad u||_inf / (log(||f||_{H^1} + e) sup_p ||f||_p / sqrt(p))`
/// with `u` the modified Biot-Savart velocity of `f`.
pub fn check_log_interpolation(
    corpus: &[CorpusField],
    gamma: f64,
    p_max: u32,
) -> Result<InequalityReport> {
    check_nonempty(corpus)?;
    check_gamma(gamma)?;
    check_p_max(p_max)?;
    let evals = corpus
        .par_iter()
        .map(|c| {
            let sup = sup_p_ratio(&inverse_real_part(&c.field), p_max)?;
            let h1 = h1_norm(&c.field);
            if sup == 0.0 {
                return Ok(vec![Eval::Excluded(c.id.clone())]);
            }
            let ratio = grad_u_sup(&c.field, gamma)? / ((h1 + E).ln() * sup);
            Ok(vec![Eval::Row(ReportRow {
                function_id: c.id.clone(),
                params: vec![("h1", h1), ("sup_p_ratio", sup)],
                ratio,
            })])
        })
        .collect();
    let mut report = InequalityReport::new(
        "log_interpolation",
        vec![("gamma".into(), gamma.to_string()), ("p_max".into(), p_max.to_string())],
    );
    report.exploratory = gamma < 1.5;
    collect(report, evals)
}

/// Relative size below which a projected field counts as zero.
const NEGLIGIBLE: f64 = 1e-12;

fn check_exponent(name: &'static str, q: f64) -> Result<()> {
    if !(q >= 2.0) {
        return Err(Error::param(name, format!("exponent must be >= 2 or inf, got {q}")));
    }
    Ok(())
}

fn check_n_set(n_set: &[f64]) -> Result<()> {
    if n_set.is_empty() {
        return Err(Error::param("N", "dyadic set must be non-empty"));
    }
    n_set.iter().try_for_each(|&n| check_dyadic("N", n))
}

/// `||f||_q` from spectral data, exact via Plancherel when `q = 2`.
fn spectral_norm(f: &crate::grid::SpectralField, q: f64) -> Result<f64> {
    if q == 2.0 {
        Ok((4.0 * PI * PI * f.energy_sum()).sqrt())
    } else {
        lp_norm(&inverse_real_part(f), q)
    }
}

/// Per `(field, N)`: `||T_gamma P_N f||_q / (m(N) ||P_N f||_q)` with
/// `m(N) = log^-gamma(N/8 + 10)`. Pairs with `P_N f = 0` are skipped, where
/// "zero" means `||P_N f||_q <= 1e-12 ||f||_q` (transform roundoff).
pub fn check_multiplier_bound(
    corpus: &[CorpusField],
    gamma: f64,
    n_set: &[f64],
    q: f64,
) -> Result<InequalityReport> {
    check_nonempty(corpus)?;
    check_gamma(gamma)?;
    check_n_set(n_set)?;
    if q != 2.0 && q != f64::INFINITY {
        return Err(Error::param("q", format!("must be 2 or inf, got {q}")));
    }
    let evals = corpus
        .par_iter()
        .map(|c| {
            let mut out = Vec::with_capacity(n_set.len());
            let floor = NEGLIGIBLE * spectral_norm(&c.field, q)?;
            for &n in n_set {
                let pn = lp_project(&c.field, n, LpKind::At)?;
                let denom = spectral_norm(&pn, q)?;
                if denom <= floor {
                    continue;
                }
                let tpn = pn.map_modes(|k1, k2| {
                    let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
                    tgamma_unchecked(r, gamma).into()
                });
                let ratio = spectral_norm(&tpn, q)? / (envelope(n, gamma) * denom);
                out.push(Eval::Row(ReportRow {
                    function_id: c.id.clone(),
                    params: vec![("N", n), ("q", q)],
                    ratio,
                }));
            }
            Ok(out)
        })
        .collect();
    collect(
        InequalityReport::new(
            "multiplier_bound",
            vec![("gamma".into(), gamma.to_string()), ("q".into(), q.to_string())],
        ),
        evals,
    )
}

/// Per `(field, N, p, q)`: `||P_N f||_q / (N^{2(1/p - 1/q)} ||f||_p)`.
pub fn check_bernstein(
    corpus: &[CorpusField],
    n_set: &[f64],
    pq_pairs: &[(f64, f64)],
) -> Result<InequalityReport> {
    check_nonempty(corpus)?;
    check_n_set(n_set)?;
    for &(p, q) in pq_pairs {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        if p > q {
            return Err(Error::param("p", format!("need p <= q, got ({p}, {q})")));
        }
    }
    let evals = corpus
        .par_iter()
        .map(|c| {
            let f = inverse_real_part(&c.field);
            let mut out = Vec::new();
            for &n in n_set {
                let pn = inverse_real_part(&lp_project(&c.field, n, LpKind::At)?);
                for &(p, q) in pq_pairs {
                    let fp = lp_norm(&f, p)?;
                    if fp == 0.0 {
                        out.push(Eval::Excluded(c.id.clone()));
                        continue;
                    }
                    let scale = n.powf(2.0 * (1.0 / p - 1.0 / q));
                    out.push(Eval::Row(ReportRow {
                        function_id: c.id.clone(),
                        params: vec![("N", n), ("p", p), ("q", q)],
                        ratio: lp_norm(&pn, q)? / (scale * fp),
                    }));
                }
            }
            Ok(out)
        })
        .collect();
    collect(InequalityReport::new("bernstein", vec![]), evals)
}
