//! Empirical constants in the differential inequalities that bound the
//! `H^-1-dot` and `H^1-dot` norms along a trajectory:
//!
//! ```text
//! (a) d/dt |w|_{-1}^2 <= C_a (|w0|_2 |w|_{-1}^2 + |w0|_2^2 |w|_{-1})
//! (b) d/dt |w|_{1}^2  <= C_b |w0|_{H^1} log(|w|_1 + |w0|_2 + e) |w|_1^2
//! ```
//!
//! Time derivatives are forward differences between consecutive records and
//! the right-hand sides are averaged over the two endpoints.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::norms::NormBundle;
use crate::solver::DiagnosticsRecord;

/// Fitted constants above this value mark the envelope as violated.
pub const DEFAULT_CEILING: f64 = 1e6;

/// Second-half fits may exceed first-half fits by this factor and still count as uniform.
const UNIFORM_FACTOR: f64 = 10.0;
/// Fits below this are indistinguishable from zero.
const UNIFORM_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub t: f64,
    pub hm1dot: f64,
    pub h1dot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub c_a: f64,
    pub c_b: f64,
    /// Fits restricted to the first and second half of the intervals.
    pub c_a_halves: (f64, f64),
    pub c_b_halves: (f64, f64),
    pub uniform_a: bool,
    pub uniform_b: bool,
    pub ceiling: f64,
    pub violated: bool,
    pub intervals: usize,
}

impl EnvelopeReport {
    pub fn summary(&self) -> String {
        let flag = |u: bool| if u { "uniform" } else { "non-uniform" };
        let mut s = format!(
            "== gronwall envelope ({} intervals) ==\n\
             {:>6} = {:.6e}  halves ({:.6e}, {:.6e})  {}\n\
             {:>6} = {:.6e}  halves ({:.6e}, {:.6e})  {}\n",
            self.intervals,
            "C_a",
            self.c_a,
            self.c_a_halves.0,
            self.c_a_halves.1,
            flag(self.uniform_a),
            "C_b",
            self.c_b,
            self.c_b_halves.0,
            self.c_b_halves.1,
            flag(self.uniform_b),
        );
        if self.violated {
            s.push_str(&format!("envelope violated: a fitted constant exceeds {:e}\n", self.ceiling));
        }
        s
    }
}

pub fn gronwall_envelope(
    diags: &[DiagnosticsRecord],
    omega0: &NormBundle,
    ceiling: f64,
) -> Result<EnvelopeReport> {
    let samples: Vec<EnvelopeSample> = diags
        .iter()
        .map(|d| EnvelopeSample { t: d.t, hm1dot: d.norms.hm1dot, h1dot: d.norms.h1dot })
        .collect();
    gronwall_envelope_samples(&samples, omega0.l2, omega0.h1(), ceiling)
}

/// Envelope fit from bare samples, given `|w0|_2` and `|w0|_{H^1}`.
pub fn gronwall_envelope_samples(
    samples: &[EnvelopeSample],
    l2_0: f64,
    h1_0: f64,
    ceiling: f64,
) -> Result<EnvelopeReport> {
    if samples.len() < 3 {
        return Err(Error::param(
            "records",
            format!("need at least 3 diagnostics records, got {}", samples.len()),
        ));
    }
    if !(ceiling > 0.0) {
        return Err(Error::param("ceiling", format!("must be > 0, got {ceiling}")));
    }
    let rhs_a = |s: &EnvelopeSample| l2_0 * s.hm1dot * s.hm1dot + l2_0 * l2_0 * s.hm1dot;
    let rhs_b = |s: &EnvelopeSample| h1_0 * (s.h1dot + l2_0 + E).ln() * s.h1dot * s.h1dot;

    let mut need_a = Vec::new();
    let mut need_b = Vec::new();
    for w in samples.windows(2) {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) {
            continue;
        }
        let da = (w[1].hm1dot.powi(2) - w[0].hm1dot.powi(2)) / dt;
        let db = (w[1].h1dot.powi(2) - w[0].h1dot.powi(2)) / dt;
        need_a.push(required(da, 0.5 * (rhs_a(&w[0]) + rhs_a(&w[1]))));
        need_b.push(required(db, 0.5 * (rhs_b(&w[0]) + rhs_b(&w[1]))));
    }
    if need_a.len() < 2 {
        return Err(Error::param("records", "need at least 2 intervals of positive length"));
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let half = need_a.len() / 2;
    let c_a_halves = (max(&need_a[..half]), max(&need_a[half..]));
    let c_b_halves = (max(&need_b[..half]), max(&need_b[half..]));
    let uniform = |(first, second): (f64, f64)| second <= (UNIFORM_FACTOR * first).max(UNIFORM_FLOOR);
    let c_a = max(&need_a);
    let c_b = max(&need_b);
    Ok(EnvelopeReport {
        c_a,
        c_b,
        c_a_halves,
        c_b_halves,
        uniform_a: uniform(c_a_halves),
        uniform_b: uniform(c_b_halves),
        ceiling,
        violated: !(c_a <= ceiling && c_b <= ceiling),
        intervals: need_a.len(),
    })
}

/// Smallest `C >= 0` with `derivative <= C * bound`.
fn required(derivative: f64, bound: f64) -> f64 {
    if derivative <= 0.0 {
        0.0
    } else if bound > 0.0 {
        derivative / bound
    } else {
        f64::INFINITY
    }
}
