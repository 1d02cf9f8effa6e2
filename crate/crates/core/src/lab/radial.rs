//! Piecewise radial profiles on the plane and the near-extremizers `f_p`
//! of the `sqrt(p)` Sobolev embedding.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lab::quadrature::integrate;

/// Relative tolerance of the per-piece adaptive quadrature.
pub const RADIAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceShape {
    Constant(f64),
    /// `sqrt(-log r)`.
    SqrtNegLog,
    /// Cubic smoothstep decreasing from 1 at `from` to 0 at `to`.
    SmoothstepDecay { from: f64, to: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Closed form (constant pieces).
    Analytic,
    GaussLegendre,
    /// Gauss-Legendre in `s = -log r`, for pieces spanning many decades.
    GaussLegendreLog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub shape: PieceShape,
    pub rule: QuadRule,
}

impl Piece {
    pub fn value(&self, r: f64) -> f64 {
        match self.shape {
            PieceShape::Constant(v) => v,
            PieceShape::SqrtNegLog => (-r.ln()).sqrt(),
            PieceShape::SmoothstepDecay { from, to } => {
                let s = ((r - from) / (to - from)).clamp(0.0, 1.0);
                1.0 - s * s * (3.0 - 2.0 * s)
            }
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self.shape {
            PieceShape::Constant(_) => 0.0,
            PieceShape::SqrtNegLog => -1.0 / (2.0 * r * (-r.ln()).sqrt()),
            PieceShape::SmoothstepDecay { from, to } => {
                let w = to - from;
                let s = ((r - from) / w).clamp(0.0, 1.0);
                -6.0 * s * (1.0 - s) / w
            }
        }
    }

    fn max_abs(&self) -> f64 {
        match self.shape {
            PieceShape::Constant(v) => v.abs(),
            PieceShape::SqrtNegLog => self.value(self.start),
            PieceShape::SmoothstepDecay { .. } => 1.0,
        }
    }

    /// `int_start^end w(r) r dr` for the requested integrand `w`.
    fn integrate_weighted(&self, w: Integrand) -> Result<f64> {
        match self.rule {
            QuadRule::Analytic => {
                let PieceShape::Constant(v) = self.shape else {
                    unreachable!("analytic rule is only attached to constant pieces")
                };
                let area = 0.5 * (self.end * self.end - self.start * self.start);
                Ok(match w {
                    Integrand::ScaledPower { scale, p } => (v.abs() / scale).powf(p) * area,
                    Integrand::Dirichlet => 0.0,
                })
            }
            QuadRule::GaussLegendre => integrate(
                |r| {
                    let v = match w {
                        Integrand::ScaledPower { scale, p } => (self.value(r).abs() / scale).powf(p),
                        Integrand::Dirichlet => self.derivative(r).powi(2),
                    };
                    v * r
                },
                self.start,
                self.end,
                RADIAL_TOL,
            ),
            QuadRule::GaussLegendreLog => integrate(
                // r = e^{-s}: int w(r) r dr = int w(e^{-s}) e^{-2s} ds
                |s| {
                    let r = (-s).exp();
                    match w {
                        Integrand::ScaledPower { scale, p } => {
                            (self.value(r).abs() / scale).powf(p) * r * r
                        }
                        Integrand::Dirichlet => self.log_derivative(s).powi(2),
                    }
                },
                -self.end.ln(),
                -self.start.ln(),
                RADIAL_TOL,
            ),
        }
    }

    /// `r f'(r)` at `r = e^{-s}`, finite even where `f'` is huge.
    fn log_derivative(&self, s: f64) -> f64 {
        match self.shape {
            PieceShape::SqrtNegLog => -0.5 / s.sqrt(),
            _ => {
                let r = (-s).exp();
                r * self.derivative(r)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Integrand {
    /// `(|f| / scale)^p`
    ScaledPower { scale: f64, p: f64 },
    /// `|f'|^2`
    Dirichlet,
}

/// Radial function on `r >= 0`, vanishing beyond the last piece.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub pieces: Vec<Piece>,
}

impl RadialProfile {
    pub fn support_radius(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.end)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| r < p.end || (r == p.end && p.end == self.support_radius()))
            .map_or(0.0, |p| p.value(r))
    }

    /// Largest `|f(b-) - f(b+)|` over interior breakpoints.
    pub fn max_jump(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| (w[0].value(w[0].end) - w[1].value(w[1].start)).abs())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.pieces.iter().map(Piece::max_abs).fold(0.0, f64::max)
    }
}

/// Near-extremizer of the embedding constant:
/// `sqrt(p)` on `r < e^-p`, `sqrt(-log r)` on `[e^-p, e^-1]`, then a cubic
/// smoothstep from 1 at `e^-1` down to 0 at `r = 1`.
pub fn build_extremizer(p: f64) -> Result<RadialProfile> {
    if !(p >= 4.0) || !p.is_finite() {
        return Err(Error::param("p", format!("extremizer needs finite p >= 4, got {p}")));
    }
    let inner = (-p).exp();
    let knee = (-1.0f64).exp();
    Ok(RadialProfile {
        pieces: vec![
            Piece {
                start: 0.0,
                end: inner,
                shape: PieceShape::Constant(p.sqrt()),
                rule: QuadRule::Analytic,
            },
            Piece {
                start: inner,
                end: knee,
                shape: PieceShape::SqrtNegLog,
                rule: QuadRule::GaussLegendreLog,
            },
            Piece {
                start: knee,
                end: 1.0,
                shape: PieceShape::SmoothstepDecay { from: knee, to: 1.0 },
                rule: QuadRule::GaussLegendre,
            },
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNorms {
    pub l2: f64,
    pub lp: f64,
    pub h1dot: f64,
}

impl RadialNorms {
    /// `||f||_2 + ||grad f||_2`.
    pub fn h1(&self) -> f64 {
        self.l2 + self.h1dot
    }
}

/// `L^2`, `L^p` and `H^1-dot` norms of a radial function on the plane.
pub fn radial_norms(f: &RadialProfile, p: f64) -> Result<RadialNorms> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::param("p", format!("need finite p >= 1, got {p}")));
    }
    let max = f.max_abs();
    let mut l2 = 0.0;
    let mut lp = 0.0;
    let mut h1 = 0.0;
    for piece in &f.pieces {
        l2 += piece.integrate_weighted(Integrand::ScaledPower { scale: 1.0, p: 2.0 })?;
        if max > 0.0 {
            lp += piece.integrate_weighted(Integrand::ScaledPower { scale: max, p })?;
        }
        h1 += piece.integrate_weighted(Integrand::Dirichlet)?;
    }
    Ok(RadialNorms {
        l2: (2.0 * PI * l2).sqrt(),
        lp: max * (2.0 * PI * lp).powf(1.0 / p),
        h1dot: (2.0 * PI * h1).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessRow {
    pub p: f64,
    pub norms: RadialNorms,
    /// `||f_p||_p / (sqrt(p) ||f_p||_{H^1})`.
    pub ratio: f64,
    /// `ratio * sqrt(log p)`; bounded below when the constant grows like `sqrt(p / log p)`.
    pub ratio_sqrt_log_p: f64,
    pub inv_sqrt_log_p: f64,
}

pub fn sharpness_curve(p_list: &[f64]) -> Result<Vec<SharpnessRow>> {
    p_list
        .iter()
        .map(|&p| {
            let norms = radial_norms(&build_extremizer(p)?, p)?;
            let ratio = norms.lp / (p.sqrt() * norms.h1());
            let log_p = p.ln();
            Ok(SharpnessRow {
                p,
                norms,
                ratio,
                ratio_sqrt_log_p: ratio * log_p.sqrt(),
                inv_sqrt_log_p: 1.0 / log_p.sqrt(),
            })
        })
        .collect()
}

/// Constants fitted on the upper half of the p range (`p >= sqrt(p_min p_max)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessFit {
    /// Least-squares `c` in `||f_p||_{H^1-dot} ~ c sqrt(log p)`.
    pub c_h1dot: f64,
    /// Least-squares `c'` in `||f_p||_p ~ c' sqrt(p)`.
    pub c_lp: f64,
    /// Largest relative deviation of a single row from the fitted `c`.
    pub h1dot_spread: f64,
    pub lp_spread: f64,
    /// Largest `||f_p||_2` over all rows.
    pub l2_max: f64,
    /// Smallest `ratio * sqrt(log p)` over all rows.
    pub min_ratio_sqrt_log_p: f64,
    pub rows_fitted: usize,
}

pub fn fit_sharpness(rows: &[SharpnessRow]) -> Option<SharpnessFit> {
    let p_min = rows.iter().map(|r| r.p).reduce(f64::min)?;
    let p_max = rows.iter().map(|r| r.p).reduce(f64::max)?;
    let mid = (p_min * p_max).sqrt();
    let upper: Vec<&SharpnessRow> = rows.iter().filter(|r| r.p >= mid * (1.0 - 1e-12)).collect();
    let fit = |x: &dyn Fn(&SharpnessRow) -> f64, y: &dyn Fn(&SharpnessRow) -> f64| {
        let num: f64 = upper.iter().map(|r| x(r) * y(r)).sum();
        let den: f64 = upper.iter().map(|r| x(r) * x(r)).sum();
        let c = num / den;
        let spread = upper
            .iter()
            .map(|r| (y(r) / x(r) - c).abs() / c)
            .fold(0.0, f64::max);
        (c, spread)
    };
    let (c_h1dot, h1dot_spread) = fit(&|r| r.p.ln().sqrt(), &|r| r.norms.h1dot);
    let (c_lp, lp_spread) = fit(&|r| r.p.sqrt(), &|r| r.norms.lp);
    Some(SharpnessFit {
        c_h1dot,
        c_lp,
        h1dot_spread,
        lp_spread,
        l2_max: rows.iter().map(|r| r.norms.l2).fold(0.0, f64::max),
        min_ratio_sqrt_log_p: rows.iter().map(|r| r.ratio_sqrt_log_p).fold(f64::INFINITY, f64::min),
        rows_fitted: upper.len(),
    })
}

/// Default p grid `4, 8, ..., p_max` (powers of two).
pub fn dyadic_p_list(p_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut p = 4.0;
    while p <= p_max {
        out.push(p);
        p *= 2.0;
    }
    out
}
