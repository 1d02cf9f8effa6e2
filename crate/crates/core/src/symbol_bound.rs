//! Numerical check of the Mikhlin-type derivative bound
//! `sup_{N/8 <= |xi| <= 8N} |d^a m(xi)| <= C m~(N) / N^|a|`, `|a| <= 3`,
//! for the `T_gamma` symbol with `m~(N) = log^-gamma(N/8 + 10)`.
//!
//! Derivatives are exact: the symbol is evaluated on a bivariate Taylor jet
//! truncated at degree 3. A central finite difference of the symbol itself
//! cross-checks the first-order terms.

use crate::error::Result;
use crate::multiplier::{check_dyadic, check_gamma, tgamma_unchecked};

/// Highest derivative order, `d + 1` for `d = 2`.
pub const MAX_ORDER: usize = 3;
pub const RADII: usize = 64;
pub const ANGLES: usize = 16;

/// Number of monomials `x^i y^j` with `i + j <= 3`.
const TERMS: usize = 10;

#[inline]
const fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Truncated bivariate Taylor polynomial `sum c_ij dx^i dy^j`, `i + j <= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet([f64; TERMS]);

impl Jet {
    fn constant(v: f64) -> Self {
        let mut c = [0.0; TERMS];
        c[0] = v;
        Jet(c)
    }

    fn variable(v: f64, axis: usize) -> Self {
        let mut j = Jet::constant(v);
        j.0[if axis == 0 { slot(1, 0) } else { slot(0, 1) }] = 1.0;
        j
    }

    fn value(&self) -> f64 {
        self.0[0]
    }

    fn add(&self, other: &Jet) -> Jet {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(other.0) {
            *a += b;
        }
        Jet(c)
    }

    fn add_const(&self, v: f64) -> Jet {
        let mut c = self.0;
        c[0] += v;
        Jet(c)
    }

    fn mul(&self, other: &Jet) -> Jet {
        let mut c = [0.0; TERMS];
        for d1 in 0..=MAX_ORDER {
            for j1 in 0..=d1 {
                let a = self.0[slot(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(MAX_ORDER - d1) {
                    for j2 in 0..=d2 {
                        let b = other.0[slot(d2 - j2, j2)];
                        c[slot(d1 - j1 + d2 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        Jet(c)
    }

    /// `f(self)` given `f, f', f'', f'''` at the constant term.
    fn compose(&self, derivs: [f64; 4]) -> Jet {
        let mut h = *self;
        h.0[0] = 0.0;
        let mut out = Jet::constant(derivs[0]);
        let mut power = Jet::constant(1.0);
        let mut factorial = 1.0;
        for (k, d) in derivs.iter().enumerate().skip(1) {
            power = power.mul(&h);
            factorial *= k as f64;
            let scale = d / factorial;
            for (o, p) in out.0.iter_mut().zip(power.0) {
                *o += scale * p;
            }
        }
        out
    }

    fn sqrt(&self) -> Jet {
        let u = self.value();
        let s = u.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (u * s), 0.375 / (u * u * s)])
    }

    fn ln(&self) -> Jet {
        let u = self.value();
        self.compose([u.ln(), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)])
    }

    fn powf(&self, e: f64) -> Jet {
        let u = self.value();
        self.compose([
            u.powf(e),
            e * u.powf(e - 1.0),
            e * (e - 1.0) * u.powf(e - 2.0),
            e * (e - 1.0) * (e - 2.0) * u.powf(e - 3.0),
        ])
    }

    /// `d^a f` for the multi-index `a = (i, j)`.
    fn partial(&self, i: usize, j: usize) -> f64 {
        self.0[slot(i, j)] * factorial(i) * factorial(j)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

fn tgamma_jet(xi1: f64, xi2: f64, gamma: f64) -> Jet {
    let x = Jet::variable(xi1, 0);
    let y = Jet::variable(xi2, 1);
    x.mul(&x)
        .add(&y.mul(&y))
        .sqrt()
        .add_const(10.0)
        .ln()
        .powf(-gamma)
}

/// All partial derivatives `d^a m(xi)` with `|a| <= 3`, indexed by `(a1, a2)`.
pub fn tgamma_partials(xi1: f64, xi2: f64, gamma: f64) -> Vec<((usize, usize), f64)> {
    let jet = tgamma_jet(xi1, xi2, gamma);
    let mut out = Vec::with_capacity(TERMS);
    for d in 0..=MAX_ORDER {
        for j in 0..=d {
            out.push(((d - j, j), jet.partial(d - j, j)));
        }
    }
    out
}

/// `m~(N) = log^-gamma(N/8 + 10)`.
pub fn envelope(n: f64, gamma: f64) -> f64 {
    tgamma_unchecked(n / 8.0, gamma)
}

/// Result of [`verify_symbol_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub gamma: f64,
    pub n: f64,
    /// `max |d^a m| N^|a| / m~(N)` over the annulus, for `|a| = 0..=3`.
    pub max_ratio: [f64; MAX_ORDER + 1],
    /// Largest relative mismatch between exact and central-difference first derivatives.
    pub fd_max_rel_err: f64,
}

fn central_difference(xi1: f64, xi2: f64, gamma: f64, axis: usize, h: f64) -> f64 {
    let m = |a: f64, b: f64| tgamma_unchecked((a * a + b * b).sqrt(), gamma);
    if axis == 0 {
        (m(xi1 + h, xi2) - m(xi1 - h, xi2)) / (2.0 * h)
    } else {
        (m(xi1, xi2 + h) - m(xi1, xi2 - h)) / (2.0 * h)
    }
}

/// Samples 64 log-spaced radii by 16 angles on `N/8 <= |xi| <= 8N`.
pub fn verify_symbol_bound(gamma: f64, n: f64) -> Result<BoundReport> {
    check_gamma(gamma)?;
    check_dyadic("N", n)?;
    let m_env = envelope(n, gamma);
    let (r_lo, r_hi) = (n / 8.0, 8.0 * n);
    let mut max_ratio = [0.0_f64; MAX_ORDER + 1];
    let mut fd_max_rel_err = 0.0_f64;
    for ir in 0..RADII {
        let t = ir as f64 / (RADII - 1) as f64;
        let r = r_lo * (r_hi / r_lo).powf(t);
        for ia in 0..ANGLES {
            let theta = 2.0 * std::f64::consts::PI * ia as f64 / ANGLES as f64;
            let (xi1, xi2) = (r * theta.cos(), r * theta.sin());
            let jet = tgamma_jet(xi1, xi2, gamma);
            for (d, best) in max_ratio.iter_mut().enumerate() {
                let scale = n.powi(d as i32) / m_env;
                for j in 0..=d {
                    *best = best.max(jet.partial(d - j, j).abs() * scale);
                }
            }
            let h = 1e-5 * r;
            for (axis, exact) in [(0, jet.partial(1, 0)), (1, jet.partial(0, 1))] {
                let fd = central_difference(xi1, xi2, gamma, axis, h);
                let scale = jet.partial(1, 0).hypot(jet.partial(0, 1));
                if scale > 0.0 {
                    fd_max_rel_err = fd_max_rel_err.max((fd - exact).abs() / scale);
                }
            }
        }
    }
    Ok(BoundReport {
        gamma,
        n,
        max_ratio,
        fd_max_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_reproduces_polynomial_derivatives() {
        // f = x^2 y + 3 y^3 at (2, -1)
        let x = Jet::variable(2.0, 0);
        let y = Jet::variable(-1.0, 1);
        let f = x.mul(&x).mul(&y).add(&Jet::constant(3.0).mul(&y.mul(&y).mul(&y)));
        assert_eq!(f.value(), -4.0 - 3.0);
        assert_eq!(f.partial(1, 0), -(2.0 * 2.0));
        assert_eq!(f.partial(0, 1), 4.0 + 9.0);
        assert_eq!(f.partial(2, 1), 2.0);
        assert_eq!(f.partial(0, 3), 18.0);
        assert_eq!(f.partial(1, 1), 4.0);
        assert_eq!(f.partial(3, 0), 0.0);
    }

    #[test]
    fn jet_elementary_functions() {
        let x = Jet::variable(0.7, 0);
        let e = x.ln();
        assert!((e.partial(3, 0) - 2.0 / 0.7f64.powi(3)).abs() < 1e-12);
        let s = x.sqrt();
        assert!((s.partial(2, 0) + 0.25 * 0.7f64.powf(-1.5)).abs() < 1e-12);
        let p = x.powf(-1.5);
        assert!((p.partial(3, 0) - (-1.5 * -2.5 * -3.5) * 0.7f64.powf(-4.5)).abs() < 1e-10);
    }

    #[test]
    fn order_zero_ratio_at_most_one() {
        for j in 1..=12 {
            let rep = verify_symbol_bound(1.5, 2f64.powi(j)).unwrap();
            assert!(rep.max_ratio[0] <= 1.0 + 1e-12, "{:?}", rep);
        }
    }

    #[test]
    fn first_derivative_matches_finite_difference_on_axis() {
        for n in [2.0, 64.0, 4096.0] {
            let exact = tgamma_partials(n, 0.0, 1.5)
                .into_iter()
                .find(|(a, _)| *a == (1, 0))
                .unwrap()
                .1;
            let h = 1e-4 * n;
            let fd = central_difference(n, 0.0, 1.5, 0, h);
            assert!(((fd - exact) / exact).abs() < 1e-6, "N={n}: {fd} vs {exact}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(verify_symbol_bound(-1.0, 4.0).is_err());
        assert!(verify_symbol_bound(1.5, 6.0).is_err());
    }
}
