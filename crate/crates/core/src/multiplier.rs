//! Radial Fourier multipliers: the log-smoothing operator `T_gamma`, the
//! Littlewood-Paley cutoffs and the modified Biot-Savart map.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{RealField, SpectralField};
use crate::spectral::{self, inverse_real_part};

/// `1 / log^gamma(r + 10)`, natural logarithm.
pub fn tgamma_eval(r: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(r >= 0.0) {
        return Err(Error::param("r", format!("frequency modulus must be >= 0, got {r}")));
    }
    Ok(tgamma_unchecked(r, gamma))
}

#[inline]
pub(crate) fn tgamma_unchecked(r: f64, gamma: f64) -> f64 {
    (r + 10.0).ln().powf(-gamma)
}

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::param("gamma", format!("must be finite and >= 0, got {gamma}")));
    }
    Ok(())
}

#[inline]
fn bump_half(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, inf)`, and on `(1, 2)` the
/// exponential bridge `B(2 - r)` with `B(s) = q(s) / (q(s) + q(1 - s))`,
/// `q(s) = exp(-1/s)` for `s > 0`.
pub fn phi_eval(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let s = 2.0 - r;
        let a = bump_half(s);
        let b = bump_half(1.0 - s);
        a / (a + b)
    }
}

/// True when `n = 2^j` for some integer `j`.
pub fn is_dyadic(n: f64) -> bool {
    if !(n > 0.0) || !n.is_finite() {
        return false;
    }
    let j = n.log2().round();
    2f64.powi(j as i32) == n
}

pub(crate) fn check_dyadic(name: &'static str, n: f64) -> Result<()> {
    if !is_dyadic(n) {
        return Err(Error::param(name, format!("{n} is not a dyadic number 2^j")));
    }
    Ok(())
}

/// Which Littlewood-Paley piece to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpKind {
    /// `P_N`: the annulus `phi(|k|/N) - phi(2|k|/N)`.
    At,
    /// `P_{<=N}`: `phi(|k|/N)`.
    Leq,
    /// `P_{>N}`: `1 - phi(|k|/N)`.
    Gt,
}

/// A real, radial Fourier symbol.
#[derive(Clone)]
pub enum Symbol {
    Identity,
    /// `1 / log^gamma(r + 10)`.
    TGamma { gamma: f64 },
    /// Littlewood-Paley cutoff at the dyadic frequency `n`.
    LittlewoodPaley { n: f64, kind: LpKind },
    Product(Box<Symbol>, Box<Symbol>),
    Custom {
        name: String,
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Identity => write!(f, "Identity"),
            Symbol::TGamma { gamma } => write!(f, "TGamma(gamma={gamma})"),
            Symbol::LittlewoodPaley { n, kind } => write!(f, "LittlewoodPaley({kind:?}, N={n})"),
            Symbol::Product(a, b) => write!(f, "({a:?} * {b:?})"),
            Symbol::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Symbol {
    pub fn tgamma(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Symbol::TGamma { gamma })
    }

    pub fn littlewood_paley(n: f64, kind: LpKind) -> Result<Self> {
        check_dyadic("N", n)?;
        Ok(Symbol::LittlewoodPaley { n, kind })
    }

    pub fn custom(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Symbol::Custom {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn then(self, other: Symbol) -> Self {
        Symbol::Product(Box::new(self), Box::new(other))
    }

    /// Value at frequency modulus `r >= 0`.
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Symbol::Identity => 1.0,
            Symbol::TGamma { gamma } => tgamma_unchecked(r, *gamma),
            Symbol::LittlewoodPaley { n, kind } => match kind {
                LpKind::Leq => phi_eval(r / n),
                LpKind::Gt => 1.0 - phi_eval(r / n),
                LpKind::At => phi_eval(r / n) - phi_eval(2.0 * r / n),
            },
            Symbol::Product(a, b) => a.eval(r) * b.eval(r),
            Symbol::Custom { eval, .. } => eval(r),
        }
    }
}

/// Multiplies every coefficient by `m(|k|)`.
pub fn apply_multiplier(s: &SpectralField, m: &Symbol) -> SpectralField {
    s.map_modes(|k1, k2| {
        let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
        Complex64::new(m.eval(r), 0.0)
    })
}

/// Littlewood-Paley projection at dyadic `n`.
pub fn lp_project(s: &SpectralField, n: f64, kind: LpKind) -> Result<SpectralField> {
    Ok(apply_multiplier(s, &Symbol::littlewood_paley(n, kind)?))
}

/// Stream function `psi = Delta^{-1} T_gamma omega`.
pub fn stream_function(omega: &SpectralField, gamma: f64) -> Result<SpectralField> {
    check_gamma(gamma)?;
    spectral::check_zero_mean(omega)?;
    Ok(omega.map_modes(|k1, k2| {
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            let r2 = k2sum as f64;
            Complex64::new(-tgamma_unchecked(r2.sqrt(), gamma) / r2, 0.0)
        }
    }))
}

/// Velocity `u = perp-grad Delta^{-1} T_gamma omega` in spectral form.
pub fn velocity_spectral(
    omega: &SpectralField,
    gamma: f64,
) -> Result<(SpectralField, SpectralField)> {
    Ok(spectral::perp_gradient(&stream_function(omega, gamma)?))
}

/// Modified Biot-Savart law, returning `(u1, u2)` in physical space.
pub fn biot_savart(omega: &SpectralField, gamma: f64) -> Result<(RealField, RealField)> {
    let (u1, u2) = velocity_spectral(omega, gamma)?;
    Ok((inverse_real_part(&u1), inverse_real_part(&u2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::spectral::{dft_forward, dft_inverse};

    #[test]
    fn tgamma_examples() {
        assert_eq!(tgamma_eval(1.0, 0.0).unwrap(), 1.0);
        let v = tgamma_eval(1.0, 1.5).unwrap();
        // mpmath, 30 digits: 1/log(11)^(3/2)
        assert!((v - 0.269_311_365_986_846_1).abs() < 1e-12, "{v}");
        assert!(tgamma_eval(100.0, 1.5).unwrap() < v);
        assert!(tgamma_eval(1.0, -0.1).is_err());
        assert!(tgamma_eval(-1.0, 1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_eval(0.5), 1.0);
        assert_eq!(phi_eval(1.0), 1.0);
        assert_eq!(phi_eval(3.0), 0.0);
        assert_eq!(phi_eval(2.0), 0.0);
        assert!((phi_eval(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let v = phi_eval(1.0 + i as f64 / 1000.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(1.0));
        assert!(is_dyadic(0.25));
        assert!(is_dyadic(1024.0));
        assert!(!is_dyadic(3.0));
        assert!(!is_dyadic(0.0));
        assert!(!is_dyadic(-2.0));
        assert!(lp_project(&SpectralField::zeros(Grid::new(8).unwrap()), 3.0, LpKind::At).is_err());
    }

    #[test]
    fn tgamma_on_sine_scales_by_symbol() {
        let g = Grid::new(16).unwrap();
        let s = dft_forward(&RealField::from_fn(g, |x1, _| x1.sin()));
        let out = dft_inverse(&apply_multiplier(&s, &Symbol::tgamma(1.5).unwrap())).unwrap();
        let c = tgamma_eval(1.0, 1.5).unwrap();
        let want = RealField::from_fn(g, |x1, _| c * x1.sin());
        for (a, b) in out.values().iter().zip(want.values()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(apply_multiplier(&s, &Symbol::Identity), s);
    }

    #[test]
    fn annulus_symbol_is_one_on_its_dyadic_shell() {
        let g = Grid::new(32).unwrap();
        let mut s = SpectralField::zeros(g);
        s.set(4, 0, Complex64::new(1.0, 0.0));
        s.set(-4, 0, Complex64::new(1.0, 0.0));
        assert_eq!(lp_project(&s, 4.0, LpKind::At).unwrap(), s);
    }

    #[test]
    fn biot_savart_single_mode() {
        let g = Grid::new(32).unwrap();
        let w = dft_forward(&RealField::from_fn(g, |x1, _| x1.sin()));
        let (u1, u2) = biot_savart(&w, 1.5).unwrap();
        let c = tgamma_eval(1.0, 1.5).unwrap();
        for j1 in 0..32 {
            for j2 in 0..32 {
                let i = j1 * 32 + j2;
                assert!(u1.values()[i].abs() < 1e-14);
                assert!((u2.values()[i] + c * g.coordinate(j1).cos()).abs() < 1e-14);
            }
        }
        let one = dft_forward(&RealField::from_fn(g, |_, _| 1.0));
        assert!(matches!(biot_savart(&one, 1.5), Err(Error::NonZeroMean { .. })));
    }
}
