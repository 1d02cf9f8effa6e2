//! Lebesgue and Sobolev norms on the torus and the functionals tracked
//! along a trajectory.
//!
//! Physical-space integrals use the rectangle rule with weight `dx^2`;
//! spectral norms use the matching Plancherel factor `4 pi^2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{RealField, SpectralField};
use crate::multiplier::{check_gamma, tgamma_unchecked, velocity_spectral};
use crate::spectral::{self, derivative_symbol, inverse_real_part};

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// `(sum |f|^p dx^2)^(1/p)`, or the grid maximum when `p` is infinite.
pub fn lp_norm(f: &RealField, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::param("p", format!("exponent must be >= 2, got {p}")));
    }
    let max = f.max_abs();
    if p.is_infinite() {
        return Ok(max);
    }
    if max == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = f.values().iter().map(|v| (v.abs() / max).powf(p)).sum();
    Ok(max * (sum * f.grid().cell_area()).powf(1.0 / p))
}

/// `||f||_p` for every integer `p` in `2..=p_max`, in one pass over the samples.
pub fn lp_norms_integer(f: &RealField, p_max: u32) -> Result<Vec<f64>> {
    if p_max < 2 {
        return Err(Error::param("p_max", format!("must be >= 2, got {p_max}")));
    }
    let max = f.max_abs();
    let count = (p_max - 1) as usize;
    if max == 0.0 {
        return Ok(vec![0.0; count]);
    }
    let inv = 1.0 / max;
    let mut sums = vec![0.0; count];
    for v in f.values() {
        let a = v.abs() * inv;
        let mut acc = a * a;
        sums[0] += acc;
        for s in sums.iter_mut().skip(1) {
            acc *= a;
            *s += acc;
        }
    }
    let area = f.grid().cell_area();
    Ok(sums
        .iter()
        .enumerate()
        .map(|(i, s)| max * (s * area).powf(1.0 / (i + 2) as f64))
        .collect())
}

/// Homogeneous Sobolev norm `(4 pi^2 sum_{k != 0} |k|^{2s} |c(k)|^2)^(1/2)`.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> Result<f64> {
    if s < 0.0 {
        spectral::check_zero_mean(field)?;
    }
    let sum: f64 = field
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(idx, c)| field.modulus_sq_at(idx).powf(s) * c.norm_sqr())
        .sum();
    Ok((FOUR_PI_SQ * sum).sqrt())
}

/// Inhomogeneous `||f||_2 + ||grad f||_2`.
pub fn h1_norm(field: &SpectralField) -> f64 {
    let l2 = (FOUR_PI_SQ * field.energy_sum()).sqrt();
    l2 + sobolev_norm(field, 1.0).expect("s >= 0 has no precondition")
}

/// `max_{2 <= p <= p_max} ||f||_p / sqrt(p)` over integer `p`.
pub fn sup_p_ratio(f: &RealField, p_max: u32) -> Result<f64> {
    Ok(lp_norms_integer(f, p_max)?
        .iter()
        .enumerate()
        .map(|(i, v)| v / ((i + 2) as f64).sqrt())
        .fold(0.0, f64::max))
}

/// Spectral coefficients of the four entries `d_j u_m` of the velocity gradient.
pub fn velocity_gradient(omega: &SpectralField, gamma: f64) -> Result<[SpectralField; 4]> {
    let (u1, u2) = velocity_spectral(omega, gamma)?;
    let g = omega.grid();
    Ok([
        u1.map_modes(|k1, _| derivative_symbol(g, k1)),
        u1.map_modes(|_, k2| derivative_symbol(g, k2)),
        u2.map_modes(|k1, _| derivative_symbol(g, k1)),
        u2.map_modes(|_, k2| derivative_symbol(g, k2)),
    ])
}

/// Grid maximum of `|grad u|` over all four entries, `u` from the modified Biot-Savart law.
pub fn grad_u_sup(omega: &SpectralField, gamma: f64) -> Result<f64> {
    Ok(velocity_gradient(omega, gamma)?
        .iter()
        .map(|c| inverse_real_part(c).max_abs())
        .fold(0.0, f64::max))
}

/// `int omega (-Delta)^{-1} T_gamma omega dx`.
pub fn generalized_energy(omega: &SpectralField, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    spectral::check_zero_mean(omega)?;
    let sum: f64 = omega
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(idx, c)| {
            let r2 = omega.modulus_sq_at(idx);
            tgamma_unchecked(r2.sqrt(), gamma) * c.norm_sqr() / r2
        })
        .sum();
    Ok(FOUR_PI_SQ * sum)
}

/// Exponents reported individually in a [`NormBundle`].
pub const DEFAULT_P_GRID: [u32; 2] = [4, 8];

/// Every norm and functional recorded for one vorticity field.
#[derive(Debug, Clone, PartialEq)]
pub struct NormBundle {
    pub l2: f64,
    pub h1dot: f64,
    pub hm1dot: f64,
    /// `(p, ||omega||_p)` for each exponent of the configured p-grid.
    pub lp: Vec<(u32, f64)>,
    pub sup_p_ratio: f64,
    pub grad_u_sup: f64,
    pub energy_gamma: f64,
}

impl NormBundle {
    pub fn compute(omega: &SpectralField, gamma: f64, p_max: u32, p_grid: &[u32]) -> Result<Self> {
        let physical = inverse_real_part(omega);
        let all = lp_norms_integer(&physical, p_max.max(2))?;
        let lp = p_grid
            .iter()
            .map(|&p| {
                let v = if p >= 2 && p <= p_max {
                    all[(p - 2) as usize]
                } else {
                    lp_norm(&physical, p as f64)?
                };
                Ok((p, v))
            })
            .collect::<Result<Vec<_>>>()?;
        let sup = all
            .iter()
            .enumerate()
            .map(|(i, v)| v / ((i + 2) as f64).sqrt())
            .fold(0.0, f64::max);
        Ok(NormBundle {
            l2: all[0],
            h1dot: sobolev_norm(omega, 1.0)?,
            hm1dot: sobolev_norm(omega, -1.0)?,
            lp,
            sup_p_ratio: sup,
            grad_u_sup: grad_u_sup(omega, gamma)?,
            energy_gamma: generalized_energy(omega, gamma)?,
        })
    }

    pub fn lp(&self, p: u32) -> Option<f64> {
        self.lp.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    /// `||omega||_2 + ||omega||_{H^1-dot}`.
    pub fn h1(&self) -> f64 {
        self.l2 + self.h1dot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::spectral::dft_forward;

    fn sine(n: usize) -> RealField {
        RealField::from_fn(Grid::new(n).unwrap(), |x1, _| x1.sin())
    }

    #[test]
    fn lp_examples() {
        let f = sine(64);
        assert!((lp_norm(&f, 2.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        let want4 = (3.0 * PI * PI / 2.0).powf(0.25);
        assert!((lp_norm(&f, 4.0).unwrap() - want4).abs() < 1e-12);
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        let one = RealField::from_fn(Grid::new(16).unwrap(), |_, _| 1.0);
        for p in [2.0, 3.0, 7.5, 64.0] {
            let want = FOUR_PI_SQ.powf(1.0 / p);
            assert!((lp_norm(&one, p).unwrap() - want).abs() < 1e-12 * want);
        }
        assert!(lp_norm(&f, 1.5).is_err());
    }

    #[test]
    fn integer_norms_agree_with_single_norms() {
        let f = RealField::from_fn(Grid::new(32).unwrap(), |x1, x2| (x1 + 2.0 * x2).sin() + 0.3 * (3.0 * x1).cos());
        let all = lp_norms_integer(&f, 20).unwrap();
        for (i, v) in all.iter().enumerate() {
            let p = (i + 2) as f64;
            let single = lp_norm(&f, p).unwrap();
            assert!((v - single).abs() < 1e-12 * single);
        }
    }

    #[test]
    fn sobolev_examples() {
        let s = dft_forward(&sine(32));
        assert!((sobolev_norm(&s, 1.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((sobolev_norm(&s, -1.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        let one = dft_forward(&RealField::from_fn(Grid::new(8).unwrap(), |_, _| 1.0));
        assert!(matches!(sobolev_norm(&one, -1.0), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn sup_p_ratio_examples() {
        let f = sine(64);
        assert!((sup_p_ratio(&f, 16).unwrap() - PI).abs() < 1e-12);
        assert_eq!(sup_p_ratio(&RealField::zeros(Grid::new(8).unwrap()), 16).unwrap(), 0.0);
        let scaled = RealField::new(f.grid(), f.values().iter().map(|v| -3.0 * v).collect()).unwrap();
        assert!((sup_p_ratio(&scaled, 16).unwrap() - 3.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn grad_u_sup_examples() {
        let s = dft_forward(&sine(64));
        let c = tgamma_unchecked(1.0, 1.5);
        assert!((grad_u_sup(&s, 1.5).unwrap() - c).abs() < 1e-13);
        assert!((grad_u_sup(&s, 0.0).unwrap() - 1.0).abs() < 1e-13);
        assert_eq!(grad_u_sup(&SpectralField::zeros(s.grid()), 1.5).unwrap(), 0.0);
    }

    #[test]
    fn energy_examples() {
        let s = dft_forward(&sine(32));
        let want = tgamma_unchecked(1.0, 1.5) * 2.0 * PI * PI;
        assert!((generalized_energy(&s, 1.5).unwrap() - want).abs() < 1e-12);
        assert_eq!(generalized_energy(&SpectralField::zeros(s.grid()), 1.5).unwrap(), 0.0);

        // gamma = 0 gives ||u||_2^2
        let w = dft_forward(&RealField::from_fn(s.grid(), |x1, x2| (x1 + x2).sin() + (2.0 * x2).cos()));
        let (u1, u2) = crate::multiplier::biot_savart(&w, 0.0).unwrap();
        let ke = lp_norm(&u1, 2.0).unwrap().powi(2) + lp_norm(&u2, 2.0).unwrap().powi(2);
        assert!((generalized_energy(&w, 0.0).unwrap() - ke).abs() < 1e-12 * ke);
    }

    #[test]
    fn zero_field_bundle_is_all_zero() {
        let z = SpectralField::zeros(Grid::new(16).unwrap());
        let b = NormBundle::compute(&z, 1.5, 64, &DEFAULT_P_GRID).unwrap();
        assert_eq!(b.l2, 0.0);
        assert_eq!(b.h1dot, 0.0);
        assert_eq!(b.hm1dot, 0.0);
        assert!(b.lp.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(b.sup_p_ratio, 0.0);
        assert_eq!(b.grad_u_sup, 0.0);
        assert_eq!(b.energy_gamma, 0.0);
    }
}
