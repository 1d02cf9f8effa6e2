use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField, SpectralField};
use crate::lab::corpus::random_band;
use crate::spectral::{dealias, dft_forward, project_zero_mean};
use crate::solver::rhs::symmetrize;

/// Width of each Gaussian blob of the vortex pair.
pub const VORTEX_SIGMA: f64 = 0.4;
/// Half the separation of the two blobs along `x1`.
pub const VORTEX_OFFSET: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// `sin(k . x)`.
    SingleMode { k1: i64, k2: i64 },
    /// `sin x1 sin x2`, the four modes of the shell `|k| = sqrt 2`.
    Shell,
    /// Gaussian coefficients on `1 <= |k| <= band`, unit `L^2` norm.
    /// `band = None` picks `min(8, n/4)`.
    RandomBand { seed: u64, band: Option<usize> },
    /// Opposite-sign periodized Gaussians at `(pi -+ 0.8, pi)`.
    VortexPair,
}

impl InitialCondition {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialCondition::SingleMode { .. } => "single_mode",
            InitialCondition::Shell => "shell",
            InitialCondition::RandomBand { .. } => "random_band",
            InitialCondition::VortexPair => "vortex_pair",
        }
    }

    /// Parses a kind name, taking the seed and band for `random_band`.
    pub fn from_kind(kind: &str, seed: u64, band: Option<usize>) -> Result<Self> {
        Ok(match kind {
            "single_mode" => InitialCondition::SingleMode { k1: 1, k2: 0 },
            "shell" => InitialCondition::Shell,
            "random_band" => InitialCondition::RandomBand { seed, band },
            "vortex_pair" => InitialCondition::VortexPair,
            other => {
                return Err(Error::param(
                    "ic",
                    format!("unknown kind `{other}` (single_mode, shell, random_band, vortex_pair)"),
                ))
            }
        })
    }
}

pub fn default_band(grid: Grid) -> usize {
    8.min(grid.n() / 4)
}

pub fn make_ic(spec: &InitialCondition, grid: Grid) -> Result<SpectralField> {
    let half = grid.n() as i64 / 2;
    let mut f = SpectralField::zeros(grid);
    match *spec {
        InitialCondition::SingleMode { k1, k2 } => {
            if (k1, k2) == (0, 0) || k1.abs() >= half || k2.abs() >= half {
                return Err(Error::param(
                    "ic",
                    format!("single mode ({k1}, {k2}) must be nonzero with |k_i| < n/2"),
                ));
            }
            f.set(k1, k2, Complex64::new(0.0, -0.5));
            f.set(-k1, -k2, Complex64::new(0.0, 0.5));
        }
        InitialCondition::Shell => {
            for (k1, k2, v) in [(1, 1, -0.25), (-1, -1, -0.25), (1, -1, 0.25), (-1, 1, 0.25)] {
                f.set(k1, k2, Complex64::new(v, 0.0));
            }
        }
        InitialCondition::RandomBand { seed, band } => {
            let band = band.unwrap_or_else(|| default_band(grid));
            if band < 1 || band as i64 >= half {
                return Err(Error::param(
                    "band",
                    format!("must lie in 1..{} for n = {}, got {band}", half, grid.n()),
                ));
            }
            f = random_band(grid, band, &mut ChaCha8Rng::seed_from_u64(seed));
        }
        InitialCondition::VortexPair => {
            let blob = |x1: f64, x2: f64, c1: f64, c2: f64| {
                let mut s = 0.0;
                for i in -1..=1 {
                    for j in -1..=1 {
                        let d1 = x1 - c1 + 2.0 * PI * i as f64;
                        let d2 = x2 - c2 + 2.0 * PI * j as f64;
                        s += (-(d1 * d1 + d2 * d2) / (2.0 * VORTEX_SIGMA * VORTEX_SIGMA)).exp();
                    }
                }
                s
            };
            let phys = RealField::from_fn(grid, |x1, x2| {
                blob(x1, x2, PI - VORTEX_OFFSET, PI) - blob(x1, x2, PI + VORTEX_OFFSET, PI)
            });
            let mut c = dealias(&project_zero_mean(&dft_forward(&phys))).into_coeffs();
            symmetrize(grid, &mut c);
            f = SpectralField::from_coeffs(grid, c)?;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dft_inverse;

    #[test]
    fn closed_form_initial_conditions() {
        let g = Grid::new(16).unwrap();
        let s = dft_inverse(&make_ic(&InitialCondition::SingleMode { k1: 1, k2: 0 }, g).unwrap()).unwrap();
        let want = RealField::from_fn(g, |x1, _| x1.sin());
        let sh = dft_inverse(&make_ic(&InitialCondition::Shell, g).unwrap()).unwrap();
        let want_sh = RealField::from_fn(g, |x1, x2| x1.sin() * x2.sin());
        for i in 0..g.len() {
            assert!((s.values()[i] - want.values()[i]).abs() < 1e-14);
            assert!((sh.values()[i] - want_sh.values()[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn random_band_is_deterministic_and_normalized() {
        let g = Grid::new(32).unwrap();
        let spec = InitialCondition::RandomBand { seed: 7, band: None };
        let a = make_ic(&spec, g).unwrap();
        assert_eq!(a, make_ic(&spec, g).unwrap());
        assert!((4.0 * PI * PI * a.energy_sum() - 1.0).abs() < 1e-12);
        assert_eq!(a.mean(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vortex_pair_is_real_and_mean_free() {
        let g = Grid::new(64).unwrap();
        let v = make_ic(&InitialCondition::VortexPair, g).unwrap();
        assert_eq!(v.mean(), Complex64::new(0.0, 0.0));
        assert_eq!(v.hermitian_residue(), 0.0);
        let phys = dft_inverse(&v).unwrap();
        // antisymmetric about x1 = pi
        let n = g.n();
        let (a, b) = (phys.values()[(n / 2 - 8) * n + n / 2], phys.values()[(n / 2 + 8) * n + n / 2]);
        assert!(a > 0.5 && (a + b).abs() < 1e-10);
    }

    #[test]
    fn unknown_kind_names_the_key() {
        let err = InitialCondition::from_kind("tornado", 0, None).unwrap_err();
        assert!(matches!(err, Error::Parameter { name: "ic", .. }));
    }
}
