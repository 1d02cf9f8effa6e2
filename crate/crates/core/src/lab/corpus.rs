//! Deterministic families of zero-mean test fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{Grid, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    /// Gaussian coefficients on `1 <= |k| <= band`.
    RandomBand,
    /// `cos(k.x + phase)` on the lowest lattice shells.
    SingleMode,
    /// All lattice points of one circle `|k|^2 = R`, random phases.
    Shell,
    /// One mode per dyadic shell `|k| ~ 2^j <= band` (lacunary spectrum).
    Multiscale,
}

impl CorpusKind {
    pub fn name(&self) -> &'static str {
        match self {
            CorpusKind::RandomBand => "random_band",
            CorpusKind::SingleMode => "single_mode",
            CorpusKind::Shell => "shell",
            CorpusKind::Multiscale => "multiscale",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub seed: u64,
    pub size: usize,
    /// Largest frequency modulus used by the generator.
    pub band: usize,
}

/// A corpus member. Every member has zero mean and unit `L^2` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusField {
    pub id: String,
    pub field: SpectralField,
}

/// 64 random band-limited fields, 8 single modes, 4 shells and 4 lacunary fields.
pub fn default_corpus(seed: u64, band: usize) -> Vec<CorpusSpec> {
    [
        (CorpusKind::RandomBand, 64),
        (CorpusKind::SingleMode, 8),
        (CorpusKind::Shell, 4),
        (CorpusKind::Multiscale, 4),
    ]
    .into_iter()
    .enumerate()
    .map(|(i, (kind, size))| CorpusSpec {
        kind,
        // distinct streams per family
        seed: seed.wrapping_mul(4).wrapping_add(i as u64),
        size,
        band,
    })
    .collect()
}

pub fn generate_all(specs: &[CorpusSpec], grid: Grid) -> Result<Vec<CorpusField>> {
    let mut out = Vec::new();
    for spec in specs {
        out.extend(generate(spec, grid)?);
    }
    Ok(out)
}

pub fn generate(spec: &CorpusSpec, grid: Grid) -> Result<Vec<CorpusField>> {
    if spec.band < 1 || spec.band >= grid.n() / 2 {
        return Err(Error::param(
            "band",
            format!("must lie in 1..{} for n = {}, got {}", grid.n() / 2, grid.n(), spec.band),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.size);
    match spec.kind {
        CorpusKind::RandomBand => {
            for i in 0..spec.size {
                out.push((format!("random_band_{i}"), random_band(grid, spec.band, &mut rng)));
            }
        }
        CorpusKind::SingleMode => {
            for (i, (k1, k2)) in low_modes(spec.band).take(spec.size).enumerate() {
                let phase = rng.random::<f64>() * 2.0 * PI;
                let mut f = SpectralField::zeros(grid);
                set_pair(&mut f, k1, k2, Complex64::from_polar(0.5, phase));
                out.push((format!("single_mode_{i}_{k1}_{k2}"), f));
            }
        }
        CorpusKind::Shell => {
            let radii = SHELL_RADII_SQ
                .iter()
                .filter(|&&r2| r2 <= (spec.band * spec.band) as i64)
                .take(spec.size);
            for &r2 in radii {
                let mut f = SpectralField::zeros(grid);
                for (k1, k2) in canonical_modes(spec.band as i64) {
                    if k1 * k1 + k2 * k2 == r2 {
                        let phase = rng.random::<f64>() * 2.0 * PI;
                        set_pair(&mut f, k1, k2, Complex64::from_polar(1.0, phase));
                    }
                }
                out.push((format!("shell_r2_{r2}"), f));
            }
        }
        CorpusKind::Multiscale => {
            for i in 0..spec.size {
                let decay = 0.5 * i as f64;
                let mut f = SpectralField::zeros(grid);
                let mut j = 0;
                while (1usize << j) <= spec.band {
                    let radius = (1usize << j) as f64;
                    let theta = rng.random::<f64>() * 2.0 * PI;
                    let phase = rng.random::<f64>() * 2.0 * PI;
                    let mut k1 = (radius * theta.cos()).trunc() as i64;
                    let k2 = (radius * theta.sin()).trunc() as i64;
                    if k1 == 0 && k2 == 0 {
                        k1 = 1;
                    }
                    let amp = radius.powf(-decay);
                    let current = f.get(k1, k2);
                    set_pair(&mut f, k1, k2, current + Complex64::from_polar(amp, phase));
                    j += 1;
                }
                out.push((format!("multiscale_{i}_s{decay}"), f));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(id, f)| CorpusField {
            id,
            field: normalize_l2(f),
        })
        .collect())
}

/// Squared radii with many lattice representations, in increasing order.
const SHELL_RADII_SQ: [i64; 8] = [2, 5, 25, 65, 325, 425, 1105, 5525];

/// Representatives `k` of the pairs `{k, -k}` with `0 < max(|k1|,|k2|) <= band`.
fn canonical_modes(band: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=band).flat_map(move |k1| {
        (-band..=band).filter_map(move |k2| {
            if k1 > 0 || (k1 == 0 && k2 > 0) {
                Some((k1, k2))
            } else {
                None
            }
        })
    })
}

/// Lattice representatives sorted by modulus, then lexicographically.
fn low_modes(band: usize) -> impl Iterator<Item = (i64, i64)> {
    let b = band as i64;
    let mut modes: Vec<(i64, i64)> = canonical_modes(b)
        .filter(|(k1, k2)| k1 * k1 + k2 * k2 <= b * b)
        .collect();
    modes.sort_by_key(|&(k1, k2)| (k1 * k1 + k2 * k2, k1, k2));
    modes.into_iter()
}

/// Sets `c(k) = value`, `c(-k) = conj(value)`.
fn set_pair(f: &mut SpectralField, k1: i64, k2: i64, value: Complex64) {
    f.set(k1, k2, value);
    f.set(-k1, -k2, value.conj());
}

fn normalize_l2(f: SpectralField) -> SpectralField {
    let norm = (4.0 * PI * PI * f.energy_sum()).sqrt();
    if norm > 0.0 {
        f.scaled(1.0 / norm)
    } else {
        f
    }
}

/// Hermitian field with independent complex Gaussian coefficients on
/// `1 <= |k| <= band`, scaled to unit `L^2` norm.
pub fn random_band(grid: Grid, band: usize, rng: &mut impl Rng) -> SpectralField {
    let b = band as i64;
    let mut f = SpectralField::zeros(grid);
    for (k1, k2) in canonical_modes(b) {
        if k1 * k1 + k2 * k2 > b * b {
            continue;
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        set_pair(&mut f, k1, k2, Complex64::new(re, im));
    }
    normalize_l2(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dft_inverse;

    #[test]
    fn default_mix_has_eighty_members() {
        let g = Grid::new(64).unwrap();
        let all = generate_all(&default_corpus(1, 16), g).unwrap();
        assert_eq!(all.len(), 80);
        for c in &all {
            assert_eq!(c.field.mean(), Complex64::new(0.0, 0.0), "{}", c.id);
            assert!(c.field.hermitian_residue() == 0.0, "{}", c.id);
            let l2 = (4.0 * PI * PI * c.field.energy_sum()).sqrt();
            assert!((l2 - 1.0).abs() < 1e-12, "{}", c.id);
            dft_inverse(&c.field).unwrap();
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let g = Grid::new(32).unwrap();
        let spec = CorpusSpec {
            kind: CorpusKind::RandomBand,
            seed: 7,
            size: 3,
            band: 8,
        };
        assert_eq!(generate(&spec, g).unwrap(), generate(&spec, g).unwrap());
        let other = CorpusSpec { seed: 8, ..spec };
        assert_ne!(generate(&spec, g).unwrap(), generate(&other, g).unwrap());
    }

    #[test]
    fn band_limits_are_respected() {
        let g = Grid::new(32).unwrap();
        for kind in [
            CorpusKind::RandomBand,
            CorpusKind::SingleMode,
            CorpusKind::Shell,
            CorpusKind::Multiscale,
        ] {
            let spec = CorpusSpec { kind, seed: 3, size: 4, band: 8 };
            for c in generate(&spec, g).unwrap() {
                for (idx, v) in c.field.coeffs().iter().enumerate() {
                    if v.norm() > 0.0 {
                        let (k1, k2) = g.mode_at(idx);
                        assert!(k1 * k1 + k2 * k2 <= 64, "{} has mode {k1},{k2}", c.id);
                    }
                }
            }
        }
        let bad = CorpusSpec { kind: CorpusKind::RandomBand, seed: 0, size: 1, band: 16 };
        assert!(generate(&bad, g).is_err());
    }

    #[test]
    fn single_modes_start_at_lowest_shell() {
        let modes: Vec<_> = low_modes(4).take(4).collect();
        assert_eq!(modes, vec![(0, 1), (1, 0), (1, -1), (1, 1)]);
    }
}
