//! Torus discretization and the two field representations.
//!
//! Both representations store an `n x n` array in row-major order. For a
//! physical field, entry `j1 * n + j2` is the sample at `x = (j1 dx, j2 dx)`.
//! For a spectral field, entry `i1 * n + i2` is the coefficient of the
//! wavevector `(k(i1), k(i2))` where `k(i) = i` for `i < n/2` and `i - n`
//! otherwise, so every component lies in `-n/2 ..= n/2 - 1`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform `n x n` grid on `[0, 2pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// `n` must be a power of two and at least 8.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::param(
                "n",
                format!("grid size must be a power of two >= 8, got {n}"),
            ));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of samples, `n^2`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2pi / n`. Exact, since `n` is a power of two.
    pub fn dx(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Area element of the rectangle rule, `dx^2`.
    pub fn cell_area(&self) -> f64 {
        let dx = self.dx();
        dx * dx
    }

    /// Signed integer frequency stored at array position `i`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Array position of the signed frequency `k` (taken modulo `n`).
    #[inline]
    pub fn position(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Flat index of the wavevector `(k1, k2)`.
    #[inline]
    pub fn index_of(&self, k1: i64, k2: i64) -> usize {
        self.position(k1) * self.n + self.position(k2)
    }

    /// Wavevector stored at flat index `idx`.
    #[inline]
    pub fn mode_at(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx / self.n), self.wavenumber(idx % self.n))
    }

    /// Flat index of `-k` for the wavevector stored at `idx`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (i1, i2) = (idx / self.n, idx % self.n);
        ((self.n - i1) % self.n) * self.n + (self.n - i2) % self.n
    }

    /// Physical coordinate of grid index `j`.
    #[inline]
    pub fn coordinate(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Highest retained component under the 2/3 rule, `floor(n/3)`.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }
}

/// Real samples of a periodic scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(
                "values",
                format!("non-finite sample at index {pos}"),
            ));
        }
        Ok(RealField { grid, values })
    }

    /// Samples `f(x1, x2)` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for j1 in 0..n {
            let x1 = grid.coordinate(j1);
            for j2 in 0..n {
                values.push(f(x1, grid.coordinate(j2)));
            }
        }
        RealField { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        RealField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        RealField { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Fourier coefficients on the integer lattice, normalized so that the
/// mode `A exp(i k.x)` has coefficient `A` at `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::param(
                "coeffs",
                format!("expected {} coefficients, got {}", grid.len(), coeffs.len()),
            ));
        }
        Ok(SpectralField { grid, coeffs })
    }

    /// Builds a field mode by mode from `f(k1, k2)`.
    pub fn from_modes(grid: Grid, f: impl Fn(i64, i64) -> Complex64) -> Self {
        let coeffs = (0..grid.len())
            .map(|idx| {
                let (k1, k2) = grid.mode_at(idx);
                f(k1, k2)
            })
            .collect();
        SpectralField { grid, coeffs }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.index_of(k1, k2)]
    }

    pub fn set(&mut self, k1: i64, k2: i64, value: Complex64) {
        let idx = self.grid.index_of(k1, k2);
        self.coeffs[idx] = value;
    }

    /// The zero-frequency coefficient, i.e. the spatial mean.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Multiplies every coefficient by `m(k1, k2)`.
    pub fn map_modes(&self, m: impl Fn(i64, i64) -> Complex64) -> Self {
        let grid = self.grid;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let (k1, k2) = grid.mode_at(idx);
                c * m(k1, k2)
            })
            .collect();
        SpectralField { grid, coeffs }
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: f64, other: &SpectralField) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y * a)
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()))
    }

    /// `max_k |c(-k) - conj(c(k))|`; zero for the transform of a real field.
    pub fn hermitian_residue(&self) -> f64 {
        (0..self.coeffs.len()).fold(0.0_f64, |m, idx| {
            let mirror = self.coeffs[self.grid.conjugate_index(idx)];
            m.max((mirror - self.coeffs[idx].conj()).norm())
        })
    }

    /// `sum_k |c(k)|^2`.
    pub fn energy_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Squared lattice modulus `|k|^2` at flat index `idx`.
    #[inline]
    pub(crate) fn modulus_sq_at(&self, idx: usize) -> f64 {
        let (k1, k2) = self.grid.mode_at(idx);
        (k1 * k1 + k2 * k2) as f64
    }
}
