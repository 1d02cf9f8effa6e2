//! Discrete Fourier transforms and the exact spectral operators.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField, SpectralField};

/// Relative tolerance on the Hermitian-symmetry residue accepted by [`dft_inverse`].
pub const REAL_FIELD_TOL: f64 = 1e-12;

/// Absolute tolerance on the zero-frequency coefficient for zero-mean operators.
pub const ZERO_MEAN_TOL: f64 = 1e-13;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

type PlanCache = (FftPlanner<f64>, HashMap<usize, Arc<Plans>>);

thread_local! {
    static PLANS: RefCell<PlanCache> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> Arc<Plans> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry(n)
            .or_insert_with(|| {
                Arc::new(Plans {
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

fn transpose(buf: &mut [Complex64], n: usize) {
    const B: usize = 16;
    for bi in (0..n).step_by(B) {
        for bj in (bi..n).step_by(B) {
            for i in bi..(bi + B).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + B).min(n) {
                    buf.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

/// Unnormalized 2D transform in place: rows, then columns.
pub(crate) fn fft2(buf: &mut [Complex64], n: usize, inverse: bool) {
    let p = plans(n);
    let fft = if inverse { &p.inverse } else { &p.forward };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
    transpose(buf, n);
    fft.process_with_scratch(buf, &mut scratch);
    transpose(buf, n);
}

/// Forward transform with `1/n^2` normalization: a single mode
/// `A exp(i k.x)` maps to coefficient `A` at `k`.
pub fn dft_forward(f: &RealField) -> SpectralField {
    let grid = f.grid();
    let n = grid.n();
    let mut buf: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut buf, n, false);
    let scale = 1.0 / grid.len() as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SpectralField::from_coeffs(grid, buf).expect("length preserved")
}

/// Inverse transform `f(x) = sum_k c(k) exp(i k.x)`.
///
/// Fails if the coefficients are not Hermitian-symmetric to within
/// `1e-12 * max|c|`; otherwise the imaginary roundoff is discarded.
pub fn dft_inverse(s: &SpectralField) -> Result<RealField> {
    let tolerance = REAL_FIELD_TOL * s.max_abs();
    let residue = s.hermitian_residue();
    if residue > tolerance {
        return Err(Error::NonRealField { residue, tolerance });
    }
    Ok(inverse_real_part(s))
}

/// Inverse transform keeping only the real part, without the symmetry check.
pub(crate) fn inverse_real_part(s: &SpectralField) -> RealField {
    let grid = s.grid();
    let mut buf = s.coeffs().to_vec();
    fft2(&mut buf, grid.n(), true);
    RealField::from_raw(grid, buf.into_iter().map(|c| c.re).collect())
}

/// Derivative multiplier `i k` along one axis. The unpaired Nyquist
/// frequency `-n/2` is given zero derivative so real fields stay real.
#[inline]
pub(crate) fn derivative_symbol(grid: Grid, k: i64) -> Complex64 {
    if k == -(grid.n() as i64) / 2 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, k as f64)
    }
}

/// `(d/dx1, d/dx2)` in spectral form.
pub fn gradient(s: &SpectralField) -> (SpectralField, SpectralField) {
    let g = s.grid();
    (
        s.map_modes(|k1, _| derivative_symbol(g, k1)),
        s.map_modes(|_, k2| derivative_symbol(g, k2)),
    )
}

/// `(-d/dx2, d/dx1)`, the perpendicular gradient of a stream function.
pub fn perp_gradient(s: &SpectralField) -> (SpectralField, SpectralField) {
    let g = s.grid();
    (
        s.map_modes(|_, k2| -derivative_symbol(g, k2)),
        s.map_modes(|k1, _| derivative_symbol(g, k1)),
    )
}

pub(crate) fn check_zero_mean(s: &SpectralField) -> Result<()> {
    let mean = s.mean().norm();
    if mean > ZERO_MEAN_TOL {
        return Err(Error::NonZeroMean { mean });
    }
    Ok(())
}

/// Inverse Laplacian: `-c(k)/|k|^2` for `k != 0`, zero at the origin.
pub fn inv_laplacian(s: &SpectralField) -> Result<SpectralField> {
    check_zero_mean(s)?;
    Ok(s.map_modes(|k1, k2| {
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-1.0 / k2sum as f64, 0.0)
        }
    }))
}

/// 2/3-rule truncation: zero every mode with `max(|k1|,|k2|) > floor(n/3)`.
pub fn dealias(s: &SpectralField) -> SpectralField {
    let cutoff = s.grid().dealias_cutoff();
    s.map_modes(|k1, k2| {
        if k1.abs().max(k2.abs()) > cutoff {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

/// Sets the zero-frequency coefficient to exactly zero.
pub fn project_zero_mean(s: &SpectralField) -> SpectralField {
    let mut out = s.clone();
    out.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    fn assert_only(s: &SpectralField, nonzero: &[((i64, i64), Complex64)], tol: f64) {
        let g = s.grid();
        for (idx, v) in s.coeffs().iter().enumerate() {
            let k = g.mode_at(idx);
            let want = nonzero
                .iter()
                .find(|(m, _)| *m == k)
                .map(|(_, v)| *v)
                .unwrap_or(c(0.0, 0.0));
            assert!((v - want).norm() <= tol, "mode {k:?}: got {v}, want {want}");
        }
    }

    #[test]
    fn constant_maps_to_origin() {
        let f = RealField::from_fn(grid(16), |_, _| 1.0);
        assert_only(&dft_forward(&f), &[((0, 0), c(1.0, 0.0))], 1e-15);
    }

    #[test]
    fn cosine_splits_into_two_halves() {
        let f = RealField::from_fn(grid(16), |x1, _| x1.cos());
        assert_only(
            &dft_forward(&f),
            &[((1, 0), c(0.5, 0.0)), ((-1, 0), c(0.5, 0.0))],
            1e-15,
        );
    }

    #[test]
    fn inverse_of_half_modes_is_cosine() {
        let g = grid(16);
        let mut s = SpectralField::zeros(g);
        s.set(1, 0, c(0.5, 0.0));
        s.set(-1, 0, c(0.5, 0.0));
        let f = dft_inverse(&s).unwrap();
        let want = RealField::from_fn(g, |x1, _| x1.cos());
        for (a, b) in f.values().iter().zip(want.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_zero_is_zero() {
        let f = dft_inverse(&SpectralField::zeros(grid(8))).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn inverse_rejects_broken_symmetry() {
        let mut s = SpectralField::zeros(grid(8));
        s.set(1, 0, c(1.0, 0.0));
        assert!(matches!(dft_inverse(&s), Err(Error::NonRealField { .. })));
    }

    #[test]
    fn gradient_of_sine() {
        let g = grid(16);
        let s = dft_forward(&RealField::from_fn(g, |x1, _| x1.sin()));
        let (d1, d2) = gradient(&s);
        let d1 = dft_inverse(&d1).unwrap();
        let d2 = dft_inverse(&d2).unwrap();
        let want = RealField::from_fn(g, |x1, _| x1.cos());
        for i in 0..g.len() {
            assert!((d1.values()[i] - want.values()[i]).abs() < 1e-13);
            assert!(d2.values()[i].abs() < 1e-13);
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let s = dft_forward(&RealField::from_fn(grid(8), |_, _| 3.0));
        let (d1, d2) = gradient(&s);
        assert_eq!(d1.max_abs(), 0.0);
        assert_eq!(d2.max_abs(), 0.0);
    }

    #[test]
    fn gradient_of_complex_mode() {
        let g = grid(16);
        let mut s = SpectralField::zeros(g);
        s.set(0, 2, c(1.0, 0.0));
        let (d1, d2) = gradient(&s);
        assert_only(&d1, &[], 0.0);
        assert_only(&d2, &[((0, 2), c(0.0, 2.0))], 0.0);
    }

    #[test]
    fn perp_gradient_of_sines() {
        let g = grid(16);
        let (u1, u2) = perp_gradient(&dft_forward(&RealField::from_fn(g, |x1, _| x1.sin())));
        let u1 = dft_inverse(&u1).unwrap();
        let u2 = dft_inverse(&u2).unwrap();
        for j1 in 0..16 {
            for j2 in 0..16 {
                let i = j1 * 16 + j2;
                assert!(u1.values()[i].abs() < 1e-13);
                assert!((u2.values()[i] - g.coordinate(j1).cos()).abs() < 1e-13);
            }
        }
        let (v1, v2) = perp_gradient(&dft_forward(&RealField::from_fn(g, |_, x2| x2.sin())));
        let v1 = dft_inverse(&v1).unwrap();
        let v2 = dft_inverse(&v2).unwrap();
        for j1 in 0..16 {
            for j2 in 0..16 {
                let i = j1 * 16 + j2;
                assert!((v1.values()[i] + g.coordinate(j2).cos()).abs() < 1e-13);
                assert!(v2.values()[i].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn inv_laplacian_examples() {
        let g = grid(16);
        let s = dft_forward(&RealField::from_fn(g, |x1, _| x1.sin()));
        let out = inv_laplacian(&s).unwrap();
        assert_only(
            &out,
            &[((1, 0), c(0.0, 0.5)), ((-1, 0), c(0.0, -0.5))],
            1e-15,
        );

        let mut e = SpectralField::zeros(g);
        e.set(1, 1, c(1.0, 0.0));
        assert_only(&inv_laplacian(&e).unwrap(), &[((1, 1), c(-0.5, 0.0))], 0.0);

        let one = dft_forward(&RealField::from_fn(g, |_, _| 1.0));
        assert!(matches!(inv_laplacian(&one), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn dealias_rule() {
        let g = grid(16);
        assert_eq!(g.dealias_cutoff(), 5);
        let mut s = SpectralField::zeros(g);
        s.set(6, 0, c(1.0, 0.0));
        s.set(5, 5, c(2.0, 0.0));
        s.set(-5, -6, c(3.0, 0.0));
        let d = dealias(&s);
        assert_only(&d, &[((5, 5), c(2.0, 0.0))], 0.0);
        assert_eq!(dealias(&d), d);
    }

    #[test]
    fn zero_mean_projection() {
        let g = grid(16);
        let one = dft_forward(&RealField::from_fn(g, |_, _| 1.0));
        assert_eq!(project_zero_mean(&one).max_abs(), 0.0);

        let sine = dft_forward(&RealField::from_fn(g, |x1, _| x1.sin()));
        assert_eq!(project_zero_mean(&sine), {
            let mut s = sine.clone();
            s.coeffs_mut()[0] = c(0.0, 0.0);
            s
        });

        let shifted = dft_forward(&RealField::from_fn(g, |x1, _| 1.0 + x1.sin()));
        let p = project_zero_mean(&shifted);
        assert_eq!(p.mean(), c(0.0, 0.0));
        assert!((p.get(1, 0) - c(0.0, -0.5)).norm() < 1e-15);
        assert!(p.get(1, 0).norm() > 0.0);
    }
}
