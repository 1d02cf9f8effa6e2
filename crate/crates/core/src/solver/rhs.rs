use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::multiplier::{check_dyadic, check_gamma, phi_eval, tgamma_unchecked};
use crate::spectral::{check_zero_mean, derivative_symbol, fft2};

/// Spatial truncation of the advection term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mollify {
    /// Largest dyadic `N` with `2N <= n/3`, so the smooth cutoff sits
    /// inside the dealiasing band.
    Auto,
    /// Smooth `P_{<=N}` with the Littlewood-Paley cutoff `phi(|k|/N)`.
    Dyadic(f64),
    /// Sharp 2/3-rule truncation in place of `P_{<=N}`.
    DealiasOnly,
}

impl Mollify {
    /// The effective cutoff on `grid`: `Some(N)` for a smooth cutoff, `None` for sharp truncation.
    pub fn resolve(&self, grid: Grid) -> Result<Option<f64>> {
        match *self {
            Mollify::Auto => {
                let mut n = 1usize;
                while 4 * n <= grid.n() / 3 {
                    n *= 2;
                }
                Ok(Some(n as f64))
            }
            Mollify::Dyadic(n) => {
                check_dyadic("mollify", n)?;
                if n < 1.0 || n > (grid.n() / 3) as f64 {
                    return Err(Error::param(
                        "mollify",
                        format!("N must lie in 1..=n/3 = {}, got {n}", grid.n() / 3),
                    ));
                }
                Ok(Some(n))
            }
            Mollify::DealiasOnly => Ok(None),
        }
    }
}

/// One right-hand-side evaluation.
#[derive(Debug, Clone)]
pub struct Stage {
    pub rhs: SpectralField,
    /// Grid maximum of `|u|`.
    pub u_max: f64,
    /// `4 pi^2 sum |N(k)|^2` over the part of the nonlinear term `N = u.grad P omega`
    /// removed by the outer truncation and dealiasing.
    pub discarded: f64,
}

/// Precomputed symbols for `-P dealias(u . grad P omega)`.
#[derive(Debug, Clone)]
pub struct Rhs {
    grid: Grid,
    gamma: f64,
    /// `u1 + i u2` per unit coefficient: `(-i k2 + i (i k1)) psi / omega`.
    velocity: Vec<Complex64>,
    /// `d1 + i d2` of `P omega` per unit coefficient.
    gradient: Vec<Complex64>,
    /// Outer truncation times the dealiasing mask.
    outer: Vec<f64>,
}

impl Rhs {
    pub fn new(grid: Grid, gamma: f64, mollify: Mollify) -> Result<Self> {
        check_gamma(gamma)?;
        let cutoff = mollify.resolve(grid)?;
        let kc = grid.dealias_cutoff();
        let len = grid.len();
        let mut velocity = vec![Complex64::new(0.0, 0.0); len];
        let mut gradient = vec![Complex64::new(0.0, 0.0); len];
        let mut outer = vec![0.0; len];
        for idx in 0..len {
            let (k1, k2) = grid.mode_at(idx);
            let r2 = (k1 * k1 + k2 * k2) as f64;
            // psi = stream * omega
            let stream = if r2 > 0.0 { -tgamma_unchecked(r2.sqrt(), gamma) / r2 } else { 0.0 };
            let d1 = derivative_symbol(grid, k1).im;
            let d2 = derivative_symbol(grid, k2).im;
            let mask = if k1.abs().max(k2.abs()) > kc { 0.0 } else { 1.0 };
            let p = match cutoff {
                Some(n) => phi_eval(r2.sqrt() / n),
                None => mask,
            };
            // u1 = -i d2 psi, u2 = i d1 psi; g1 = i d1 P omega, g2 = i d2 P omega
            velocity[idx] = Complex64::new(-d1 * stream, -d2 * stream);
            gradient[idx] = Complex64::new(-d2 * p, d1 * p);
            outer[idx] = p * mask;
        }
        Ok(Rhs { grid, gamma, velocity, gradient, outer })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eval(&self, omega: &SpectralField) -> Result<SpectralField> {
        Ok(self.stage(omega)?.rhs)
    }

    /// Evaluates the right-hand side together with `max |u|` and the discarded energy.
    pub fn stage(&self, omega: &SpectralField) -> Result<Stage> {
        if omega.grid() != self.grid {
            return Err(Error::param("omega", "field lives on a different grid"));
        }
        check_zero_mean(omega)?;
        let mut ws = Workspace::new(self.grid);
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        let (u_max, discarded) = self.stage_into(omega.coeffs(), &mut ws, &mut out);
        Ok(Stage {
            rhs: SpectralField::from_coeffs(self.grid, out).expect("length preserved"),
            u_max,
            discarded,
        })
    }

    /// Writes the right-hand side for the zero-mean coefficients `c` into `out`
    /// and returns `(max |u|, discarded energy)`.
    pub(crate) fn stage_into(&self, c: &[Complex64], ws: &mut Workspace, out: &mut [Complex64]) -> (f64, f64) {
        let n = self.grid.n();
        // Two real fields per complex transform: IFFT(A + iB) = a + ib.
        for (((v, g), w), (fv, fg)) in ws
            .vel
            .iter_mut()
            .zip(ws.grad.iter_mut())
            .zip(c)
            .zip(self.velocity.iter().zip(&self.gradient))
        {
            *v = w * fv;
            *g = w * fg;
        }
        fft2(&mut ws.vel, n, true);
        fft2(&mut ws.grad, n, true);

        let mut u_max = 0.0f64;
        for ((o, u), g) in out.iter_mut().zip(&ws.vel).zip(&ws.grad) {
            u_max = u_max.max(u.norm_sqr());
            *o = Complex64::new(u.re * g.re + u.im * g.im, 0.0);
        }
        fft2(out, n, false);

        let scale = 1.0 / self.grid.len() as f64;
        let mut discarded = 0.0;
        for (v, keep) in out.iter_mut().zip(&self.outer) {
            *v *= scale;
            discarded += (1.0 - keep) * (1.0 - keep) * v.norm_sqr();
            *v *= -keep;
        }
        out[0] = Complex64::new(0.0, 0.0);
        symmetrize(self.grid, out);
        (u_max.sqrt(), 4.0 * std::f64::consts::PI.powi(2) * discarded)
    }
}

/// Transform buffers reused across right-hand-side evaluations.
#[derive(Debug, Clone)]
pub struct Workspace {
    vel: Vec<Complex64>,
    grad: Vec<Complex64>,
}

impl Workspace {
    pub fn new(grid: Grid) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        Workspace { vel: zero.clone(), grad: zero }
    }
}

/// Replaces `c(k)` by the Hermitian part `(c(k) + conj c(-k)) / 2`.
pub(crate) fn symmetrize(grid: Grid, c: &mut [Complex64]) {
    let n = grid.n();
    for i1 in 0..n {
        let j1 = (n - i1) % n;
        for i2 in 0..n {
            let (idx, j) = (i1 * n + i2, j1 * n + (n - i2) % n);
            if j > idx {
                let a = 0.5 * (c[idx] + c[j].conj());
                c[idx] = a;
                c[j] = a.conj();
            } else if j == idx {
                c[idx].im = 0.0;
            }
        }
    }
}

/// `-P_{<=N}(u . grad P_{<=N} omega)` with `u` the modified Biot-Savart velocity of `omega`.
pub fn rhs(omega: &SpectralField, gamma: f64, mollify: Mollify) -> Result<SpectralField> {
    Rhs::new(omega.grid(), gamma, mollify)?.eval(omega)
}
