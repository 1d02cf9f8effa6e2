//! Time integration of the mollified log-regularized Euler system
//!
//! ```text
//! d_t omega + P(u . grad P omega) = 0,   u = perp-grad Delta^{-1} T_gamma omega,
//! ```
//!
//! by classical RK4 with an adaptive CFL step.

pub mod envelope;
pub mod ic;
pub mod rhs;

use crate::error::{Error, Result};
use crate::grid::{Grid, SpectralField};
use crate::io::snapshot::Snapshot;
use crate::multiplier::{biot_savart, check_gamma};
use crate::norms::{NormBundle, DEFAULT_P_GRID};
use crate::spectral::{check_zero_mean, inverse_real_part};
use num_complex::Complex64;

pub use envelope::{gronwall_envelope, gronwall_envelope_samples, EnvelopeReport, EnvelopeSample};
pub use ic::{make_ic, InitialCondition};
pub use rhs::{rhs, Mollify, Rhs, Stage, Workspace};

/// Floor on `max |u|` in the CFL formula.
pub const VELOCITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub gamma: f64,
    pub t_max: f64,
    pub cfl: f64,
    pub mollify: Mollify,
    pub ic: InitialCondition,
    /// Record diagnostics every this many steps (the final state is always recorded).
    pub diag_interval: u64,
    /// Emit a snapshot every this many steps; 0 disables snapshots.
    pub snapshot_interval: u64,
    pub p_max: u32,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 256,
            gamma: 1.5,
            t_max: 1.0,
            cfl: 0.5,
            mollify: Mollify::Auto,
            ic: InitialCondition::RandomBand { seed: 0, band: None },
            diag_interval: 1,
            snapshot_interval: 0,
            p_max: 64,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// Checks every range constraint and returns the grid.
    pub fn validate(&self) -> Result<Grid> {
        let grid = Grid::new(self.n)?;
        check_gamma(self.gamma)?;
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::param("t_max", format!("must be finite and > 0, got {}", self.t_max)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::param("cfl", format!("must lie in (0, 1], got {}", self.cfl)));
        }
        self.mollify.resolve(grid)?;
        if self.diag_interval == 0 {
            return Err(Error::param("diag_interval", "must be >= 1"));
        }
        if self.p_max < 2 {
            return Err(Error::param("p_max", format!("must be >= 2, got {}", self.p_max)));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub omega: SpectralField,
    pub step_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub step: u64,
    /// Step that produced this state; 0 for the initial record.
    pub dt_used: f64,
    pub norms: NormBundle,
    pub aliasing_energy_discarded: f64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: SolverState,
    /// Set when the run stopped early on non-finite values.
    pub blow_up: Option<Error>,
}

/// `cfl dx / max(max |u|, 1e-12)` with `u` the modified Biot-Savart velocity.
pub fn cfl_dt(omega: &SpectralField, gamma: f64, cfl: f64, grid: Grid) -> Result<f64> {
    let (u1, u2) = biot_savart(omega, gamma)?;
    let u_max = u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| a.hypot(*b))
        .fold(0.0, f64::max);
    Ok(cfl_from_speed(cfl, grid, u_max))
}

fn cfl_from_speed(cfl: f64, grid: Grid, u_max: f64) -> f64 {
    cfl * grid.dx() / u_max.max(VELOCITY_FLOOR)
}

/// One RK4 step of size `dt`.
pub fn step_rk4(state: &SolverState, dt: f64, rhs: &Rhs) -> Result<SolverState> {
    let mut next = state.clone();
    Stepper::new(rhs.clone()).step(&mut next, dt)?;
    Ok(next)
}

/// RK4 integrator that reuses its stage buffers across steps.
#[derive(Debug, Clone)]
pub struct Stepper {
    rhs: Rhs,
    ws: Workspace,
    k1: Vec<Complex64>,
    k: Vec<Complex64>,
    tmp: Vec<Complex64>,
    acc: Vec<Complex64>,
    k1_ready: bool,
}

impl Stepper {
    pub fn new(rhs: Rhs) -> Self {
        let grid = rhs.grid();
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        Stepper {
            ws: Workspace::new(grid),
            k1: zero.clone(),
            k: zero.clone(),
            tmp: zero.clone(),
            acc: zero,
            rhs,
            k1_ready: false,
        }
    }

    pub fn rhs(&self) -> &Rhs {
        &self.rhs
    }

    /// Evaluates the first stage at `omega`; returns `(max |u|, discarded energy)`.
    fn prepare(&mut self, omega: &SpectralField) -> Result<(f64, f64)> {
        if omega.grid() != self.rhs.grid() {
            return Err(Error::param("omega", "field lives on a different grid"));
        }
        check_zero_mean(omega)?;
        let out = self.rhs.stage_into(omega.coeffs(), &mut self.ws, &mut self.k1);
        self.k1_ready = true;
        Ok(out)
    }

    /// Advances `state` by one RK4 step of size `dt`.
    pub fn step(&mut self, state: &mut SolverState, dt: f64) -> Result<()> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", format!("must be finite and > 0, got {dt}")));
        }
        if !self.k1_ready {
            self.prepare(&state.omega)?;
        }
        self.k1_ready = false;
        let w = state.omega.coeffs();
        let h = dt / 6.0;
        for ((a, t), (x, k)) in self.acc.iter_mut().zip(self.tmp.iter_mut()).zip(w.iter().zip(&self.k1)) {
            *a = x + h * k;
            *t = x + 0.5 * dt * k;
        }
        for (weight, next) in [(2.0 * h, 0.5 * dt), (2.0 * h, dt), (h, 0.0)] {
            self.rhs.stage_into(&self.tmp, &mut self.ws, &mut self.k);
            for ((a, t), (x, k)) in self.acc.iter_mut().zip(self.tmp.iter_mut()).zip(w.iter().zip(&self.k)) {
                *a += weight * k;
                *t = x + next * k;
            }
        }
        self.acc[0] = Complex64::new(0.0, 0.0);
        state.omega.coeffs_mut().copy_from_slice(&self.acc);
        state.step_count += 1;
        state.t += dt;
        if !state.omega.is_finite() {
            return Err(Error::BlowUp { t: state.t, step: state.step_count });
        }
        Ok(())
    }
}

/// Integrates from `t = 0` to `t_max`, collecting diagnostics and snapshots in memory.
pub fn run(config: &SolverConfig) -> Result<RunOutput> {
    let mut snapshots = Vec::new();
    let mut out = run_with(config, |s| {
        snapshots.push(s);
        Ok(())
    })?;
    out.snapshots = snapshots;
    Ok(out)
}

/// Like [`run`], but hands each snapshot to `on_snapshot` as soon as it is taken.
pub fn run_with(
    config: &SolverConfig,
    mut on_snapshot: impl FnMut(Snapshot) -> Result<()>,
) -> Result<RunOutput> {
    let grid = config.validate()?;
    let mut stepper = Stepper::new(Rhs::new(grid, config.gamma, config.mollify)?);
    let mut state = SolverState {
        t: 0.0,
        omega: make_ic(&config.ic, grid)?,
        step_count: 0,
    };
    let mut records = Vec::new();
    let mut last_dt = 0.0;
    let mut blow_up = None;

    let record = |state: &SolverState, dt: f64, discarded: f64| -> Result<DiagnosticsRecord> {
        Ok(DiagnosticsRecord {
            t: state.t,
            step: state.step_count,
            dt_used: dt,
            norms: NormBundle::compute(&state.omega, config.gamma, config.p_max, &DEFAULT_P_GRID)?,
            aliasing_energy_discarded: discarded,
        })
    };
    let snapshot = |state: &SolverState| Snapshot {
        gamma: config.gamma,
        time: state.t,
        step_count: state.step_count,
        field: inverse_real_part(&state.omega),
    };
    let snap_due = |step: u64| config.snapshot_interval > 0 && step.is_multiple_of(config.snapshot_interval);

    loop {
        let (u_max, discarded) = stepper.prepare(&state.omega)?;
        let finished = state.t >= config.t_max;
        if state.step_count.is_multiple_of(config.diag_interval) || finished {
            records.push(record(&state, last_dt, discarded)?);
        }
        if snap_due(state.step_count) || (finished && config.snapshot_interval > 0) {
            on_snapshot(snapshot(&state))?;
        }
        if finished {
            break;
        }
        if !u_max.is_finite() {
            blow_up = Some(Error::BlowUp { t: state.t, step: state.step_count });
            break;
        }
        let mut dt = cfl_from_speed(config.cfl, grid, u_max);
        let remaining = config.t_max - state.t;
        let last = dt >= remaining * (1.0 - 1e-12);
        if last {
            dt = remaining;
        }
        match stepper.step(&mut state, dt) {
            Ok(()) => {
                if last {
                    state.t = config.t_max;
                }
                last_dt = dt;
            }
            Err(e @ Error::BlowUp { .. }) => {
                blow_up = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RunOutput {
        records,
        snapshots: Vec::new(),
        final_state: state,
        blow_up,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dft_forward;
    use crate::grid::RealField;
    use std::f64::consts::PI;

    #[test]
    fn stationary_fields_have_zero_rhs() {
        let g = Grid::new(32).unwrap();
        for ic in [InitialCondition::SingleMode { k1: 1, k2: 0 }, InitialCondition::Shell] {
            let w = make_ic(&ic, g).unwrap();
            for gamma in [0.0, 1.5] {
                for m in [Mollify::Auto, Mollify::DealiasOnly, Mollify::Dyadic(4.0)] {
                    let r = rhs(&w, gamma, m).unwrap();
                    assert!(r.max_abs() < 1e-12, "{ic:?} {gamma} {m:?}: {}", r.max_abs());
                }
            }
        }
    }

    #[test]
    fn rhs_has_zero_mean_and_rejects_constants() {
        let g = Grid::new(32).unwrap();
        let w = make_ic(&InitialCondition::RandomBand { seed: 1, band: None }, g).unwrap();
        let r = rhs(&w, 1.5, Mollify::Auto).unwrap();
        assert_eq!(r.mean().norm(), 0.0);
        assert!(r.max_abs() > 0.0);
        assert_eq!(r.hermitian_residue(), 0.0);
        let one = dft_forward(&RealField::from_fn(g, |_, _| 1.0));
        assert!(matches!(rhs(&one, 1.5, Mollify::Auto), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn cfl_examples() {
        let g = Grid::new(256).unwrap();
        let w = make_ic(&InitialCondition::SingleMode { k1: 1, k2: 0 }, g).unwrap();
        let dt = cfl_dt(&w, 0.0, 0.5, g).unwrap();
        assert!((dt - 0.012_271_846_303_085_13).abs() < 1e-15);
        assert!(cfl_dt(&w, 1.5, 0.5, g).unwrap() > dt);
        let z = SpectralField::zeros(g);
        assert!((cfl_dt(&z, 0.0, 0.5, g).unwrap() - 0.5 * g.dx() / 1e-12).abs() < 1.0);
    }

    #[test]
    fn auto_mollifier_fits_inside_dealias_band() {
        for n in [8, 16, 64, 256, 512] {
            let g = Grid::new(n).unwrap();
            let m = Mollify::Auto.resolve(g).unwrap().unwrap();
            assert!(2.0 * m <= (n / 3) as f64 || m == 1.0);
        }
        let g = Grid::new(256).unwrap();
        assert_eq!(Mollify::Auto.resolve(g).unwrap(), Some(32.0));
        assert!(Mollify::Dyadic(128.0).resolve(g).is_err());
        assert!(Mollify::Dyadic(48.0).resolve(g).is_err());
    }

    #[test]
    fn zero_field_stays_zero() {
        let g = Grid::new(16).unwrap();
        let rhs = Rhs::new(g, 1.5, Mollify::Auto).unwrap();
        let s = SolverState { t: 0.0, omega: SpectralField::zeros(g), step_count: 0 };
        let next = step_rk4(&s, 0.1, &rhs).unwrap();
        assert_eq!(next.omega, s.omega);
        assert_eq!(next.step_count, 1);
        assert!(step_rk4(&s, 0.0, &rhs).is_err());
    }

    #[test]
    fn run_records_start_and_end() {
        let cfg = SolverConfig {
            n: 32,
            t_max: 0.3,
            ic: InitialCondition::VortexPair,
            diag_interval: 3,
            snapshot_interval: 2,
            p_max: 8,
            ..SolverConfig::default()
        };
        let out = run(&cfg).unwrap();
        assert!(out.blow_up.is_none());
        assert_eq!(out.records[0].t, 0.0);
        assert_eq!(out.records[0].dt_used, 0.0);
        assert_eq!(out.records.last().unwrap().t, 0.3);
        assert!(out.records.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(out.snapshots[0].step_count, 0);
        assert_eq!(out.snapshots.last().unwrap().time, 0.3);
        // circulation of each blob is ~2 pi sigma^2; L^2 must be conserved
        let l2: Vec<f64> = out.records.iter().map(|r| r.norms.l2).collect();
        assert!(l2.iter().all(|v| (v / l2[0] - 1.0).abs() < 1e-6), "{l2:?}");
        assert!(l2[0] > 0.5 * PI.sqrt() * 0.4);
    }

    #[test]
    fn invalid_configs_name_their_parameter() {
        let bad = |c: SolverConfig| match c.validate() {
            Err(Error::Parameter { name, .. }) => name,
            other => panic!("{other:?}"),
        };
        let d = SolverConfig::default;
        assert_eq!(bad(SolverConfig { n: 100, ..d() }), "n");
        assert_eq!(bad(SolverConfig { gamma: -1.0, ..d() }), "gamma");
        assert_eq!(bad(SolverConfig { cfl: 1.5, ..d() }), "cfl");
        assert_eq!(bad(SolverConfig { t_max: 0.0, ..d() }), "t_max");
        assert_eq!(bad(SolverConfig { mollify: Mollify::Dyadic(3.0), ..d() }), "mollify");
        assert_eq!(bad(SolverConfig { diag_interval: 0, ..d() }), "diag_interval");
    }
}
