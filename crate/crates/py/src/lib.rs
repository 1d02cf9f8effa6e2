//! Python bindings for the `lgeu` solver and inequality lab.
//!
//! Fields cross the boundary as flat row-major lists of `n * n` floats.
//! Keyword arguments of `simulate`, `verify`, `initial_condition` and `rhs`
//! are the `key = value` configuration keys, passed through `str()`.

use lgeu::cli::inequality_check;
use lgeu::io::{parse_config, DiagnosticsRow, ResolvedConfig};
use lgeu::lab::radial::{dyadic_p_list, fit_sharpness, sharpness_curve};
use lgeu::multiplier::{phi_eval, tgamma_eval};
use lgeu::solver::{make_ic, run, Rhs};
use lgeu::spectral::{dft_forward, dft_inverse};
use lgeu::{Error, Grid, RealField};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BlowUp { .. } | Error::Quadrature { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn resolve(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<ResolvedConfig> {
    let mut overrides = Vec::new();
    if let Some(kw) = kwargs {
        for (k, v) in kw.iter() {
            overrides.push((k.extract::<String>()?, v.str()?.to_string()));
        }
    }
    parse_config("", &overrides).map_err(to_py)
}

fn real_field(values: Vec<f64>) -> PyResult<RealField> {
    let n = (values.len() as f64).sqrt().round() as usize;
    if n * n != values.len() {
        return Err(PyValueError::new_err(format!(
            "field length {} is not a perfect square",
            values.len()
        )));
    }
    RealField::new(Grid::new(n).map_err(to_py)?, values).map_err(to_py)
}

/// `1 / log^gamma(r + 10)`.
#[pyfunction]
fn tgamma(r: f64, gamma: f64) -> PyResult<f64> {
    tgamma_eval(r, gamma).map_err(to_py)
}

/// Smooth Littlewood-Paley cutoff: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
#[pyfunction]
fn phi(r: f64) -> f64 {
    phi_eval(r)
}

/// Initial vorticity on the grid, e.g. `initial_condition(n=64, ic="vortex_pair")`.
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn initial_condition(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<f64>> {
    let cfg = resolve(kwargs)?;
    let grid = cfg.solver.validate().map_err(to_py)?;
    let omega = make_ic(&cfg.solver.ic, grid).map_err(to_py)?;
    Ok(dft_inverse(&omega).map_err(to_py)?.into_values())
}

/// Right-hand side `d omega / dt` of a physical vorticity field.
#[pyfunction]
#[pyo3(signature = (field, **kwargs))]
fn rhs(field: Vec<f64>, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<f64>> {
    let f = real_field(field)?;
    let cfg = resolve(kwargs)?;
    let r = Rhs::new(f.grid(), cfg.solver.gamma, cfg.solver.mollify).map_err(to_py)?;
    let out = r.eval(&dft_forward(&f)).map_err(to_py)?;
    Ok(dft_inverse(&out).map_err(to_py)?.into_values())
}

/// Runs the solver; returns diagnostics columns, the final field and any blow-up message.
#[pyfunction]
#[pyo3(signature = (**kwargs))]
fn simulate<'py>(py: Python<'py>, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = resolve(kwargs)?;
    let out = py.detach(|| run(&cfg.solver)).map_err(to_py)?;
    let rows: Vec<DiagnosticsRow> = out.records.iter().map(DiagnosticsRow::from_record).collect();
    let d = PyDict::new(py);
    type Column = (&'static str, fn(&DiagnosticsRow) -> f64);
    let columns: [Column; 10] = [
        ("t", |r| r.t),
        ("dt", |r| r.dt),
        ("l2", |r| r.l2),
        ("l4", |r| r.l4),
        ("l8", |r| r.l8),
        ("h1dot", |r| r.h1dot),
        ("hm1dot", |r| r.hm1dot),
        ("sup_p_ratio", |r| r.sup_p_ratio),
        ("grad_u_sup", |r| r.grad_u_sup),
        ("energy_gamma", |r| r.energy_gamma),
    ];
    for (name, get) in columns {
        d.set_item(name, rows.iter().map(get).collect::<Vec<f64>>())?;
    }
    d.set_item("step", out.records.iter().map(|r| r.step).collect::<Vec<u64>>())?;
    d.set_item(
        "aliasing_energy_discarded",
        out.records.iter().map(|r| r.aliasing_energy_discarded).collect::<Vec<f64>>(),
    )?;
    d.set_item("n", cfg.solver.n)?;
    d.set_item("steps", out.final_state.step_count)?;
    d.set_item("final_t", out.final_state.t)?;
    d.set_item("final_field", dft_inverse(&out.final_state.omega).map_err(to_py)?.into_values())?;
    d.set_item("blow_up", out.blow_up.map(|e| e.to_string()))?;
    Ok(d)
}

/// Runs one corpus check (`embedding`, `loginterp`, `multiplier`, `bernstein`).
#[pyfunction]
#[pyo3(signature = (check, **kwargs))]
fn verify<'py>(
    py: Python<'py>,
    check: &str,
    kwargs: Option<&Bound<'py, PyDict>>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = resolve(kwargs)?;
    let report = py.detach(|| inequality_check(check, &cfg)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("name", &report.name)?;
    d.set_item("max_ratio", report.max_ratio)?;
    d.set_item("argmax", &report.argmax)?;
    d.set_item("exploratory", report.exploratory)?;
    d.set_item("excluded", &report.excluded)?;
    let rows = PyList::empty(py);
    for r in &report.rows {
        let row = PyDict::new(py);
        row.set_item("function_id", &r.function_id)?;
        for (k, v) in &r.params {
            row.set_item(*k, *v)?;
        }
        row.set_item("ratio", r.ratio)?;
        rows.append(row)?;
    }
    d.set_item("rows", rows)?;
    Ok(d)
}

/// Norms of the radial extremizers for `p = 4, 8, ..., p_max` and the fitted constants.
#[pyfunction]
#[pyo3(signature = (p_max = 256.0))]
fn sharpness<'py>(py: Python<'py>, p_max: f64) -> PyResult<Bound<'py, PyDict>> {
    let rows = py.detach(|| sharpness_curve(&dyadic_p_list(p_max))).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p", rows.iter().map(|r| r.p).collect::<Vec<f64>>())?;
    d.set_item("l2", rows.iter().map(|r| r.norms.l2).collect::<Vec<f64>>())?;
    d.set_item("lp", rows.iter().map(|r| r.norms.lp).collect::<Vec<f64>>())?;
    d.set_item("h1dot", rows.iter().map(|r| r.norms.h1dot).collect::<Vec<f64>>())?;
    d.set_item("ratio", rows.iter().map(|r| r.ratio).collect::<Vec<f64>>())?;
    if let Some(f) = fit_sharpness(&rows) {
        d.set_item("c_h1dot", f.c_h1dot)?;
        d.set_item("c_lp", f.c_lp)?;
        d.set_item("h1dot_spread", f.h1dot_spread)?;
        d.set_item("lp_spread", f.lp_spread)?;
    }
    Ok(d)
}

#[pymodule]
fn lgeu_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(tgamma, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(initial_condition, m)?)?;
    m.add_function(wrap_pyfunction!(rhs, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness, m)?)?;
    Ok(())
}
