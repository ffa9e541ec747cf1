//! Python bindings. Reports come back as plain dicts and lists.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use shapeinv_core::catalog::{family_info, FamilyId, ParamSet, SuperpotentialSpec};
use shapeinv_core::ladder::{hamiltonian, ladder_chain, overlap, Superpotential as _};
use shapeinv_core::matrix::HermitianMatrix;
use shapeinv_core::models::{
    check_reduction_with, default_grid, model_potential, model_registry, model_spectrum_check, reduction_grid, ModelId, ModelParams,
    ModelSystem, PartnerSign,
};
use shapeinv_core::spectral::{eigen_lowest, GridSpec, SolverOptions};
use shapeinv_core::verifier::{verify, SampleGrid};
use shapeinv_core::Error;

create_exception!(shapeinv, NumericalError, PyException);

fn err(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rows(m: &HermitianMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|r| (0..m.dim()).map(|c| m.get(r, c)).collect()).collect()
}

fn sign(s: &str) -> PyResult<PartnerSign> {
    match s {
        "-" | "minus" => Ok(PartnerSign::Minus),
        "+" | "plus" => Ok(PartnerSign::Plus),
        _ => Err(PyValueError::new_err(format!("sign must be '-' or '+', got '{s}'"))),
    }
}

fn real_kwargs(kwargs: Option<&Bound<'_, PyDict>>, mut set: impl FnMut(&str, f64) -> Result<(), Error>) -> PyResult<()> {
    if let Some(kw) = kwargs {
        for (k, v) in kw.iter() {
            let name: String = k.extract()?;
            set(&name, v.extract()?).map_err(err)?;
        }
    }
    Ok(())
}

/// A catalog superpotential W = κQ + P + R/κ.
#[pyclass(module = "shapeinv", frozen)]
struct Superpotential {
    spec: SuperpotentialSpec,
}

#[pymethods]
impl Superpotential {
    #[new]
    #[pyo3(signature = (family, **params))]
    fn new(family: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let id: FamilyId = family.parse().map_err(err)?;
        let mut p = ParamSet::default();
        real_kwargs(params, |k, v| p.set(k, v))?;
        Ok(Self { spec: SuperpotentialSpec::new(id, p).map_err(err)? })
    }

    #[getter]
    fn family(&self) -> String {
        self.spec.family.name().to_string()
    }

    #[getter]
    fn channels(&self) -> usize {
        self.spec.channels()
    }

    fn w(&self, kappa: f64, x: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(&self.spec.eval_w(kappa, x).map_err(err)?))
    }

    /// W² ∓ W' at (κ, x).
    #[pyo3(signature = (kappa, x, sign = "-"))]
    fn potential(&self, kappa: f64, x: f64, sign: &str) -> PyResult<Vec<Vec<Complex64>>> {
        let v = match self::sign(sign)? {
            PartnerSign::Minus => self.spec.v_minus(kappa, x),
            PartnerSign::Plus => self.spec.v_plus(kappa, x),
        };
        Ok(rows(&v.map_err(err)?))
    }

    /// Shape-invariance and determining-equation residuals with fitted constants.
    #[pyo3(signature = (kappa = 1.0, samples = 50))]
    fn verify<'py>(&self, py: Python<'py>, kappa: f64, samples: usize) -> PyResult<Bound<'py, PyAny>> {
        let grid = SampleGrid::for_spec(&self.spec, samples).map_err(err)?;
        to_py(py, &verify(&self.spec, kappa, &grid).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Superpotential('{}')", self.spec.family.name())
    }
}

/// One of the physical models with its parameters.
#[pyclass(module = "shapeinv", frozen)]
struct Model {
    id: ModelId,
    params: ModelParams,
}

impl Model {
    fn grid(&self, levels: usize, n_points: usize, xmin: Option<f64>, xmax: Option<f64>) -> PyResult<GridSpec> {
        let g = default_grid(self.id, &self.params, levels, n_points).map_err(err)?;
        GridSpec::new(xmin.unwrap_or(g.xmin), xmax.unwrap_or(g.xmax), n_points, g.channels).map_err(err)
    }
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (name, **params))]
    fn new(name: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let id: ModelId = name.parse().map_err(err)?;
        let mut p = ModelParams::defaults(id);
        real_kwargs(params, |k, v| p.set(k, v))?;
        ModelSystem::new(id, &p).map_err(err)?;
        Ok(Self { id, params: p })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.id.name()
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.params)
    }

    fn potential(&self, x: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(&model_potential(self.id, &self.params, x).map_err(err)?))
    }

    /// Compares the printed potential with W² ∓ W' of the parent family.
    #[pyo3(signature = (samples = 200, sign = "-"))]
    fn check_reduction<'py>(&self, py: Python<'py>, samples: usize, sign: &str) -> PyResult<Bound<'py, PyAny>> {
        let grid = reduction_grid(self.id, &self.params, samples).map_err(err)?;
        to_py(py, &check_reduction_with(self.id, &self.params, &grid, self::sign(sign)?).map_err(err)?)
    }

    /// Richardson-extrapolated lowest levels with the analytic gap comparison.
    #[pyo3(signature = (levels = 3, n_points = 2000, xmin = None, xmax = None))]
    fn spectrum<'py>(
        &self,
        py: Python<'py>,
        levels: usize,
        n_points: usize,
        xmin: Option<f64>,
        xmax: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let grid = self.grid(levels, n_points, xmin, xmax)?;
        let rep = py
            .detach(|| model_spectrum_check(self.id, &self.params, levels, &grid, &SolverOptions::default()))
            .map_err(err)?;
        to_py(py, &rep)
    }

    /// ψ_n built with raising operators, its energy and overlap with the n-th eigenvector.
    #[pyo3(signature = (n, n_points = 2000, xmin = None, xmax = None))]
    fn ladder<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        n_points: usize,
        xmin: Option<f64>,
        xmax: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let grid = self.grid(n + 1, n_points, xmin, xmax)?;
        let sys = ModelSystem::new(self.id, &self.params).map_err(err)?;
        let k = sys.kappa();
        let (chain, energy, values, ov) = py
            .detach(|| -> Result<_, Error> {
                let chain = ladder_chain(&sys, k, n, &grid)?;
                let h = hamiltonian(&sys, k, &grid)?;
                let pairs = eigen_lowest(&h, n + 1)?;
                let energy = h.expectation(&chain.state)?;
                let ov = overlap(&chain.state, &pairs.vectors[n])?;
                Ok((chain, energy, pairs.values, ov))
            })
            .map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("energy", energy)?;
        out.set_item("eigenvalues", values)?;
        out.set_item("overlap", ov)?;
        let rungs: Vec<(f64, f64, f64)> = chain.ground_states.iter().map(|g| (g.kappa, g.energy, g.annihilation)).collect();
        out.set_item("rungs", rungs)?;
        out.set_item("x", (0..grid.n_points).map(|i| grid.x(i)).collect::<Vec<_>>())?;
        out.set_item("state", (0..grid.n_points).map(|i| chain.state.at(i).to_vec()).collect::<Vec<_>>())?;
        Ok(out.into_any())
    }

    fn __repr__(&self) -> String {
        format!("Model('{}')", self.id.name())
    }
}

/// Printed superpotential families with their parameter schema and domain rule.
#[pyfunction]
fn families(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let all: Vec<_> = FamilyId::PRINTED.into_iter().map(family_info).collect();
    to_py(py, &all)
}

/// Physical models with defaults.
#[pyfunction]
fn models(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &model_registry())
}

#[pymodule]
fn shapeinv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Superpotential>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(models, m)?)?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    Ok(())
}
