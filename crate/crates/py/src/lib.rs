//! Python bindings. Structured results cross the boundary as JSON strings.

use heisweil::group::FiniteGroup;
use heisweil::heisenberg::{HeisenbergElement, HeisenbergGroup as CoreGroup, SpecialIso};
use heisweil::mackey::{zoo, TableGroup};
use heisweil::prounipotent::{sqrt as core_sqrt, CongruenceGroup};
use heisweil::reps::{heisenberg_rep, Model};
use heisweil::verify::{run_suite as core_run_suite, run_table_group, RunConfig};
use heisweil::weil::{standard_lift, VerifyMode};
use heisweil::Error;
use serde_json::Value;

/// Maps a core error to a Python exception: argument problems become `ValueError`.
pub fn to_py_err(e: Error) -> pyo3::PyErr {
    match e {
        Error::Guard(_) | Error::InvalidArgument(_) | Error::Parse(_) | Error::Dimension(_) | Error::NotMember(_) => {
            pyo3::exceptions::PyValueError::new_err(e.to_string())
        }
        _ => pyo3::exceptions::PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string(v).expect("json")
}

fn parse_model(model: &str) -> Result<Model, Error> {
    model.parse::<Model>()
}

pub fn config(p: u64, ell: usize, precision: u32, k0: u32, mode: &str, samples: usize, seed: u64) -> Result<RunConfig, Error> {
    Ok(RunConfig { p, ell, precision, k0, mode: mode.parse::<VerifyMode>()?, samples, seed, ..RunConfig::default() })
}

#[pyo3::pymodule]
mod heisweil_py {
    use super::*;
    use pyo3::prelude::*;

    /// The Heisenberg group `W × F_p` on the standard symplectic space of dimension `2 ell`.
    #[pyclass(frozen, name = "HeisenbergGroup")]
    struct PyHeisenbergGroup {
        inner: CoreGroup,
    }

    #[pymethods]
    impl PyHeisenbergGroup {
        #[new]
        #[pyo3(signature = (p, ell = 1))]
        fn new(p: u64, ell: usize) -> PyResult<Self> {
            Ok(PyHeisenbergGroup { inner: CoreGroup::standard(p, ell).map_err(to_py_err)? })
        }

        #[getter]
        fn p(&self) -> u64 {
            self.inner.p()
        }

        #[getter]
        fn ell(&self) -> usize {
            self.inner.space().ell()
        }

        fn order(&self) -> usize {
            self.inner.order()
        }

        /// Index of the element `(w, z)`.
        fn index(&self, w: Vec<u64>, z: u64) -> PyResult<usize> {
            let p = self.inner.p();
            if w.len() != 2 * self.ell() || w.iter().any(|&x| x >= p) || z >= p {
                return Err(pyo3::exceptions::PyValueError::new_err("coordinates out of range"));
            }
            Ok(self.inner.index_of(&HeisenbergElement { w, z }))
        }

        /// The element with index `idx` as `(w, z)`.
        fn element(&self, idx: usize) -> PyResult<(Vec<u64>, u64)> {
            self.check(idx)?;
            let h = self.inner.element(idx);
            Ok((h.w, h.z))
        }

        fn multiply(&self, a: usize, b: usize) -> PyResult<usize> {
            self.check(a)?;
            self.check(b)?;
            Ok(self.inner.mul(a, b))
        }

        fn inverse(&self, a: usize) -> PyResult<usize> {
            self.check(a)?;
            Ok(self.inner.inv(a))
        }

        /// Central coordinate of the commutator `[a, b]`.
        fn commutator(&self, a: usize, b: usize) -> PyResult<u64> {
            self.check(a)?;
            self.check(b)?;
            Ok(self.inner.commutator(a, b))
        }

        fn center(&self) -> Vec<usize> {
            self.inner.center()
        }

        /// Offsets of all special isomorphisms `H -> W × F_p`.
        fn special_isomorphisms(&self) -> Vec<Vec<u64>> {
            SpecialIso::all(self.inner.space()).into_iter().map(|nu| nu.offset).collect()
        }

        /// Character of the Heisenberg representation with central character `zeta^k`, as JSON.
        #[pyo3(signature = (k = 1, model = "minus"))]
        fn character(&self, k: u64, model: &str) -> PyResult<String> {
            let tau = heisenberg_rep(&self.inner, k, parse_model(model).map_err(to_py_err)?).map_err(to_py_err)?;
            Ok(json_text(&Value::Array(tau.character_values().iter().map(|c| c.to_json()).collect())))
        }

        /// Full matrix realisation of the Heisenberg representation, as JSON.
        #[pyo3(signature = (k = 1, model = "minus"))]
        fn representation(&self, k: u64, model: &str) -> PyResult<String> {
            let tau = heisenberg_rep(&self.inner, k, parse_model(model).map_err(to_py_err)?).map_err(to_py_err)?;
            Ok(json_text(&tau.to_json(|h| self.inner.element(h).to_json())))
        }

        /// Weil lift of the Heisenberg representation to `Sp(W)`, as JSON.
        #[pyo3(signature = (k = 1, model = "minus"))]
        fn weil_lift(&self, k: u64, model: &str) -> PyResult<String> {
            let lift = standard_lift(&self.inner, k, parse_model(model).map_err(to_py_err)?).map_err(to_py_err)?;
            Ok(json_text(&lift.to_json()))
        }

        /// Character of the Weil lift on `Sp(W)`, in the order of `weil_lift`'s elements, as JSON.
        #[pyo3(signature = (k = 1, model = "minus"))]
        fn weil_character(&self, k: u64, model: &str) -> PyResult<String> {
            let lift = standard_lift(&self.inner, k, parse_model(model).map_err(to_py_err)?).map_err(to_py_err)?;
            Ok(json_text(&Value::Array(lift.sp_character().iter().map(|c| c.to_json()).collect())))
        }

        fn __repr__(&self) -> String {
            format!("HeisenbergGroup(p={}, ell={})", self.p(), self.ell())
        }
    }

    impl PyHeisenbergGroup {
        fn check(&self, idx: usize) -> PyResult<()> {
            if idx < self.inner.order() {
                Ok(())
            } else {
                Err(pyo3::exceptions::PyIndexError::new_err(format!("element index {idx} out of range")))
            }
        }
    }

    /// Square root of `matrix` in `1 + p^k0 M_n(Z/p^K)`, as JSON with `root` and `residual_levels`.
    #[pyfunction]
    #[pyo3(signature = (matrix, p = 3, precision = 4, k0 = 1))]
    fn sqrt(matrix: Vec<Vec<i64>>, p: u64, precision: u32, k0: u32) -> PyResult<String> {
        let g = CongruenceGroup::new(matrix.len(), p, precision, k0).map_err(to_py_err)?;
        let a = g.element_from_rows(&matrix).map_err(to_py_err)?;
        Ok(json_text(&core_sqrt(&a).map_err(to_py_err)?.to_json()))
    }

    /// Runs a verification suite and returns the report as JSON.
    #[pyfunction]
    #[pyo3(signature = (suite, p = 3, ell = 1, precision = 4, k0 = 1, mode = "exhaustive", samples = 200, seed = 0))]
    #[allow(clippy::too_many_arguments)]
    fn run_suite(suite: &str, p: u64, ell: usize, precision: u32, k0: u32, mode: &str, samples: usize, seed: u64) -> PyResult<String> {
        let cfg = config(p, ell, precision, k0, mode, samples, seed).map_err(to_py_err)?;
        Ok(json_text(&core_run_suite(suite, &cfg).map_err(to_py_err)?.to_json()))
    }

    /// Names of the built-in finite groups.
    #[pyfunction]
    fn group_names() -> PyResult<Vec<String>> {
        Ok(zoo().map_err(to_py_err)?.into_iter().map(|g| g.name.clone()).collect())
    }

    /// A built-in finite group in table-group JSON format.
    #[pyfunction]
    fn table_group(name: &str) -> PyResult<String> {
        let groups = zoo().map_err(to_py_err)?;
        let g = groups.iter().find(|g| g.name == name).ok_or_else(|| pyo3::exceptions::PyKeyError::new_err(name.to_string()))?;
        Ok(json_text(&g.to_json()))
    }

    /// Runs the Mackey checks on a group given in table-group JSON format.
    #[pyfunction]
    #[pyo3(signature = (table_json, seed = 0))]
    fn verify_table_group(table_json: &str, seed: u64) -> PyResult<String> {
        let v: Value = serde_json::from_str(table_json).map_err(|e| to_py_err(Error::Parse(e.to_string())))?;
        let g = TableGroup::from_json(&v).map_err(to_py_err)?;
        let cfg = RunConfig { seed, ..RunConfig::default() };
        Ok(json_text(&run_table_group(&cfg, &g).map_err(to_py_err)?.to_json()))
    }
}
