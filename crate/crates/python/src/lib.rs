//! Python bindings: problems, analyses, momentum maps and extensions.
//!
//! Rationals cross the boundary as `fractions.Fraction`; any object whose
//! `str()` parses as `p/q` is accepted as input.

use hamflux::gallery::{
    from_central_extension, heisenberg, matrix_algebra_example, random_instance,
};
use hamflux::ham::{exactness_report, flux_rank, hamiltonian_lift, poisson_bracket};
use hamflux::linear::{format_rational, parse_rational, unit_vector, Rational, Subspace};
use hamflux::momentum::{
    baer_product_lie, build_abelian_extension, build_central_extension, equivariantize,
    solve_momentum, tau_cocycle, Equivariantization,
};
use hamflux::noether::{commuting_actions_check, invariant_flow_check};
use hamflux::problem::{cochain_entries, extension_problem, matrix_doc, to_json};
use hamflux::{
    analyze, parse_problem, AlgebraHom, Error, HamiltonianAnalysis, Matrix, MomentumMap, Problem,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

create_exception!(
    hamflux,
    ValidationError,
    PyValueError,
    "Malformed or inconsistent input."
);
create_exception!(
    hamflux,
    MathError,
    PyArithmeticError,
    "A construction failed on valid input."
);

fn to_py(e: Error) -> PyErr {
    if e.is_validation() {
        ValidationError::new_err(e.to_string())
    } else {
        MathError::new_err(e.to_string())
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(r),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|r| fraction(py, r)).collect()
}

fn rationals(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    values
        .iter()
        .map(|x| {
            let text = x.str()?.to_string();
            parse_rational(&text).map_err(|e| ValidationError::new_err(format!("{text:?}: {e}")))
        })
        .collect()
}

fn json_to_py<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (value.to_string(),))
}

fn basis<'py>(py: Python<'py>, sub: &Subspace) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    sub.basis_vectors()
        .iter()
        .map(|v| fractions(py, v))
        .collect()
}

fn momentum_map(
    a: &HamiltonianAnalysis,
    zeta: &AlgebraHom,
    supplied: Option<&Matrix>,
) -> hamflux::Result<MomentumMap> {
    match supplied {
        Some(j) => MomentumMap::new(a, zeta, j.clone()),
        None => Ok(solve_momentum(a, zeta)?.map),
    }
}

/// A validated `hamflux/1` problem.
#[pyclass(name = "Problem", module = "hamflux", frozen)]
struct PyProblem {
    inner: Problem,
}

impl PyProblem {
    fn zeta(&self) -> PyResult<&AlgebraHom> {
        self.inner
            .zeta
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("the problem has no zeta"))
    }
}

#[pymethods]
impl PyProblem {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_problem(text)
            .map(|inner| PyProblem { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| PyValueError::new_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    #[getter]
    fn dim_h(&self) -> usize {
        self.inner.algebra().dim()
    }

    #[getter]
    fn dim_v(&self) -> usize {
        self.inner.module.dim()
    }

    /// Bracket of two elements of `h`.
    fn bracket<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Bound<'py, PyAny>>,
        y: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let (x, y) = (rationals(&x)?, rationals(&y)?);
        let n = self.dim_h();
        if x.len() != n || y.len() != n {
            return Err(ValidationError::new_err(format!(
                "expected vectors of length {n}"
            )));
        }
        fractions(py, &self.inner.algebra().bracket(&x, &y))
    }

    fn analyze(&self) -> PyResult<PyAnalysis> {
        analyze(&self.inner.module, &self.inner.omega)
            .map(|inner| PyAnalysis { inner })
            .map_err(to_py)
    }

    /// Momentum map (supplied or solved), obstruction cocycle and equivariantization.
    fn momentum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let zeta = self.zeta()?;
        let value = (|| -> hamflux::Result<serde_json::Value> {
            let a = analyze(&self.inner.module, &self.inner.omega)?;
            let freedom = solve_momentum(&a, zeta)?.freedom_dim();
            let m = momentum_map(&a, zeta, self.inner.momentum.as_ref())?;
            let class = tau_cocycle(&m)?;
            let equivariant = match equivariantize(&m)? {
                Equivariantization::Equivariant { map, .. } => Some(matrix_doc(map.matrix())),
                Equivariantization::Obstructed { .. } => None,
            };
            Ok(json!({
                "momentum": matrix_doc(m.matrix()),
                "freedom_dim": freedom,
                "tau": cochain_entries(&class.tau),
                "obstruction_class": class.h2_class.iter().map(format_rational).collect::<Vec<_>>(),
                "equivariantizable": equivariant.is_some(),
                "equivariant_momentum": equivariant,
            }))
        })()
        .map_err(to_py)?;
        json_to_py(py, &value)
    }

    /// The extension of `g` of the given kind (`cen`, `ab` or `baer`) as a problem.
    fn extend(&self, kind: &str) -> PyResult<PyProblem> {
        let zeta = self.zeta()?;
        let inner = (|| -> hamflux::Result<Option<Problem>> {
            let a = analyze(&self.inner.module, &self.inner.omega)?;
            let m = momentum_map(&a, zeta, self.inner.momentum.as_ref())?;
            Ok(match kind {
                "cen" => Some(extension_problem(kind, &build_central_extension(&m)?, None)),
                "ab" => Some(extension_problem(
                    kind,
                    &build_abelian_extension(&a, zeta)?,
                    None,
                )),
                "baer" => {
                    let cen = build_central_extension(&m)?;
                    let baer = baer_product_lie(&m, &cen)?;
                    Some(extension_problem(kind, &baer.extension, Some(&baer)))
                }
                _ => None,
            })
        })()
        .map_err(to_py)?;
        inner
            .map(|inner| PyProblem { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown extension kind {kind:?}")))
    }

    /// Reports for the flows and commuting pairs in the problem.
    fn noether<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let p = &self.inner;
        let a = analyze(&p.module, &p.omega).map_err(to_py)?;
        let mut out = Vec::new();
        if !p.flows.is_empty() {
            let m = momentum_map(&a, self.zeta()?, p.momentum.as_ref()).map_err(to_py)?;
            for f in &p.flows {
                let r = invariant_flow_check(&a, &m, &f.v, &f.xi).map_err(to_py)?;
                out.push(json_to_py(
                    py,
                    &serde_json::to_value(r).expect("serializable"),
                )?);
            }
        }
        for c in &p.commuting {
            let m1 = momentum_map(&a, &c.zeta1, c.momentum1.as_ref()).map_err(to_py)?;
            let m2 = momentum_map(&a, &c.zeta2, c.momentum2.as_ref()).map_err(to_py)?;
            let r = commuting_actions_check(&a, &m1, &m2).map_err(to_py)?;
            out.push(json_to_py(
                py,
                &serde_json::to_value(r).expect("serializable"),
            )?);
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Problem(dim_h={}, dim_v={})", self.dim_h(), self.dim_v())
    }
}

/// Subalgebras, admissible vectors and the Poisson bracket of a problem.
#[pyclass(name = "Analysis", module = "hamflux", frozen)]
struct PyAnalysis {
    inner: HamiltonianAnalysis,
}

#[pymethods]
impl PyAnalysis {
    fn dims<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(
            py,
            &serde_json::to_value(exactness_report(&self.inner).dims).expect("serializable"),
        )
    }

    fn checks<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(
            py,
            &serde_json::to_value(exactness_report(&self.inner).checks).expect("serializable"),
        )
    }

    /// Canonical basis of `sp`, `ham`, `rad`, `h_omega`, `v_h` or `v_omega`.
    fn basis<'py>(&self, py: Python<'py>, name: &str) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let a = &self.inner;
        let sub = match name {
            "sp" => &a.sp,
            "ham" => &a.ham,
            "rad" => &a.rad,
            "h_omega" => &a.h_omega,
            "v_h" => &a.v_h,
            "v_omega" => &a.v_omega,
            _ => return Err(PyValueError::new_err(format!("unknown subspace {name:?}"))),
        };
        basis(py, sub)
    }

    fn flux_rank(&self) -> PyResult<usize> {
        flux_rank(&self.inner).map_err(to_py)
    }

    fn hamiltonian_lift<'py>(
        &self,
        py: Python<'py>,
        v: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let xi = hamiltonian_lift(&self.inner, &rationals(&v)?).map_err(to_py)?;
        fractions(py, &xi)
    }

    /// `{v1, v2} = -omega(xi1, xi2)` for admissible `v1, v2`.
    fn poisson_bracket<'py>(
        &self,
        py: Python<'py>,
        v1: Vec<Bound<'py, PyAny>>,
        v2: Vec<Bound<'py, PyAny>>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let out =
            poisson_bracket(&self.inner, &rationals(&v1)?, &rationals(&v2)?).map_err(to_py)?;
        fractions(py, &out)
    }
}

/// `sl_n` acting on `M_n` with `omega(x, y) = [x, y]`.
#[pyfunction]
fn matrix_algebra(n: usize) -> PyResult<PyProblem> {
    let bundle = matrix_algebra_example(n).map_err(to_py)?;
    Ok(PyProblem {
        inner: Problem::from_bundle(&bundle),
    })
}

/// The Heisenberg algebra as a module over its quotient by the center.
#[pyfunction]
fn heisenberg_example() -> PyResult<PyProblem> {
    let z = Subspace::span(3, &[unit_vector(3, 2)]);
    let bundle = from_central_extension(&heisenberg(), &z).map_err(to_py)?;
    Ok(PyProblem {
        inner: Problem::from_bundle(&bundle),
    })
}

#[pyfunction]
fn random_problem(dim_h: usize, dim_v: usize, seed: u64) -> PyResult<PyProblem> {
    let bundle = random_instance((dim_h, dim_v), seed).map_err(to_py)?;
    Ok(PyProblem {
        inner: Problem::from_bundle(&bundle),
    })
}

#[pymodule]
#[pyo3(name = "hamflux")]
fn hamflux_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PyAnalysis>()?;
    m.add_function(wrap_pyfunction!(matrix_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg_example, m)?)?;
    m.add_function(wrap_pyfunction!(random_problem, m)?)?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add("MathError", m.py().get_type::<MathError>())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints<'py>(py: Python<'py>, xs: &[i64]) -> Vec<Bound<'py, PyAny>> {
        xs.iter()
            .map(|x| x.into_pyobject(py).unwrap().into_any())
            .collect()
    }

    #[test]
    fn bracket_and_errors_cross_the_boundary() {
        Python::initialize();
        Python::attach(|py| {
            let heis = heisenberg_example().unwrap();
            let a = heis.analyze().unwrap();
            let out = a
                .poisson_bracket(py, ints(py, &[1, 0, 0]), ints(py, &[0, 1, 0]))
                .unwrap();
            let strings: Vec<String> = out.iter().map(|x| x.str().unwrap().to_string()).collect();
            assert_eq!(strings, ["0", "0", "1"]);

            let cen = heis.extend("cen").unwrap();
            assert_eq!(cen.dim_h(), 3);
            assert!(heis.extend("other").is_err());

            let err =
                PyProblem::from_json(r#"{"schema": "hamflux/1", "lie_algebra": {"dim": "x"}}"#)
                    .err()
                    .unwrap();
            assert!(err.is_instance_of::<ValidationError>(py));
            let short = a.hamiltonian_lift(py, ints(py, &[1])).err().unwrap();
            assert!(short.is_instance_of::<ValidationError>(py));
            let p = PyProblem::from_json(include_str!("../../../fixtures/not_hamiltonian.json"))
                .unwrap();
            assert!(p
                .momentum(py)
                .err()
                .unwrap()
                .is_instance_of::<MathError>(py));
        });
    }
}
