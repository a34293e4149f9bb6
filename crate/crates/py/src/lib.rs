use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use selmer_core::arith::fq::FqField;
use selmer_core::arith::rational::{parse_rational, vp, Valuation};
use selmer_core::curves::{self, CurvePoint, WeierstrassModel};
use selmer_core::cyclotomic;
use selmer_core::local::LocalField;
use selmer_core::request::{run_analysis, RequestError};
use selmer_core::selmer;
use selmer_core::tate::{self, PlaceDescriptor};

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts a serializable value to Python objects through JSON.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn coeff_strings(coeffs: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    let mut out = Vec::new();
    for item in coeffs.try_iter()? {
        out.push(item?.str()?.to_string());
    }
    Ok(out)
}

/// Weierstrass model [a1, a2, a3, a4, a6] over Q.
#[pyclass(name = "Curve", frozen)]
struct PyCurve {
    model: WeierstrassModel,
}

#[pymethods]
impl PyCurve {
    #[new]
    fn new(coeffs: &Bound<'_, PyAny>) -> PyResult<Self> {
        let model = WeierstrassModel::parse(&coeff_strings(coeffs)?).map_err(err)?;
        Ok(PyCurve { model })
    }

    fn coefficients(&self) -> Vec<String> {
        self.model.to_strings().to_vec()
    }

    #[getter]
    fn discriminant(&self) -> String {
        self.model.discriminant().to_string()
    }

    #[getter]
    fn j_invariant(&self) -> String {
        self.model.j_invariant().to_string()
    }

    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.model.invariants())
    }

    #[pyo3(signature = (x, y, bound = 100))]
    fn point_order(&self, x: &str, y: &str, bound: u64) -> PyResult<Option<u64>> {
        let p = CurvePoint::Affine(parse_rational(x).map_err(err)?, parse_rational(y).map_err(err)?);
        curves::point_order(&self.model, &p, bound).map_err(err)
    }

    /// #E(F_{l^degree}) of the reduction at a prime of good reduction.
    #[pyo3(signature = (prime, degree = 1))]
    fn count(&self, prime: u64, degree: u32) -> PyResult<String> {
        let field = FqField::new(prime, 1).map_err(err)?;
        let reduced = self.model.integral_model().reduce(&field).map_err(err)?;
        let n1 = curves::count_points(&reduced).map_err(err)?;
        let n = curves::extension_count(&BigInt::from(n1), &BigInt::from(prime), degree).map_err(err)?;
        Ok(n.to_string())
    }

    /// Tate's algorithm at the places of Q(mu_m) above `prime`.
    #[pyo3(signature = (prime, conductor = 1, precision_digits = None))]
    fn local_data<'py>(&self, py: Python<'py>, prime: u64, conductor: u64, precision_digits: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
        let split = cyclotomic::splitting(prime, conductor).map_err(err)?;
        let place: PlaceDescriptor = selmer::place_descriptor(&split);
        let data = tate::tate_at(&self.model, place, precision_digits).map_err(err)?;
        to_py(py, &data)
    }

    fn rational_torsion(&self, p: u64) -> PyResult<String> {
        Ok(curves::rational_p_torsion_order(&self.model, p).map_err(err)?.to_string())
    }

    #[pyo3(signature = (p, conductor = 1, samples = 20, certificate = None))]
    fn torsion_bound<'py>(
        &self,
        py: Python<'py>,
        p: u64,
        conductor: u64,
        samples: usize,
        certificate: Option<u64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let cert = certificate.map(BigInt::from);
        let t = curves::torsion_bound_over_f(&self.model, p, conductor, samples, cert.as_ref()).map_err(err)?;
        to_py(py, &t)
    }

    fn pot_supersingular(&self, p: u64) -> PyResult<bool> {
        tate::pot_supersingular(&self.model, p).map_err(err)
    }

    fn tau_p(&self, p: u64, conductor: u64) -> PyResult<u64> {
        selmer::tau_p(&self.model, p, conductor).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.model)
    }
}

/// Finite extension of Q_l at a fixed pi-adic precision.
#[pyclass(name = "LocalField", frozen)]
struct PyLocalField {
    field: LocalField,
}

#[pymethods]
impl PyLocalField {
    #[new]
    #[pyo3(signature = (ell, f, e, precision = 40, cyclotomic = false))]
    fn new(ell: u64, f: usize, e: usize, precision: i64, cyclotomic: bool) -> PyResult<Self> {
        Ok(PyLocalField { field: LocalField::new(ell, f, e, precision, cyclotomic).map_err(err)? })
    }

    /// pi-adic valuation of a rational number embedded in the field.
    fn valuation(&self, x: &str) -> PyResult<i64> {
        let r = parse_rational(x).map_err(err)?;
        self.field.from_rational(&r).valuation().map_err(err)
    }

    #[getter]
    fn residue_size(&self) -> String {
        self.field.residue_size().to_string()
    }

    #[getter]
    fn ramification_index(&self) -> usize {
        self.field.ramification_index()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.field)
    }
}

/// (e, f, g) of a prime in Q(mu_m).
#[pyfunction]
fn splitting(ell: u64, m: u64) -> PyResult<(u64, u64, u64)> {
    let s = cyclotomic::splitting(ell, m).map_err(err)?;
    Ok((s.e, s.f, s.g))
}

/// p-adic valuation of a rational given as "a/b"; None for zero.
#[pyfunction(name = "vp")]
fn py_vp(x: &str, p: u64) -> PyResult<Option<i64>> {
    let r = parse_rational(x).map_err(err)?;
    Ok(match vp(&r, p).map_err(err)? {
        Valuation::Finite(v) => Some(v),
        Valuation::PlusInfinity => None,
    })
}

/// Runs a JSON analysis request; returns (report, exit_code).
#[pyfunction]
fn analyze<'py>(py: Python<'py>, request: &str) -> PyResult<(Bound<'py, PyAny>, i32)> {
    let report = run_analysis(request).map_err(|e: RequestError| err(e))?;
    Ok((to_py(py, &report)?, report.exit_code()))
}

#[pyfunction]
#[pyo3(signature = (field_degree, tau, sigma_index = None))]
fn corank_report<'py>(py: Python<'py>, field_degree: u64, tau: u64, sigma_index: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &selmer::corank_report(field_degree, tau, sigma_index))
}

#[pymodule]
fn euler_selmer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyLocalField>()?;
    m.add_function(wrap_pyfunction!(splitting, m)?)?;
    m.add_function(wrap_pyfunction!(py_vp, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(corank_report, m)?)?;
    Ok(())
}
