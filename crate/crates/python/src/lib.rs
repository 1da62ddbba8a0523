//! Python bindings for the `edsh` crate.

use std::sync::Arc;

use edsh::algebra::{naive_height, FieldElement, NumberField};
use edsh::cli::{exit_code, parse_element};
use edsh::curve::{clear_denominators, Curve as CoreCurve, Point as CorePoint};
use edsh::eds::AbstractEds;
use edsh::height::{self, HeightEstimate, Method};
use edsh::lehmer;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rug::Integer;

fn err(e: edsh::Error) -> PyErr {
    if exit_code(&e) == 1 {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn strings(v: &[Bound<'_, PyAny>]) -> PyResult<Vec<String>> {
    v.iter().map(|x| Ok(x.str()?.to_string())).collect()
}

fn method(name: &str) -> PyResult<Method> {
    name.parse::<Method>().map_err(err)
}

#[pyclass(frozen, skip_from_py_object, module = "pyedsh")]
#[derive(Clone)]
struct Field {
    inner: Arc<NumberField>,
}

#[pymethods]
impl Field {
    /// Field defined by a monic integer polynomial, coefficients in ascending degree.
    #[new]
    fn new(minpoly: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let coeffs = strings(&minpoly)?
            .iter()
            .map(|s| s.trim().parse::<Integer>().map_err(|e| PyValueError::new_err(format!("{s:?}: {e}"))))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Field { inner: NumberField::new(coeffs).map_err(err)? })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn minpoly(&self) -> Vec<String> {
        self.inner.minpoly().iter().map(|c| c.to_string()).collect()
    }

    /// Element from coefficients (ints or "p/q" strings); short lists are zero-padded.
    fn element(&self, coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Element> {
        Ok(Element { inner: parse_element(&self.inner, &strings(&coeffs)?, "element").map_err(err)? })
    }

    fn generator(&self) -> Element {
        Element { inner: self.inner.generator() }
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyedsh")]
#[derive(Clone)]
struct Element {
    inner: FieldElement,
}

impl Element {
    fn binary(&self, other: &Element, f: impl Fn(&FieldElement, &FieldElement) -> edsh::Result<FieldElement>) -> PyResult<Element> {
        Ok(Element { inner: f(&self.inner, &other.inner).map_err(err)? })
    }
}

#[pymethods]
impl Element {
    fn __add__(&self, o: &Element) -> PyResult<Element> {
        self.binary(o, FieldElement::checked_add)
    }
    fn __sub__(&self, o: &Element) -> PyResult<Element> {
        self.binary(o, FieldElement::checked_sub)
    }
    fn __mul__(&self, o: &Element) -> PyResult<Element> {
        self.binary(o, FieldElement::checked_mul)
    }
    fn __truediv__(&self, o: &Element) -> PyResult<Element> {
        self.binary(o, FieldElement::checked_div)
    }
    fn __neg__(&self) -> Element {
        Element { inner: -&self.inner }
    }
    fn __eq__(&self, o: &Element) -> bool {
        self.inner == o.inner
    }
    fn __str__(&self) -> String {
        self.inner.to_string()
    }
    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }
    fn inverse(&self) -> PyResult<Element> {
        Ok(Element { inner: self.inner.inverse().map_err(err)? })
    }
    /// Exact norm to Q as a string.
    fn norm(&self) -> String {
        edsh::algebra::rational_to_string(&self.inner.norm())
    }
    fn coeffs(&self) -> Vec<String> {
        self.inner.to_strings()
    }
    #[pyo3(signature = (precision_bits = 128))]
    fn naive_height(&self, precision_bits: u32) -> PyResult<f64> {
        naive_height(&self.inner, precision_bits).map_err(err)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyedsh")]
#[derive(Clone)]
struct Curve {
    inner: CoreCurve,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(a1: &Element, a2: &Element, a3: &Element, a4: &Element, a6: &Element) -> PyResult<Self> {
        let c = CoreCurve::new(a1.inner.clone(), a2.inner.clone(), a3.inner.clone(), a4.inner.clone(), a6.inner.clone());
        Ok(Curve { inner: c.map_err(err)? })
    }

    #[getter]
    fn discriminant(&self) -> Element {
        Element { inner: self.inner.delta.clone() }
    }

    fn discriminant_norm(&self) -> String {
        self.inner.discriminant_norm().to_string()
    }

    fn contains(&self, p: &Point) -> bool {
        self.inner.is_on_curve(&p.inner)
    }

    fn add(&self, p: &Point, q: &Point) -> PyResult<Point> {
        Ok(Point { inner: self.inner.add(&p.inner, &q.inner).map_err(err)? })
    }

    fn multiply(&self, p: &Point, k: u64) -> PyResult<Point> {
        Ok(Point { inner: self.inner.multiply(&p.inner, k).map_err(err)? })
    }

    /// `(curve, point, u)` on an integral model when the point has denominators.
    fn clear_denominators(&self, p: &Point) -> PyResult<(Curve, Point, String)> {
        let (c, q, u) = clear_denominators(&self.inner, &p.inner).map_err(err)?;
        Ok((Curve { inner: c }, Point { inner: q }, u.to_string()))
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pyedsh")]
#[derive(Clone)]
struct Point {
    inner: CorePoint,
}

#[pymethods]
impl Point {
    #[new]
    fn new(x: &Element, y: &Element) -> Self {
        Point { inner: CorePoint::affine(x.inner.clone(), y.inner.clone()) }
    }

    #[staticmethod]
    fn infinity() -> Self {
        Point { inner: CorePoint::Infinity }
    }

    fn is_infinity(&self) -> bool {
        self.inner.is_infinity()
    }

    #[getter]
    fn x(&self) -> Option<Element> {
        self.inner.coords().ok().map(|(x, _)| Element { inner: x.clone() })
    }

    #[getter]
    fn y(&self) -> Option<Element> {
        self.inner.coords().ok().map(|(_, y)| Element { inner: y.clone() })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __eq__(&self, o: &Point) -> bool {
        self.inner == o.inner
    }
}

fn estimate_dict<'py>(py: Python<'py>, h: &HeightEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("hhat", h.total)?;
    d.set_item("arch", h.arch)?;
    d.set_item("nonarch", h.nonarch)?;
    d.set_item("n", h.n_used)?;
    d.set_item("d", h.d)?;
    d.set_item("method", h.method.as_str())?;
    if let Some(pp) = &h.per_prime {
        let m = PyDict::new(py);
        for (p, v) in pp {
            m.set_item(p.to_string(), *v)?;
        }
        d.set_item("per_prime", m)?;
    }
    d.set_item("torsion", h.torsion)?;
    d.set_item("warnings", h.warnings.clone())?;
    if let Some(x) = h.extrapolated {
        d.set_item("extrapolated", x)?;
    }
    Ok(d)
}

/// Height estimate at index `n`; `method` is "gcd" or "dpower".
#[pyfunction]
#[pyo3(signature = (curve, point, n, method = "gcd"))]
fn canonical_height<'py>(py: Python<'py>, curve: &Curve, point: &Point, n: u64, method: &str) -> PyResult<Bound<'py, PyDict>> {
    let m = self::method(method)?;
    let h = py.detach(|| height::canonical_height(&curve.inner, &point.inner, n, m)).map_err(err)?;
    estimate_dict(py, &h)
}

/// Archimedean part at index `2^n_exp` from floating-point doubling.
#[pyfunction]
#[pyo3(signature = (curve, point, n_exp, precision_bits = 128))]
fn archimedean_height(py: Python<'_>, curve: &Curve, point: &Point, n_exp: u32, precision_bits: u32) -> PyResult<f64> {
    py.detach(|| height::archimedean_height(&curve.inner, &point.inner, n_exp, precision_bits)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (curve, point, k, precision_bits = 128))]
fn tate_height<'py>(py: Python<'py>, curve: &Curve, point: &Point, k: u32, precision_bits: u32) -> PyResult<Bound<'py, PyDict>> {
    let h = py.detach(|| height::tate_height(&curve.inner, &point.inner, k, precision_bits)).map_err(err)?;
    estimate_dict(py, &h)
}

/// Per-prime contributions at index `n` for primes dividing the discriminant norm.
#[pyfunction]
fn local_decompose(curve: &Curve, point: &Point, n: u64, primes: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<(String, f64)>> {
    let ps = strings(&primes)?
        .iter()
        .map(|s| s.parse::<Integer>().map_err(|e| PyValueError::new_err(e.to_string())))
        .collect::<PyResult<Vec<_>>>()?;
    let m = height::local_decompose(&curve.inner, &point.inner, n, &ps).map_err(err)?;
    Ok(m.into_iter().map(|(p, v)| (p.to_string(), v)).collect())
}

/// `E_n = |N(psi_n(Q))|` as a decimal string.
#[pyfunction]
fn norm_term(curve: &Curve, point: &Point, n: u64) -> PyResult<String> {
    Ok(height::compute_e(&curve.inner, &point.inner, n, false).map_err(err)?.e.to_string())
}

#[pyfunction]
fn extrapolate(h1: f64, n1: u64, h2: f64, n2: u64) -> PyResult<f64> {
    height::extrapolate(h1, n1, h2, n2).map_err(err)
}

/// Growth estimate of the sequence `0, 1, u2, u3, u4, ...`.
#[pyfunction]
fn growth_estimate<'py>(py: Python<'py>, u2: &Element, u3: &Element, u4: &Element, n: u64) -> PyResult<Bound<'py, PyDict>> {
    let s = AbstractEds::from_terms(u2.inner.clone(), u3.inner.clone(), u4.inner.clone()).map_err(err)?;
    let h = py.detach(|| lehmer::growth_estimate(&s, n)).map_err(err)?;
    estimate_dict(py, &h)
}

#[pymodule]
fn pyedsh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_class::<Curve>()?;
    m.add_class::<Point>()?;
    m.add_function(wrap_pyfunction!(canonical_height, m)?)?;
    m.add_function(wrap_pyfunction!(archimedean_height, m)?)?;
    m.add_function(wrap_pyfunction!(tate_height, m)?)?;
    m.add_function(wrap_pyfunction!(local_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(norm_term, m)?)?;
    m.add_function(wrap_pyfunction!(extrapolate, m)?)?;
    m.add_function(wrap_pyfunction!(growth_estimate, m)?)?;
    Ok(())
}
