//! Python bindings: meshes, metric evaluation and Pareto sweeps.

use std::sync::Arc;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;
use shapereg::genes::{format_bits, gene_to_triangles, parse_bits, random_bits, triangles_to_gene, Bits};
use shapereg::mesh::generate_plate_sized;
use shapereg::optimize::{self, SweepOptions, TermKind};
use shapereg::render::{render_gene_svg, RenderStyle};
use shapereg::{BasisGene, Encoding, Error, Gene, MeshContext, TriangleGene};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, to_py(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| py_err(e.into()))?;
    to_py(py, &json)
}

/// Accepts a `"0101"` string or a sequence of booleans / 0-1 integers.
fn extract_bits(obj: &Bound<'_, PyAny>) -> PyResult<Bits> {
    if let Ok(s) = obj.extract::<String>() {
        return parse_bits(&s).map_err(py_err);
    }
    let items: Vec<i64> = obj
        .try_iter()?
        .map(|item| {
            let item = item?;
            match item.extract::<bool>() {
                Ok(b) => Ok(i64::from(b)),
                Err(_) => item.extract::<i64>(),
            }
        })
        .collect::<PyResult<_>>()?;
    items
        .iter()
        .map(|&v| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(PyValueError::new_err(format!("gene entries must be 0 or 1, got {other}"))),
        })
        .collect()
}

fn parse_encoding(s: &str) -> PyResult<Encoding> {
    s.parse().map_err(py_err)
}

fn parse_term(s: &str) -> PyResult<TermKind> {
    s.parse().map_err(py_err)
}

/// A validated triangle mesh.
#[pyclass(module = "shapereg_py", frozen)]
struct Mesh {
    inner: shapereg::Mesh,
}

#[pymethods]
impl Mesh {
    #[new]
    fn new(nodes: Vec<(f64, f64)>, triangles: Vec<(usize, usize, usize)>) -> PyResult<Self> {
        let nodes = nodes.into_iter().map(|(x, y)| [x, y]).collect();
        let triangles = triangles.into_iter().map(|(a, b, c)| [a, b, c]).collect();
        let inner = shapereg::Mesh::new(nodes, triangles).map_err(py_err)?;
        Ok(Mesh { inner })
    }

    /// Rectangular plate of `nx` by `ny` cells, two triangles per cell.
    #[staticmethod]
    #[pyo3(signature = (nx, ny, width=None, height=None))]
    fn plate(nx: usize, ny: usize, width: Option<f64>, height: Option<f64>) -> PyResult<Self> {
        let inner = generate_plate_sized(nx, ny, width.unwrap_or(nx as f64), height.unwrap_or(ny as f64))
            .map_err(py_err)?;
        Ok(Mesh { inner })
    }

    /// Parses the text mesh format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Mesh { inner: shapereg::parse_mesh(text).map_err(py_err)? })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn triangle_count(&self) -> usize {
        self.inner.triangle_count()
    }

    #[getter]
    fn interior_edge_count(&self) -> usize {
        self.inner.interior_edge_count()
    }

    #[getter]
    fn nodes(&self) -> Vec<(f64, f64)> {
        self.inner.nodes().iter().map(|p| (p[0], p[1])).collect()
    }

    #[getter]
    fn triangles(&self) -> Vec<(usize, usize, usize)> {
        self.inner.triangles().iter().map(|t| (t[0], t[1], t[2])).collect()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh(nodes={}, triangles={})",
            self.inner.node_count(),
            self.inner.triangle_count()
        )
    }
}

/// Precomputed graph matrices of a mesh; evaluates genes against it.
#[pyclass(module = "shapereg_py", frozen)]
struct Context {
    inner: Arc<MeshContext>,
}

impl Context {
    fn gene(&self, gene: &Bound<'_, PyAny>, encoding: &str) -> PyResult<Gene> {
        let gene = Gene::from_bits(parse_encoding(encoding)?, extract_bits(gene)?);
        self.inner.check_gene(&gene).map_err(py_err)?;
        Ok(gene)
    }
}

#[pymethods]
impl Context {
    #[new]
    fn new(mesh: &Mesh) -> PyResult<Self> {
        let inner = MeshContext::new(mesh.inner.clone()).map_err(py_err)?;
        Ok(Context { inner: Arc::new(inner) })
    }

    #[getter]
    fn triangle_count(&self) -> usize {
        self.inner.triangle_count()
    }

    #[getter]
    fn basis_count(&self) -> usize {
        self.inner.basis_count()
    }

    fn gene_len(&self, encoding: &str) -> PyResult<usize> {
        Ok(self.inner.gene_len(parse_encoding(encoding)?))
    }

    fn areas(&self) -> Vec<f64> {
        self.inner.areas().as_slice().to_vec()
    }

    /// Full metrics report as a dict.
    #[pyo3(signature = (gene, encoding="triangle"))]
    fn evaluate<'py>(&self, py: Python<'py>, gene: &Bound<'py, PyAny>, encoding: &str) -> PyResult<Bound<'py, PyAny>> {
        let gene = self.gene(gene, encoding)?;
        let report = self.inner.evaluate_all(&gene).map_err(py_err)?;
        serialize(py, &report)
    }

    #[pyo3(signature = (gene, encoding="triangle"))]
    fn problematic_nodes(&self, gene: &Bound<'_, PyAny>, encoding: &str) -> PyResult<Vec<usize>> {
        let gene = self.gene(gene, encoding)?;
        self.inner.problematic_nodes(&gene).map_err(py_err)
    }

    /// Basis-function indices sitting on slots.
    fn slot_positions(&self, gene: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
        let g = BasisGene::new(extract_bits(gene)?);
        self.inner.slot_positions(&g).map_err(py_err)
    }

    /// `t = B{M g}` as a 0/1 string.
    fn gene_to_triangles(&self, gene: &Bound<'_, PyAny>) -> PyResult<String> {
        let g = BasisGene::new(extract_bits(gene)?);
        let t = gene_to_triangles(&g, self.inner.incidence()).map_err(py_err)?;
        Ok(t.to_string())
    }

    /// Slot-free basis gene enabling every edge between two enabled triangles.
    fn triangles_to_gene(&self, gene: &Bound<'_, PyAny>) -> PyResult<String> {
        let t = TriangleGene::new(extract_bits(gene)?);
        let g = triangles_to_gene(&t, self.inner.incidence()).map_err(py_err)?;
        Ok(g.to_string())
    }

    #[pyo3(signature = (gene, encoding="triangle", width=600.0))]
    fn render_svg(&self, gene: &Bound<'_, PyAny>, encoding: &str, width: f64) -> PyResult<String> {
        let gene = self.gene(gene, encoding)?;
        let style = RenderStyle { width, ..RenderStyle::default() };
        render_gene_svg(&self.inner, &gene, &style).map_err(py_err)
    }

    /// Sweeps `(1 − w)·term_a + w·term_b`; returns the frontier as a dict.
    #[pyo3(signature = (term_a, term_b, weights, encoding="basis", budget=20000, runs=1, seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn pareto_sweep<'py>(
        &self,
        py: Python<'py>,
        term_a: &str,
        term_b: &str,
        weights: Vec<f64>,
        encoding: &str,
        budget: usize,
        runs: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let encoding = parse_encoding(encoding)?;
        let a = parse_term(term_a)?.build(self.inner.clone(), encoding).map_err(py_err)?;
        let b = parse_term(term_b)?.build(self.inner.clone(), encoding).map_err(py_err)?;
        let len = self.inner.gene_len(encoding);
        let opts = SweepOptions { budget, runs_per_weight: runs, seed, ..Default::default() };
        let frontier = py
            .detach(|| optimize::pareto_sweep(a, b, &weights, len, &opts))
            .map_err(py_err)?;
        serialize(py, &frontier)
    }
}

/// Seeded Bernoulli gene as a 0/1 string.
#[pyfunction]
fn random_gene(len: usize, density: f64, seed: u64) -> PyResult<String> {
    Ok(format_bits(&random_bits(len, density, seed).map_err(py_err)?))
}

/// Indices of the non-dominated points (minimization), in input order.
#[pyfunction]
fn nondominated_filter(points: Vec<Vec<f64>>) -> PyResult<Vec<usize>> {
    if let Some(p) = points.iter().find(|p| p.len() != points[0].len()) {
        return Err(PyValueError::new_err(format!("point {p:?} has a different length")));
    }
    Ok(optimize::nondominated_filter(&points))
}

#[pyfunction]
fn linear_weights(steps: usize) -> Vec<f64> {
    optimize::linear_weights(steps)
}

#[pymodule]
fn shapereg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Mesh>()?;
    m.add_class::<Context>()?;
    m.add_function(wrap_pyfunction!(random_gene, m)?)?;
    m.add_function(wrap_pyfunction!(nondominated_filter, m)?)?;
    m.add_function(wrap_pyfunction!(linear_weights, m)?)?;
    Ok(())
}
