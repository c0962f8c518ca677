//! Python bindings: structure documents, the corpus, and the checks.
//! Verdicts and reports are returned as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dualcheck_core::cli::{run, Cli};
use dualcheck_core::cornish::{CornishAlgebra, CornishSpace, Word};
use dualcheck_core::primality::{self, Verdict};
use dualcheck_core::report::verdict_json;
use dualcheck_core::text::{self, Structure};
use dualcheck_core::{acceptance, corpus, ddp, Error, Guards};

create_exception!(dualcheck, DualcheckError, PyValueError, "Invalid input or failed check.");
create_exception!(dualcheck, GuardExceeded, DualcheckError, "A size guard was exceeded.");

fn err(e: Error) -> PyErr {
    match e {
        Error::GuardExceeded { .. } => GuardExceeded::new_err(e.to_string()),
        _ => DualcheckError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn guards(product: Option<usize>, subuniverses: Option<usize>, term_budget: Option<usize>) -> Guards {
    let mut g = Guards::default();
    if let Some(p) = product {
        g.product = p;
    }
    if let Some(s) = subuniverses {
        g.subuniverses = s;
    }
    if let Some(b) = term_budget {
        g.term_budget = b;
    }
    g
}

/// A named space, algebra, poset or ddp-algebra.
#[pyclass(module = "dualcheck", frozen, from_py_object)]
#[derive(Clone)]
pub struct Document {
    inner: text::Document,
}

#[pymethods]
impl Document {
    /// Parses a document in the structure language.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text::parse(text).map(|inner| Document { inner }).map_err(err)
    }

    /// A built-in structure, e.g. `X2`, `C4` or `Y2-algebra`.
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        corpus::get(name, &Guards::default())
            .map(|inner| Document { inner })
            .map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().keyword()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.structure.len()
    }

    /// `(low, high)` index pairs of the order's covering relation.
    fn covers(&self) -> Vec<(usize, usize)> {
        self.inner.structure.order().covers()
    }

    /// Operation tables by symbol name; empty for posets.
    fn maps(&self) -> Vec<(String, Vec<usize>)> {
        match &self.inner.structure {
            Structure::Space(x) => (0..x.sig().len())
                .map(|i| (x.sig().name(i).to_string(), x.map(i).to_vec()))
                .collect(),
            Structure::Algebra(a) => (0..a.sig().len())
                .map(|i| (a.sig().name(i).to_string(), a.op(i).to_vec()))
                .collect(),
            Structure::Ddp(a) => vec![
                ("star".into(), (0..a.len()).map(|x| a.star(x)).collect()),
                ("plus".into(), (0..a.len()).map(|x| a.plus(x)).collect()),
            ],
            Structure::Poset(_) => Vec::new(),
        }
    }

    fn render(&self) -> String {
        text::render(&self.inner)
    }

    /// The dual structure.
    fn dual(&self) -> PyResult<Self> {
        corpus::dual_document(&self.inner, &Guards::default())
            .map(|inner| Document { inner })
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("<{} {} with {} elements>", self.kind(), self.inner.name, self.__len__())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn algebra_doc(d: &Document, g: &Guards) -> PyResult<text::Document> {
    match d.inner.structure {
        Structure::Algebra(_) => Ok(d.inner.clone()),
        Structure::Space(_) => corpus::dual_document(&d.inner, g).map_err(err),
        _ => Err(DualcheckError::new_err(format!("`{}` is not a space or algebra", d.inner.name))),
    }
}

fn algebra(doc: &text::Document) -> CornishAlgebra {
    doc.algebra().expect("algebra document").clone()
}

fn space(d: &Document) -> PyResult<CornishSpace> {
    match &d.inner.structure {
        Structure::Space(x) => Ok(x.clone()),
        Structure::Algebra(a) => dualcheck_core::cornish::d_functor(a).map(|s| s.space).map_err(err),
        _ => Err(DualcheckError::new_err(format!("`{}` is not a space or algebra", d.inner.name))),
    }
}

fn verdict_dict(py: Python<'_>, v: &Verdict, docs: &[&text::Document]) -> PyResult<Py<PyAny>> {
    to_py(py, &verdict_json(v, docs))
}

/// Whether a family (spaces are dualized) shares a discriminator term.
#[pyfunction]
#[pyo3(signature = (members, term=None, guard_product=None, guard_subuniverses=None))]
fn check_quasi_primal(
    py: Python<'_>,
    members: Vec<Document>,
    term: Option<&str>,
    guard_product: Option<usize>,
    guard_subuniverses: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let g = guards(guard_product, guard_subuniverses, None);
    if members.is_empty() {
        return Err(DualcheckError::new_err("empty family"));
    }
    let docs: Vec<text::Document> = members.iter().map(|d| algebra_doc(d, &g)).collect::<PyResult<_>>()?;
    let algs: Vec<CornishAlgebra> = docs.iter().map(algebra).collect();
    let word = term.map(|t| Word::parse(algs[0].sig(), t)).transpose().map_err(err)?;
    let v = py
        .detach(|| primality::quasi_primal_family(&algs, word.as_ref(), &g))
        .map_err(err)?;
    verdict_dict(py, &v, &docs.iter().collect::<Vec<_>>())
}

#[pyfunction]
#[pyo3(signature = (member, term=None, guard_product=None, guard_subuniverses=None))]
fn check_semi_primal(
    py: Python<'_>,
    member: Document,
    term: Option<&str>,
    guard_product: Option<usize>,
    guard_subuniverses: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let g = guards(guard_product, guard_subuniverses, None);
    let doc = algebra_doc(&member, &g)?;
    let a = algebra(&doc);
    let word = term.map(|t| Word::parse(a.sig(), t)).transpose().map_err(err)?;
    let v = py.detach(|| primality::semi_primal(&a, word.as_ref(), &g)).map_err(err)?;
    verdict_dict(py, &v, &[&doc])
}

/// The sufficient orbit condition (or the constant-term condition with
/// `semiprimal=True`) for a family of spaces.
#[pyfunction]
#[pyo3(signature = (members, term, semiprimal=false))]
fn check_internal(py: Python<'_>, members: Vec<Document>, term: &str, semiprimal: bool) -> PyResult<Py<PyAny>> {
    if members.is_empty() {
        return Err(DualcheckError::new_err("empty family"));
    }
    let spaces: Vec<CornishSpace> = members.iter().map(space).collect::<PyResult<_>>()?;
    let word = Word::parse(spaces[0].sig(), term).map_err(err)?;
    let v = if semiprimal {
        primality::internal_sufficient_semiprimal(&spaces, &word)
    } else {
        primality::internal_sufficient(&spaces, &word)
    }
    .map_err(err)?;
    let docs: Vec<&text::Document> = members.iter().map(|d| &d.inner).collect();
    verdict_dict(py, &v, &docs)
}

/// Quasi-primality of the ddp-algebras of a family of posets.
#[pyfunction]
fn check_ddp(py: Python<'_>, members: Vec<Document>) -> PyResult<Py<PyAny>> {
    let g = Guards::default();
    let posets = members
        .iter()
        .map(|d| corpus::poset_of(&d.inner))
        .collect::<dualcheck_core::Result<Vec<_>>>()
        .map_err(err)?;
    let v = py.detach(|| ddp::ddp_quasi_primal_family(&posets, &g)).map_err(err)?;
    let docs: Vec<&text::Document> = members.iter().map(|d| &d.inner).collect();
    verdict_dict(py, &v, &docs)
}

/// The three equivalent simplicity conditions for the ddp-algebra of a poset.
#[pyfunction]
fn ddp_simplicity(py: Python<'_>, member: Document) -> PyResult<Py<PyAny>> {
    let p = corpus::poset_of(&member.inner).map_err(err)?;
    let t = ddp::ddp_simplicity_triple(&p, &Guards::default()).map_err(err)?;
    to_py(py, &serde_json::to_value(t).expect("json"))
}

/// The refuting pair of maps for the even cycle space `C_m`.
#[pyfunction]
fn even_cycle_witness(py: Python<'_>, m: usize) -> PyResult<Py<PyAny>> {
    let w = primality::even_cycle_witness(m, &Guards::default()).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("m", w.m)?;
    d.set_item("base", w.base)?;
    d.set_item("phi1", w.pair.phi1.table().to_vec())?;
    d.set_item("phi2", w.pair.phi2.table().to_vec())?;
    d.set_item("members", w.members.iter().collect::<Vec<_>>())?;
    d.set_item("classification", to_py(py, &serde_json::to_value(&w.classification).expect("json"))?)?;
    Ok(d.into_any().unbind())
}

#[pyfunction]
fn corpus_names() -> Vec<String> {
    corpus::names()
}

/// Runs acceptance criterion `id` (1-12) and returns its result.
#[pyfunction]
fn acceptance_criterion(py: Python<'_>, id: usize) -> PyResult<Py<PyAny>> {
    if !(1..=acceptance::CRITERION_COUNT).contains(&id) {
        return Err(DualcheckError::new_err(format!("no criterion {id}")));
    }
    let r = py.detach(|| acceptance::run_criterion(id, &Guards::default()));
    to_py(py, &serde_json::to_value(r).expect("json"))
}

/// Runs the command line with `args` (without the program name) and returns
/// `(exit_code, output)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String) {
    let mut full = vec!["dualcheck".to_string()];
    full.extend(args.iter().cloned());
    match <Cli as clap::Parser>::try_parse_from(&full) {
        Ok(cli) => {
            let out = py.detach(|| run(&cli, args));
            (out.code, out.output)
        }
        Err(e) => (2, e.to_string()),
    }
}

#[pymodule]
fn dualcheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Document>()?;
    m.add("DualcheckError", m.py().get_type::<DualcheckError>())?;
    m.add("GuardExceeded", m.py().get_type::<GuardExceeded>())?;
    m.add_function(wrap_pyfunction!(check_quasi_primal, m)?)?;
    m.add_function(wrap_pyfunction!(check_semi_primal, m)?)?;
    m.add_function(wrap_pyfunction!(check_internal, m)?)?;
    m.add_function(wrap_pyfunction!(check_ddp, m)?)?;
    m.add_function(wrap_pyfunction!(ddp_simplicity, m)?)?;
    m.add_function(wrap_pyfunction!(even_cycle_witness, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_names, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
