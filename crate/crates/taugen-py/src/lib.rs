//! Python bindings for the taugen toolkit.
//!
//! Bit vectors cross the boundary as strings of '0'/'1' (most significant
//! bit first, matching the text format everywhere else); reports come back
//! as plain dicts mirroring the JSON the CLI writes.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use taugen::bits::BitString;
use taugen::circuit::Circuit;
use taugen::experiments;
use taugen::formula::FormulaError;
use taugen::generators::{
    self, BaseTable, Family, GadgetSpec, GeneratorInstance, ShiftFamily,
};
use taugen::random::{random_circuit as random_circuit_impl, seeded_rng};
use taugen::tau::{self, TOOLKIT_VERSION};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn bits(s: &str) -> PyResult<BitString> {
    s.parse().map_err(err)
}

fn bit_set(items: &[String]) -> PyResult<BTreeSet<BitString>> {
    items.iter().map(|s| bits(s)).collect()
}

fn shift_family(shifts: &[String]) -> PyResult<ShiftFamily> {
    let parsed: Vec<BitString> = shifts.iter().map(|s| bits(s)).collect::<PyResult<_>>()?;
    ShiftFamily::new(parsed).map_err(err)
}

fn json_to_py(py: Python<'_>, value: &Value) -> PyObject {
    match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py(py)
            }
        }
        Value::String(s) => s.into_py(py),
        Value::Array(items) => {
            PyList::new_bound(py, items.iter().map(|v| json_to_py(py, v))).into_py(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new_bound(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)).expect("dict insert");
            }
            dict.into_py(py)
        }
    }
}

/// A boolean circuit over named wires with AND/OR/XOR/NAND/NOT/CONST gates.
#[pyclass(name = "Circuit", module = "taugen_py")]
#[derive(Clone)]
struct PyCircuit {
    inner: Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Parse the text format: `inputs ...`, `gate w = OP a b`, `outputs ...`.
    #[staticmethod]
    #[pyo3(signature = (text, name=None))]
    fn parse(text: &str, name: Option<&str>) -> PyResult<PyCircuit> {
        let inner = match name {
            Some(name) => Circuit::parse_named(name, text),
            None => Circuit::parse(text),
        }
        .map_err(err)?;
        Ok(PyCircuit { inner })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn input_count(&self) -> usize {
        self.inner.input_count()
    }

    #[getter]
    fn output_count(&self) -> usize {
        self.inner.output_count()
    }

    #[getter]
    fn gate_count(&self) -> usize {
        self.inner.gate_count()
    }

    fn eval(&self, input: &str) -> PyResult<String> {
        let x = bits(input)?;
        Ok(self.inner.eval(&x).map_err(err)?.to_string())
    }

    /// All distinct output values, as sorted bit strings; capped by input width.
    #[pyo3(signature = (cap=20))]
    fn enumerate_range(&self, cap: usize) -> PyResult<Vec<String>> {
        let range = self.inner.enumerate_range(cap).map_err(err)?;
        Ok(range.into_iter().map(|b| b.to_string()).collect())
    }

    /// Pin some named inputs to constants; survivors keep their order.
    fn substitute_constants(&self, assignment: BTreeMap<String, bool>) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: self.inner.substitute_constants(&assignment).map_err(err)? })
    }

    /// Duplicate the non-shared input block `copies` times, sharing the
    /// first `shared` inputs across all copies.
    fn replicate_shared(&self, shared: usize, copies: usize) -> PyResult<PyCircuit> {
        Ok(PyCircuit { inner: self.inner.replicate_shared(shared, copies).map_err(err)? })
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(name={:?}, inputs={}, outputs={}, gates={})",
            self.inner.name,
            self.inner.input_count(),
            self.inner.output_count(),
            self.inner.gate_count()
        )
    }
}

/// A constructed generator: a circuit plus the parameters that produced it.
#[pyclass(name = "Generator", module = "taugen_py")]
#[derive(Clone)]
struct PyGenerator {
    inner: GeneratorInstance,
}

#[pymethods]
impl PyGenerator {
    #[getter]
    fn circuit(&self) -> PyCircuit {
        PyCircuit { inner: self.inner.circuit.clone() }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.as_str()
    }

    #[getter]
    fn params(&self) -> BTreeMap<String, String> {
        self.inner.params.clone()
    }

    #[getter]
    fn stretching(&self) -> bool {
        self.inner.stretching
    }

    fn eval(&self, input: &str) -> PyResult<String> {
        let x = bits(input)?;
        if x.len() != self.inner.n {
            return Err(err(format!(
                "input width {} does not match generator width {}",
                x.len(),
                self.inner.n
            )));
        }
        Ok(self.inner.eval(&x).to_string())
    }

    fn __repr__(&self) -> String {
        format!(
            "Generator(family={:?}, n={}, m={}, stretching={})",
            self.inner.family.as_str(),
            self.inner.n,
            self.inner.m,
            if self.inner.stretching { "True" } else { "False" }
        )
    }
}

/// Wrap an arbitrary circuit as a generator instance (family "custom").
#[pyfunction]
fn custom_generator(circuit: &PyCircuit) -> PyGenerator {
    let c = circuit.inner.clone();
    let (n, m) = (c.input_count(), c.output_count());
    PyGenerator {
        inner: GeneratorInstance {
            circuit: c,
            n,
            m,
            family: Family::Custom,
            params: BTreeMap::new(),
            stretching: m > n,
        },
    }
}

/// Truth-table generator: input encodes a k-ary truth table plus a point,
/// output is the table padded with its value at that point.
#[pyfunction]
fn tt_generator(k: usize, s: usize) -> PyResult<PyGenerator> {
    Ok(PyGenerator { inner: generators::tt_generator(k, s).map_err(err)? })
}

fn gadget_spec(f: &PyCircuit, k: usize) -> PyResult<GadgetSpec> {
    let n = f.inner.input_count();
    let ell = n
        .checked_sub(k)
        .filter(|ell| *ell >= 1)
        .ok_or_else(|| err(format!("gadget needs more than k={} inputs, got {}", k, n)))?;
    GadgetSpec::new(f.inner.clone(), k, ell).map_err(err)
}

/// Gadget generator: share the first `n - k` inputs of `f` across `n - k + 1`
/// copies, each copy taking its own k-bit block.
#[pyfunction]
fn gadget_generator(f: &PyCircuit, k: usize) -> PyResult<PyGenerator> {
    Ok(PyGenerator { inner: generators::gadget_generator(&gadget_spec(f, k)?) })
}

/// Gadget generator built from the universal circuit over k-input,
/// s-gate encodings, so the shared block selects the gadget function.
#[pyfunction]
fn universal_gadget(k: usize, s: usize) -> PyResult<PyGenerator> {
    let spec = generators::universal_gadget(k, s).map_err(err)?;
    Ok(PyGenerator { inner: generators::gadget_generator(&spec) })
}

/// XOR a base generator's output with one of the given shifts, selected by
/// extra index inputs; requires the base to keep stretching afterwards.
#[pyfunction]
fn shifted_generator(base: &PyGenerator, shifts: Vec<String>) -> PyResult<PyGenerator> {
    let family = shift_family(&shifts)?;
    Ok(PyGenerator {
        inner: generators::shifted_generator(&base.inner, &family).map_err(err)?,
    })
}

/// The combinatorial design behind the hard-function generator: r subsets
/// of [q^2], each of size q, pairwise overlapping in at most d - 1 points.
#[pyfunction]
fn nw_design(q: usize, d: usize, r: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(generators::nw_design(q, d, r).map_err(err)?.sets().to_vec())
}

fn base_table(name: &str, q: usize, seed: Option<u64>) -> PyResult<BaseTable> {
    match name {
        "parity" => Ok(BaseTable::parity(q)),
        "majority" => Ok(BaseTable::majority(q)),
        "const0" => Ok(BaseTable::constant(q, false)),
        "const1" => Ok(BaseTable::constant(q, true)),
        "random" => {
            let seed = seed.ok_or_else(|| err("base 'random' requires a seed"))?;
            Ok(BaseTable::random(q, &mut seeded_rng(seed)))
        }
        other => Err(err(format!(
            "unknown base table {:?} (expected parity, majority, const0, const1, random)",
            other
        ))),
    }
}

/// Design-based generator: output bit i applies the base table to the q
/// seed bits selected by set i of the design.
#[pyfunction]
#[pyo3(signature = (q, d, r=None, base="parity", seed=None))]
fn nw_generator(
    q: usize,
    d: usize,
    r: Option<usize>,
    base: &str,
    seed: Option<u64>,
) -> PyResult<PyGenerator> {
    let r = match r {
        Some(r) => r,
        None => q
            .checked_pow(d as u32)
            .ok_or_else(|| err(format!("q^d overflows for q={}, d={}", q, d)))?,
    };
    let design = generators::nw_design(q, d, r).map_err(err)?;
    let table = base_table(base, q, seed)?;
    Ok(PyGenerator { inner: generators::nw_generator(&design, &table, r).map_err(err)? })
}

/// DIMACS CNF whose unsatisfiability certifies that `b` avoids the range.
#[pyfunction]
#[pyo3(signature = (circuit, b, family="custom"))]
fn tau_dimacs(circuit: &PyCircuit, b: &str, family: &str) -> PyResult<String> {
    let b = bits(b)?;
    let mut instance = tau::tau_formula(
        &circuit.inner,
        &b,
        taugen::formula::Namespace::Root,
        taugen::formula::CopyTag::Shared,
    )
    .map_err(err)?;
    instance.cnf.provenance.family = family.to_string();
    Ok(tau::emit_dimacs(&instance.cnf))
}

/// The tautology candidate itself, in prefix notation.
#[pyfunction]
fn tau_text(circuit: &PyCircuit, b: &str) -> PyResult<String> {
    let b = bits(b)?;
    let instance = tau::tau_formula(
        &circuit.inner,
        &b,
        taugen::formula::Namespace::Root,
        taugen::formula::CopyTag::Shared,
    )
    .map_err(err)?;
    Ok(instance.tau.to_string())
}

/// Check all three verdicts against each other: range membership by brute
/// force, tautology of the formula, satisfiability of the CNF.
#[pyfunction]
#[pyo3(signature = (circuit, b, range_cap=20, atom_cap=22))]
fn verify(
    py: Python<'_>,
    circuit: &PyCircuit,
    b: &str,
    range_cap: usize,
    atom_cap: usize,
) -> PyResult<PyObject> {
    let b = bits(b)?;
    let report =
        tau::verify_tau_capped(&circuit.inner, &b, range_cap, atom_cap).map_err(err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("in_range", report.in_range)?;
    dict.set_item("witness", report.witness.map(|w| w.to_string()))?;
    dict.set_item("tautology", report.tautology)?;
    dict.set_item("cnf_satisfiable", report.cnf_satisfiable)?;
    dict.set_item("consistent", report.consistent)?;
    Ok(dict.into_py(py))
}

/// Exact covering check: is every m-bit point in some shift of the set?
#[pyfunction]
#[pyo3(signature = (set, shifts, sigma=None))]
fn sipser_cover_check(
    py: Python<'_>,
    set: Vec<String>,
    shifts: Vec<String>,
    sigma: Option<usize>,
) -> PyResult<PyObject> {
    let set = bit_set(&set)?;
    let family = shift_family(&shifts)?;
    let report = experiments::sipser_cover_check(&set, &family, sigma).map_err(err)?;
    Ok(json_to_py(py, &report.to_json()))
}

/// Monte Carlo estimate of the probability that `shift_count` uniformly
/// random shifts of the set cover everything; deterministic in the seed.
#[pyfunction]
#[pyo3(signature = (set, shift_count, trials, seed, m, sigma=None))]
fn cover_probability(
    py: Python<'_>,
    set: Vec<String>,
    shift_count: usize,
    trials: usize,
    seed: u64,
    m: usize,
    sigma: Option<usize>,
) -> PyResult<PyObject> {
    let set = bit_set(&set)?;
    let report =
        experiments::cover_probability(&set, shift_count, trials, seed, m, sigma)
            .map_err(err)?;
    Ok(json_to_py(py, &report.to_json()))
}

/// Does the shifted instance at target `a`, with the index pinned to `j`,
/// project to exactly the base instance at target `a xor shift_j`?
#[pyfunction]
fn shift_translation_check(
    base: &PyGenerator,
    shifts: Vec<String>,
    a: &str,
    j: usize,
) -> PyResult<bool> {
    let family = shift_family(&shifts)?;
    let a = bits(a)?;
    experiments::shift_translation_check(&base.inner, &family, &a, j).map_err(err)
}

fn disjunction_report(
    py: Python<'_>,
    disjunction: experiments::TauDisjunction,
    atom_cap: usize,
) -> PyResult<PyObject> {
    let tautology = match disjunction.disjunction.is_tautology_by_parts(atom_cap) {
        Ok(v) => Some(v),
        Err(FormulaError::TooManyAtoms { .. }) => None,
        Err(e) => return Err(err(e)),
    };
    let dict = PyDict::new_bound(py);
    for (k, v) in disjunction.to_json().as_object().into_iter().flatten() {
        dict.set_item(k, json_to_py(py, v))?;
    }
    dict.set_item("tautology", tautology)?;
    Ok(dict.into_py(py))
}

/// Disjunction of tautology candidates for every value in the range of `h`;
/// it holds exactly when the gadget generator's range escapes that range.
#[pyfunction]
#[pyo3(signature = (h, gadget, range_cap=20, atom_cap=22))]
fn axiom_disjunction(
    py: Python<'_>,
    h: &PyGenerator,
    gadget: &PyGenerator,
    range_cap: usize,
    atom_cap: usize,
) -> PyResult<PyObject> {
    let disjunction =
        experiments::axiom_disjunction(&h.inner, &gadget.inner, range_cap).map_err(err)?;
    disjunction_report(py, disjunction, atom_cap)
}

/// Disjunction of tautology candidates over an explicit target list.
#[pyfunction]
#[pyo3(signature = (g, targets, atom_cap=22))]
fn vee_hard_disjunction(
    py: Python<'_>,
    g: &PyGenerator,
    targets: Vec<String>,
    atom_cap: usize,
) -> PyResult<PyObject> {
    let targets: Vec<BitString> = targets.iter().map(|s| bits(s)).collect::<PyResult<_>>()?;
    let disjunction =
        experiments::vee_hard_disjunction(&g.inner, &targets).map_err(err)?;
    disjunction_report(py, disjunction, atom_cap)
}

/// Substitute the shared block `c` into the gadget instance at target `b`
/// and verify the result decomposes into independent per-copy instances.
#[pyfunction]
#[pyo3(signature = (f, k, c, b, atom_cap=22))]
fn gadget_substitute_and_decompose(
    py: Python<'_>,
    f: &PyCircuit,
    k: usize,
    c: &str,
    b: &str,
    atom_cap: usize,
) -> PyResult<PyObject> {
    let spec = gadget_spec(f, k)?;
    let c = bits(c)?;
    let b = bits(b)?;
    let report = experiments::gadget_substitute_and_decompose(&spec, &c, &b, atom_cap)
        .map_err(err)?;
    Ok(json_to_py(py, &report.to_json()))
}

/// Lexicographically smallest value in the range of `h` missed by `g`,
/// with its re-verified preimage under `h`; witness may be absent.
#[pyfunction]
#[pyo3(signature = (h, g, range_cap=20))]
fn find_outside_range(
    py: Python<'_>,
    h: &PyGenerator,
    g: &PyGenerator,
    range_cap: usize,
) -> PyResult<PyObject> {
    let report = experiments::find_outside_range(&h.inner, &g.inner, range_cap).map_err(err)?;
    Ok(json_to_py(py, &report.to_json()))
}

/// Seeded random circuit over binary gates, NOT, and constants.
#[pyfunction]
fn random_circuit(seed: u64, inputs: usize, gates: usize, outputs: usize) -> PyResult<PyCircuit> {
    if inputs == 0 || outputs == 0 {
        return Err(err("random circuit needs at least one input and one output"));
    }
    let mut rng = seeded_rng(seed);
    Ok(PyCircuit { inner: random_circuit_impl(&mut rng, inputs, gates, outputs) })
}

#[pymodule]
fn taugen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyGenerator>()?;
    m.add_function(wrap_pyfunction!(custom_generator, m)?)?;
    m.add_function(wrap_pyfunction!(tt_generator, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_generator, m)?)?;
    m.add_function(wrap_pyfunction!(universal_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_generator, m)?)?;
    m.add_function(wrap_pyfunction!(nw_design, m)?)?;
    m.add_function(wrap_pyfunction!(nw_generator, m)?)?;
    m.add_function(wrap_pyfunction!(tau_dimacs, m)?)?;
    m.add_function(wrap_pyfunction!(tau_text, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sipser_cover_check, m)?)?;
    m.add_function(wrap_pyfunction!(cover_probability, m)?)?;
    m.add_function(wrap_pyfunction!(shift_translation_check, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_disjunction, m)?)?;
    m.add_function(wrap_pyfunction!(vee_hard_disjunction, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_substitute_and_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(find_outside_range, m)?)?;
    m.add_function(wrap_pyfunction!(random_circuit, m)?)?;
    m.add("__version__", TOOLKIT_VERSION)?;
    Ok(())
}
