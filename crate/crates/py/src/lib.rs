//! Python bindings. The module mirrors the command-line surface:
//! rule text in, plain lists and dicts out, with the same
//! propositional-or-first-order input detection.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use std::collections::BTreeSet;
use stratum_core::{
    aas_solve, check_safe, explain_candidate, faas_solve, ground_program, parse_fo_program,
    parse_program, query_atom, solve_one as core_solve_one, Engine, FoProgram, IncrementalSolver,
    KnowledgeBase, ModelSet, Nogood, Program, QueryMode, SolveOptions, StabilityVerdict,
    SuperGraph, DEFAULT_OMEGA_CAP,
};

enum Input {
    Propositional(Program),
    FirstOrder(FoProgram),
}

fn detect(text: &str) -> Result<Input, String> {
    match parse_program(text) {
        Ok(program) => Ok(Input::Propositional(program)),
        Err(e) if e.message.contains("not allowed in a propositional program") => {
            let program = parse_fo_program(text).map_err(|e| e.to_string())?;
            let violations = check_safe(&program.rules);
            if !violations.is_empty() {
                let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
                return Err(format!("unsafe program: {}", list.join("; ")));
            }
            Ok(Input::FirstOrder(program))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn propositional_image(text: &str) -> Result<Program, String> {
    Ok(match detect(text)? {
        Input::Propositional(program) => program,
        Input::FirstOrder(program) => ground_program(&program),
    })
}

fn options(engine: Option<&str>, strict_convert: bool, parallel: bool) -> Result<SolveOptions, String> {
    let engine = match engine {
        None | Some("auto") => Engine::Auto,
        Some("as1") => Engine::As1,
        Some("as2") => Engine::As2,
        Some("brute") => Engine::Brute,
        Some(other) => return Err(format!("unknown engine '{other}' (auto, as1, as2, brute)")),
    };
    Ok(SolveOptions { engine, strict_convert, parallel, ..SolveOptions::default() })
}

fn name_lists(kb: &KnowledgeBase, models: &ModelSet) -> Vec<Vec<String>> {
    models.true_name_sets(kb).into_iter().collect()
}

/// Names that the knowledge base never interned denote atoms that are
/// false everywhere, so a nogood listing one is always satisfied.
fn intern_nogoods(kb: &KnowledgeBase, names: &[Vec<String>]) -> Vec<Nogood> {
    names
        .iter()
        .filter_map(|group| {
            group
                .iter()
                .map(|n| kb.atom(n))
                .collect::<Option<BTreeSet<_>>>()
                .map(Nogood::new)
        })
        .collect()
}

fn value_error(message: String) -> PyErr {
    PyValueError::new_err(message)
}

/// All stable models as sorted lists of true atom names.
#[pyfunction]
#[pyo3(signature = (text, *, engine=None, strict_convert=false, parallel=false, nogoods=None))]
fn solve(
    py: Python<'_>,
    text: String,
    engine: Option<String>,
    strict_convert: bool,
    parallel: bool,
    nogoods: Option<Vec<Vec<String>>>,
) -> PyResult<Vec<Vec<String>>> {
    py.allow_threads(move || {
        let opts = options(engine.as_deref(), strict_convert, parallel)?;
        match detect(&text)? {
            Input::Propositional(program) => {
                let mut all = program.nogoods;
                all.extend(intern_nogoods(&program.kb, nogoods.as_deref().unwrap_or(&[])));
                let models =
                    aas_solve(&program.kb, &all, &opts).map_err(|e| e.to_string())?;
                Ok(name_lists(&program.kb, &models))
            }
            Input::FirstOrder(mut program) => {
                for group in nogoods.unwrap_or_default() {
                    program.nogoods.push(group.into_iter().collect());
                }
                let outcome = faas_solve(&program, &opts).map_err(|e| e.to_string())?;
                Ok(name_lists(&outcome.kb, &outcome.models))
            }
        }
    })
    .map_err(value_error)
}

/// One stable model (sorted true atom names), or None.
#[pyfunction]
fn solve_one(py: Python<'_>, text: String) -> PyResult<Option<Vec<String>>> {
    py.allow_threads(move || {
        let opts = SolveOptions::default();
        match detect(&text)? {
            Input::Propositional(program) => {
                let found = core_solve_one(&program.kb, &program.nogoods, &opts)
                    .map_err(|e| e.to_string())?;
                Ok(found.map(|m| program.kb.names_of(m.true_set().iter())))
            }
            Input::FirstOrder(program) => {
                let outcome = faas_solve(&program, &opts).map_err(|e| e.to_string())?;
                Ok(outcome
                    .models
                    .true_name_sets(&outcome.kb)
                    .into_iter()
                    .next())
            }
        }
    })
    .map_err(value_error)
}

/// Classification report: the Omega index, stratification, and the
/// per-component bounds.
#[pyfunction]
fn classify(py: Python<'_>, text: String) -> PyResult<Py<PyDict>> {
    let program = propositional_image(&text).map_err(value_error)?;
    let class = stratum_core::classify(&program.kb, DEFAULT_OMEGA_CAP);
    let sg = SuperGraph::analyze(&program.kb);
    let doc = PyDict::new_bound(py);
    doc.set_item("omega", class.t)?;
    doc.set_item("saturated", class.saturated)?;
    doc.set_item("stratified", class.stratified)?;
    let nodes = PyList::empty_bound(py);
    for (i, bound) in class.nodes.iter().enumerate() {
        let node = PyDict::new_bound(py);
        node.set_item("atoms", program.kb.names_of(sg.nodes()[i].atoms.iter()))?;
        node.set_item("k", bound.k)?;
        node.set_item("c", bound.c)?;
        node.set_item("v", bound.v)?;
        node.set_item("t", bound.t)?;
        node.set_item("cut", program.kb.names_of(bound.cut.iter()))?;
        nodes.append(node)?;
    }
    doc.set_item("nodes", nodes)?;
    Ok(doc.into())
}

/// Whether the given true-atom set is a stable model.
#[pyfunction]
fn is_stable(text: String, candidate: Vec<String>) -> PyResult<bool> {
    let program = propositional_image(&text).map_err(value_error)?;
    let mut atoms = BTreeSet::new();
    for name in &candidate {
        match program.kb.atom(name) {
            Some(a) => {
                atoms.insert(a);
            }
            None => return Err(value_error(format!("unknown atom '{name}' in candidate"))),
        }
    }
    Ok(matches!(
        explain_candidate(&program.kb, &atoms),
        StabilityVerdict::Stable
    ))
}

/// Cautious or brave entailment of one atom, with traversal statistics.
#[pyfunction]
#[pyo3(signature = (text, atom, mode="cautious"))]
fn query(py: Python<'_>, text: String, atom: String, mode: &str) -> PyResult<Py<PyDict>> {
    let mode = match mode {
        "cautious" => QueryMode::Cautious,
        "brave" => QueryMode::Brave,
        other => return Err(value_error(format!("unknown mode '{other}' (cautious, brave)"))),
    };
    let program = propositional_image(&text).map_err(value_error)?;
    let atom_id = program
        .kb
        .atom(&atom)
        .ok_or_else(|| value_error(format!("unknown atom '{atom}'")))?;
    let answer = query_atom(
        &program.kb,
        atom_id,
        mode,
        &program.nogoods,
        &SolveOptions::default(),
    )
    .map_err(|e| value_error(e.to_string()))?;
    let doc = PyDict::new_bound(py);
    doc.set_item("yes", answer.yes)?;
    doc.set_item("early_stop", answer.early_stop)?;
    doc.set_item("visited", answer.visited)?;
    doc.set_item("total_nodes", answer.total_nodes)?;
    Ok(doc.into())
}

/// Rule text of the propositional image (the identity on propositional
/// input, the grounding of first-order input).
#[pyfunction]
fn ground(text: String) -> PyResult<String> {
    let program = propositional_image(&text).map_err(value_error)?;
    let mut rendered = program.kb.render();
    for ng in &program.nogoods {
        let names = program.kb.names_of(ng.atoms().iter());
        rendered.push_str(&format!("#nogood {}.\n", names.join(" ")));
    }
    Ok(rendered)
}

/// Stateful solver that keeps per-component results across updates and
/// recomputes only what an added batch of rules touches.
#[pyclass]
struct Solver {
    inner: IncrementalSolver,
}

#[pymethods]
impl Solver {
    #[new]
    fn new(text: String) -> PyResult<Self> {
        let program = parse_program(&text).map_err(|e| value_error(e.to_string()))?;
        let mut inner = IncrementalSolver::new(program, SolveOptions::default());
        inner.resolve().map_err(|e| value_error(e.to_string()))?;
        Ok(Solver { inner })
    }

    /// Add rules, re-solve, and report the work done.
    fn update(&mut self, py: Python<'_>, text: String) -> PyResult<Py<PyDict>> {
        let (report, warnings) = self
            .inner
            .update_and_resolve(&text)
            .map_err(|e| value_error(e.to_string()))?;
        let doc = PyDict::new_bound(py);
        doc.set_item("models", name_lists(self.inner.kb(), &report.models))?;
        let recomputed: Vec<Vec<String>> = report
            .nodes
            .iter()
            .filter(|n| !n.cached)
            .map(|n| n.atoms.clone())
            .collect();
        doc.set_item("recomputed", recomputed)?;
        doc.set_item(
            "cached",
            report.nodes.iter().filter(|n| n.cached).count(),
        )?;
        doc.set_item(
            "warnings",
            warnings.iter().map(|w| w.message.clone()).collect::<Vec<_>>(),
        )?;
        Ok(doc.into())
    }

    /// Current stable models.
    fn models(&mut self, py: Python<'_>) -> PyResult<Vec<Vec<String>>> {
        let report = py
            .allow_threads(|| self.inner.resolve())
            .map_err(|e| value_error(e.to_string()))?;
        Ok(name_lists(self.inner.kb(), &report.models))
    }

    /// Rule text currently loaded.
    fn render(&self) -> String {
        self.inner.kb().render()
    }
}

#[pymodule]
fn stratum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_one, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(is_stable, m)?)?;
    m.add_function(wrap_pyfunction!(query, m)?)?;
    m.add_function(wrap_pyfunction!(ground, m)?)?;
    m.add_class::<Solver>()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_0: &str = "\
warm_blooded :- mammal.
live_on_land :- mammal, not ab1.
female :- mammal, not male.
male :- mammal, not female.
mammal :- dolphin.
ab1 :- dolphin.
mammal :- lion.
lion.
";

    fn with_module(check: impl FnOnce(Python<'_>, &Bound<'_, PyModule>)) {
        pyo3::prepare_freethreaded_python();
        Python::with_gil(|py| {
            let module = PyModule::new_bound(py, "stratum").unwrap();
            stratum(&module).unwrap();
            check(py, &module);
        });
    }

    #[test]
    fn solve_returns_both_models() {
        with_module(|_py, m| {
            let models: Vec<Vec<String>> =
                m.getattr("solve").unwrap().call1((PI_0,)).unwrap().extract().unwrap();
            assert_eq!(models.len(), 2);
            assert!(models[0].contains(&"female".to_string()));
            assert!(models[1].contains(&"male".to_string()));
        });
    }

    #[test]
    fn solve_handles_first_order_text() {
        with_module(|_py, m| {
            let models: Vec<Vec<String>> = m
                .getattr("solve")
                .unwrap()
                .call1(("p(X) :- q(X), not r(X).\nq(a).\nq(b).\nr(a).\n",))
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(models, [["p(b)", "q(a)", "q(b)", "r(a)"]]);
        });
    }

    #[test]
    fn solve_rejects_bad_input_with_value_error() {
        with_module(|py, m| {
            let err = m.getattr("solve").unwrap().call1(("a :- .\n",)).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
        });
    }

    #[test]
    fn classify_reports_the_omega_index() {
        with_module(|py, m| {
            let doc = m.getattr("classify").unwrap().call1((PI_0,)).unwrap();
            let omega: u64 = doc.get_item("omega").unwrap().extract().unwrap();
            assert_eq!(omega, 2);
            let stratified: bool = doc.get_item("stratified").unwrap().extract().unwrap();
            assert!(!stratified);
            let nodes = doc.get_item("nodes").unwrap();
            assert_eq!(nodes.len().unwrap(), 7);
            let _ = py;
        });
    }

    #[test]
    fn queries_and_stability_checks_answer() {
        with_module(|_py, m| {
            let ans = m
                .getattr("query")
                .unwrap()
                .call1((PI_0, "mammal", "cautious"))
                .unwrap();
            let yes: bool = ans.get_item("yes").unwrap().extract().unwrap();
            let early: bool = ans.get_item("early_stop").unwrap().extract().unwrap();
            assert!(yes && early);
            let stable: bool = m
                .getattr("is_stable")
                .unwrap()
                .call1((PI_0, vec!["lion", "mammal", "warm_blooded", "live_on_land", "female"]))
                .unwrap()
                .extract()
                .unwrap();
            assert!(stable);
            let unstable: bool = m
                .getattr("is_stable")
                .unwrap()
                .call1((PI_0, vec!["lion"]))
                .unwrap()
                .extract()
                .unwrap();
            assert!(!unstable);
        });
    }

    #[test]
    fn incremental_solver_reports_reuse() {
        with_module(|_py, m| {
            let solver = m.getattr("Solver").unwrap().call1((PI_0,)).unwrap();
            let report = solver.call_method1("update", ("penguin.\n",)).unwrap();
            let recomputed: Vec<Vec<String>> =
                report.get_item("recomputed").unwrap().extract().unwrap();
            let cached: usize = report.get_item("cached").unwrap().extract().unwrap();
            assert_eq!(recomputed, [["penguin"]]);
            assert_eq!(cached, 7);
            let models: Vec<Vec<String>> =
                report.get_item("models").unwrap().extract().unwrap();
            assert_eq!(models.len(), 2);
        });
    }
}
