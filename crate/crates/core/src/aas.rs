//! Component-wise stable-model solving.
//!
//! The solver walks the component DAG bottom-up. At each node it forms
//! the consistent product of the children's model sets, specializes the
//! node's rules against each combined child model ([`convert`]), runs a
//! flat enumerator on the small specialized program, and re-combines.
//! Model sets are stored total over the node's subtree atoms, so the
//! product's consistency check is a plain comparison on shared atoms.
//!
//! On top of the traversal sit nogood filtering (applied at the
//! earliest node whose subtree covers the nogood), query answering with
//! an early stop, a backtracking single-model mode, and an incremental
//! solver that caches per-node model sets keyed by a content signature
//! of the node's rooted subgraph.

use crate::enumerate::{enumerate_rules, Engine, TooManyGuesses};
use crate::graphs::{classify_graph, Classification, NodeBound, SuperGraph, DEFAULT_OMEGA_CAP};
use crate::kb::{Atom, KnowledgeBase, ModelSet, Nogood, PartialInterpretation, Rule};
use crate::parse::{parse_program_into, ParseError, Program, Warning};
use crate::semantics::DEFAULT_BRUTE_CAP;
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use thiserror::Error;

/// Solver configuration shared by every entry point.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Per-node enumerator: `Auto` picks by the smaller static guess
    /// exponent, anything else forces one engine everywhere.
    pub engine: Engine,
    /// Keep rules whose positive body holds an atom the child context
    /// already made false. They are inert; dropping them (the default)
    /// keeps per-node programs small.
    pub strict_convert: bool,
    /// Evaluate contexts and guesses concurrently. Output is identical
    /// to the serial run.
    pub parallel: bool,
    /// Saturation cap for classification products.
    pub omega_cap: u64,
    /// Largest per-node domain the brute-force engine accepts.
    pub brute_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            engine: Engine::Auto,
            strict_convert: false,
            parallel: false,
            omega_cap: DEFAULT_OMEGA_CAP,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

/// Solving failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    TooManyGuesses(#[from] TooManyGuesses),
    #[error("brute-force node domain of {atoms} atoms exceeds the cap of {cap}")]
    BruteCap { atoms: usize, cap: usize },
}

/// Specializes the rules of a component against a combined child model.
///
/// A rule dies when `m` makes one of its negative atoms true. True
/// positive atoms are erased; negative literals on atoms `m` made false
/// are erased unless the atom belongs to `s`, whose literals are the
/// node's own business. When `strict` is false, rules whose positive
/// body contains an atom false in `m` die too: they can never fire.
pub fn convert(
    rules: &[Rule],
    m: &PartialInterpretation,
    s: &BTreeSet<Atom>,
    strict: bool,
) -> Vec<Rule> {
    let mut out = Vec::with_capacity(rules.len());
    for rule in rules {
        if rule.neg().iter().any(|&a| m.is_true(a)) {
            continue;
        }
        if !strict && rule.pos().iter().any(|&a| m.is_false(a)) {
            continue;
        }
        let pos: Vec<Atom> = rule
            .pos()
            .iter()
            .copied()
            .filter(|&a| !m.is_true(a))
            .collect();
        let neg: Vec<Atom> = rule
            .neg()
            .iter()
            .copied()
            .filter(|&a| !(m.is_false(a) && !s.contains(&a)))
            .collect();
        out.push(Rule::new(rule.head(), pos, neg));
    }
    out
}

/// Consistent portion of the Cartesian product of model sets: one model
/// from each input, merged; combinations disagreeing on a shared atom
/// are dropped. No inputs yield the single empty model; any empty input
/// yields the empty set.
pub fn cartes_prod(sets: &[&ModelSet]) -> ModelSet {
    let mut domain: BTreeSet<Atom> = BTreeSet::new();
    for set in sets {
        domain.extend(set.domain().iter().copied());
    }
    if sets.iter().any(|s| s.is_empty()) {
        return ModelSet::empty(domain);
    }
    if sets.iter().all(|s| s.len() == 1) {
        // Merge in place: one pass, no intermediate clones, so chains
        // of single-model components stay linear.
        let mut acc = PartialInterpretation::new();
        for set in sets {
            for (atom, value) in set.models()[0].assigned() {
                match acc.truth(atom) {
                    crate::kb::Truth::Unknown => acc.assign(atom, value),
                    t => {
                        if (t == crate::kb::Truth::True) != value {
                            return ModelSet::empty(domain);
                        }
                    }
                }
            }
        }
        return ModelSet::new(domain, vec![acc]);
    }
    let mut acc: Vec<PartialInterpretation> = vec![PartialInterpretation::new()];
    for set in sets {
        let mut next = Vec::with_capacity(acc.len() * set.len());
        for base in &acc {
            for model in set.iter() {
                if let Ok(merged) = base.combine(model) {
                    next.push(merged);
                }
            }
        }
        if next.is_empty() {
            return ModelSet::empty(domain);
        }
        acc = next;
    }
    ModelSet::new(domain, acc)
}

/// Per-node result of a traversal. The model set's domain is the
/// node's subtree atom set.
#[derive(Debug)]
struct NodeData {
    models: ModelSet,
    engine: Engine,
    contexts: usize,
    anchored_nogoods: usize,
}

/// 128-bit FNV-1a over structured words.
#[derive(Clone, Copy)]
struct Fnv128(u128);

impl Fnv128 {
    fn new() -> Self {
        Fnv128(0x6c62272e07bb014262b821756295c58d)
    }

    fn write_u64(&mut self, v: u64) {
        for byte in v.to_le_bytes() {
            self.0 = (self.0 ^ byte as u128).wrapping_mul(0x0000000001000000000000000000013B);
        }
    }

    fn write_u128(&mut self, v: u128) {
        self.write_u64(v as u64);
        self.write_u64((v >> 64) as u64);
    }

    fn finish(self) -> u128 {
        self.0
    }
}

/// Content signature of a node's rooted subgraph: its atoms, its rules,
/// and its children's signatures (order-independent). Two nodes share a
/// signature exactly when their entire rooted subgraphs match, which is
/// the cache-validity condition for reusing a model set.
fn node_signature(kb: &KnowledgeBase, sg: &SuperGraph, node: usize, sigs: &[u128]) -> u128 {
    let data = &sg.nodes()[node];
    let mut h = Fnv128::new();
    h.write_u64(data.atoms.len() as u64);
    for &a in &data.atoms {
        h.write_u64(a.index() as u64);
    }
    h.write_u64(data.rules.len() as u64);
    for &ri in &data.rules {
        let rule = &kb.rules()[ri];
        h.write_u64(rule.head().index() as u64);
        h.write_u64(rule.pos().len() as u64);
        for &a in rule.pos() {
            h.write_u64(a.index() as u64);
        }
        h.write_u64(rule.neg().len() as u64);
        for &a in rule.neg() {
            h.write_u64(a.index() as u64);
        }
    }
    let mut child_sigs: Vec<u128> = data.children.iter().map(|&c| sigs[c]).collect();
    child_sigs.sort_unstable();
    h.write_u64(child_sigs.len() as u64);
    for sig in child_sigs {
        h.write_u128(sig);
    }
    h.finish()
}

fn node_engine(opts: &SolveOptions, bound: &NodeBound) -> Engine {
    match opts.engine {
        Engine::Auto => {
            if bound.k < bound.c {
                Engine::As1
            } else {
                Engine::As2
            }
        }
        forced => forced,
    }
}

/// Stable models of one node's rules under a single child context,
/// combined back with the context and totalized over the subtree.
fn context_models(
    pi_s: &[Rule],
    context: &PartialInterpretation,
    node_atoms: &BTreeSet<Atom>,
    subtree: &BTreeSet<Atom>,
    engine: Engine,
    opts: &SolveOptions,
) -> Result<Vec<PartialInterpretation>, SolveError> {
    let converted = convert(pi_s, context, node_atoms, opts.strict_convert);
    let mut domain = node_atoms.clone();
    for rule in &converted {
        domain.extend(rule.atoms());
    }
    if matches!(engine, Engine::Brute) && domain.len() > opts.brute_cap {
        return Err(SolveError::BruteCap {
            atoms: domain.len(),
            cap: opts.brute_cap,
        });
    }
    let (local, _) = enumerate_rules(&converted, &domain, engine, opts.parallel)?;
    Ok(local
        .iter()
        .filter_map(|lm| context.combine(lm).ok())
        .map(|m| m.totalized_over(subtree))
        .collect())
}

const CONTEXT_PARALLEL_THRESHOLD: usize = 16;

/// Shared traversal driver.
struct Traversal<'a> {
    kb: &'a KnowledgeBase,
    sg: &'a SuperGraph,
    class: &'a Classification,
    opts: &'a SolveOptions,
    nogoods: &'a [Nogood],
    /// Filter models at the earliest covering node instead of only at
    /// the end. Mutually exclusive with caching.
    anchor_nogoods: bool,
    cache: Option<&'a HashMap<u128, Arc<NodeData>>>,
}

struct RunOutcome {
    /// Per node: the data plus whether it came from the cache.
    computed: Vec<Option<(Arc<NodeData>, bool)>>,
    /// Node signatures, for rebuilding the cache.
    sigs: Vec<u128>,
    /// Some node produced no models; everything after it was skipped.
    early_empty: bool,
    final_models: ModelSet,
    visited: usize,
}

impl<'a> Traversal<'a> {
    /// Visits `visit` (topologically closed, ascending). The final
    /// model set is the consistent product over the visited nodes with
    /// no visited successor, filtered by the unanchored nogoods.
    fn run(&self, visit: &[usize]) -> Result<RunOutcome, SolveError> {
        debug_assert!(!(self.anchor_nogoods && self.cache.is_some()));
        let n = self.sg.node_count();
        let mut computed: Vec<Option<(Arc<NodeData>, bool)>> = (0..n).map(|_| None).collect();
        let mut sigs = vec![0u128; n];
        let mut pending: Vec<&Nogood> = self.nogoods.iter().collect();
        let mut early_empty = false;
        let mut visited = 0usize;
        for &i in visit {
            let node = &self.sg.nodes()[i];
            sigs[i] = node_signature(self.kb, self.sg, i, &sigs);
            visited += 1;
            let mut subtree = node.atoms.clone();
            for &c in &node.children {
                let (child, _) = computed[c].as_ref().expect("children visited first");
                subtree.extend(child.models.domain().iter().copied());
            }
            let anchored_here: Vec<&Nogood> = if self.anchor_nogoods {
                let (here, rest) = pending
                    .into_iter()
                    .partition(|ng| ng.atoms().is_subset(&subtree));
                pending = rest;
                here
            } else {
                Vec::new()
            };
            if let Some(hit) = self.cache.and_then(|c| c.get(&sigs[i])) {
                debug_assert!(anchored_here.is_empty());
                let empty = hit.models.is_empty();
                computed[i] = Some((hit.clone(), true));
                if empty {
                    early_empty = true;
                    break;
                }
                continue;
            }
            let child_sets: Vec<&ModelSet> = node
                .children
                .iter()
                .map(|&c| &computed[c].as_ref().expect("children visited first").0.models)
                .collect();
            let base = cartes_prod(&child_sets);
            let engine = node_engine(self.opts, &self.class.nodes[i]);
            let pi_s: Vec<Rule> = node.rules.iter().map(|&ri| self.kb.rules()[ri].clone()).collect();
            let eval = |context: &PartialInterpretation| {
                context_models(&pi_s, context, &node.atoms, &subtree, engine, self.opts)
            };
            let per_context: Vec<Vec<PartialInterpretation>> =
                if self.opts.parallel && base.len() >= CONTEXT_PARALLEL_THRESHOLD {
                    base.models()
                        .par_iter()
                        .map(eval)
                        .collect::<Result<_, _>>()?
                } else {
                    base.models()
                        .iter()
                        .map(eval)
                        .collect::<Result<_, _>>()?
                };
            let mut models: Vec<PartialInterpretation> =
                per_context.into_iter().flatten().collect();
            if !anchored_here.is_empty() {
                models.retain(|m| anchored_here.iter().all(|ng| ng.complies(m)));
            }
            let data = Arc::new(NodeData {
                models: ModelSet::new(subtree, models),
                engine,
                contexts: base.len(),
                anchored_nogoods: anchored_here.len(),
            });
            let empty = data.models.is_empty();
            computed[i] = Some((data, false));
            if empty {
                early_empty = true;
                break;
            }
        }
        let final_models = if early_empty {
            ModelSet::empty(self.kb.atom_set())
        } else {
            let visit_set: BTreeSet<usize> = visit.iter().copied().collect();
            let tops: Vec<&ModelSet> = visit
                .iter()
                .copied()
                .filter(|&i| {
                    !self.sg.nodes()[i]
                        .succs
                        .iter()
                        .any(|s| visit_set.contains(s))
                })
                .map(|i| &computed[i].as_ref().expect("visited").0.models)
                .collect();
            let product = cartes_prod(&tops);
            let models = product
                .iter()
                .filter(|m| pending.iter().all(|ng| ng.complies(m)))
                .cloned()
                .collect();
            ModelSet::new(product.domain().clone(), models)
        };
        Ok(RunOutcome {
            computed,
            sigs,
            early_empty,
            final_models,
            visited,
        })
    }
}

/// Statistics for one component node after a solve.
#[derive(Debug, Clone)]
pub struct NodeReport {
    /// Component atoms, sorted by name.
    pub atoms: Vec<String>,
    pub k: usize,
    pub c: usize,
    /// Greedy negative-cycle cut, sorted by name.
    pub cut: Vec<String>,
    pub v: u64,
    pub t: u64,
    pub saturated: bool,
    /// Engine used, when the node was visited.
    pub engine: Option<Engine>,
    /// Child-model combinations evaluated.
    pub contexts: usize,
    /// Models stored at the node.
    pub models: usize,
    /// Reused from the incremental cache.
    pub cached: bool,
    /// Nogoods anchored (applied) at this node.
    pub nogoods: usize,
    pub visited: bool,
}

/// Full solve outcome: models plus classification and per-node stats.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub models: ModelSet,
    pub t: u64,
    pub saturated: bool,
    pub stratified: bool,
    pub visited: usize,
    pub total_nodes: usize,
    /// One entry per component node, topological order.
    pub nodes: Vec<NodeReport>,
}

fn build_report(
    kb: &KnowledgeBase,
    sg: &SuperGraph,
    class: &Classification,
    outcome: &RunOutcome,
) -> SolveReport {
    let nodes = (0..sg.node_count())
        .map(|i| {
            let bound = &class.nodes[i];
            let data = outcome.computed[i].as_ref();
            NodeReport {
                atoms: kb.names_of(sg.nodes()[i].atoms.iter()),
                k: bound.k,
                c: bound.c,
                cut: kb.names_of(bound.cut.iter()),
                v: bound.v,
                t: bound.t,
                saturated: bound.saturated,
                engine: data.map(|(d, _)| d.engine),
                contexts: data.map_or(0, |(d, _)| d.contexts),
                models: data.map_or(0, |(d, _)| d.models.len()),
                cached: data.is_some_and(|(_, cached)| *cached),
                nogoods: data.map_or(0, |(d, _)| d.anchored_nogoods),
                visited: data.is_some(),
            }
        })
        .collect();
    SolveReport {
        models: outcome.final_models.clone(),
        t: class.t,
        saturated: class.saturated,
        stratified: class.stratified,
        visited: outcome.visited,
        total_nodes: sg.node_count(),
        nodes,
    }
}

/// All stable models, with classification and per-node statistics.
pub fn aas_solve_with_report(
    kb: &KnowledgeBase,
    nogoods: &[Nogood],
    opts: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let sg = SuperGraph::analyze(kb);
    let class = classify_graph(kb, &sg, opts.omega_cap);
    let traversal = Traversal {
        kb,
        sg: &sg,
        class: &class,
        opts,
        nogoods,
        anchor_nogoods: true,
        cache: None,
    };
    let visit: Vec<usize> = (0..sg.node_count()).collect();
    let outcome = traversal.run(&visit)?;
    debug_assert!(outcome.early_empty || *outcome.final_models.domain() == kb.atom_set());
    Ok(build_report(kb, &sg, &class, &outcome))
}

/// All stable models of `kb` that comply with every nogood.
pub fn aas_solve(
    kb: &KnowledgeBase,
    nogoods: &[Nogood],
    opts: &SolveOptions,
) -> Result<ModelSet, SolveError> {
    aas_solve_with_report(kb, nogoods, opts).map(|r| r.models)
}

/// One stable model complying with the nogoods, by depth-first choice
/// of one model per node with backtracking; `None` if there is none.
pub fn solve_one(
    kb: &KnowledgeBase,
    nogoods: &[Nogood],
    opts: &SolveOptions,
) -> Result<Option<PartialInterpretation>, SolveError> {
    let sg = SuperGraph::analyze(kb);
    let class = classify_graph(kb, &sg, opts.omega_cap);
    let n = sg.node_count();
    // Subtree atom sets and nogood anchors, as in the full traversal.
    let mut subtrees: Vec<BTreeSet<Atom>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = sg.nodes()[i].atoms.clone();
        for &c in &sg.nodes()[i].children {
            s.extend(subtrees[c].iter().copied());
        }
        subtrees.push(s);
    }
    let mut anchored: Vec<Vec<&Nogood>> = vec![Vec::new(); n];
    let mut leftover: Vec<&Nogood> = Vec::new();
    'place: for ng in nogoods {
        for i in 0..n {
            if ng.atoms().is_subset(&subtrees[i]) {
                anchored[i].push(ng);
                continue 'place;
            }
        }
        leftover.push(ng);
    }
    struct Frame {
        node: usize,
        options: Vec<PartialInterpretation>,
        next: usize,
    }
    let mut chosen: Vec<Option<PartialInterpretation>> = vec![None; n];
    let mut stack: Vec<Frame> = Vec::new();
    let mut i = 0usize;
    loop {
        if i < n {
            let node = &sg.nodes()[i];
            // Child choices always merge: each extends the same choice
            // at every shared descendant node.
            let mut context = PartialInterpretation::new();
            for &c in &node.children {
                context = context
                    .combine(chosen[c].as_ref().expect("children chosen first"))
                    .expect("child choices consistent");
            }
            let engine = node_engine(opts, &class.nodes[i]);
            let pi_s: Vec<Rule> = node.rules.iter().map(|&ri| kb.rules()[ri].clone()).collect();
            let mut options =
                context_models(&pi_s, &context, &node.atoms, &subtrees[i], engine, opts)?;
            options.retain(|m| anchored[i].iter().all(|ng| ng.complies(m)));
            options.sort();
            options.dedup();
            stack.push(Frame {
                node: i,
                options,
                next: 0,
            });
        } else {
            let mut m = PartialInterpretation::new();
            for s in sg.sinks() {
                m = m
                    .combine(chosen[s].as_ref().expect("sink chosen"))
                    .expect("sink choices consistent");
            }
            if leftover.iter().all(|ng| ng.complies(&m)) {
                return Ok(Some(m.totalized_over(&kb.atom_set())));
            }
        }
        loop {
            match stack.last_mut() {
                None => return Ok(None),
                Some(f) if f.next < f.options.len() => {
                    chosen[f.node] = Some(f.options[f.next].clone());
                    f.next += 1;
                    i = f.node + 1;
                    break;
                }
                Some(f) => {
                    chosen[f.node] = None;
                    stack.pop();
                }
            }
        }
    }
}

/// Query flavor: true in every stable model, or in at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    Cautious,
    Brave,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAnswer {
    pub yes: bool,
    /// The rooted subgraph alone settled the answer.
    pub early_stop: bool,
    /// Nodes evaluated.
    pub visited: usize,
    pub total_nodes: usize,
}

/// Answers whether `atom` is true cautiously/bravely, first evaluating
/// only the subgraph rooted at the atom's component. Cautious queries
/// stop early when that node's models are nonempty and unanimous, or
/// when some node on the way produces no models at all (then the whole
/// base has none, and the answer is vacuously yes). The answer always
/// equals the one computed from full enumeration.
pub fn query_atom(
    kb: &KnowledgeBase,
    atom: Atom,
    mode: QueryMode,
    nogoods: &[Nogood],
    opts: &SolveOptions,
) -> Result<QueryAnswer, SolveError> {
    let sg = SuperGraph::analyze(kb);
    let class = classify_graph(kb, &sg, opts.omega_cap);
    let total_nodes = sg.node_count();
    let traversal = Traversal {
        kb,
        sg: &sg,
        class: &class,
        opts,
        nogoods,
        anchor_nogoods: true,
        cache: None,
    };
    if matches!(mode, QueryMode::Cautious) {
        let home = sg.node_of(atom);
        let rooted = sg.rooted_nodes(home);
        let outcome = traversal.run(&rooted)?;
        if outcome.early_empty {
            // No stable models at all: vacuously true everywhere.
            return Ok(QueryAnswer {
                yes: true,
                early_stop: true,
                visited: outcome.visited,
                total_nodes,
            });
        }
        let at_home = &outcome.computed[home].as_ref().expect("home visited").0.models;
        if !at_home.is_empty() && at_home.iter().all(|m| m.is_true(atom)) {
            return Ok(QueryAnswer {
                yes: true,
                early_stop: true,
                visited: outcome.visited,
                total_nodes,
            });
        }
    }
    let visit: Vec<usize> = (0..total_nodes).collect();
    let outcome = traversal.run(&visit)?;
    let yes = match mode {
        QueryMode::Cautious => outcome.final_models.iter().all(|m| m.is_true(atom)),
        QueryMode::Brave => outcome.final_models.iter().any(|m| m.is_true(atom)),
    };
    Ok(QueryAnswer {
        yes,
        early_stop: false,
        visited: outcome.visited,
        total_nodes,
    })
}

/// Update failure: the added text or the solve itself.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Solver that keeps per-node model sets between solves and recomputes
/// only nodes whose rooted subgraph changed.
///
/// Cache entries are keyed by content signature, so rule additions that
/// leave a subgraph untouched (atom ids are stable under extension)
/// reuse its models verbatim. Nogoods are never cached: the
/// incremental path applies them as a final filter.
pub struct IncrementalSolver {
    kb: KnowledgeBase,
    nogoods: Vec<Nogood>,
    opts: SolveOptions,
    cache: HashMap<u128, Arc<NodeData>>,
}

impl IncrementalSolver {
    pub fn new(program: Program, opts: SolveOptions) -> Self {
        IncrementalSolver {
            kb: program.kb,
            nogoods: program.nogoods,
            opts,
            cache: HashMap::new(),
        }
    }

    pub fn from_kb(kb: KnowledgeBase, nogoods: Vec<Nogood>, opts: SolveOptions) -> Self {
        IncrementalSolver {
            kb,
            nogoods,
            opts,
            cache: HashMap::new(),
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    /// Solves the current base, reusing every cached node whose rooted
    /// subgraph is unchanged. The report's `cached` flags say which
    /// nodes were reused; the result always equals a scratch solve.
    pub fn resolve(&mut self) -> Result<SolveReport, SolveError> {
        let sg = SuperGraph::analyze(&self.kb);
        let class = classify_graph(&self.kb, &sg, self.opts.omega_cap);
        let traversal = Traversal {
            kb: &self.kb,
            sg: &sg,
            class: &class,
            opts: &self.opts,
            nogoods: &self.nogoods,
            anchor_nogoods: false,
            cache: Some(&self.cache),
        };
        let visit: Vec<usize> = (0..sg.node_count()).collect();
        let outcome = traversal.run(&visit)?;
        // Keep exactly the entries this run touched.
        let mut fresh = HashMap::new();
        for (i, slot) in outcome.computed.iter().enumerate() {
            if let Some((data, _)) = slot {
                fresh.insert(outcome.sigs[i], data.clone());
            }
        }
        self.cache = fresh;
        Ok(build_report(&self.kb, &sg, &class, &outcome))
    }

    /// Appends rules and nogoods (same grammar as the initial program;
    /// atom ids stay stable) and solves, recomputing only affected
    /// nodes. Warnings are returned alongside the report.
    pub fn update_and_resolve(
        &mut self,
        added_text: &str,
    ) -> Result<(SolveReport, Vec<Warning>), UpdateError> {
        let program = parse_program_into(added_text, self.kb.clone())?;
        self.kb = program.kb;
        self.nogoods.extend(program.nogoods);
        let report = self.resolve()?;
        Ok((report, program.warnings))
    }
}
