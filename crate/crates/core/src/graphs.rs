//! Atom dependency graph, strongly connected components, the component
//! DAG, stratification, and the classification index.
//!
//! The dependency graph has a signed edge `P -> Q` whenever `P` occurs
//! in the body of a rule about `Q`. Collapsing strongly connected
//! components yields an acyclic component DAG whose nodes are solved
//! bottom-up; the classification index bounds the number of stable
//! models by a product `t` over that DAG.

use crate::kb::{Atom, KnowledgeBase, Rule};
use std::collections::{BTreeMap, BTreeSet};

/// Polarity of a dependency edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

/// Directed edge `from -> to`: `from` occurs in the body of a rule about
/// `to` with the given polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: Atom,
    pub to: Atom,
    pub sign: Sign,
}

/// Signed atom-level dependency graph. Edges are sorted by
/// `(from, to, sign)` and duplicate-free; a positive and a negative edge
/// may coexist between the same pair of atoms.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    atom_count: usize,
    edges: Vec<Edge>,
}

impl DependencyGraph {
    pub fn of(kb: &KnowledgeBase) -> Self {
        let mut set: BTreeSet<Edge> = BTreeSet::new();
        for rule in kb.rules() {
            let to = rule.head();
            for &from in rule.pos() {
                set.insert(Edge { from, to, sign: Sign::Pos });
            }
            for &from in rule.neg() {
                set.insert(Edge { from, to, sign: Sign::Neg });
            }
        }
        DependencyGraph {
            atom_count: kb.atom_count(),
            edges: set.into_iter().collect(),
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Unique successor atom ids per atom, polarities merged.
    fn successor_lists(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.atom_count];
        for e in &self.edges {
            let t = e.to.index() as u32;
            let list: &mut Vec<u32> = &mut adj[e.from.index()];
            // Edges are sorted, so duplicates of a target are adjacent.
            if list.last() != Some(&t) {
                list.push(t);
            }
        }
        adj
    }
}

/// Strongly connected components of a directed graph given as successor
/// lists. Iterative so deep chains cannot overflow the call stack.
/// Components are numbered in topological order: every edge `u -> v`
/// satisfies `comp[u] <= comp[v]`, with equality exactly inside a
/// component. Returns `(comp, component_count)`.
pub(crate) fn tarjan_scc(n: usize, adj: &[Vec<u32>]) -> (Vec<usize>, usize) {
    const UNSET: usize = usize::MAX;
    let mut order = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut emitted = vec![UNSET; n];
    let mut frames: Vec<(u32, usize)> = Vec::new();
    let mut next = 0usize;
    let mut comp_count = 0usize;
    for start in 0..n {
        if order[start] != UNSET {
            continue;
        }
        order[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start as u32);
        on_stack[start] = true;
        frames.push((start as u32, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0 as usize;
            if let Some(&w) = adj[v].get(frame.1) {
                frame.1 += 1;
                let w = w as usize;
                if order[w] == UNSET {
                    order[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let p = parent.0 as usize;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == order[v] {
                    loop {
                        let w = stack.pop().expect("scc stack underflow") as usize;
                        on_stack[w] = false;
                        emitted[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    // A component is emitted only after every component reachable from
    // it, so reversing the emission order is a topological numbering.
    let comp = emitted.into_iter().map(|e| comp_count - 1 - e).collect();
    (comp, comp_count)
}

/// One node of the component DAG.
#[derive(Debug, Clone)]
pub struct ComponentNode {
    /// Atoms of the strongly connected component.
    pub atoms: BTreeSet<Atom>,
    /// Indices into the rule list of the rules about this component.
    pub rules: Vec<usize>,
    /// Component indices this node depends on (always smaller).
    pub children: Vec<usize>,
    /// Component indices depending on this node (always larger).
    pub succs: Vec<usize>,
}

/// The component DAG: strongly connected components of the dependency
/// graph in topological order, each carrying its atoms, its rules, and
/// its neighbor components. Every rule belongs to exactly one node (the
/// node of its head).
#[derive(Debug, Clone)]
pub struct SuperGraph {
    graph: DependencyGraph,
    nodes: Vec<ComponentNode>,
    comp_of: Vec<usize>,
}

impl SuperGraph {
    pub fn analyze(kb: &KnowledgeBase) -> Self {
        let graph = DependencyGraph::of(kb);
        let adj = graph.successor_lists();
        let (comp_of, count) = tarjan_scc(graph.atom_count(), &adj);
        let mut nodes: Vec<ComponentNode> = (0..count)
            .map(|_| ComponentNode {
                atoms: BTreeSet::new(),
                rules: Vec::new(),
                children: Vec::new(),
                succs: Vec::new(),
            })
            .collect();
        for a in kb.atoms() {
            nodes[comp_of[a.index()]].atoms.insert(a);
        }
        for (ri, rule) in kb.rules().iter().enumerate() {
            nodes[comp_of[rule.head().index()]].rules.push(ri);
        }
        let mut children: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
        let mut succs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
        for e in graph.edges() {
            let cf = comp_of[e.from.index()];
            let ct = comp_of[e.to.index()];
            if cf != ct {
                children[ct].insert(cf);
                succs[cf].insert(ct);
            }
        }
        for (i, node) in nodes.iter_mut().enumerate() {
            node.children = children[i].iter().copied().collect();
            node.succs = succs[i].iter().copied().collect();
        }
        SuperGraph {
            graph,
            nodes,
            comp_of,
        }
    }

    pub fn graph(&self) -> &DependencyGraph {
        &self.graph
    }

    /// Nodes in topological order (children before parents).
    pub fn nodes(&self) -> &[ComponentNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Index of the component containing `atom`.
    pub fn node_of(&self, atom: Atom) -> usize {
        self.comp_of[atom.index()]
    }

    /// Nodes with no successors. Every node reaches at least one sink,
    /// so the sinks jointly cover all atoms through their subtrees.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].succs.is_empty())
            .collect()
    }

    /// Stratified means no negative edge stays inside a component,
    /// i.e. no cycle through a negative edge.
    pub fn is_stratified(&self) -> bool {
        self.graph.edges().iter().all(|e| {
            e.sign == Sign::Pos || self.comp_of[e.from.index()] != self.comp_of[e.to.index()]
        })
    }

    /// Node indices of the subgraph rooted by `node`: the node plus
    /// everything it transitively depends on, sorted ascending.
    pub fn rooted_nodes(&self, node: usize) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut work = vec![node];
        while let Some(i) = work.pop() {
            if seen.insert(i) {
                work.extend(self.nodes[i].children.iter().copied());
            }
        }
        seen.into_iter().collect()
    }

    /// Atoms of the subgraph rooted by `node`.
    pub fn rooted_atoms(&self, node: usize) -> BTreeSet<Atom> {
        self.rooted_nodes(node)
            .into_iter()
            .flat_map(|i| self.nodes[i].atoms.iter().copied())
            .collect()
    }

    /// Internal edges per node, one pass over the edge list.
    fn internal_edges(&self) -> Vec<Vec<Edge>> {
        let mut per_node = vec![Vec::new(); self.nodes.len()];
        for e in self.graph.edges() {
            let cf = self.comp_of[e.from.index()];
            if cf == self.comp_of[e.to.index()] {
                per_node[cf].push(*e);
            }
        }
        per_node
    }
}

/// Drops every negative literal whose atom lies outside `s`. Heads and
/// positive bodies are untouched.
pub fn restrict_negatives(rules: &[Rule], s: &BTreeSet<Atom>) -> Vec<Rule> {
    rules
        .iter()
        .map(|r| {
            Rule::new(
                r.head(),
                r.pos().to_vec(),
                r.neg().iter().copied().filter(|a| s.contains(a)).collect(),
            )
        })
        .collect()
}

/// Default saturation cap for classification products.
pub const DEFAULT_OMEGA_CAP: u64 = 1 << 62;

/// Per-node ingredients of the classification index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeBound {
    /// Distinct atoms of the component negated by its own rules.
    pub k: usize,
    /// Rules about the component that negate one of its own atoms.
    pub c: usize,
    /// Greedy feedback set: removing these atoms' negative out-edges
    /// breaks every cycle through a negative edge in the component.
    pub cut: Vec<Atom>,
    /// Local model-count bound: 1 for a node whose own rules become Horn
    /// under restriction, else `min(2^|cut|, 2^c)`.
    pub v: u64,
    /// Product bound over the node's subtree, clamped at the cap.
    pub t: u64,
    /// True when this node's `t` (or a descendant's) hit the cap.
    pub saturated: bool,
}

/// The classification index: `t` bounds the number of stable models.
/// A knowledge base with bound `t` sits in class `t` of the hierarchy;
/// stratified inputs are exactly class 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Product of the sink bounds, clamped at the cap.
    pub t: u64,
    pub saturated: bool,
    pub stratified: bool,
    /// Per-node bounds, indexed like [`SuperGraph::nodes`].
    pub nodes: Vec<NodeBound>,
}

fn pow2_capped(exp: usize, cap: u64) -> (u64, bool) {
    if exp >= 64 {
        return (cap, true);
    }
    let p = 1u64 << exp;
    if p > cap {
        (cap, true)
    } else {
        (p, false)
    }
}

fn cap_mul(a: u64, b: u64, cap: u64) -> (u64, bool) {
    match a.checked_mul(b) {
        Some(p) if p <= cap => (p, false),
        _ => (cap, true),
    }
}

/// Greedy cut: repeatedly remove the negative out-edges of the atom
/// lying on the most cycles through negative edges (ties to the lowest
/// atom id) until no negative edge has both endpoints in one strongly
/// connected component of what remains.
fn negative_cycle_cut(atoms: &BTreeSet<Atom>, internal: &[Edge]) -> Vec<Atom> {
    let local: Vec<Atom> = atoms.iter().copied().collect();
    let index_of: BTreeMap<Atom, u32> = local
        .iter()
        .enumerate()
        .map(|(i, &a)| (a, i as u32))
        .collect();
    let m = local.len();
    let mut pos: Vec<(u32, u32)> = Vec::new();
    let mut neg: Vec<(u32, u32)> = Vec::new();
    for e in internal {
        let pair = (index_of[&e.from], index_of[&e.to]);
        match e.sign {
            Sign::Pos => pos.push(pair),
            Sign::Neg => neg.push(pair),
        }
    }
    let mut cut: Vec<Atom> = Vec::new();
    loop {
        let mut adj = vec![Vec::new(); m];
        for &(f, t) in pos.iter().chain(neg.iter()) {
            adj[f as usize].push(t);
        }
        let (comp, _) = tarjan_scc(m, &adj);
        let mut counts = vec![0usize; m];
        let mut any = false;
        for &(f, t) in &neg {
            if comp[f as usize] == comp[t as usize] {
                counts[f as usize] += 1;
                any = true;
            }
        }
        if !any {
            break;
        }
        let mut best = 0usize;
        for (i, &count) in counts.iter().enumerate().skip(1) {
            if count > counts[best] {
                best = i;
            }
        }
        cut.push(local[best]);
        neg.retain(|&(f, _)| f as usize != best);
    }
    cut.sort_unstable();
    cut
}

/// Classifies a knowledge base, reusing an existing component analysis.
pub fn classify_graph(kb: &KnowledgeBase, sg: &SuperGraph, cap: u64) -> Classification {
    let internal = sg.internal_edges();
    let mut nodes: Vec<NodeBound> = Vec::with_capacity(sg.node_count());
    for (i, node) in sg.nodes().iter().enumerate() {
        let mut negated: BTreeSet<Atom> = BTreeSet::new();
        let mut c = 0usize;
        for &ri in &node.rules {
            let rule = &kb.rules()[ri];
            let own_negs = rule.neg().iter().filter(|a| node.atoms.contains(a));
            let mut non_horn = false;
            for &a in own_negs {
                negated.insert(a);
                non_horn = true;
            }
            if non_horn {
                c += 1;
            }
        }
        let k = negated.len();
        let (cut, v, mut saturated) = if c == 0 {
            (Vec::new(), 1, false)
        } else {
            let cut = negative_cycle_cut(&node.atoms, &internal[i]);
            let (vu, su) = pow2_capped(cut.len(), cap);
            let (vc, sc) = pow2_capped(c, cap);
            let v = vu.min(vc);
            (cut, v, if vu <= vc { su } else { sc })
        };
        // Children precede this node in topological order.
        let mut t = v;
        for &ch in &node.children {
            let (p, over) = cap_mul(t, nodes[ch].t, cap);
            t = p;
            saturated |= over | nodes[ch].saturated;
        }
        nodes.push(NodeBound {
            k,
            c,
            cut,
            v,
            t,
            saturated,
        });
    }
    let mut t = 1u64;
    let mut saturated = false;
    for sink in sg.sinks() {
        let (p, over) = cap_mul(t, nodes[sink].t, cap);
        t = p;
        saturated |= over | nodes[sink].saturated;
    }
    Classification {
        t,
        saturated,
        stratified: sg.is_stratified(),
        nodes,
    }
}

/// Classifies a knowledge base by its model-count bound `t`.
pub fn classify(kb: &KnowledgeBase, cap: u64) -> Classification {
    classify_graph(kb, &SuperGraph::analyze(kb), cap)
}

/// DOT rendering of the dependency graph, atoms clustered by component
/// and negative edges dashed.
pub fn dependency_dot(kb: &KnowledgeBase) -> String {
    let sg = SuperGraph::analyze(kb);
    let mut out = String::from("digraph dependency {\n  rankdir=LR;\n  node [shape=ellipse];\n");
    for (i, node) in sg.nodes().iter().enumerate() {
        out.push_str(&format!(
            "  subgraph cluster_{i} {{\n    label=\"s{i}\";\n"
        ));
        for &a in &node.atoms {
            out.push_str(&format!("    \"{}\";\n", kb.name(a)));
        }
        out.push_str("  }\n");
    }
    for e in sg.graph().edges() {
        let style = match e.sign {
            Sign::Pos => "",
            Sign::Neg => " [style=dashed, label=\"not\"]",
        };
        out.push_str(&format!(
            "  \"{}\" -> \"{}\"{};\n",
            kb.name(e.from),
            kb.name(e.to),
            style
        ));
    }
    out.push_str("}\n");
    out
}
