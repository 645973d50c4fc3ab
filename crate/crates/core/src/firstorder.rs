//! Function-free first-order front end: arity and safety checking,
//! Herbrand grounding, a predicate-level dependency graph, and a
//! solver that grounds one predicate component at a time.
//!
//! Ground atoms are spelled `predicate(c1,c2)` and interned as plain
//! propositional atoms, so everything downstream of grounding is the
//! ordinary propositional machinery.

use crate::aas::{aas_solve, cartes_prod, SolveError, SolveOptions};
use crate::graphs::SuperGraph;
use crate::kb::{Atom, KnowledgeBase, ModelSet, Nogood, PartialInterpretation, Rule};
use crate::parse::{
    ground_atom_name, parse_statements, ParseError, Program, RawAtom, RawTerm, Statement, Warning,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A variable (uppercase-initial) or constant (lowercase-initial).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Variable(String),
    Constant(String),
}

impl Term {
    pub fn text(&self) -> &str {
        match self {
            Term::Variable(s) | Term::Constant(s) => s,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

impl From<&RawTerm> for Term {
    fn from(raw: &RawTerm) -> Self {
        match raw {
            RawTerm::Variable(s) => Term::Variable(s.clone()),
            RawTerm::Constant(s) => Term::Constant(s.clone()),
        }
    }
}

/// A predicate applied to terms. Arity is fixed per predicate across a
/// program; the parser enforces it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FoAtom {
    predicate: String,
    args: Vec<Term>,
}

impl FoAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        FoAtom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn predicate(&self) -> &str {
        &self.predicate
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_variable)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            Term::Constant(_) => None,
        })
    }

    /// Propositional spelling under a substitution, which must bind
    /// every variable of the atom.
    fn name_under(&self, subst: &BTreeMap<&str, &str>) -> String {
        let args: Vec<&str> = self
            .args
            .iter()
            .map(|t| match t {
                Term::Variable(v) => subst[v.as_str()],
                Term::Constant(c) => c.as_str(),
            })
            .collect();
        ground_atom_name(&self.predicate, args)
    }
}

impl fmt::Display for FoAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `head :- pos, not neg.` over first-order atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoRule {
    head: FoAtom,
    pos: Vec<FoAtom>,
    neg: Vec<FoAtom>,
}

impl FoRule {
    pub fn new(head: FoAtom, pos: Vec<FoAtom>, neg: Vec<FoAtom>) -> Self {
        FoRule { head, pos, neg }
    }

    pub fn head(&self) -> &FoAtom {
        &self.head
    }

    pub fn pos(&self) -> &[FoAtom] {
        &self.pos
    }

    pub fn neg(&self) -> &[FoAtom] {
        &self.neg
    }

    pub fn atoms(&self) -> impl Iterator<Item = &FoAtom> {
        std::iter::once(&self.head)
            .chain(self.pos.iter())
            .chain(self.neg.iter())
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(FoAtom::is_ground)
    }

    /// Distinct variables in first-appearance order (head, then
    /// positive body, then negative body).
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for atom in self.atoms() {
            for v in atom.variables() {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        seen
    }

    /// Variables of the head or a negative literal not bound by a
    /// positive literal, sorted.
    pub fn unsafe_variables(&self) -> Vec<&str> {
        let bound: BTreeSet<&str> = self.pos.iter().flat_map(FoAtom::variables).collect();
        self.head
            .variables()
            .chain(self.neg.iter().flat_map(FoAtom::variables))
            .filter(|v| !bound.contains(v))
            .collect::<BTreeSet<&str>>()
            .into_iter()
            .collect()
    }
}

impl fmt::Display for FoRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.pos.is_empty() || !self.neg.is_empty() {
            write!(f, " :- ")?;
            let mut first = true;
            for a in &self.pos {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
                first = false;
            }
            for a in &self.neg {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "not {a}")?;
                first = false;
            }
        }
        write!(f, ".")
    }
}

/// A first-order program: rules plus ground-atom nogoods.
#[derive(Debug, Clone)]
pub struct FoProgram {
    pub rules: Vec<FoRule>,
    /// Nogood atom spellings; the directive only accepts ground atoms.
    pub nogoods: Vec<BTreeSet<String>>,
    pub warnings: Vec<Warning>,
}

fn check_arity(
    arities: &mut BTreeMap<String, usize>,
    raw: &RawAtom,
) -> Result<(), ParseError> {
    match arities.get(&raw.name) {
        Some(&a) if a != raw.args.len() => Err(ParseError::new(
            raw.line,
            raw.col,
            format!(
                "predicate '{}' used with arity {} but previously with arity {}",
                raw.name,
                raw.args.len(),
                a
            ),
        )),
        Some(_) => Ok(()),
        None => {
            arities.insert(raw.name.clone(), raw.args.len());
            Ok(())
        }
    }
}

fn lower_atom(arities: &mut BTreeMap<String, usize>, raw: &RawAtom) -> Result<FoAtom, ParseError> {
    check_arity(arities, raw)?;
    Ok(FoAtom::new(
        raw.name.clone(),
        raw.args.iter().map(Term::from).collect(),
    ))
}

/// Parses first-order rule text. Same grammar as the propositional
/// front end; uppercase-initial terms are variables. Nogood atoms must
/// be ground.
pub fn parse_fo_program(text: &str) -> Result<FoProgram, ParseError> {
    let statements = parse_statements(text)?;
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    let mut rules = Vec::new();
    let mut nogoods = Vec::new();
    for statement in &statements {
        match statement {
            Statement::Rule { head, pos, neg, .. } => {
                let head = lower_atom(&mut arities, head)?;
                let pos = pos
                    .iter()
                    .map(|a| lower_atom(&mut arities, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let neg = neg
                    .iter()
                    .map(|a| lower_atom(&mut arities, a))
                    .collect::<Result<Vec<_>, _>>()?;
                rules.push(FoRule::new(head, pos, neg));
            }
            Statement::Nogood { atoms, line } => {
                let mut set = BTreeSet::new();
                for raw in atoms {
                    check_arity(&mut arities, raw)?;
                    if !raw.is_ground() {
                        return Err(ParseError::new(
                            *line,
                            raw.col,
                            format!("nogood atom '{}' must be ground", raw.name),
                        ));
                    }
                    set.insert(raw.ground_name());
                }
                nogoods.push(set);
            }
        }
    }
    Ok(FoProgram {
        rules,
        nogoods,
        warnings: Vec::new(),
    })
}

/// An unsafe variable occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyViolation {
    /// Zero-based rule index, in input order.
    pub rule: usize,
    pub variable: String,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variable '{}' in rule {} is not bound by a positive body atom",
            self.variable, self.rule
        )
    }
}

/// Every rule must bind each variable of its head and of its negative
/// literals in a positive body literal. Returns all violations.
pub fn check_safe(rules: &[FoRule]) -> Vec<SafetyViolation> {
    let mut out = Vec::new();
    for (i, rule) in rules.iter().enumerate() {
        for v in rule.unsafe_variables() {
            out.push(SafetyViolation {
                rule: i,
                variable: v.to_string(),
            });
        }
    }
    out
}

/// Constant symbols of a program, in first-appearance order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandUniverse {
    constants: Vec<String>,
}

impl HerbrandUniverse {
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }
}

pub fn herbrand_universe(rules: &[FoRule]) -> HerbrandUniverse {
    let mut constants = Vec::new();
    for rule in rules {
        for atom in rule.atoms() {
            for term in atom.args() {
                if let Term::Constant(c) = term {
                    if !constants.contains(c) {
                        constants.push(c.clone());
                    }
                }
            }
        }
    }
    HerbrandUniverse { constants }
}

/// All `predicate(constants…)` spellings a program can form.
pub fn herbrand_base(rules: &[FoRule]) -> BTreeSet<String> {
    let universe = herbrand_universe(rules);
    let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
    for rule in rules {
        for atom in rule.atoms() {
            arities.entry(atom.predicate()).or_insert(atom.arity());
        }
    }
    let mut out = BTreeSet::new();
    for (pred, arity) in arities {
        for combo in const_combinations(&universe, arity) {
            out.insert(ground_atom_name(pred, combo.iter().map(|s| s.as_str())));
        }
    }
    out
}

/// All length-`len` tuples over the universe, odometer order (rightmost
/// position cycling fastest). Zero length yields the one empty tuple;
/// an empty universe with positive length yields nothing.
fn const_combinations(universe: &HerbrandUniverse, len: usize) -> Vec<Vec<String>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    if universe.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let n = universe.len();
    let mut idx = vec![0usize; len];
    loop {
        out.push(idx.iter().map(|&i| universe.constants[i].clone()).collect());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Ground instances of one rule as spelled atom triples, substitution
/// order (variables in first-appearance order, rightmost fastest).
fn rule_instances(
    rule: &FoRule,
    universe: &HerbrandUniverse,
) -> Vec<(String, Vec<String>, Vec<String>)> {
    let vars = rule.variables();
    let mut out = Vec::new();
    for combo in const_combinations(universe, vars.len()) {
        let subst: BTreeMap<&str, &str> = vars
            .iter()
            .copied()
            .zip(combo.iter().map(|s| s.as_str()))
            .collect();
        out.push((
            rule.head.name_under(&subst),
            rule.pos.iter().map(|a| a.name_under(&subst)).collect(),
            rule.neg.iter().map(|a| a.name_under(&subst)).collect(),
        ));
    }
    out
}

fn intern_instance(
    kb: &mut KnowledgeBase,
    (head, pos, neg): &(String, Vec<String>, Vec<String>),
) {
    let h = kb.intern(head);
    let p: Vec<Atom> = pos.iter().map(|a| kb.intern(a)).collect();
    let n: Vec<Atom> = neg.iter().map(|a| kb.intern(a)).collect();
    kb.add_rule(Rule::new(h, p, n));
}

/// Grounds a program by substituting every constant for every variable
/// in all ways: each rule yields `|constants|^{|variables|}` instances,
/// in rule order then substitution order. A variable-free program is
/// returned unchanged (modulo spelling).
pub fn ground(rules: &[FoRule]) -> KnowledgeBase {
    let universe = herbrand_universe(rules);
    let mut kb = KnowledgeBase::new();
    for rule in rules {
        for instance in rule_instances(rule, &universe) {
            intern_instance(&mut kb, &instance);
        }
    }
    kb
}

/// Grounds rules and nogoods together into a propositional program.
pub fn ground_program(program: &FoProgram) -> Program {
    let mut kb = ground(&program.rules);
    let nogoods = program
        .nogoods
        .iter()
        .map(|names| Nogood::new(names.iter().map(|n| kb.intern(n)).collect()))
        .collect();
    Program {
        kb,
        nogoods,
        warnings: program.warnings.clone(),
    }
}

/// Grounds keeping only instances whose positive body atoms are
/// possibly derivable: the instance set is closed under "all positive
/// body atoms are heads of admitted instances or facts". Stable models
/// match naive grounding on true atoms, because dropped instances have
/// a positive body atom false in every model. The atom table is
/// smaller; compare models by true-atom names.
pub fn ground_guided(rules: &[FoRule]) -> KnowledgeBase {
    let universe = herbrand_universe(rules);
    let per_rule: Vec<Vec<(String, Vec<String>, Vec<String>)>> = rules
        .iter()
        .map(|r| rule_instances(r, &universe))
        .collect();
    let mut derivable: BTreeSet<String> = BTreeSet::new();
    let mut admitted: Vec<Vec<bool>> = per_rule.iter().map(|v| vec![false; v.len()]).collect();
    loop {
        let mut changed = false;
        for (ri, instances) in per_rule.iter().enumerate() {
            for (ii, (head, pos, _)) in instances.iter().enumerate() {
                if admitted[ri][ii] {
                    continue;
                }
                if pos.iter().all(|a| derivable.contains(a)) {
                    admitted[ri][ii] = true;
                    derivable.insert(head.clone());
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut kb = KnowledgeBase::new();
    for (ri, instances) in per_rule.iter().enumerate() {
        for (ii, instance) in instances.iter().enumerate() {
            if admitted[ri][ii] {
                intern_instance(&mut kb, instance);
            }
        }
    }
    kb
}

/// The dependency structure over predicate names: one propositional
/// rule per first-order rule, atoms being the predicates. Feed it to
/// the graphs module for components, stratification, and bounds.
pub fn predicate_kb(rules: &[FoRule]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for rule in rules {
        let h = kb.intern(rule.head().predicate());
        let p: Vec<Atom> = rule.pos().iter().map(|a| kb.intern(a.predicate())).collect();
        let n: Vec<Atom> = rule.neg().iter().map(|a| kb.intern(a.predicate())).collect();
        kb.add_rule(Rule::new(h, p, n));
    }
    kb
}

/// First-order solving failure.
#[derive(Debug, Error)]
pub enum FaasError {
    #[error("unsafe program: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Unsafe(Vec<SafetyViolation>),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Result of a first-order solve: the models plus the atom table that
/// names every ground atom they mention.
#[derive(Debug)]
pub struct FaasOutcome {
    /// Naming table for the ground atoms reached by the traversal (no
    /// rules attached).
    pub kb: KnowledgeBase,
    pub models: ModelSet,
    /// Ground rule instances created across all nodes.
    pub instances: usize,
}

/// All stable models of a safe first-order program, computed one
/// predicate component at a time: at each component, ground only the
/// rules whose head predicate belongs to it, add a unit fact for every
/// true atom of the combined child models, and solve that fragment
/// propositionally. Equals solving the fully grounded program.
pub fn faas_solve(program: &FoProgram, opts: &SolveOptions) -> Result<FaasOutcome, FaasError> {
    let violations = check_safe(&program.rules);
    if !violations.is_empty() {
        return Err(FaasError::Unsafe(violations));
    }
    let universe = herbrand_universe(&program.rules);
    let pred_kb = predicate_kb(&program.rules);
    let sg = SuperGraph::analyze(&pred_kb);
    let n = sg.node_count();
    let mut naming = KnowledgeBase::new();
    let mut node_models: Vec<Option<ModelSet>> = (0..n).map(|_| None).collect();
    let mut node_preds: Vec<BTreeSet<String>> = Vec::with_capacity(n);
    let mut instances_total = 0usize;
    let mut early_empty = false;
    for i in 0..n {
        let node = &sg.nodes()[i];
        let own_preds: BTreeSet<String> = node
            .atoms
            .iter()
            .map(|&a| pred_kb.name(a).to_string())
            .collect();
        // Predicates of the rooted subgraph; fragment grounding must
        // stay inside this set.
        let mut reach_preds = own_preds.clone();
        for &c in &node.children {
            reach_preds.extend(node_preds[c].iter().cloned());
        }
        let fragment: Vec<&FoRule> = program
            .rules
            .iter()
            .filter(|r| own_preds.contains(r.head().predicate()))
            .collect();
        let mut frag_instances: Vec<(String, Vec<String>, Vec<String>)> = Vec::new();
        for rule in &fragment {
            debug_assert!(rule
                .atoms()
                .all(|a| reach_preds.contains(a.predicate())));
            frag_instances.extend(rule_instances(rule, &universe));
        }
        instances_total += frag_instances.len();
        // Subtree ground atoms: children's plus this fragment's.
        let mut subtree: BTreeSet<Atom> = BTreeSet::new();
        for &c in &node.children {
            subtree.extend(node_models[c].as_ref().expect("children solved").domain());
        }
        for (head, pos, neg) in &frag_instances {
            subtree.insert(naming.intern(head));
            for a in pos.iter().chain(neg) {
                subtree.insert(naming.intern(a));
            }
        }
        let child_sets: Vec<&ModelSet> = node
            .children
            .iter()
            .map(|&c| node_models[c].as_ref().expect("children solved"))
            .collect();
        let base = cartes_prod(&child_sets);
        let mut models_out: Vec<PartialInterpretation> = Vec::new();
        for context in base.iter() {
            let mut fkb = KnowledgeBase::new();
            for instance in &frag_instances {
                intern_instance(&mut fkb, instance);
            }
            for atom in context.true_atoms() {
                let local = fkb.intern(naming.name(atom));
                fkb.add_rule(Rule::fact(local));
            }
            let local_models = aas_solve(&fkb, &[], opts)?;
            for lm in local_models.iter() {
                let mut lifted = PartialInterpretation::new();
                for (local, value) in lm.assigned() {
                    lifted.assign(naming.intern(fkb.name(local)), value);
                }
                let merged = context
                    .combine(&lifted)
                    .expect("fragment heads stay inside the component");
                models_out.push(merged.totalized_over(&subtree));
            }
        }
        let set = ModelSet::new(subtree, models_out);
        let empty = set.is_empty();
        node_models[i] = Some(set);
        node_preds.push(reach_preds);
        if empty {
            early_empty = true;
            break;
        }
    }
    let models = if early_empty {
        ModelSet::empty(naming.atom_set())
    } else {
        let sink_sets: Vec<&ModelSet> = sg
            .sinks()
            .into_iter()
            .map(|i| node_models[i].as_ref().expect("all solved"))
            .collect();
        let product = cartes_prod(&sink_sets);
        let kept: Vec<PartialInterpretation> = product
            .iter()
            .filter(|m| {
                program.nogoods.iter().all(|names| {
                    names.iter().any(|name| match naming.atom(name) {
                        Some(a) => m.is_false(a),
                        // Never derivable anywhere: always false.
                        None => true,
                    })
                })
            })
            .cloned()
            .collect();
        ModelSet::new(product.domain().clone(), kept)
    };
    Ok(FaasOutcome {
        kb: naming,
        models,
        instances: instances_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aas::{aas_solve, SolveOptions};
    use crate::enumerate::{all_stable1, all_stable2};
    use crate::generate::random_fo;
    use crate::graphs::{DependencyGraph, Sign};

    const PI_5: &str = "\
warm_blooded(X) :- mammal(X).
live_on_land(X) :- mammal(X), not ab1(X).
female(X) :- mammal(X), not male(X).
male(X) :- mammal(X), not female(X).
mammal(X) :- dolphin(X).
ab1(X) :- dolphin(X).
mammal(X) :- lion(X).
dolphin(flipper).
live_on_land(X) :- bird(X).
fly(X) :- bird(X), not ab2(X).
bird(X) :- penguin(X).
ab2(X) :- penguin(X).
bird(bigbird).
";

    fn fo(text: &str) -> FoProgram {
        parse_fo_program(text).unwrap()
    }

    #[test]
    fn parses_rules_and_terms() {
        let program = fo(PI_5);
        assert_eq!(program.rules.len(), 13);
        let first = &program.rules[0];
        assert_eq!(first.head().predicate(), "warm_blooded");
        assert!(first.head().args()[0].is_variable());
        assert!(program.rules[7].is_ground());
        assert_eq!(program.rules[7].head().to_string(), "dolphin(flipper)");
    }

    #[test]
    fn arity_must_be_consistent() {
        let err = parse_fo_program("p(a).\np(a, b).").unwrap_err();
        assert!(err.message.contains("arity 2"));
        assert!(err.message.contains("arity 1"));
        let err = parse_fo_program("p(X) :- q(X), p.").unwrap_err();
        assert!(err.message.contains("'p'"));
    }

    #[test]
    fn nogood_atoms_must_be_ground() {
        let err = parse_fo_program("p(a).\n#nogood p(X).").unwrap_err();
        assert!(err.message.contains("must be ground"));
        let program = fo("p(a).\n#nogood p(a).");
        assert_eq!(program.nogoods.len(), 1);
        assert!(program.nogoods[0].contains("p(a)"));
    }

    #[test]
    fn safety_violations_name_the_variable() {
        assert!(check_safe(&fo(PI_5).rules).is_empty());
        let v = check_safe(&fo("p(X) :- not q(X).").rules);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].rule, v[0].variable.as_str()), (0, "X"));
        let v = check_safe(&fo("p(X) :- q(X), not r(X, Y).").rules);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].variable, "Y");
        assert!(v[0].to_string().contains("'Y'"));
        // A head variable with no body at all is unsafe too.
        let v = check_safe(&fo("p(X).").rules);
        assert_eq!(v[0].variable, "X");
    }

    #[test]
    fn universe_keeps_first_appearance_order() {
        let u = herbrand_universe(&fo(PI_5).rules);
        assert_eq!(u.constants(), ["flipper", "bigbird"]);
    }

    #[test]
    fn herbrand_base_is_the_full_grid() {
        let base = herbrand_base(&fo(PI_5).rules);
        // 12 predicates, 2 constants.
        assert_eq!(base.len(), 24);
        assert!(base.contains("lion(bigbird)"));
        let base = herbrand_base(&fo("z :- not w.\nw :- not z.").rules);
        assert_eq!(base.len(), 2);
    }

    #[test]
    fn grounding_substitutes_all_ways() {
        let kb = ground(&fo(PI_5).rules);
        // 11 single-variable rules over 2 constants plus 2 facts.
        assert_eq!(kb.rule_count(), 24);
        assert!(kb.render().contains("mammal(flipper) :- dolphin(flipper).\n"));
        assert!(kb.render().contains("mammal(bigbird) :- dolphin(bigbird).\n"));
        let kb = ground(&fo("p(X) :- q(X).\nq(a).\nq(b).").rules);
        assert_eq!(kb.rule_count(), 4);
        let two_vars = ground(&fo("s(X, Y) :- q(X), r(Y).\nq(a).\nr(b).").rules);
        // 2^2 instances plus the two facts.
        assert_eq!(two_vars.rule_count(), 6);
    }

    #[test]
    fn grounding_is_identity_on_ground_programs() {
        let text = "p(a).\nq :- p(a), not r(b,a).\n";
        let program = fo(text);
        let kb = ground(&program.rules);
        assert_eq!(kb.render(), "p(a).\nq :- p(a), not r(b,a).\n");
        // And therefore idempotent.
        let again = ground(&fo(&kb.render()).rules);
        assert_eq!(again.render(), kb.render());
    }

    #[test]
    fn predicate_graph_edges() {
        let kb = predicate_kb(&fo("p(X) :- p(X).").rules);
        let g = DependencyGraph::of(&kb);
        let p = kb.atom("p").unwrap();
        assert!(g
            .edges()
            .iter()
            .any(|e| e.from == p && e.to == p && e.sign == Sign::Pos));
        let kb = predicate_kb(&fo("p(X) :- not q(X), r(X).").rules);
        let g = DependencyGraph::of(&kb);
        let (p, q, r) = (
            kb.atom("p").unwrap(),
            kb.atom("q").unwrap(),
            kb.atom("r").unwrap(),
        );
        assert!(g
            .edges()
            .iter()
            .any(|e| e.from == q && e.to == p && e.sign == Sign::Neg));
        assert!(g
            .edges()
            .iter()
            .any(|e| e.from == r && e.to == p && e.sign == Sign::Pos));
    }

    #[test]
    fn running_example_has_the_two_expected_models() {
        let program = fo(PI_5);
        let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
        let sets = outcome.models.true_name_sets(&outcome.kb);
        let expected_a: Vec<String> = [
            "ab1(flipper)",
            "bird(bigbird)",
            "dolphin(flipper)",
            "female(flipper)",
            "fly(bigbird)",
            "live_on_land(bigbird)",
            "mammal(flipper)",
            "warm_blooded(flipper)",
        ]
        .map(String::from)
        .to_vec();
        let expected_b: Vec<String> = expected_a
            .iter()
            .map(|s| {
                if s == "female(flipper)" {
                    "male(flipper)".to_string()
                } else {
                    s.clone()
                }
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(
            sets.into_iter().collect::<Vec<_>>(),
            vec![expected_a, expected_b]
        );
    }

    #[test]
    fn matches_the_fully_ground_route() {
        let program = fo(PI_5);
        let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
        let ground_kb = ground(&program.rules);
        let direct = aas_solve(&ground_kb, &[], &SolveOptions::default()).unwrap();
        assert_eq!(
            outcome.models.true_name_sets(&outcome.kb),
            direct.true_name_sets(&ground_kb)
        );
        // Independent flat engines on the ground image agree.
        assert_eq!(
            all_stable1(&ground_kb).unwrap().true_name_sets(&ground_kb),
            direct.true_name_sets(&ground_kb)
        );
        assert_eq!(
            all_stable2(&ground_kb).unwrap().true_name_sets(&ground_kb),
            direct.true_name_sets(&ground_kb)
        );
    }

    #[test]
    fn ground_input_matches_direct_solving() {
        let text = "a :- not b.\nb :- not a.\nc :- a.\n";
        let program = fo(text);
        assert!(program.rules.iter().all(FoRule::is_ground));
        let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
        let kb = crate::parse::parse_kb(text).unwrap();
        let direct = aas_solve(&kb, &[], &SolveOptions::default()).unwrap();
        assert_eq!(
            outcome.models.true_name_sets(&outcome.kb),
            direct.true_name_sets(&kb)
        );
    }

    #[test]
    fn unsafe_programs_are_rejected() {
        let program = fo("p(X) :- not q(X).");
        let err = faas_solve(&program, &SolveOptions::default()).unwrap_err();
        match err {
            FaasError::Unsafe(v) => assert_eq!(v.len(), 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nogoods_filter_final_models() {
        let text = format!("{PI_5}#nogood female(flipper).\n");
        let program = fo(&text);
        let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
        assert_eq!(outcome.models.len(), 1);
        let names = outcome.models.true_name_sets(&outcome.kb);
        assert!(names.iter().next().unwrap().contains(&"male(flipper)".to_string()));
        // A nogood on an underivable spelling filters nothing.
        let text = format!("{PI_5}#nogood lion(bigbird).\n");
        let outcome = faas_solve(&fo(&text), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.models.len(), 2);
    }

    #[test]
    fn guided_grounding_matches_naive_models() {
        let program = fo("p(X) :- q(X).\nq(a).\nr(b) :- p(b).");
        let naive = ground(&program.rules);
        let guided = ground_guided(&program.rules);
        assert!(guided.rule_count() < naive.rule_count());
        assert_eq!(guided.rule_count(), 2);
        let naive_models = aas_solve(&naive, &[], &SolveOptions::default()).unwrap();
        let guided_models = aas_solve(&guided, &[], &SolveOptions::default()).unwrap();
        assert_eq!(
            naive_models.true_name_sets(&naive),
            guided_models.true_name_sets(&guided)
        );
    }

    #[test]
    fn guided_grounding_differential_on_random_programs() {
        for seed in 0..40 {
            let text = random_fo(seed);
            let program = fo(&text);
            if !check_safe(&program.rules).is_empty() {
                panic!("generator must emit safe programs (seed {seed})");
            }
            let naive = ground(&program.rules);
            let guided = ground_guided(&program.rules);
            assert!(guided.rule_count() <= naive.rule_count());
            let a = aas_solve(&naive, &[], &SolveOptions::default()).unwrap();
            let b = aas_solve(&guided, &[], &SolveOptions::default()).unwrap();
            assert_eq!(
                a.true_name_sets(&naive),
                b.true_name_sets(&guided),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn component_solving_differential_on_random_programs() {
        for seed in 0..40 {
            let text = random_fo(seed);
            let program = fo(&text);
            let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
            let ground_kb = ground(&program.rules);
            let direct = aas_solve(&ground_kb, &[], &SolveOptions::default()).unwrap();
            assert_eq!(
                outcome.models.true_name_sets(&outcome.kb),
                direct.true_name_sets(&ground_kb),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn empty_universe_with_variables_grounds_to_nothing() {
        let program = fo("p(X) :- q(X).");
        let kb = ground(&program.rules);
        assert_eq!(kb.rule_count(), 0);
        let outcome = faas_solve(&program, &SolveOptions::default()).unwrap();
        assert_eq!(outcome.models.len(), 1);
    }
}
