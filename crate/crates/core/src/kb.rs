//! Core knowledge-base types: interned atoms, rules, three-valued
//! interpretations, knowledge bases, model sets, and nogoods.
//!
//! A knowledge base is a list of rules `head :- pos, not neg` over a
//! dense atom table. Atom ids are assigned in first-appearance order and
//! are stable under later rule additions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// Interned propositional atom. The id indexes the owning
/// [`KnowledgeBase`]'s atom table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    pub(crate) fn new(index: usize) -> Self {
        Atom(u32::try_from(index).expect("atom id overflow"))
    }

    /// Position of this atom in its knowledge base's atom table.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Three-valued truth assignment for a single atom, ordered
/// `False < Unknown < True`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Truth {
    False,
    Unknown,
    True,
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truth::False => write!(f, "false"),
            Truth::Unknown => write!(f, "unknown"),
            Truth::True => write!(f, "true"),
        }
    }
}

/// Partial three-valued interpretation. Atoms absent from the map are
/// unknown, so the empty interpretation leaves everything open.
///
/// The derived ordering compares assignments as sorted (atom, value)
/// sequences with false < true, which gives the lexicographic
/// truth-vector order used to sort model sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialInterpretation {
    map: BTreeMap<Atom, bool>,
}

impl PartialInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total interpretation over `domain` whose true atoms are exactly
    /// `true_atoms` (which must lie inside the domain).
    pub fn total_from_true_set<I>(true_atoms: I, domain: &BTreeSet<Atom>) -> Self
    where
        I: IntoIterator<Item = Atom>,
    {
        let mut map: BTreeMap<Atom, bool> = domain.iter().map(|&a| (a, false)).collect();
        for a in true_atoms {
            debug_assert!(domain.contains(&a), "true atom outside domain");
            map.insert(a, true);
        }
        PartialInterpretation { map }
    }

    pub fn truth(&self, atom: Atom) -> Truth {
        match self.map.get(&atom) {
            Some(true) => Truth::True,
            Some(false) => Truth::False,
            None => Truth::Unknown,
        }
    }

    pub fn is_true(&self, atom: Atom) -> bool {
        self.map.get(&atom) == Some(&true)
    }

    pub fn is_false(&self, atom: Atom) -> bool {
        self.map.get(&atom) == Some(&false)
    }

    /// Assigns a value, overwriting any previous one.
    pub fn assign(&mut self, atom: Atom, value: bool) {
        self.map.insert(atom, value);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Atom, bool)> + '_ {
        self.map.iter().map(|(&a, &v)| (a, v))
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.map
            .iter()
            .filter_map(|(&a, &v)| if v { Some(a) } else { None })
    }

    pub fn true_set(&self) -> BTreeSet<Atom> {
        self.true_atoms().collect()
    }

    /// True when every atom of `domain` is assigned.
    pub fn is_total_over(&self, domain: &BTreeSet<Atom>) -> bool {
        domain.iter().all(|a| self.map.contains_key(a))
    }

    /// Merges two interpretations. Fails with the first disagreeing atom
    /// (in id order) if they assign opposite values somewhere.
    pub fn combine(&self, other: &PartialInterpretation) -> Result<PartialInterpretation, Atom> {
        // Iterate the smaller map for the insert loop.
        let (base, add) = if self.map.len() >= other.map.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut conflict: Option<Atom> = None;
        for (&a, &v) in &add.map {
            if let Some(&old) = base.map.get(&a) {
                if old != v {
                    conflict = Some(conflict.map_or(a, |c| c.min(a)));
                }
            }
        }
        if let Some(a) = conflict {
            return Err(a);
        }
        let mut map = base.map.clone();
        for (&a, &v) in &add.map {
            map.insert(a, v);
        }
        Ok(PartialInterpretation { map })
    }

    /// Total interpretation over exactly `domain`: assigned values are
    /// kept, unassigned atoms become false.
    pub fn totalized_over(&self, domain: &BTreeSet<Atom>) -> PartialInterpretation {
        debug_assert!(
            self.map.keys().all(|a| domain.contains(a)),
            "assignment outside totalization domain"
        );
        let map = domain
            .iter()
            .map(|&a| (a, self.map.get(&a).copied().unwrap_or(false)))
            .collect();
        PartialInterpretation { map }
    }

    /// Restriction of the assignment to `domain`.
    pub fn project(&self, domain: &BTreeSet<Atom>) -> PartialInterpretation {
        let map = self
            .map
            .iter()
            .filter(|(a, _)| domain.contains(a))
            .map(|(&a, &v)| (a, v))
            .collect();
        PartialInterpretation { map }
    }
}

/// A rule `head :- pos, not neg`. Body literal lists are kept sorted by
/// atom id and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    head: Atom,
    pos: Vec<Atom>,
    neg: Vec<Atom>,
}

impl Rule {
    pub fn new(head: Atom, mut pos: Vec<Atom>, mut neg: Vec<Atom>) -> Self {
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        Rule { head, pos, neg }
    }

    pub fn fact(head: Atom) -> Self {
        Rule::new(head, Vec::new(), Vec::new())
    }

    pub fn head(&self) -> Atom {
        self.head
    }

    pub fn pos(&self) -> &[Atom] {
        &self.pos
    }

    pub fn neg(&self) -> &[Atom] {
        &self.neg
    }

    /// Horn means no negative body literals.
    pub fn is_horn(&self) -> bool {
        self.neg.is_empty()
    }

    /// A unit rule has an empty body.
    pub fn is_unit(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    /// Head plus body occurrences; the rule's contribution to kb length.
    pub fn literal_count(&self) -> usize {
        1 + self.pos.len() + self.neg.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        std::iter::once(self.head)
            .chain(self.pos.iter().copied())
            .chain(self.neg.iter().copied())
    }
}

/// A propositional knowledge base: an atom table plus a rule list in
/// source order. Duplicate rules are retained.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    names: Vec<String>,
    index: HashMap<String, Atom>,
    rules: Vec<Rule>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a name, returning the existing atom if already present.
    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.index.get(name) {
            return a;
        }
        let a = Atom::new(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), a);
        a
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    /// Number of atoms in the table (`n`).
    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    /// Total literal occurrences over all rules (`l`).
    pub fn literal_count(&self) -> usize {
        self.rules.iter().map(Rule::literal_count).sum()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len()).map(Atom::new)
    }

    pub fn atom_set(&self) -> BTreeSet<Atom> {
        self.atoms().collect()
    }

    pub fn add_rule(&mut self, rule: Rule) {
        debug_assert!(rule.atoms().all(|a| a.index() < self.names.len()));
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Replaces the rule list wholesale over the same atom table.
    /// Crate-internal; used to build derived bases such as reducts.
    pub(crate) fn set_rules(&mut self, rules: Vec<Rule>) {
        debug_assert!(rules
            .iter()
            .all(|r| r.atoms().all(|a| a.index() < self.names.len())));
        self.rules = rules;
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn is_horn(&self) -> bool {
        self.rules.iter().all(Rule::is_horn)
    }

    /// Canonical text: rules in stored order, positive literals before
    /// negative ones, atoms sorted by id within each group.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            out.push_str(&self.render_rule(rule));
            out.push('\n');
        }
        out
    }

    pub fn render_rule(&self, rule: &Rule) -> String {
        let mut s = self.name(rule.head()).to_string();
        let mut body: Vec<String> = rule.pos().iter().map(|&a| self.name(a).to_string()).collect();
        body.extend(rule.neg().iter().map(|&a| format!("not {}", self.name(a))));
        if !body.is_empty() {
            s.push_str(" :- ");
            s.push_str(&body.join(", "));
        }
        s.push('.');
        s
    }

    /// Rules expressed by atom name, for structural comparison that is
    /// independent of interning order.
    pub fn named_rules(&self) -> Vec<(String, Vec<String>, Vec<String>)> {
        self.rules
            .iter()
            .map(|r| {
                let name = |a: &Atom| self.name(*a).to_string();
                let mut pos: Vec<String> = r.pos().iter().map(name).collect();
                let mut neg: Vec<String> = r.neg().iter().map(name).collect();
                pos.sort();
                neg.sort();
                (self.name(r.head()).to_string(), pos, neg)
            })
            .collect()
    }

    /// Renders a set of atoms as sorted names.
    pub fn names_of<'a, I>(&self, atoms: I) -> Vec<String>
    where
        I: IntoIterator<Item = &'a Atom>,
    {
        let mut v: Vec<String> = atoms
            .into_iter()
            .map(|&a| self.name(a).to_string())
            .collect();
        v.sort();
        v
    }
}

/// A sorted, duplicate-free set of interpretations, each total over the
/// same domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    domain: BTreeSet<Atom>,
    models: Vec<PartialInterpretation>,
}

impl ModelSet {
    pub fn new(domain: BTreeSet<Atom>, mut models: Vec<PartialInterpretation>) -> Self {
        debug_assert!(models.iter().all(|m| m.is_total_over(&domain) && m.len() == domain.len()));
        models.sort();
        models.dedup();
        ModelSet { domain, models }
    }

    pub fn empty(domain: BTreeSet<Atom>) -> Self {
        ModelSet {
            domain,
            models: Vec::new(),
        }
    }

    /// The unit of the consistent product: one empty model over the
    /// empty domain.
    pub fn identity() -> Self {
        ModelSet {
            domain: BTreeSet::new(),
            models: vec![PartialInterpretation::new()],
        }
    }

    pub fn domain(&self) -> &BTreeSet<Atom> {
        &self.domain
    }

    pub fn models(&self) -> &[PartialInterpretation] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, m: &PartialInterpretation) -> bool {
        self.models.binary_search(m).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialInterpretation> {
        self.models.iter()
    }

    /// True-atom sets of the models, in model order.
    pub fn true_sets(&self) -> Vec<BTreeSet<Atom>> {
        self.models.iter().map(|m| m.true_set()).collect()
    }

    /// True-atom name sets, sorted, for comparisons across atom tables.
    pub fn true_name_sets(&self, kb: &KnowledgeBase) -> BTreeSet<Vec<String>> {
        self.models
            .iter()
            .map(|m| {
                let mut v: Vec<String> = m.true_atoms().map(|a| kb.name(a).to_string()).collect();
                v.sort();
                v
            })
            .collect()
    }
}

/// A nogood: a set of atoms that must not be simultaneously true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nogood {
    atoms: BTreeSet<Atom>,
}

impl Nogood {
    pub fn new(atoms: BTreeSet<Atom>) -> Self {
        Nogood { atoms }
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    /// A model complies when at least one member atom is false.
    pub fn complies(&self, model: &PartialInterpretation) -> bool {
        self.atoms.iter().any(|&a| model.truth(a) == Truth::False)
    }
}
