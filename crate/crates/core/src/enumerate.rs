//! Flat stable-model enumerators and their propagation subroutines.
//!
//! Two exponential strategies, both exact:
//!
//! * [`all_stable1`] guesses a truth assignment for the `k` atoms that
//!   appear negated, derives the least model under that guess, and
//!   accepts when the guess reproduces itself (at most `2^k` guesses).
//! * [`all_stable2`] guesses which of the `c` non-Horn rules have all
//!   their negative literals satisfied, propagates unit rules on a
//!   working copy, and keeps candidates that satisfy every original
//!   rule (at most `2^c` guesses).
//!
//! Propagation runs on [`WorkingCopy`]: a shared immutable program
//! shape plus a per-branch state of rule tombstones and literal
//! counters, so branching clones are cheap and the caller's rules are
//! never mutated.

use crate::kb::{Atom, KnowledgeBase, ModelSet, PartialInterpretation, Rule, Truth};
use crate::semantics::{least_fixpoint, rule_satisfied};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

/// Per-component or whole-program enumeration strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Choose per call: the negated-atom guesser when `k < c`,
    /// otherwise the rule-subset guesser.
    #[default]
    Auto,
    /// Guess truth values of negated atoms (`2^k` branches).
    As1,
    /// Guess satisfied non-Horn rules (`2^c` branches).
    As2,
    /// Try every subset of the domain. Reference only.
    Brute,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Auto => write!(f, "auto"),
            Engine::As1 => write!(f, "as1"),
            Engine::As2 => write!(f, "as2"),
            Engine::Brute => write!(f, "brute"),
        }
    }
}

/// Enumeration failure: the guess space does not fit the mask width.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("enumeration would need 2^{bits} branches, beyond the supported 2^62")]
pub struct TooManyGuesses {
    pub bits: usize,
}

/// Run guess branches in parallel once at least this many exist.
pub(crate) const PARALLEL_GUESS_THRESHOLD: u64 = 256;

const MAX_GUESS_BITS: usize = 62;

/// Immutable, locally indexed program: atoms get dense ids, rules keep
/// their literal lists, and occurrence lists invert them.
#[derive(Debug)]
struct Shape {
    /// Local id to global atom, ascending.
    atoms: Vec<Atom>,
    heads: Vec<u32>,
    pos: Vec<Vec<u32>>,
    neg: Vec<Vec<u32>>,
    /// Rules with the atom in their positive body.
    pos_occ: Vec<Vec<u32>>,
    /// Rules with the atom in their negative body.
    neg_occ: Vec<Vec<u32>>,
    /// Rules about the atom.
    head_occ: Vec<Vec<u32>>,
}

impl Shape {
    fn build(rules: &[Rule], domain: &BTreeSet<Atom>) -> Shape {
        debug_assert!(
            rules.iter().all(|r| r.atoms().all(|a| domain.contains(&a))),
            "rule atom outside enumeration domain"
        );
        let atoms: Vec<Atom> = domain.iter().copied().collect();
        let local: BTreeMap<Atom, u32> = atoms
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i as u32))
            .collect();
        let n = atoms.len();
        let mut shape = Shape {
            atoms,
            heads: Vec::with_capacity(rules.len()),
            pos: Vec::with_capacity(rules.len()),
            neg: Vec::with_capacity(rules.len()),
            pos_occ: vec![Vec::new(); n],
            neg_occ: vec![Vec::new(); n],
            head_occ: vec![Vec::new(); n],
        };
        for (ri, rule) in rules.iter().enumerate() {
            let ri = ri as u32;
            let h = local[&rule.head()];
            shape.heads.push(h);
            shape.head_occ[h as usize].push(ri);
            let pos: Vec<u32> = rule.pos().iter().map(|a| local[a]).collect();
            let neg: Vec<u32> = rule.neg().iter().map(|a| local[a]).collect();
            for &a in &pos {
                shape.pos_occ[a as usize].push(ri);
            }
            for &a in &neg {
                shape.neg_occ[a as usize].push(ri);
            }
            shape.pos.push(pos);
            shape.neg.push(neg);
        }
        shape
    }

    fn rule_count(&self) -> usize {
        self.heads.len()
    }

    /// Local ids of atoms appearing negated anywhere, ascending.
    fn negated_atoms(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.neg.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Indices of non-Horn rules, in rule order.
    fn non_horn_rules(&self) -> Vec<u32> {
        (0..self.rule_count() as u32)
            .filter(|&ri| !self.neg[ri as usize].is_empty())
            .collect()
    }

    /// Whether the total assignment `m` (unknown read as false)
    /// satisfies every rule.
    fn satisfies_all(&self, m: &[Truth]) -> bool {
        for ri in 0..self.rule_count() {
            let body_holds = self.pos[ri].iter().all(|&a| m[a as usize] == Truth::True)
                && self.neg[ri].iter().all(|&a| m[a as usize] != Truth::True);
            if body_holds && m[self.heads[ri] as usize] != Truth::True {
                return false;
            }
        }
        true
    }
}

/// Propagation state over a [`Shape`]: three-valued assignment, rule
/// liveness tombstones, and per-rule unresolved-literal counters.
#[derive(Debug, Clone)]
struct State {
    m: Vec<Truth>,
    alive: Vec<bool>,
    pos_left: Vec<u32>,
    neg_left: Vec<u32>,
}

impl State {
    fn fresh(shape: &Shape) -> State {
        State {
            m: vec![Truth::Unknown; shape.atoms.len()],
            alive: vec![true; shape.rule_count()],
            pos_left: shape.pos.iter().map(|p| p.len() as u32).collect(),
            neg_left: shape.neg.iter().map(|n| n.len() as u32).collect(),
        }
    }

    /// Sets an atom false: rules needing it positively die, its
    /// negative literals resolve. Rules about the atom stay, so a later
    /// derivation still raises the conflict. False on a true atom.
    fn assume_false(&mut self, a: u32, shape: &Shape) -> bool {
        match self.m[a as usize] {
            Truth::True => false,
            Truth::False => true,
            Truth::Unknown => {
                self.m[a as usize] = Truth::False;
                for &ri in &shape.pos_occ[a as usize] {
                    self.alive[ri as usize] = false;
                }
                for &ri in &shape.neg_occ[a as usize] {
                    self.neg_left[ri as usize] -= 1;
                }
                true
            }
        }
    }

    fn set_true(&mut self, a: u32, shape: &Shape, queue: &mut Vec<u32>) {
        self.m[a as usize] = Truth::True;
        // Rules about the atom are settled; rules negating it are dead.
        for &ri in &shape.head_occ[a as usize] {
            self.alive[ri as usize] = false;
        }
        for &ri in &shape.neg_occ[a as usize] {
            self.alive[ri as usize] = false;
        }
        for &ri in &shape.pos_occ[a as usize] {
            let ri = ri as usize;
            self.pos_left[ri] -= 1;
            if self.alive[ri] && self.pos_left[ri] == 0 && self.neg_left[ri] == 0 {
                queue.push(ri as u32);
            }
        }
    }

    /// Fires unit rules to fixpoint. False exactly when some unit rule
    /// derives an atom already set false.
    fn propagate(&mut self, shape: &Shape) -> bool {
        let mut queue: Vec<u32> = (0..shape.rule_count() as u32)
            .filter(|&ri| {
                let ri = ri as usize;
                self.alive[ri] && self.pos_left[ri] == 0 && self.neg_left[ri] == 0
            })
            .collect();
        while let Some(ri) = queue.pop() {
            if !self.alive[ri as usize] {
                continue;
            }
            let head = shape.heads[ri as usize];
            match self.m[head as usize] {
                Truth::True => self.alive[ri as usize] = false,
                Truth::False => return false,
                Truth::Unknown => self.set_true(head, shape, &mut queue),
            }
        }
        true
    }
}

/// A mutable working copy of a rule program: an immutable shared shape
/// plus cheap-to-clone propagation state. Cloning a copy is O(atoms +
/// rules) and never touches the source rules.
#[derive(Debug, Clone)]
pub struct WorkingCopy {
    shape: Arc<Shape>,
    state: State,
}

impl WorkingCopy {
    pub fn new(rules: &[Rule], domain: &BTreeSet<Atom>) -> WorkingCopy {
        let shape = Arc::new(Shape::build(rules, domain));
        let state = State::fresh(&shape);
        WorkingCopy { shape, state }
    }

    pub fn from_kb(kb: &KnowledgeBase) -> WorkingCopy {
        WorkingCopy::new(kb.rules(), &kb.atom_set())
    }

    fn local(&self, atom: Atom) -> u32 {
        self.shape
            .atoms
            .binary_search(&atom)
            .map(|i| i as u32)
            .expect("atom outside working-copy domain")
    }

    pub fn truth(&self, atom: Atom) -> Truth {
        self.state.m[self.local(atom) as usize]
    }

    /// Assumes one atom false. False means conflict: it was true.
    pub fn assume_false(&mut self, atom: Atom) -> bool {
        let a = self.local(atom);
        self.state.assume_false(a, &self.shape)
    }

    /// Exhaustively fires unit rules, marking their heads true, erasing
    /// resolved literals, and retiring settled rules. False means a
    /// unit rule derived an atom already assumed false.
    pub fn unit_inst(&mut self) -> bool {
        self.state.propagate(&self.shape)
    }

    /// Assumes every atom of `neg` false, then runs [`unit_inst`].
    /// False means some conflict arose, either during the assumptions
    /// or during propagation.
    ///
    /// [`unit_inst`]: WorkingCopy::unit_inst
    pub fn neg_unit_inst<I>(&mut self, neg: I) -> bool
    where
        I: IntoIterator<Item = Atom>,
    {
        for atom in neg {
            if !self.assume_false(atom) {
                return false;
            }
        }
        self.unit_inst()
    }

    /// Current assignment, assigned atoms only.
    pub fn interpretation(&self) -> PartialInterpretation {
        let mut m = PartialInterpretation::new();
        for (i, &t) in self.state.m.iter().enumerate() {
            match t {
                Truth::True => m.assign(self.shape.atoms[i], true),
                Truth::False => m.assign(self.shape.atoms[i], false),
                Truth::Unknown => {}
            }
        }
        m
    }

    /// Rules not yet settled, with resolved literals erased.
    pub fn live_rules(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        for ri in 0..self.shape.rule_count() {
            if !self.state.alive[ri] {
                continue;
            }
            let unknown = |&a: &u32| self.state.m[a as usize] == Truth::Unknown;
            out.push(Rule::new(
                self.shape.atoms[self.shape.heads[ri] as usize],
                self.shape.pos[ri]
                    .iter()
                    .filter(|a| unknown(a))
                    .map(|&a| self.shape.atoms[a as usize])
                    .collect(),
                self.shape.neg[ri]
                    .iter()
                    .filter(|a| unknown(a))
                    .map(|&a| self.shape.atoms[a as usize])
                    .collect(),
            ));
        }
        out
    }
}

fn collect_guesses<F>(total: u64, parallel: bool, eval: F) -> Vec<PartialInterpretation>
where
    F: Fn(u64) -> Option<PartialInterpretation> + Sync,
{
    if parallel && total >= PARALLEL_GUESS_THRESHOLD {
        (0..total)
            .into_par_iter()
            .map(&eval)
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        (0..total).filter_map(eval).collect()
    }
}

fn run_as1(
    shape: &Shape,
    domain: &BTreeSet<Atom>,
    parallel: bool,
) -> Result<ModelSet, TooManyGuesses> {
    let h = shape.negated_atoms();
    if h.len() > MAX_GUESS_BITS {
        return Err(TooManyGuesses { bits: h.len() });
    }
    let total = 1u64 << h.len();
    let n = shape.atoms.len();
    let eval = |mask: u64| -> Option<PartialInterpretation> {
        let mut guess_true = vec![false; n];
        for (bit, &a) in h.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                guess_true[a as usize] = true;
            }
        }
        // Least model under the guess: rules negating a guessed-true
        // atom are blocked, the rest chain forward on counters.
        let rule_count = shape.rule_count();
        let mut blocked = Vec::with_capacity(rule_count);
        let mut missing = Vec::with_capacity(rule_count);
        let mut queue: Vec<u32> = Vec::new();
        for ri in 0..rule_count {
            let b = shape.neg[ri].iter().any(|&a| guess_true[a as usize]);
            blocked.push(b);
            missing.push(shape.pos[ri].len() as u32);
            if !b && shape.pos[ri].is_empty() {
                queue.push(ri as u32);
            }
        }
        let mut derived = vec![false; n];
        while let Some(ri) = queue.pop() {
            let head = shape.heads[ri as usize] as usize;
            if derived[head] {
                continue;
            }
            derived[head] = true;
            for &rj in &shape.pos_occ[head] {
                let rj = rj as usize;
                missing[rj] -= 1;
                if missing[rj] == 0 && !blocked[rj] {
                    queue.push(rj as u32);
                }
            }
        }
        // Accept exactly when the derivation reproduces the guess.
        if h.iter().all(|&a| derived[a as usize] == guess_true[a as usize]) {
            let true_atoms = (0..n).filter(|&i| derived[i]).map(|i| shape.atoms[i]);
            Some(PartialInterpretation::total_from_true_set(true_atoms, domain))
        } else {
            None
        }
    };
    let models = collect_guesses(total, parallel, eval);
    Ok(ModelSet::new(domain.clone(), models))
}

fn run_as2(
    shape: &Shape,
    domain: &BTreeSet<Atom>,
    parallel: bool,
) -> Result<ModelSet, TooManyGuesses> {
    let delta = shape.non_horn_rules();
    if delta.len() > MAX_GUESS_BITS {
        return Err(TooManyGuesses { bits: delta.len() });
    }
    let total = 1u64 << delta.len();
    let template = State::fresh(shape);
    let eval = |mask: u64| -> Option<PartialInterpretation> {
        let mut neg: BTreeSet<u32> = BTreeSet::new();
        for (bit, &ri) in delta.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                neg.extend(shape.neg[ri as usize].iter().copied());
            }
        }
        let mut state = template.clone();
        for &a in &neg {
            if !state.assume_false(a, shape) {
                return None;
            }
        }
        if !state.propagate(shape) {
            return None;
        }
        // Unknowns default to false; keep the candidate only if the
        // original rules all hold under it.
        if !shape.satisfies_all(&state.m) {
            return None;
        }
        let true_atoms = state
            .m
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == Truth::True)
            .map(|(i, _)| shape.atoms[i]);
        Some(PartialInterpretation::total_from_true_set(true_atoms, domain))
    };
    let models = collect_guesses(total, parallel, eval);
    Ok(ModelSet::new(domain.clone(), models))
}

fn run_brute(
    rules: &[Rule],
    domain: &BTreeSet<Atom>,
    parallel: bool,
) -> Result<ModelSet, TooManyGuesses> {
    let atoms: Vec<Atom> = domain.iter().copied().collect();
    if atoms.len() > MAX_GUESS_BITS {
        return Err(TooManyGuesses { bits: atoms.len() });
    }
    let total = 1u64 << atoms.len();
    let eval = |mask: u64| -> Option<PartialInterpretation> {
        let s: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        if rules.iter().any(|r| !rule_satisfied(r, &s)) {
            return None;
        }
        if least_fixpoint(rules, |a| s.contains(&a)) != s {
            return None;
        }
        Some(PartialInterpretation::total_from_true_set(
            s.iter().copied(),
            domain,
        ))
    };
    let models = collect_guesses(total, parallel, eval);
    Ok(ModelSet::new(domain.clone(), models))
}

/// Enumerates the stable models of `rules` over `domain` with the given
/// engine, reporting the engine actually used.
pub(crate) fn enumerate_rules(
    rules: &[Rule],
    domain: &BTreeSet<Atom>,
    engine: Engine,
    parallel: bool,
) -> Result<(ModelSet, Engine), TooManyGuesses> {
    if matches!(engine, Engine::Brute) {
        return run_brute(rules, domain, parallel).map(|ms| (ms, Engine::Brute));
    }
    let shape = Shape::build(rules, domain);
    let chosen = match engine {
        Engine::As1 => Engine::As1,
        Engine::As2 => Engine::As2,
        Engine::Auto => {
            // Branch counts are 2^k and 2^c; ties go to the rule-subset
            // guesser, whose propagation prunes branches early.
            if shape.negated_atoms().len() < shape.non_horn_rules().len() {
                Engine::As1
            } else {
                Engine::As2
            }
        }
        Engine::Brute => unreachable!(),
    };
    let models = match chosen {
        Engine::As1 => run_as1(&shape, domain, parallel)?,
        _ => run_as2(&shape, domain, parallel)?,
    };
    Ok((models, chosen))
}

/// All stable models by guessing truth values of the atoms that appear
/// negated: for each guess, the least model under it is accepted when
/// it reproduces the guess exactly. At most `2^k` branches.
pub fn all_stable1(kb: &KnowledgeBase) -> Result<ModelSet, TooManyGuesses> {
    enumerate_rules(kb.rules(), &kb.atom_set(), Engine::As1, false).map(|(ms, _)| ms)
}

/// All stable models by guessing, for each non-Horn rule, whether all
/// its negative literals hold: assumed-false atoms propagate through a
/// working copy, and surviving candidates must satisfy every original
/// rule. At most `2^c` branches.
pub fn all_stable2(kb: &KnowledgeBase) -> Result<ModelSet, TooManyGuesses> {
    enumerate_rules(kb.rules(), &kb.atom_set(), Engine::As2, false).map(|(ms, _)| ms)
}
