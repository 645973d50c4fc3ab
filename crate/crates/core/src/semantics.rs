//! Stable-model semantics: reduct, Horn least models, stability checks,
//! and the exhaustive reference solver.
//!
//! A set of atoms `S` is a stable model of a knowledge base exactly when
//! `S` equals the least model of the reduct of the base by `S` (delete
//! every rule whose negative body meets `S`, then strip the remaining
//! negative literals). Equivalently: `S` satisfies every rule and every
//! member of `S` has a proof.

use crate::kb::{Atom, KnowledgeBase, ModelSet, PartialInterpretation, Rule};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// A knowledge base whose every rule is Horn, enforced at construction.
#[derive(Debug, Clone)]
pub struct HornKb {
    kb: KnowledgeBase,
}

impl HornKb {
    pub fn kb(&self) -> &KnowledgeBase {
        &self.kb
    }

    pub fn into_kb(self) -> KnowledgeBase {
        self.kb
    }
}

/// Error for converting a non-Horn knowledge base into [`HornKb`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {index} has a negative body literal")]
pub struct NotHorn {
    pub index: usize,
}

impl TryFrom<KnowledgeBase> for HornKb {
    type Error = NotHorn;

    fn try_from(kb: KnowledgeBase) -> Result<Self, NotHorn> {
        match kb.rules().iter().position(|r| !r.is_horn()) {
            Some(index) => Err(NotHorn { index }),
            None => Ok(HornKb { kb }),
        }
    }
}

/// The reduct of `kb` by candidate true-set `m`: rules whose negative
/// body meets `m` are deleted, surviving rules keep only their positive
/// body. Shares `kb`'s atom table.
pub fn gl_transform(kb: &KnowledgeBase, m: &BTreeSet<Atom>) -> HornKb {
    let mut reduct = kb.clone();
    let rules: Vec<Rule> = kb
        .rules()
        .iter()
        .filter(|r| r.neg().iter().all(|a| !m.contains(a)))
        .map(|r| Rule::new(r.head(), r.pos().to_vec(), Vec::new()))
        .collect();
    reduct.set_rules(rules);
    HornKb { kb: reduct }
}

/// Least fixpoint of forward chaining where a rule fires once its whole
/// positive body is derived, unless `negative_true` holds for some
/// negative body atom. Counter/worklist, linear in total literals.
pub(crate) fn least_fixpoint<F>(rules: &[Rule], negative_true: F) -> BTreeSet<Atom>
where
    F: Fn(Atom) -> bool,
{
    let mut index: HashMap<Atom, usize> = HashMap::new();
    let mut atoms: Vec<Atom> = Vec::new();
    let local = |a: Atom, index: &mut HashMap<Atom, usize>, atoms: &mut Vec<Atom>| -> usize {
        *index.entry(a).or_insert_with(|| {
            atoms.push(a);
            atoms.len() - 1
        })
    };
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut watchers: Vec<Vec<usize>> = Vec::new();
    let mut queue: Vec<usize> = Vec::new();
    let mut blocked: Vec<bool> = Vec::with_capacity(rules.len());
    for (ri, rule) in rules.iter().enumerate() {
        let is_blocked = rule.neg().iter().any(|&a| negative_true(a));
        blocked.push(is_blocked);
        missing.push(rule.pos().len());
        if is_blocked {
            continue;
        }
        for &a in rule.pos() {
            let la = local(a, &mut index, &mut atoms);
            if watchers.len() <= la {
                watchers.resize(la + 1, Vec::new());
            }
            watchers[la].push(ri);
        }
        if rule.pos().is_empty() {
            queue.push(ri);
        }
    }
    let mut derived_local: Vec<bool> = vec![false; atoms.len().max(1)];
    let mut derived: BTreeSet<Atom> = BTreeSet::new();
    while let Some(ri) = queue.pop() {
        let head = rules[ri].head();
        let lh = local(head, &mut index, &mut atoms);
        if derived_local.len() <= lh {
            derived_local.resize(lh + 1, false);
        }
        if derived_local[lh] {
            continue;
        }
        derived_local[lh] = true;
        derived.insert(head);
        if lh < watchers.len() {
            // Take the watcher list; each positive occurrence is counted once.
            let watching = std::mem::take(&mut watchers[lh]);
            for wi in watching {
                if blocked[wi] {
                    continue;
                }
                missing[wi] -= 1;
                if missing[wi] == 0 {
                    queue.push(wi);
                }
            }
        }
    }
    derived
}

/// Least model of a Horn knowledge base.
pub fn horn_minimal_model(horn: &HornKb) -> BTreeSet<Atom> {
    least_fixpoint(horn.kb.rules(), |_| false)
}

/// Naive reference for [`horn_minimal_model`]: rescans every rule until
/// a full pass derives nothing new. Kept for differential testing.
pub fn horn_minimal_model_naive(horn: &HornKb) -> BTreeSet<Atom> {
    let mut derived: BTreeSet<Atom> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rule in horn.kb.rules() {
            if !derived.contains(&rule.head()) && rule.pos().iter().all(|a| derived.contains(a)) {
                derived.insert(rule.head());
                changed = true;
            }
        }
        if !changed {
            return derived;
        }
    }
}

/// Whether the total interpretation with true-set `s` satisfies `rule`.
pub fn rule_satisfied(rule: &Rule, s: &BTreeSet<Atom>) -> bool {
    let body_holds = rule.pos().iter().all(|a| s.contains(a))
        && rule.neg().iter().all(|a| !s.contains(a));
    !body_holds || s.contains(&rule.head())
}

/// Index of the first rule not satisfied by true-set `s`, if any.
pub fn first_unsatisfied_rule(kb: &KnowledgeBase, s: &BTreeSet<Atom>) -> Option<usize> {
    kb.rules().iter().position(|r| !rule_satisfied(r, s))
}

/// Stability check: `s` must equal the least model of the reduct by `s`.
pub fn is_stable(kb: &KnowledgeBase, s: &BTreeSet<Atom>) -> bool {
    least_fixpoint(kb.rules(), |a| s.contains(&a)) == *s
}

/// Whether `p` has a proof with respect to candidate `s`: membership in
/// the ascending derivation sequence that treats `s` as the negative
/// oracle.
pub fn has_proof(kb: &KnowledgeBase, s: &BTreeSet<Atom>, p: Atom) -> bool {
    least_fixpoint(kb.rules(), |a| s.contains(&a)).contains(&p)
}

/// Why a candidate is not stable, reported by [`explain_candidate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable,
    /// Index of the first rule the candidate fails to satisfy.
    UnsatisfiedRule(usize),
    /// Smallest-id member of the candidate with no proof.
    Unproved(Atom),
}

/// Full stability verdict for a candidate true-set.
pub fn explain_candidate(kb: &KnowledgeBase, s: &BTreeSet<Atom>) -> StabilityVerdict {
    if let Some(index) = first_unsatisfied_rule(kb, s) {
        return StabilityVerdict::UnsatisfiedRule(index);
    }
    let derived = least_fixpoint(kb.rules(), |a| s.contains(&a));
    match s.iter().find(|a| !derived.contains(a)) {
        Some(&a) => StabilityVerdict::Unproved(a),
        // Satisfaction plus proofs for every member is exactly stability,
        // so derived == s here.
        None => StabilityVerdict::Stable,
    }
}

/// Error from the exhaustive solver when the atom table is too large.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom count {atoms} exceeds the brute-force cap of {cap}")]
pub struct BruteCapExceeded {
    pub atoms: usize,
    pub cap: usize,
}

/// Default atom cap for [`brute_force_stable_models`].
pub const DEFAULT_BRUTE_CAP: usize = 20;

/// Reference solver: tries every subset of the atom table and keeps the
/// stable ones. Deterministic; intended as the test oracle and for tiny
/// inputs only.
pub fn brute_force_stable_models(
    kb: &KnowledgeBase,
    cap: usize,
) -> Result<ModelSet, BruteCapExceeded> {
    let n = kb.atom_count();
    if n > cap || n >= 63 {
        return Err(BruteCapExceeded { atoms: n, cap });
    }
    let domain = kb.atom_set();
    let mut models = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let s: BTreeSet<Atom> = kb.atoms().filter(|a| mask & (1 << a.index()) != 0).collect();
        // Stable models satisfy every rule; skip the fixpoint otherwise.
        if first_unsatisfied_rule(kb, &s).is_some() {
            continue;
        }
        if is_stable(kb, &s) {
            models.push(PartialInterpretation::total_from_true_set(
                s.iter().copied(),
                &domain,
            ));
        }
    }
    Ok(ModelSet::new(domain, models))
}
