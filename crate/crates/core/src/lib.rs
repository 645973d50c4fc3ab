//! Stable-model solver with component-wise enumeration and an Omega
//! classification index.
//!
//! The crate parses rule text (`head :- pos, not neg.`) into a
//! [`KnowledgeBase`], computes its atom dependency graph and strongly
//! connected components, classifies the input by a product bound `t` on
//! the number of stable models, and enumerates all stable models by
//! solving one component at a time and combining the partial models.
//! Function-free first-order input is grounded (naively or guided) and
//! solved predicate-component-wise.

pub mod aas;
pub mod enumerate;
pub mod firstorder;
pub mod generate;
pub mod graphs;
pub mod kb;
pub mod parse;
pub mod semantics;

pub use aas::{
    aas_solve, aas_solve_with_report, cartes_prod, convert, query_atom, solve_one,
    IncrementalSolver, NodeReport, QueryAnswer, QueryMode, SolveError, SolveOptions, SolveReport,
    UpdateError,
};
pub use enumerate::{all_stable1, all_stable2, Engine, TooManyGuesses, WorkingCopy};
pub use firstorder::{
    check_safe, faas_solve, ground, ground_guided, ground_program, herbrand_base,
    herbrand_universe, parse_fo_program, predicate_kb, FaasError, FaasOutcome, FoAtom, FoProgram,
    FoRule, HerbrandUniverse, SafetyViolation, Term,
};
pub use generate::{
    random_edit_sequence, random_fo, random_nogoods, random_program, random_stratified, GenConfig,
};
pub use graphs::{
    classify, classify_graph, dependency_dot, Classification, DependencyGraph, NodeBound, Sign,
    SuperGraph, DEFAULT_OMEGA_CAP,
};
pub use kb::{Atom, KnowledgeBase, ModelSet, Nogood, PartialInterpretation, Rule, Truth};
pub use parse::{parse_kb, parse_program, parse_program_into, ParseError, Program, Warning};
pub use semantics::{
    brute_force_stable_models, explain_candidate, first_unsatisfied_rule, gl_transform, has_proof,
    horn_minimal_model, is_stable, BruteCapExceeded, HornKb, StabilityVerdict, DEFAULT_BRUTE_CAP,
};
