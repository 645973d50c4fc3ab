//! Deterministic random generators for test corpora and benchmarks.
//!
//! Everything is emitted as rule text so generated inputs go through
//! the same parser as user input. A fixed seed yields byte-identical
//! output.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Shape of a random propositional program.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Atom pool size; names are `p0..p{atoms-1}`.
    pub atoms: usize,
    /// Exact number of rules emitted.
    pub rules: usize,
    /// Largest body, in literals.
    pub max_body: usize,
    /// Cap on rules carrying a negative literal. Keeps the guess
    /// space of every enumerator within reach.
    pub max_non_horn: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: 10,
            rules: 16,
            max_body: 3,
            max_non_horn: 8,
        }
    }
}

fn write_rule(out: &mut String, head: &str, pos: &[String], neg: &[String]) {
    out.push_str(head);
    if !pos.is_empty() || !neg.is_empty() {
        out.push_str(" :- ");
        let mut parts: Vec<String> = pos.to_vec();
        parts.extend(neg.iter().map(|a| format!("not {a}")));
        out.push_str(&parts.join(", "));
    }
    out.push_str(".\n");
}

fn random_rule_text(
    out: &mut String,
    rng: &mut ChaCha8Rng,
    names: &[String],
    max_body: usize,
    allow_negative: bool,
) -> bool {
    let head = names[rng.gen_range(0..names.len())].clone();
    let body_len = rng.gen_range(0..=max_body.min(names.len()));
    let picked = rand::seq::index::sample(rng, names.len(), body_len);
    let negative_rule = allow_negative && body_len > 0 && rng.gen_bool(0.5);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for idx in picked.iter() {
        if negative_rule && rng.gen_bool(0.5) {
            neg.push(names[idx].clone());
        } else {
            pos.push(names[idx].clone());
        }
    }
    if negative_rule && neg.is_empty() {
        neg.push(pos.pop().expect("nonempty body"));
    }
    write_rule(out, &head, &pos, &neg);
    !neg.is_empty()
}

/// A random program with `config.rules` rules over at most
/// `config.atoms` atoms, at most `config.max_non_horn` of them
/// non-Horn.
pub fn random_program(config: &GenConfig, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..config.atoms).map(|i| format!("p{i}")).collect();
    let mut out = String::new();
    let mut non_horn = 0usize;
    for _ in 0..config.rules {
        if random_rule_text(
            &mut out,
            &mut rng,
            &names,
            config.max_body,
            non_horn < config.max_non_horn,
        ) {
            non_horn += 1;
        }
    }
    out
}

/// Random nogood directives over the same `p{i}` pool, 1 to 3 distinct
/// atoms each.
pub fn random_nogoods(atoms: usize, count: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e6f676f);
    let mut out = String::new();
    for _ in 0..count {
        let len = rng.gen_range(1..=3usize.min(atoms.max(1)));
        let picked = rand::seq::index::sample(&mut rng, atoms, len.min(atoms));
        let parts: Vec<String> = picked.iter().map(|i| format!("p{i}")).collect();
        let _ = writeln!(out, "#nogood {}.", parts.join(" "));
    }
    out
}

/// A stratified program made of `groups` independent bounded blocks.
///
/// Each block has three atoms ordered `s{g}_0 < s{g}_1 < s{g}_2`; rule
/// bodies only mention strictly earlier atoms of the same block, so
/// every component is a single atom, negative edges never close a
/// cycle, and the subtree of any node stays within its block. Component
/// count grows linearly with `groups` while per-node work is bounded.
pub fn random_stratified(groups: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x73747261);
    let mut out = String::new();
    for g in 0..groups {
        let name = |i: usize| format!("s{g}_{i}");
        if rng.gen_bool(0.8) {
            write_rule(&mut out, &name(0), &[], &[]);
        }
        for i in 1..3 {
            let body_len = rng.gen_range(1..=i.min(2));
            let picked = rand::seq::index::sample(&mut rng, i, body_len);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for j in picked.iter() {
                if rng.gen_bool(0.5) {
                    neg.push(name(j));
                } else {
                    pos.push(name(j));
                }
            }
            write_rule(&mut out, &name(i), &pos, &neg);
        }
    }
    out
}

/// A base program plus `batches` incremental rule batches. Batches mix
/// the original atom pool with fresh `q{batch}_{j}` atoms, so updates
/// both extend old components and create new ones.
pub fn random_edit_sequence(config: &GenConfig, batches: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x65646974);
    let mut texts = vec![random_program(config, seed)];
    let mut names: Vec<String> = (0..config.atoms).map(|i| format!("p{i}")).collect();
    for b in 1..=batches {
        for j in 0..rng.gen_range(1..=2usize) {
            names.push(format!("q{b}_{j}"));
        }
        let mut out = String::new();
        let count = rng.gen_range(1..=4usize);
        let mut non_horn = 0usize;
        for _ in 0..count {
            if random_rule_text(&mut out, &mut rng, &names, config.max_body, non_horn < 2) {
                non_horn += 1;
            }
        }
        texts.push(out);
    }
    texts
}

/// A safe function-free first-order program over a Herbrand base of at
/// most 14 ground atoms: three unary predicates, two zeroary ones, one
/// binary one, two constants.
pub fn random_fo(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x666f666f);
    // (name, arity)
    const PREDS: [(&str, usize); 6] =
        [("u0", 1), ("u1", 1), ("u2", 1), ("z0", 0), ("z1", 0), ("r0", 2)];
    const CONSTS: [&str; 2] = ["c1", "c2"];
    const VARS: [&str; 2] = ["X", "Y"];
    let mut out = String::new();
    let rules = rng.gen_range(4..=8usize);
    for _ in 0..rules {
        if rng.gen_bool(0.25) {
            // Ground fact.
            let (p, arity) = PREDS[rng.gen_range(0..PREDS.len())];
            let args: Vec<String> = (0..arity)
                .map(|_| CONSTS[rng.gen_range(0..CONSTS.len())].to_string())
                .collect();
            write_rule(&mut out, &atom_text(p, &args), &[], &[]);
            continue;
        }
        let mut available: Vec<&str> = Vec::new();
        let mut pos = Vec::new();
        for _ in 0..rng.gen_range(1..=2usize) {
            let (p, arity) = PREDS[rng.gen_range(0..PREDS.len())];
            let args: Vec<String> = (0..arity)
                .map(|_| {
                    if rng.gen_bool(0.8) {
                        let v = VARS[rng.gen_range(0..VARS.len())];
                        if !available.contains(&v) {
                            available.push(v);
                        }
                        v.to_string()
                    } else {
                        CONSTS[rng.gen_range(0..CONSTS.len())].to_string()
                    }
                })
                .collect();
            pos.push(atom_text(p, &args));
        }
        let pick_arg = |rng: &mut ChaCha8Rng, available: &[&str]| {
            if !available.is_empty() && rng.gen_bool(0.8) {
                available[rng.gen_range(0..available.len())].to_string()
            } else {
                CONSTS[rng.gen_range(0..CONSTS.len())].to_string()
            }
        };
        let (hp, harity) = PREDS[rng.gen_range(0..PREDS.len())];
        let head_args: Vec<String> = (0..harity).map(|_| pick_arg(&mut rng, &available)).collect();
        let mut neg = Vec::new();
        if rng.gen_bool(0.6) {
            let (np, narity) = PREDS[rng.gen_range(0..PREDS.len())];
            let neg_args: Vec<String> =
                (0..narity).map(|_| pick_arg(&mut rng, &available)).collect();
            neg.push(atom_text(np, &neg_args));
        }
        write_rule(&mut out, &atom_text(hp, &head_args), &pos, &neg);
    }
    out
}

fn atom_text(pred: &str, args: &[String]) -> String {
    if args.is_empty() {
        pred.to_string()
    } else {
        format!("{pred}({})", args.join(", "))
    }
}
