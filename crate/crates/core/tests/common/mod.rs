//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use clex::clex::{RegularRow, RowConstraint, SequenceRow, SequenceSpec, SumRow};
use clex::oracle::{RegularCheck, SequenceCheck, SumCheck, TupleChecker};
use clex::regular::Dfa;
use clex::{Domain, VarId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-empty random subset of `lo..lo + width`.
pub fn random_domain(rng: &mut ChaCha8Rng, lo: i32, width: i32) -> Domain {
    loop {
        let d: Domain = (lo..lo + width).filter(|_| rng.gen_bool(0.6)).collect();
        if !d.is_empty() {
            return d;
        }
    }
}

pub fn random_domains(rng: &mut ChaCha8Rng, n: usize, width: i32) -> Vec<Domain> {
    (0..n).map(|_| random_domain(rng, 0, width)).collect()
}

/// Random automaton with up to `max_states` states over `0..symbols`.
pub fn random_dfa(rng: &mut ChaCha8Rng, max_states: usize, symbols: i32) -> Dfa {
    let q = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.5..0.95);
    let mut transitions = Vec::new();
    for s in 0..q {
        for v in 0..symbols {
            if rng.gen_bool(density) {
                transitions.push((s, v, rng.gen_range(0..q)));
            }
        }
    }
    let mut finals: Vec<usize> = (0..q).filter(|_| rng.gen_bool(0.5)).collect();
    if finals.is_empty() {
        finals.push(rng.gen_range(0..q));
    }
    Dfa::new(q, 0, finals, transitions).unwrap()
}

pub fn random_sequence_spec(rng: &mut ChaCha8Rng, max_k: usize, values: Domain) -> SequenceSpec {
    let k = rng.gen_range(1..=max_k);
    let lower = rng.gen_range(0..=k);
    let upper = rng.gen_range(lower..=k);
    SequenceSpec::new(lower, upper, k, values)
}

/// A row constraint together with its tuple checker factory.
#[derive(Clone)]
pub enum RowKind {
    Sum,
    Regular(Arc<Dfa>),
    Sequence(SequenceSpec),
}

impl RowKind {
    pub fn adapter(&self) -> Arc<dyn RowConstraint> {
        match self {
            RowKind::Sum => Arc::new(SumRow),
            RowKind::Regular(d) => Arc::new(RegularRow(d.clone())),
            RowKind::Sequence(s) => Arc::new(SequenceRow::new(s.clone())),
        }
    }

    pub fn checker(&self, vars: Vec<VarId>) -> Box<dyn TupleChecker> {
        match self {
            RowKind::Sum => Box::new(SumCheck::new(vars[1], vars[0], vars[2])),
            RowKind::Regular(d) => Box::new(RegularCheck::new(vars, d.clone())),
            RowKind::Sequence(s) => Box::new(SequenceCheck::new(
                vars,
                s.lower,
                s.upper,
                s.k,
                s.values.clone(),
            )),
        }
    }
}

/// Two rows of equal length under the same row constraint.
#[derive(Clone)]
pub struct PairInstance {
    pub kind: RowKind,
    pub xs: Vec<Domain>,
    pub ys: Vec<Domain>,
}

impl PairInstance {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn all_domains(&self) -> Vec<Domain> {
        self.xs.iter().chain(&self.ys).cloned().collect()
    }
}

/// `Y = X + Z` rows with small overlapping ranges.
pub fn random_sum_pair(rng: &mut ChaCha8Rng) -> PairInstance {
    let row = |rng: &mut ChaCha8Rng| {
        vec![
            random_domain(rng, 0, 4),
            random_domain(rng, 1, 4),
            random_domain(rng, 0, 3),
        ]
    };
    let xs = row(rng);
    let ys = row(rng);
    PairInstance {
        kind: RowKind::Sum,
        xs,
        ys,
    }
}

pub fn random_regular_pair(rng: &mut ChaCha8Rng) -> PairInstance {
    let n = rng.gen_range(1..=5);
    let symbols = rng.gen_range(2..=3);
    let dfa = random_dfa(rng, 5, symbols);
    PairInstance {
        kind: RowKind::Regular(Arc::new(dfa)),
        xs: random_domains(rng, n, symbols),
        ys: random_domains(rng, n, symbols),
    }
}

/// Sequence rows; values are split so that every value outside the set is
/// below every value inside it.
pub fn random_sequence_pair(rng: &mut ChaCha8Rng, max_n: usize) -> PairInstance {
    let n = rng.gen_range(1..=max_n);
    let width = *[2, 2, 3, 4].choose(rng).unwrap();
    let split = rng.gen_range(1..width);
    let values: Domain = (split..width).collect();
    let spec = random_sequence_spec(rng, 4.min(n.max(1)), values);
    PairInstance {
        kind: RowKind::Sequence(spec),
        xs: random_domains(rng, n, width),
        ys: random_domains(rng, n, width),
    }
}

pub fn random_pair(rng: &mut ChaCha8Rng) -> PairInstance {
    match rng.gen_range(0..3) {
        0 => random_sum_pair(rng),
        1 => random_regular_pair(rng),
        _ => random_sequence_pair(rng, 5),
    }
}

/// Ground-truth domains of `C(X) ∧ C(Y) ∧ X ≤lex Y`.
pub fn oracle_pair(inst: &PairInstance) -> Option<(Vec<Domain>, Vec<Domain>)> {
    let n = inst.n();
    let cx = inst.kind.checker((0..n).collect());
    let cy = inst.kind.checker((n..2 * n).collect());
    let lex = clex::oracle::LexCheck::new((0..n).collect(), (n..2 * n).collect());
    let out = clex::oracle::brute_force_dc(&inst.all_domains(), &[&*cx, &*cy, &lex]).unwrap()?;
    Some((out[..n].to_vec(), out[n..].to_vec()))
}

/// Ground-truth domains of a single row.
pub fn oracle_row(kind: &RowKind, domains: &[Domain]) -> Option<Vec<Domain>> {
    let c = kind.checker((0..domains.len()).collect());
    clex::oracle::brute_force_dc(domains, &[&*c]).unwrap()
}
