//! `C&Lex` for Sequence rows.
//!
//! Sequence is handled through its membership bits `b[i] ⇔ X[i] ∈ V`. When
//! every value outside `V` is below every value inside `V` (always true for
//! Boolean variables with `V = {1}`), the bit order agrees with the value
//! order, so lex-extreme solutions of the bits expand directly to lex-extreme
//! solutions of the original variables. Lex comparisons are always made on
//! the expanded original values.

use std::cmp::Ordering;
use std::sync::Arc;

use thiserror::Error;

use crate::clex::generic::{propagate_clex, RowConstraint};
use crate::domain::{self, Domain};
use crate::engine::{FilterResult, Model, Propagator, PropagatorHandle};
use crate::regular::{Dfa, LayeredGraph};
use crate::store::VarId;
use crate::Failure;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("invalid sequence bounds: need 0 ≤ l ≤ u ≤ k and k ≥ 1 (got l={l}, u={u}, k={k})")]
    Bounds { l: usize, u: usize, k: usize },
    #[error("window length {k} is too large")]
    WindowTooLong { k: usize },
    #[error("variable {var}: value {outside} outside the set is not below value {inside} inside it")]
    NotChannelable { var: usize, outside: i32, inside: i32 },
}

/// Every `k` consecutive variables hold between `lower` and `upper` values of `values`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    pub lower: usize,
    pub upper: usize,
    pub k: usize,
    pub values: Domain,
}

/// Longest window the bit-history automaton supports.
pub const MAX_WINDOW: usize = 16;

impl SequenceSpec {
    pub fn try_new(lower: usize, upper: usize, k: usize, values: Domain) -> Result<Self, SequenceError> {
        if k == 0 || lower > upper || upper > k {
            return Err(SequenceError::Bounds { l: lower, u: upper, k });
        }
        if k > MAX_WINDOW {
            return Err(SequenceError::WindowTooLong { k });
        }
        Ok(SequenceSpec {
            lower,
            upper,
            k,
            values,
        })
    }

    /// # Panics
    /// On invalid bounds; see [`SequenceSpec::try_new`].
    pub fn new(lower: usize, upper: usize, k: usize, values: Domain) -> Self {
        Self::try_new(lower, upper, k, values).unwrap()
    }

    /// Boolean spec with `V = {1}`.
    pub fn boolean(lower: usize, upper: usize, k: usize) -> Self {
        Self::new(lower, upper, k, Domain::singleton(1))
    }

    fn bit(&self, v: i32) -> i32 {
        self.values.contains(v) as i32
    }
}

/// Automaton over membership bits accepting a string iff every length-`k`
/// window has between `lower` and `upper` ones.
///
/// A state is the ordered list of the last `min(len, k − 1)` bits read.
#[derive(Clone, Debug)]
pub struct SequenceDfa {
    pub dfa: Dfa,
}

impl SequenceDfa {
    pub fn new(spec: &SequenceSpec) -> Self {
        let k = spec.k;
        let keep = k - 1;
        // state (len, bits) with len < k, numbered 2^len − 1 + bits
        let id = |len: usize, bits: u32| (1usize << len) - 1 + bits as usize;
        let num_states = (1usize << k) - 1;
        let mut transitions = Vec::new();
        for len in 0..k {
            for bits in 0..(1u32 << len) {
                for b in 0..2u32 {
                    let hist = (bits << 1) | b;
                    let (next_len, next_bits) = if len < keep {
                        (len + 1, hist)
                    } else {
                        let ones = hist.count_ones() as usize;
                        if ones < spec.lower || ones > spec.upper {
                            continue;
                        }
                        (keep, hist & ((1u32 << keep) - 1))
                    };
                    transitions.push((id(len, bits), b as i32, id(next_len, next_bits)));
                }
            }
        }
        let dfa = Dfa::new(num_states, 0, 0..num_states, transitions).expect("valid sequence automaton");
        SequenceDfa { dfa }
    }
}

/// Bit domains of `domains`: 1 if some value lies in `V`, 0 if some lies outside.
pub fn bit_domains(spec: &SequenceSpec, domains: &[Domain]) -> Vec<Domain> {
    domains
        .iter()
        .map(|d| d.iter().map(|v| spec.bit(v)).collect())
        .collect()
}

/// Values of `domains` whose bit survives in `bits`.
fn lift(spec: &SequenceSpec, domains: &[Domain], bits: &[Domain]) -> Vec<Domain> {
    domains
        .iter()
        .zip(bits)
        .map(|(d, b)| d.iter().filter(|&v| b.contains(spec.bit(v))).collect())
        .collect()
}

/// Sequence as a row constraint: DC via the bit automaton.
#[derive(Clone, Debug)]
pub struct SequenceRow {
    spec: SequenceSpec,
    dfa: SequenceDfa,
}

impl SequenceRow {
    pub fn new(spec: SequenceSpec) -> Self {
        let dfa = SequenceDfa::new(&spec);
        SequenceRow { spec, dfa }
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }
}

impl RowConstraint for SequenceRow {
    fn name(&self) -> &str {
        "sequence"
    }

    fn enforce(&self, domains: &mut [Domain]) -> Result<(), Failure> {
        crate::check_nonempty(domains)?;
        let bits = bit_domains(&self.spec, domains);
        let g = LayeredGraph::build(&self.dfa.dfa, &bits)?;
        let lifted = lift(&self.spec, domains, &g.supported_domains());
        domains.clone_from_slice(&lifted);
        Ok(())
    }
}

/// Lex-smallest Boolean solution of the Sequence, or failure.
pub fn check_consistency_min(spec: &SequenceSpec, bits: &[Domain]) -> Result<Vec<i32>, Failure> {
    Ok(LayeredGraph::build(&SequenceDfa::new(spec).dfa, bits)?.min_word())
}

/// Lex-greatest Boolean solution of the Sequence, or failure.
pub fn check_consistency_max(spec: &SequenceSpec, bits: &[Domain]) -> Result<Vec<i32>, Failure> {
    Ok(LayeredGraph::build(&SequenceDfa::new(spec).dfa, bits)?.max_word())
}

/// Maps between multi-valued domains and their membership bits.
#[derive(Clone, Debug)]
pub struct Channel<'a> {
    spec: &'a SequenceSpec,
    domains: &'a [Domain],
}

impl<'a> Channel<'a> {
    /// Fails unless every value outside `V` is below every value inside `V`
    /// in each domain.
    pub fn new(spec: &'a SequenceSpec, domains: &'a [Domain]) -> Result<Self, SequenceError> {
        for (var, d) in domains.iter().enumerate() {
            let outside = d.iter().filter(|&v| !spec.values.contains(v)).max();
            let inside = d.iter().find(|&v| spec.values.contains(v));
            if let (Some(o), Some(i)) = (outside, inside) {
                if o > i {
                    return Err(SequenceError::NotChannelable {
                        var,
                        outside: o,
                        inside: i,
                    });
                }
            }
        }
        Ok(Channel { spec, domains })
    }

    pub fn bits(&self) -> Vec<Domain> {
        bit_domains(self.spec, self.domains)
    }

    /// Smallest value of position `i` with membership bit `b`.
    pub fn min_value(&self, i: usize, b: i32) -> Option<i32> {
        self.domains[i].iter().find(|&v| self.spec.bit(v) == b)
    }

    /// Largest value of position `i` with membership bit `b`.
    pub fn max_value(&self, i: usize, b: i32) -> Option<i32> {
        self.domains[i].iter().rev().find(|&v| self.spec.bit(v) == b)
    }

    /// Compares `bound` with the lex-smallest (or greatest) tuple with the
    /// given bits and value `v` at position `i`, without building it.
    fn cmp_expanded(&self, bits: &[i32], i: usize, v: i32, greatest: bool, bound: &[i32]) -> Ordering {
        for (j, (&b, &w)) in bits.iter().zip(bound).enumerate() {
            let t = if j == i {
                v
            } else if greatest {
                self.max_value(j, b).expect("bit has a value")
            } else {
                self.min_value(j, b).expect("bit has a value")
            };
            match t.cmp(&w) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Lex-smallest original tuple with the given bits.
    pub fn expand_min(&self, bits: &[i32]) -> Vec<i32> {
        bits.iter()
            .enumerate()
            .map(|(i, &b)| self.min_value(i, b).expect("bit has a value"))
            .collect()
    }

    /// Lex-greatest original tuple with the given bits.
    pub fn expand_max(&self, bits: &[i32]) -> Vec<i32> {
        bits.iter()
            .enumerate()
            .map(|(i, &b)| self.max_value(i, b).expect("bit has a value"))
            .collect()
    }
}

/// For each position and bit, the lex-extreme bit string with that bit there
/// (`None` when the bit has no support).
fn bit_supports(g: &LayeredGraph, greatest: bool) -> Vec<[Option<Vec<i32>>; 2]> {
    g.extreme_words(greatest)
        .into_iter()
        .map(|layer| {
            let mut out = [None, None];
            for (b, word) in layer {
                out[b as usize] = Some(word);
            }
            out
        })
        .collect()
}

/// Lex-smallest solution of the Sequence on `X` with `X[i] = v`, for every
/// value of position `i` (values without support are omitted).
pub fn smallest_supports(spec: &SequenceSpec, domains: &[Domain], i: usize) -> Vec<(i32, Vec<i32>)> {
    let channel = Channel::new(spec, domains).expect("channel applicable");
    let bits = channel.bits();
    let sup = match LayeredGraph::build(&SequenceDfa::new(spec).dfa, &bits) {
        Ok(g) => bit_supports(&g, false),
        Err(_) => vec![[None, None]; bits.len()],
    };
    domains[i]
        .iter()
        .filter_map(|v| {
            sup[i][spec.bit(v) as usize].as_ref().map(|bits| {
                let mut t = channel.expand_min(bits);
                t[i] = v;
                (v, t)
            })
        })
        .collect()
}

/// Filters `Sequence(X) ∧ Sequence(Y) ∧ X ≤lex Y` to domain consistency.
///
/// A value of `X` stays iff its lex-smallest support is `≤lex Y_u`, and a
/// value of `Y` stays iff its lex-greatest support is `≥lex X_l`. Domains
/// that violate the channel condition fall back to the generic algorithm.
pub fn propagate_clex_sequence(
    xs: &mut [Domain],
    ys: &mut [Domain],
    spec: &SequenceSpec,
    dfa: &SequenceDfa,
) -> Result<(), Failure> {
    assert_eq!(xs.len(), ys.len());
    crate::check_nonempty(xs)?;
    crate::check_nonempty(ys)?;
    let (cx, cy) = match (Channel::new(spec, xs), Channel::new(spec, ys)) {
        (Ok(cx), Ok(cy)) => (cx, cy),
        _ => {
            let row = SequenceRow {
                spec: spec.clone(),
                dfa: dfa.clone(),
            };
            return propagate_clex(xs, ys, &row, &row);
        }
    };
    let bx = cx.bits();
    let by = cy.bits();
    let gx = LayeredGraph::build(&dfa.dfa, &bx)?;
    let gy = LayeredGraph::build(&dfa.dfa, &by)?;
    let x_low = cx.expand_min(&gx.min_word());
    let y_up = cy.expand_max(&gy.max_word());
    if x_low > y_up {
        return Err(Failure);
    }

    // a side whose every tuple already respects its bound needs only row DC
    let new_x = if domain::maxima(xs).is_some_and(|m| m <= y_up) {
        lift(spec, xs, &gx.supported_domains())
    } else {
        let sx = bit_supports(&gx, false);
        filter_by_support(spec, xs, &sx, |i, v, bits| {
            cx.cmp_expanded(bits, i, v, false, &y_up) != Ordering::Greater
        })
    };
    let new_y = if domain::minima(ys).is_some_and(|m| m >= x_low) {
        lift(spec, ys, &gy.supported_domains())
    } else {
        let sy = bit_supports(&gy, true);
        filter_by_support(spec, ys, &sy, |i, v, bits| {
            cy.cmp_expanded(bits, i, v, true, &x_low) != Ordering::Less
        })
    };
    crate::check_nonempty(&new_x)?;
    crate::check_nonempty(&new_y)?;
    xs.clone_from_slice(&new_x);
    ys.clone_from_slice(&new_y);
    Ok(())
}

fn filter_by_support(
    spec: &SequenceSpec,
    domains: &[Domain],
    supports: &[[Option<Vec<i32>>; 2]],
    keep: impl Fn(usize, i32, &[i32]) -> bool,
) -> Vec<Domain> {
    domains
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.iter()
                .filter(|&v| {
                    supports[i][spec.bit(v) as usize]
                        .as_ref()
                        .is_some_and(|bits| keep(i, v, bits))
                })
                .collect()
        })
        .collect()
}

/// Propagator for two Sequence rows ordered `X ≤lex Y`.
#[derive(Clone, Debug)]
pub struct ClexSequencePropagator {
    n: usize,
    scope: Vec<VarId>,
    spec: SequenceSpec,
    dfa: Arc<SequenceDfa>,
}

impl ClexSequencePropagator {
    pub fn new(xs: Vec<VarId>, ys: Vec<VarId>, spec: SequenceSpec) -> Self {
        assert_eq!(xs.len(), ys.len(), "lex vectors must have equal length");
        let n = xs.len();
        let dfa = Arc::new(SequenceDfa::new(&spec));
        let scope = xs.into_iter().chain(ys).collect();
        ClexSequencePropagator { n, scope, spec, dfa }
    }
}

impl Propagator for ClexSequencePropagator {
    fn name(&self) -> &str {
        "clex-sequence"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        3
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        let (xs, ys) = domains.split_at_mut(self.n);
        propagate_clex_sequence(xs, ys, &self.spec, &self.dfa)?;
        Ok(crate::status_of(domains))
    }
}

/// Posts the combined Sequence propagator after checking that the current
/// domains admit the bit channel.
pub fn post_clex_sequence(
    model: &mut Model,
    xs: &[VarId],
    ys: &[VarId],
    spec: &SequenceSpec,
) -> Result<PropagatorHandle, SequenceError> {
    let doms = model.store().gather(&[xs, ys].concat());
    Channel::new(spec, &doms)?;
    Ok(model.post(ClexSequencePropagator::new(xs.to_vec(), ys.to_vec(), spec.clone())))
}
