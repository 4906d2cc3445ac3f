//! Deterministic automata, layered graphs and the Regular constraint.

mod dfa;
mod graph;

use std::sync::Arc;

pub use dfa::{Dfa, DfaError};
pub use graph::{regular_max, regular_min, ArcMarks, GraphArc, LayeredGraph};

use crate::domain::Domain;
use crate::engine::{FilterResult, Propagator};
use crate::store::VarId;

/// Domain consistency for `Regular`: keeps exactly the values that label an
/// arc of the trimmed layered graph.
pub fn filter_regular(dfa: &Dfa, domains: &mut [Domain]) -> FilterResult {
    crate::check_nonempty(domains)?;
    let graph = LayeredGraph::build(dfa, domains)?;
    for (d, s) in domains.iter_mut().zip(graph.supported_domains()) {
        *d = s;
    }
    Ok(crate::status_of(domains))
}

/// The sequence `vars` spells a word accepted by the automaton.
#[derive(Clone, Debug)]
pub struct RegularPropagator {
    vars: Vec<VarId>,
    dfa: Arc<Dfa>,
}

impl RegularPropagator {
    pub fn new(vars: Vec<VarId>, dfa: Arc<Dfa>) -> Self {
        RegularPropagator { vars, dfa }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }
}

impl Propagator for RegularPropagator {
    fn name(&self) -> &str {
        "regular"
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn priority(&self) -> u8 {
        2
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        filter_regular(&self.dfa, domains)
    }
}
