//! Domain-consistent propagation for lexicographic ordering constraints
//! combined with row constraints (`C(X) ∧ C(Y) ∧ X ≤lex Y`).
//!
//! The crate is organised bottom-up:
//!
//! * [`domain`], [`store`], [`engine`] and [`search`] form a small
//!   finite-domain solver: trailed domains, a propagation queue and a
//!   depth-first search with a static branching order.
//! * [`propagators`] holds the primitive filters (lex, among, at-least,
//!   ternary sum, equality).
//! * [`regular`] implements deterministic automata, their layered-graph
//!   unfolding and the Regular constraint.
//! * [`clex`] contains the combined propagators: the generic algorithm that
//!   works with any DC-filterable row constraint, the layered-graph and
//!   product-automaton versions for Regular rows, and the specialised
//!   Sequence version.
//! * [`oracle`] enumerates tuples to compute ground-truth domain consistency
//!   on small instances.
//!
//! ```
//! use clex::{Domain, Model, Consistency};
//! use clex::clex::{ClexPropagator, SumRow};
//! use std::sync::Arc;
//!
//! // Two interchangeable rows [X, Y, Z] with Y = X + Z, ordered X ≤lex Y.
//! let mut m = Model::new();
//! let r1 = m.new_vars([Domain::range(1, 2), Domain::range(4, 5), Domain::singleton(3)]);
//! let r2 = m.new_vars([Domain::range(1, 2), Domain::range(3, 4), Domain::singleton(2)]);
//! m.post(ClexPropagator::same(r1.clone(), r2.clone(), Arc::new(SumRow)));
//! assert_eq!(m.propagate(), Consistency::Consistent);
//! assert_eq!(m.domain(r1[0]), &Domain::singleton(1));
//! assert_eq!(m.domain(r2[0]), &Domain::singleton(2));
//! ```

use std::fmt;

pub mod clex;
pub mod domain;
pub mod engine;
pub mod oracle;
pub mod propagators;
pub mod regular;
pub mod search;
pub mod store;

pub use domain::Domain;
pub use engine::{Consistency, FilterResult, Model, Propagator, PropagatorHandle, Status};
pub use search::{solve, solve_all, BranchingOrder, Limits, Outcome, SearchStats, ValueRule};
pub use store::{VarId, VarStore};

/// Propagation failure: some domain was emptied or a constraint has no
/// solution in the current domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Failure;

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("domain wipe-out")
    }
}

impl std::error::Error for Failure {}

/// Compares two equal-length tuples lexicographically.
pub fn lex_cmp(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.cmp(b)
}

/// Fails if any domain is empty.
pub(crate) fn check_nonempty(domains: &[Domain]) -> Result<(), Failure> {
    if domains.iter().any(Domain::is_empty) {
        Err(Failure)
    } else {
        Ok(())
    }
}

/// `Entailed` when every domain is a singleton, else `Active`.
pub(crate) fn status_of(domains: &[Domain]) -> Status {
    if domains.iter().all(Domain::is_fixed) {
        Status::Entailed
    } else {
        Status::Active
    }
}
