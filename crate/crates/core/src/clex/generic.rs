//! The combined propagator for `C(X) ∧ C(Y) ∧ X ≤lex Y` that only needs a
//! domain-consistent filter for `C`.
//!
//! With `X_l` the lex-smallest solution of `C(X)` and `Y_u` the lex-greatest
//! solution of `C(Y)`, the conjunction is domain consistent exactly when
//! `C(X) ∧ X ≤lex Y_u` and `C(Y) ∧ X_l ≤lex Y` are. Each half is filtered by
//! walking the fixed bound: at every position the variable is probed with
//! values strictly beyond the bound, the survivors of a DC pass on the probe
//! are marked, and the position is then pinned to the bound's value.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::domain::{self, Domain};
use crate::engine::{FilterResult, Propagator};
use crate::propagators::filter_sum;
use crate::regular::{filter_regular, Dfa};
use crate::store::VarId;
use crate::Failure;

/// A row constraint `C` with a domain-consistent filter.
pub trait RowConstraint: Send + Sync {
    fn name(&self) -> &str;

    /// Narrows `domains` to the values with a support in `C`, or fails if
    /// `C` has no solution. Must be monotone and idempotent.
    fn enforce(&self, domains: &mut [Domain]) -> Result<(), Failure>;
}

/// `C = true`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unconstrained;

impl RowConstraint for Unconstrained {
    fn name(&self) -> &str {
        "true"
    }

    fn enforce(&self, domains: &mut [Domain]) -> Result<(), Failure> {
        crate::check_nonempty(domains)
    }
}

/// A row `[X, Y, Z]` with `Y = X + Z`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumRow;

impl RowConstraint for SumRow {
    fn name(&self) -> &str {
        "sum"
    }

    fn enforce(&self, domains: &mut [Domain]) -> Result<(), Failure> {
        assert_eq!(domains.len(), 3, "sum rows have three entries");
        let mut d = [domains[1].clone(), domains[0].clone(), domains[2].clone()];
        filter_sum(&mut d)?;
        let [y, x, z] = d;
        domains[0] = x;
        domains[1] = y;
        domains[2] = z;
        Ok(())
    }
}

/// The row spells a word accepted by an automaton.
#[derive(Clone, Debug)]
pub struct RegularRow(pub Arc<Dfa>);

impl RowConstraint for RegularRow {
    fn name(&self) -> &str {
        "regular"
    }

    fn enforce(&self, domains: &mut [Domain]) -> Result<(), Failure> {
        filter_regular(&self.0, domains).map(|_| ())
    }
}

/// Lexicographically smallest solution of `c` within `domains`.
///
/// Greedy: after a DC pass the minimum of the first open variable has a
/// support, so fixing it and filtering again never fails.
pub fn c_min(c: &dyn RowConstraint, domains: &[Domain]) -> Result<Vec<i32>, Failure> {
    extreme(c, domains, |d| d.min())
}

/// Lexicographically greatest solution of `c` within `domains`.
pub fn c_max(c: &dyn RowConstraint, domains: &[Domain]) -> Result<Vec<i32>, Failure> {
    extreme(c, domains, |d| d.max())
}

fn extreme(
    c: &dyn RowConstraint,
    domains: &[Domain],
    pick: impl Fn(&Domain) -> Option<i32>,
) -> Result<Vec<i32>, Failure> {
    let mut work = domains.to_vec();
    c.enforce(&mut work)?;
    for i in 0..work.len() {
        if work[i].is_fixed() {
            continue;
        }
        let v = pick(&work[i]).ok_or(Failure)?;
        work[i] = Domain::singleton(v);
        c.enforce(&mut work)
            .expect("a value surviving domain consistency has a support");
    }
    Ok(work.iter().map(|d| d.value().unwrap()).collect())
}

/// Per-position flags over the values of a fixed set of domains.
#[derive(Clone, Debug)]
pub struct Marks {
    domains: Vec<Domain>,
    flags: Vec<Vec<bool>>,
}

impl Marks {
    pub fn new(domains: &[Domain]) -> Self {
        Marks {
            domains: domains.to_vec(),
            flags: domains.iter().map(|d| vec![false; d.len()]).collect(),
        }
    }

    pub fn mark(&mut self, i: usize, v: i32) {
        if let Some(k) = self.domains[i].index_of(v) {
            self.flags[i][k] = true;
        }
    }

    pub fn is_marked(&self, i: usize, v: i32) -> bool {
        self.domains[i].index_of(v).is_some_and(|k| self.flags[i][k])
    }

    /// The marked values of every position.
    pub fn marked(&self) -> Vec<Domain> {
        self.domains
            .iter()
            .zip(&self.flags)
            .map(|(d, f)| d.iter().zip(f).filter(|(_, &m)| m).map(|(v, _)| v).collect())
            .collect()
    }

    /// Marked domains, or failure when some position has nothing marked.
    pub fn into_domains(self) -> Result<Vec<Domain>, Failure> {
        let out = self.marked();
        crate::check_nonempty(&out)?;
        Ok(out)
    }
}

/// Marks every value that survives a DC pass of `c` on `probe`.
/// An unsatisfiable probe marks nothing.
pub fn mark_consistent_values(c: &dyn RowConstraint, marks: &mut Marks, probe: &[Domain]) {
    let mut work = probe.to_vec();
    if c.enforce(&mut work).is_err() {
        return;
    }
    for (i, d) in work.iter().enumerate() {
        for v in d.iter() {
            marks.mark(i, v);
        }
    }
}

/// Domains of `C(X) ∧ bound ≤lex X`.
pub fn clex_lb(bound: &[i32], c: &dyn RowConstraint, domains: &[Domain]) -> Result<Vec<Domain>, Failure> {
    walk_bound(bound, c, domains, Ordering::Greater)
}

/// Domains of `C(X) ∧ X ≤lex bound`.
pub fn clex_ub(bound: &[i32], c: &dyn RowConstraint, domains: &[Domain]) -> Result<Vec<Domain>, Failure> {
    walk_bound(bound, c, domains, Ordering::Less)
}

fn walk_bound(
    bound: &[i32],
    c: &dyn RowConstraint,
    domains: &[Domain],
    beyond: Ordering,
) -> Result<Vec<Domain>, Failure> {
    let n = domains.len();
    assert_eq!(bound.len(), n);
    let mut marks = Marks::new(domains);
    let mut probe = domains.to_vec();
    let mut completed = true;
    for i in 0..n {
        let saved = std::mem::take(&mut probe[i]);
        probe[i] = saved.iter().filter(|&v| v.cmp(&bound[i]) == beyond).collect();
        if !probe[i].is_empty() {
            mark_consistent_values(c, &mut marks, &probe);
        }
        if !saved.contains(bound[i]) {
            completed = false;
            break;
        }
        probe[i] = Domain::singleton(bound[i]);
    }
    if completed {
        mark_consistent_values(c, &mut marks, &probe);
    }
    marks.into_domains()
}

/// Filters `C_x(X) ∧ C_y(Y) ∧ X ≤lex Y` to domain consistency.
pub fn propagate_clex(
    xs: &mut [Domain],
    ys: &mut [Domain],
    cx: &dyn RowConstraint,
    cy: &dyn RowConstraint,
) -> Result<(), Failure> {
    assert_eq!(xs.len(), ys.len());
    crate::check_nonempty(xs)?;
    crate::check_nonempty(ys)?;
    if domain::maxima(xs) <= domain::minima(ys) {
        // every pair of row solutions is ordered
        cx.enforce(xs)?;
        cy.enforce(ys)?;
        return Ok(());
    }
    let x_low = c_min(cx, xs)?;
    let y_up = c_max(cy, ys)?;
    if x_low > y_up {
        return Err(Failure);
    }
    let new_x = clex_ub(&y_up, cx, xs)?;
    let new_y = clex_lb(&x_low, cy, ys)?;
    xs.clone_from_slice(&new_x);
    ys.clone_from_slice(&new_y);
    Ok(())
}

/// Propagator for `C_x(X) ∧ C_y(Y) ∧ X ≤lex Y`.
#[derive(Clone)]
pub struct ClexPropagator {
    n: usize,
    scope: Vec<VarId>,
    cx: Arc<dyn RowConstraint>,
    cy: Arc<dyn RowConstraint>,
}

impl ClexPropagator {
    /// # Panics
    /// If the vectors differ in length.
    pub fn new(
        xs: Vec<VarId>,
        ys: Vec<VarId>,
        cx: Arc<dyn RowConstraint>,
        cy: Arc<dyn RowConstraint>,
    ) -> Self {
        assert_eq!(xs.len(), ys.len(), "lex vectors must have equal length");
        let n = xs.len();
        let scope = xs.into_iter().chain(ys).collect();
        ClexPropagator { n, scope, cx, cy }
    }

    /// Both rows subject to the same constraint.
    pub fn same(xs: Vec<VarId>, ys: Vec<VarId>, c: Arc<dyn RowConstraint>) -> Self {
        Self::new(xs, ys, c.clone(), c)
    }
}

impl Propagator for ClexPropagator {
    fn name(&self) -> &str {
        "clex"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        3
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        let (xs, ys) = domains.split_at_mut(self.n);
        propagate_clex(xs, ys, &*self.cx, &*self.cy)?;
        Ok(crate::status_of(domains))
    }
}

/// Posts a single row constraint through its DC filter.
#[derive(Clone)]
pub struct RowPropagator {
    vars: Vec<VarId>,
    c: Arc<dyn RowConstraint>,
}

impl RowPropagator {
    pub fn new(vars: Vec<VarId>, c: Arc<dyn RowConstraint>) -> Self {
        RowPropagator { vars, c }
    }
}

impl Propagator for RowPropagator {
    fn name(&self) -> &str {
        self.c.name()
    }

    fn scope(&self) -> &[VarId] {
        &self.vars
    }

    fn priority(&self) -> u8 {
        2
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        self.c.enforce(domains)?;
        Ok(crate::status_of(domains))
    }
}
