//! Brute-force ground truth for small instances.
//!
//! Everything here works by enumerating tuples and evaluating constraint
//! definitions directly; no propagator code is involved. Tuples are visited
//! in lexicographic order, so the lex-smallest solution is the first hit.

use std::sync::Arc;

use thiserror::Error;

use crate::domain::Domain;
use crate::regular::Dfa;
use crate::store::VarId;

/// Default bound on the size of the enumerated search space.
pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {size} tuples exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
}

/// A constraint definition evaluated on complete assignments.
///
/// `check` is handed a tuple indexed by variable; only the entries named in
/// `scope` are meaningful when it is called.
pub trait TupleChecker {
    fn scope(&self) -> &[VarId];
    fn check(&self, tuple: &[i32]) -> bool;
}

fn pick(tuple: &[i32], vars: &[VarId]) -> Vec<i32> {
    vars.iter().map(|&v| tuple[v]).collect()
}

/// `xs ≤lex ys`.
pub struct LexCheck {
    xs: Vec<VarId>,
    ys: Vec<VarId>,
    scope: Vec<VarId>,
}

impl LexCheck {
    pub fn new(xs: Vec<VarId>, ys: Vec<VarId>) -> Self {
        assert_eq!(xs.len(), ys.len());
        let scope = xs.iter().chain(&ys).copied().collect();
        LexCheck { xs, ys, scope }
    }
}

impl TupleChecker for LexCheck {
    fn scope(&self) -> &[VarId] {
        &self.scope
    }
    fn check(&self, t: &[i32]) -> bool {
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if t[x] < t[y] {
                return true;
            }
            if t[x] > t[y] {
                return false;
            }
        }
        true
    }
}

/// `l ≤ |{i : X[i] ∈ V}| ≤ u` over one window.
pub struct AmongCheck {
    vars: Vec<VarId>,
    lower: usize,
    upper: usize,
    values: Domain,
}

impl AmongCheck {
    pub fn new(vars: Vec<VarId>, lower: usize, upper: usize, values: Domain) -> Self {
        AmongCheck {
            vars,
            lower,
            upper,
            values,
        }
    }

    pub fn at_least(vars: Vec<VarId>, demand: usize, values: Domain) -> Self {
        let n = vars.len();
        Self::new(vars, demand, n.max(demand), values)
    }
}

impl TupleChecker for AmongCheck {
    fn scope(&self) -> &[VarId] {
        &self.vars
    }
    fn check(&self, t: &[i32]) -> bool {
        let c = self.vars.iter().filter(|&&v| self.values.contains(t[v])).count();
        self.lower <= c && c <= self.upper
    }
}

/// Every length-`k` window of `vars` holds between `l` and `u` values of `V`.
pub struct SequenceCheck {
    vars: Vec<VarId>,
    lower: usize,
    upper: usize,
    k: usize,
    values: Domain,
}

impl SequenceCheck {
    pub fn new(vars: Vec<VarId>, lower: usize, upper: usize, k: usize, values: Domain) -> Self {
        SequenceCheck {
            vars,
            lower,
            upper,
            k,
            values,
        }
    }
}

impl TupleChecker for SequenceCheck {
    fn scope(&self) -> &[VarId] {
        &self.vars
    }
    fn check(&self, t: &[i32]) -> bool {
        if self.k == 0 || self.k > self.vars.len() {
            return true;
        }
        self.vars.windows(self.k).all(|w| {
            let c = w.iter().filter(|&&v| self.values.contains(t[v])).count();
            self.lower <= c && c <= self.upper
        })
    }
}

/// The word spelled by `vars` is accepted by `dfa`.
pub struct RegularCheck {
    vars: Vec<VarId>,
    dfa: Arc<Dfa>,
}

impl RegularCheck {
    pub fn new(vars: Vec<VarId>, dfa: Arc<Dfa>) -> Self {
        RegularCheck { vars, dfa }
    }
}

impl TupleChecker for RegularCheck {
    fn scope(&self) -> &[VarId] {
        &self.vars
    }
    fn check(&self, t: &[i32]) -> bool {
        self.dfa.accepts(&pick(t, &self.vars))
    }
}

/// `y = x + z`.
pub struct SumCheck {
    scope: [VarId; 3],
}

impl SumCheck {
    pub fn new(y: VarId, x: VarId, z: VarId) -> Self {
        SumCheck { scope: [y, x, z] }
    }
}

impl TupleChecker for SumCheck {
    fn scope(&self) -> &[VarId] {
        &self.scope
    }
    fn check(&self, t: &[i32]) -> bool {
        let [y, x, z] = self.scope;
        t[y] as i64 == t[x] as i64 + t[z] as i64
    }
}

/// Arbitrary predicate over the values of `scope`, passed in scope order.
pub struct FnCheck<F> {
    scope: Vec<VarId>,
    pred: F,
}

impl<F: Fn(&[i32]) -> bool> FnCheck<F> {
    pub fn new(scope: Vec<VarId>, pred: F) -> Self {
        FnCheck { scope, pred }
    }
}

impl<F: Fn(&[i32]) -> bool> TupleChecker for FnCheck<F> {
    fn scope(&self) -> &[VarId] {
        &self.scope
    }
    fn check(&self, t: &[i32]) -> bool {
        (self.pred)(&pick(t, &self.scope))
    }
}

struct Enumerator<'a> {
    domains: &'a [Domain],
    // checkers ready once variable i is assigned
    ready: Vec<Vec<&'a dyn TupleChecker>>,
    tuple: Vec<i32>,
    descending: bool,
}

impl<'a> Enumerator<'a> {
    fn new(
        domains: &'a [Domain],
        checkers: &[&'a dyn TupleChecker],
        cap: u128,
        descending: bool,
    ) -> Result<Option<Self>, OracleError> {
        let size = domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
        if size > cap {
            return Err(OracleError::CapExceeded { size, cap });
        }
        let n = domains.len();
        let mut ready: Vec<Vec<&dyn TupleChecker>> = vec![Vec::new(); n];
        for &c in checkers {
            match c.scope().iter().max() {
                Some(&last) => {
                    assert!(last < n, "checker scope outside the domains");
                    ready[last].push(c);
                }
                None => {
                    if !c.check(&[]) {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(Enumerator {
            domains,
            ready,
            tuple: vec![0; n],
            descending,
        }))
    }

    /// Calls `visit` on every solution; stops early when it returns `true`.
    fn run(&mut self, i: usize, visit: &mut dyn FnMut(&[i32]) -> bool) -> bool {
        if i == self.domains.len() {
            return visit(&self.tuple);
        }
        let values: Vec<i32> = if self.descending {
            self.domains[i].iter().rev().collect()
        } else {
            self.domains[i].iter().collect()
        };
        for v in values {
            self.tuple[i] = v;
            if self.ready[i].iter().all(|c| c.check(&self.tuple)) && self.run(i + 1, visit) {
                return true;
            }
        }
        false
    }
}

/// Domains reduced to the values that appear in some solution of the
/// conjunction of `checkers`, or `None` if there is no solution.
pub fn brute_force_dc(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
) -> Result<Option<Vec<Domain>>, OracleError> {
    brute_force_dc_capped(domains, checkers, DEFAULT_CAP)
}

pub fn brute_force_dc_capped(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
    cap: u128,
) -> Result<Option<Vec<Domain>>, OracleError> {
    let Some(mut e) = Enumerator::new(domains, checkers, cap, false)? else {
        return Ok(None);
    };
    let mut seen: Vec<Vec<bool>> = domains.iter().map(|d| vec![false; d.len()]).collect();
    let mut any = false;
    e.run(0, &mut |t| {
        any = true;
        for (i, &v) in t.iter().enumerate() {
            seen[i][domains[i].index_of(v).unwrap()] = true;
        }
        false
    });
    if !any {
        return Ok(None);
    }
    Ok(Some(
        domains
            .iter()
            .zip(&seen)
            .map(|(d, s)| d.iter().zip(s).filter(|(_, &k)| k).map(|(v, _)| v).collect())
            .collect(),
    ))
}

/// Lexicographically smallest solution.
pub fn brute_force_lex_min(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
) -> Result<Option<Vec<i32>>, OracleError> {
    first(domains, checkers, false)
}

/// Lexicographically greatest solution.
pub fn brute_force_lex_max(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
) -> Result<Option<Vec<i32>>, OracleError> {
    first(domains, checkers, true)
}

fn first(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
    descending: bool,
) -> Result<Option<Vec<i32>>, OracleError> {
    let Some(mut e) = Enumerator::new(domains, checkers, DEFAULT_CAP, descending)? else {
        return Ok(None);
    };
    let mut found = None;
    e.run(0, &mut |t| {
        found = Some(t.to_vec());
        true
    });
    Ok(found)
}

/// Every solution, in lexicographic order.
pub fn brute_force_solutions(
    domains: &[Domain],
    checkers: &[&dyn TupleChecker],
) -> Result<Vec<Vec<i32>>, OracleError> {
    let Some(mut e) = Enumerator::new(domains, checkers, DEFAULT_CAP, false)? else {
        return Ok(Vec::new());
    };
    let mut all = Vec::new();
    e.run(0, &mut |t| {
        all.push(t.to_vec());
        false
    });
    Ok(all)
}
