//! Propagation engine: a model owns a variable store and a set of
//! propagators, and runs them to a common fixpoint.

use std::collections::VecDeque;

use crate::domain::Domain;
use crate::store::{VarId, VarStore};
use crate::Failure;

/// What a filter reports on success.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Domains are consistent; the constraint may prune again later.
    Active,
    /// Every remaining tuple satisfies the constraint.
    Entailed,
}

pub type FilterResult = Result<Status, Failure>;

/// Number of priority buckets; lower buckets run first.
pub const PRIORITY_LEVELS: usize = 4;

/// A constraint filter over the domains of its scope.
///
/// `filter` receives the scope's domains in scope order and narrows them in
/// place. Filters in this crate are monotone and idempotent, so the engine
/// never reschedules a propagator because of its own prunings.
pub trait Propagator: Send {
    fn name(&self) -> &str;

    fn scope(&self) -> &[VarId];

    /// Small integer; cheap filters should use 0, expensive ones 2 or 3.
    fn priority(&self) -> u8 {
        1
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult;
}

/// Registration record returned by [`Model::post`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagatorHandle {
    pub id: usize,
    pub scope: Vec<VarId>,
    pub priority: u8,
}

/// Outcome of [`Model::propagate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Failed,
}

/// Variables, propagators and the scheduling state connecting them.
pub struct Model {
    store: VarStore,
    propagators: Vec<Box<dyn Propagator>>,
    watchers: Vec<Vec<usize>>,
    queues: Vec<VecDeque<usize>>,
    queued: Vec<bool>,
    // decision level at which each propagator became entailed
    entailed_at: Vec<Option<usize>>,
    entailed_stack: Vec<usize>,
    // reused buffer for the domains handed to a filter
    scratch: Vec<Domain>,
    /// Number of filter invocations so far.
    pub filter_calls: u64,
}

impl Default for Model {
    fn default() -> Self {
        Self::new()
    }
}

impl Model {
    pub fn new() -> Self {
        Model {
            store: VarStore::new(),
            propagators: Vec::new(),
            watchers: Vec::new(),
            queues: (0..PRIORITY_LEVELS).map(|_| VecDeque::new()).collect(),
            queued: Vec::new(),
            entailed_at: Vec::new(),
            entailed_stack: Vec::new(),
            scratch: Vec::new(),
            filter_calls: 0,
        }
    }

    pub fn new_var(&mut self, domain: Domain) -> VarId {
        self.watchers.push(Vec::new());
        self.store.new_var(domain)
    }

    pub fn new_vars<I: IntoIterator<Item = Domain>>(&mut self, domains: I) -> Vec<VarId> {
        domains.into_iter().map(|d| self.new_var(d)).collect()
    }

    pub fn store(&self) -> &VarStore {
        &self.store
    }

    pub fn domain(&self, var: VarId) -> &Domain {
        self.store.domain(var)
    }

    pub fn num_vars(&self) -> usize {
        self.store.num_vars()
    }

    pub fn num_propagators(&self) -> usize {
        self.propagators.len()
    }

    pub fn propagator_names(&self) -> impl Iterator<Item = &str> {
        self.propagators.iter().map(|p| p.name())
    }

    /// Registers `propagator` and schedules its first run.
    ///
    /// # Panics
    /// If the scope mentions a variable that does not exist.
    pub fn post<P: Propagator + 'static>(&mut self, propagator: P) -> PropagatorHandle {
        self.post_boxed(Box::new(propagator))
    }

    pub fn post_boxed(&mut self, propagator: Box<dyn Propagator>) -> PropagatorHandle {
        let id = self.propagators.len();
        let scope = propagator.scope().to_vec();
        for &v in &scope {
            assert!(v < self.num_vars(), "scope variable {v} out of range");
            if self.watchers[v].last() != Some(&id) {
                self.watchers[v].push(id);
            }
        }
        let priority = propagator.priority().min(PRIORITY_LEVELS as u8 - 1);
        self.propagators.push(propagator);
        self.queued.push(false);
        self.entailed_at.push(None);
        self.enqueue(id);
        PropagatorHandle {
            id,
            scope,
            priority,
        }
    }

    fn enqueue(&mut self, id: usize) {
        if !self.queued[id] && self.entailed_at[id].is_none() {
            self.queued[id] = true;
            let prio = self.propagators[id]
                .priority()
                .min(PRIORITY_LEVELS as u8 - 1) as usize;
            self.queues[prio].push_back(id);
        }
    }

    fn dequeue(&mut self) -> Option<usize> {
        for q in &mut self.queues {
            if let Some(id) = q.pop_front() {
                self.queued[id] = false;
                return Some(id);
            }
        }
        None
    }

    fn clear_queue(&mut self) {
        for q in &mut self.queues {
            for id in q.drain(..) {
                self.queued[id] = false;
            }
        }
    }

    fn schedule_modified(&mut self, skip: Option<usize>) {
        for var in self.store.take_modified() {
            for i in 0..self.watchers[var].len() {
                let id = self.watchers[var][i];
                if Some(id) != skip {
                    self.enqueue(id);
                }
            }
        }
    }

    /// Schedules every active propagator.
    pub fn schedule_all(&mut self) {
        for id in 0..self.propagators.len() {
            self.enqueue(id);
        }
    }

    /// Runs scheduled propagators until none can prune further.
    pub fn propagate(&mut self) -> Consistency {
        self.schedule_modified(None);
        while let Some(id) = self.dequeue() {
            self.filter_calls += 1;
            let mut doms = std::mem::take(&mut self.scratch);
            let scope = self.propagators[id].scope();
            doms.resize_with(scope.len(), Domain::empty);
            for (d, &var) in doms.iter_mut().zip(scope) {
                d.clone_from(self.store.domain(var));
            }
            let result = self.propagators[id].filter(&mut doms);
            let status = match result {
                Ok(status) => status,
                Err(Failure) => return self.fail(),
            };
            let scope = self.propagators[id].scope();
            for (&var, dom) in scope.iter().zip(&doms) {
                if self.store.restrict(var, dom).is_err() {
                    return self.fail();
                }
            }
            self.scratch = doms;
            if status == Status::Entailed {
                self.entailed_at[id] = Some(self.store.level());
                self.entailed_stack.push(id);
            }
            self.schedule_modified(Some(id));
        }
        Consistency::Consistent
    }

    fn fail(&mut self) -> Consistency {
        self.clear_queue();
        self.store.clear_modified();
        Consistency::Failed
    }

    /// Opens a decision level.
    pub fn push_level(&mut self) -> usize {
        self.store.push_level()
    }

    /// Undoes every change (domains and entailment) made above `level`.
    pub fn backtrack_to(&mut self, level: usize) {
        self.store.backtrack_to(level);
        while let Some(&id) = self.entailed_stack.last() {
            match self.entailed_at[id] {
                Some(at) if at > level => {
                    self.entailed_at[id] = None;
                    self.entailed_stack.pop();
                }
                _ => break,
            }
        }
        self.clear_queue();
    }

    pub fn level(&self) -> usize {
        self.store.level()
    }

    /// Decision: restrict `var` to `value`. Propagation is left to the caller.
    pub fn assign(&mut self, var: VarId, value: i32) -> Result<(), Failure> {
        self.store.assign(var, value).map(|_| ())
    }

    pub fn remove(&mut self, var: VarId, value: i32) -> Result<(), Failure> {
        self.store.remove(var, value).map(|_| ())
    }

    pub fn restrict(&mut self, var: VarId, with: &Domain) -> Result<(), Failure> {
        self.store.restrict(var, with).map(|_| ())
    }

    /// Runs every propagator's filter on the singleton domains of `tuple`.
    pub fn satisfied_by(&self, tuple: &[i32]) -> bool {
        self.propagators.iter().all(|p| {
            let mut doms: Vec<Domain> = p
                .scope()
                .iter()
                .map(|&v| Domain::singleton(tuple[v]))
                .collect();
            p.filter(&mut doms).is_ok() && doms.iter().all(|d| !d.is_empty())
        })
    }
}
