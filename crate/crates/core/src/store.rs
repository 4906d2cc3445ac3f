//! Variable store with a trail for chronological backtracking.

use crate::domain::Domain;
use crate::Failure;

pub type VarId = usize;

/// Indexed finite-domain variables.
///
/// Every change made after [`VarStore::push_level`] is recorded on the trail
/// and undone by [`VarStore::backtrack_to`]. Each variable is saved at most
/// once per level.
#[derive(Clone, Debug, Default)]
pub struct VarStore {
    domains: Vec<Domain>,
    trail: Vec<(VarId, Domain)>,
    // (trail length, epoch) per open level
    levels: Vec<(usize, u64)>,
    saved_in: Vec<u64>,
    epoch: u64,
    next_epoch: u64,
    modified: Vec<VarId>,
    dirty: Vec<bool>,
}

impl VarStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self, domain: Domain) -> VarId {
        let id = self.domains.len();
        self.domains.push(domain);
        self.saved_in.push(u64::MAX);
        self.dirty.push(false);
        id
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, var: VarId) -> &Domain {
        &self.domains[var]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// Snapshot of the domains of `vars`, in order.
    pub fn gather(&self, vars: &[VarId]) -> Vec<Domain> {
        vars.iter().map(|&v| self.domains[v].clone()).collect()
    }

    /// Current decision level (0 = root).
    pub fn level(&self) -> usize {
        self.levels.len()
    }

    pub fn push_level(&mut self) -> usize {
        self.levels.push((self.trail.len(), self.epoch));
        self.next_epoch += 1;
        self.epoch = self.next_epoch;
        self.levels.len()
    }

    /// Restores every domain to its state when `level` was current.
    pub fn backtrack_to(&mut self, level: usize) {
        while self.levels.len() > level {
            let (mark, epoch) = self.levels.pop().expect("open level");
            while self.trail.len() > mark {
                let (var, dom) = self.trail.pop().expect("trail entry");
                self.domains[var] = dom;
            }
            self.epoch = epoch;
        }
        self.clear_modified();
    }

    fn save(&mut self, var: VarId) {
        if !self.levels.is_empty() && self.saved_in[var] != self.epoch {
            self.saved_in[var] = self.epoch;
            self.trail.push((var, self.domains[var].clone()));
        }
    }

    fn touched(&mut self, var: VarId) {
        if !self.dirty[var] {
            self.dirty[var] = true;
            self.modified.push(var);
        }
    }

    /// Intersects the domain of `var` with `with`.
    pub fn restrict(&mut self, var: VarId, with: &Domain) -> Result<bool, Failure> {
        if self.domains[var].is_subset(with) {
            return Ok(false);
        }
        self.save(var);
        self.domains[var].intersect(with);
        self.touched(var);
        if self.domains[var].is_empty() {
            Err(Failure)
        } else {
            Ok(true)
        }
    }

    pub fn assign(&mut self, var: VarId, value: i32) -> Result<bool, Failure> {
        self.restrict(var, &Domain::singleton(value))
    }

    pub fn remove(&mut self, var: VarId, value: i32) -> Result<bool, Failure> {
        if !self.domains[var].contains(value) {
            return Ok(false);
        }
        self.save(var);
        self.domains[var].remove(value);
        self.touched(var);
        if self.domains[var].is_empty() {
            Err(Failure)
        } else {
            Ok(true)
        }
    }

    /// Variables changed since the last call, each listed once.
    pub fn take_modified(&mut self) -> Vec<VarId> {
        for &v in &self.modified {
            self.dirty[v] = false;
        }
        std::mem::take(&mut self.modified)
    }

    pub fn clear_modified(&mut self) {
        let _ = self.take_modified();
    }

    pub fn all_fixed(&self) -> bool {
        self.domains.iter().all(Domain::is_fixed)
    }

    /// The assignment, if every domain is a singleton.
    pub fn assignment(&self) -> Option<Vec<i32>> {
        self.domains.iter().map(Domain::value).collect()
    }
}
