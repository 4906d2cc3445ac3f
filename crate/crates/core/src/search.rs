//! Depth-first search with static variable order and k-way branching.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::engine::{Consistency, Model};
use crate::store::VarId;

/// Value selection rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ValueRule {
    /// Try values in ascending order.
    #[default]
    MinFirst,
}

/// A static branching order: variables are assigned strictly in the listed
/// order, each trying its values under `value_rule`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingOrder {
    pub variable_sequence: Vec<VarId>,
    pub value_rule: ValueRule,
}

impl BranchingOrder {
    pub fn new(variable_sequence: Vec<VarId>) -> Self {
        BranchingOrder {
            variable_sequence,
            value_rule: ValueRule::MinFirst,
        }
    }

    /// Variables `0..n` in index order.
    pub fn input_order(n: usize) -> Self {
        Self::new((0..n).collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Limits {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Limits {
            max_nodes: Some(max_nodes),
            time: None,
        }
    }

    pub fn with_time(mut self, time: Duration) -> Self {
        self.time = Some(time);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solution,
    Unsat,
    LimitReached,
}

/// Counters for one search.
///
/// `nodes` counts the root plus every decision tried. `backtracks` counts
/// decisions whose propagation failed (failed leaves below the root), and
/// `failures` additionally counts a failure at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub failures: u64,
    pub solutions: u64,
    pub wall_time: Duration,
    pub outcome: Outcome,
    /// First solution found, indexed by variable.
    pub solution: Option<Vec<i32>>,
}

impl SearchStats {
    /// The same stats without the wall-clock time, for determinism checks.
    pub fn without_time(&self) -> SearchStats {
        SearchStats {
            wall_time: Duration::ZERO,
            ..self.clone()
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("variable {0} is not fixed at a leaf and does not appear in the branching order")]
    OrderMissesVariable(VarId),
    #[error("branching order mentions variable {0}, but the model has only {1} variables")]
    UnknownVariable(VarId, usize),
}

struct Limit;

struct Search<'a> {
    model: &'a mut Model,
    order: &'a [VarId],
    limits: Limits,
    start: Instant,
    stats: SearchStats,
    all: bool,
    sink: &'a mut dyn FnMut(&[i32]),
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        if let Some(max) = self.limits.max_nodes {
            if self.stats.nodes >= max {
                return true;
            }
        }
        if let Some(t) = self.limits.time {
            if self.start.elapsed() >= t {
                return true;
            }
        }
        false
    }

    /// Returns `Ok(true)` when the search should stop (first solution found).
    fn dfs(&mut self, pos: usize) -> Result<bool, Limit> {
        let mut pos = pos;
        while pos < self.order.len() && self.model.domain(self.order[pos]).is_fixed() {
            pos += 1;
        }
        if pos == self.order.len() {
            let tuple = self.model.store().assignment().expect("all variables fixed");
            self.stats.solutions += 1;
            if self.stats.solution.is_none() {
                self.stats.solution = Some(tuple.clone());
            }
            (self.sink)(&tuple);
            return Ok(!self.all);
        }
        let var = self.order[pos];
        let values: Vec<i32> = self.model.domain(var).iter().collect();
        let level = self.model.level();
        for value in values {
            if self.out_of_budget() {
                return Err(Limit);
            }
            self.stats.nodes += 1;
            self.model.push_level();
            let ok = self.model.assign(var, value).is_ok()
                && self.model.propagate() == Consistency::Consistent;
            if ok {
                let stop = self.dfs(pos + 1);
                if !matches!(stop, Ok(false)) {
                    self.model.backtrack_to(level);
                    return stop;
                }
            } else {
                self.stats.backtracks += 1;
                self.stats.failures += 1;
            }
            self.model.backtrack_to(level);
        }
        Ok(false)
    }
}

fn run(
    model: &mut Model,
    order: &BranchingOrder,
    limits: Limits,
    all: bool,
    sink: &mut dyn FnMut(&[i32]),
) -> Result<SearchStats, SearchError> {
    let n = model.num_vars();
    let mut covered = vec![false; n];
    for &v in &order.variable_sequence {
        if v >= n {
            return Err(SearchError::UnknownVariable(v, n));
        }
        covered[v] = true;
    }
    let start = Instant::now();
    let mut stats = SearchStats {
        nodes: 1,
        backtracks: 0,
        failures: 0,
        solutions: 0,
        wall_time: Duration::ZERO,
        outcome: Outcome::Unsat,
        solution: None,
    };
    let root = model.level();
    model.schedule_all();
    model.push_level();
    if model.propagate() == Consistency::Failed {
        stats.failures = 1;
        stats.wall_time = start.elapsed();
        model.backtrack_to(root);
        return Ok(stats);
    }
    // variables outside the order are fine if root propagation fixes them
    if let Some(v) = (0..n).find(|&v| !covered[v] && !model.domain(v).is_fixed()) {
        model.backtrack_to(root);
        return Err(SearchError::OrderMissesVariable(v));
    }
    let mut search = Search {
        model,
        order: &order.variable_sequence,
        limits,
        start,
        stats,
        all,
        sink,
    };
    let result = search.dfs(0);
    let mut stats = search.stats;
    stats.outcome = match result {
        Err(Limit) => Outcome::LimitReached,
        Ok(_) if stats.solutions > 0 => Outcome::Solution,
        Ok(_) => Outcome::Unsat,
    };
    stats.wall_time = start.elapsed();
    model.backtrack_to(root);
    Ok(stats)
}

/// Searches for the first solution. Every propagator runs at the root, and
/// the model is returned to its pre-search state afterwards.
pub fn solve(
    model: &mut Model,
    order: &BranchingOrder,
    limits: Limits,
) -> Result<SearchStats, SearchError> {
    run(model, order, limits, false, &mut |_| {})
}

/// Enumerates every solution; `outcome` is `Solution` if at least one exists
/// and the tree was exhausted.
pub fn solve_all(
    model: &mut Model,
    order: &BranchingOrder,
    limits: Limits,
) -> Result<(SearchStats, Vec<Vec<i32>>), SearchError> {
    let mut found = Vec::new();
    let stats = run(model, order, limits, true, &mut |t| found.push(t.to_vec()))?;
    Ok((stats, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::propagators::NotEqual;

    #[test]
    fn single_fixed_variable() {
        let mut m = Model::new();
        m.new_var(Domain::singleton(3));
        let stats = solve(&mut m, &BranchingOrder::input_order(1), Limits::none()).unwrap();
        assert_eq!(stats.outcome, Outcome::Solution);
        assert_eq!(stats.nodes, 1);
        assert_eq!(stats.backtracks, 0);
        assert_eq!(stats.solution, Some(vec![3]));
    }

    #[test]
    fn duplicate_not_equal_needs_no_backtrack() {
        let mut m = Model::new();
        let x = m.new_var(Domain::boolean());
        let y = m.new_var(Domain::boolean());
        m.post(NotEqual::new(x, y));
        m.post(NotEqual::new(x, y));
        let stats = solve(&mut m, &BranchingOrder::new(vec![x, y]), Limits::none()).unwrap();
        assert_eq!(stats.outcome, Outcome::Solution);
        assert_eq!(stats.solution, Some(vec![0, 1]));
        assert_eq!(stats.backtracks, 0);
        assert_eq!(stats.nodes, 2);
    }

    #[test]
    fn enumerates_all_solutions() {
        let mut m = Model::new();
        let x = m.new_var(Domain::range(0, 2));
        let y = m.new_var(Domain::range(0, 2));
        m.post(NotEqual::new(x, y));
        let (stats, sols) =
            solve_all(&mut m, &BranchingOrder::new(vec![x, y]), Limits::none()).unwrap();
        assert_eq!(stats.outcome, Outcome::Solution);
        assert_eq!(sols.len(), 6);
        assert_eq!(stats.solutions, 6);
    }

    #[test]
    fn node_limit() {
        let mut m = Model::new();
        let vars = m.new_vars((0..6).map(|_| Domain::range(0, 3)));
        for w in vars.windows(2) {
            m.post(NotEqual::new(w[0], w[1]));
        }
        let (stats, _) =
            solve_all(&mut m, &BranchingOrder::new(vars), Limits::nodes(10)).unwrap();
        assert_eq!(stats.outcome, Outcome::LimitReached);
        assert_eq!(stats.nodes, 10);
    }

    #[test]
    fn order_must_cover_open_variables() {
        let mut m = Model::new();
        m.new_var(Domain::boolean());
        let err = solve(&mut m, &BranchingOrder::new(vec![]), Limits::none()).unwrap_err();
        assert_eq!(err, SearchError::OrderMissesVariable(0));
    }

    #[test]
    fn model_restored_after_search() {
        let mut m = Model::new();
        let x = m.new_var(Domain::range(0, 2));
        let y = m.new_var(Domain::range(0, 2));
        m.post(NotEqual::new(x, y));
        solve(&mut m, &BranchingOrder::new(vec![x, y]), Limits::none()).unwrap();
        assert_eq!(m.domain(x), &Domain::range(0, 2));
        assert_eq!(m.level(), 0);
    }
}
