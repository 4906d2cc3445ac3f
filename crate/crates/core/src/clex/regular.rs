//! `C&Lex` for Regular rows: marking on the layered graph, and compilation
//! of both rows plus the ordering into one automaton over the interleaved
//! sequence `x1 y1 x2 y2 … xn yn`.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::domain::{self, Domain};
use crate::engine::{FilterResult, Model, Propagator, PropagatorHandle};
use crate::regular::{Dfa, LayeredGraph, RegularPropagator};
use crate::store::VarId;
use crate::Failure;

/// Marks every arc on a path from `state` at layer `i` to an accepting node.
pub fn mark_consistent_arcs(graph: &LayeredGraph, marks: &mut crate::regular::ArcMarks, i: usize, state: usize) {
    graph.mark_from(marks, i, state);
}

/// Domains of `Regular(X) ∧ bound ≤lex X`, computed on the graph of `X`.
pub fn clex_lb_regular(bound: &[i32], graph: &LayeredGraph) -> Result<Vec<Domain>, Failure> {
    walk_bound(bound, graph, Ordering::Greater)
}

/// Domains of `Regular(X) ∧ X ≤lex bound`.
pub fn clex_ub_regular(bound: &[i32], graph: &LayeredGraph) -> Result<Vec<Domain>, Failure> {
    walk_bound(bound, graph, Ordering::Less)
}

fn walk_bound(bound: &[i32], graph: &LayeredGraph, beyond: Ordering) -> Result<Vec<Domain>, Failure> {
    let n = graph.len();
    assert_eq!(bound.len(), n);
    let mut marks = graph.new_marks();
    // arc index taken by the bound's path at each layer walked so far
    let mut path: Vec<usize> = Vec::with_capacity(n);
    let mut prefix_marked = 0;
    let mut q = graph.initial();
    let mut completed = true;
    for i in 0..n {
        let range = graph.out_range(i, q);
        let mut branched = false;
        for k in range {
            let arc = graph.layer(i)[k];
            if arc.value.cmp(&bound[i]) == beyond {
                marks.arcs[i][k] = true;
                graph.mark_from(&mut marks, i + 1, arc.to);
                branched = true;
            }
        }
        if branched {
            for (layer, &k) in path.iter().enumerate().skip(prefix_marked) {
                marks.arcs[layer][k] = true;
            }
            prefix_marked = path.len();
        }
        match graph.find_arc(i, q, bound[i]) {
            Some(k) => {
                path.push(k);
                q = graph.layer(i)[k].to;
            }
            None => {
                completed = false;
                break;
            }
        }
    }
    if completed {
        for (layer, &k) in path.iter().enumerate() {
            marks.arcs[layer][k] = true;
        }
    }
    let out = graph.marked_domains(&marks);
    crate::check_nonempty(&out)?;
    Ok(out)
}

/// Filters `Regular_x(X) ∧ Regular_y(Y) ∧ X ≤lex Y` with graph marking.
pub fn propagate_clex_regular(
    xs: &mut [Domain],
    ys: &mut [Domain],
    dfa_x: &Dfa,
    dfa_y: &Dfa,
) -> Result<(), Failure> {
    assert_eq!(xs.len(), ys.len());
    crate::check_nonempty(xs)?;
    crate::check_nonempty(ys)?;
    let gx = LayeredGraph::build(dfa_x, xs)?;
    let gy = LayeredGraph::build(dfa_y, ys)?;
    if domain::maxima(xs) <= domain::minima(ys) {
        xs.clone_from_slice(&gx.supported_domains());
        ys.clone_from_slice(&gy.supported_domains());
        return Ok(());
    }
    let x_low = gx.min_word();
    let y_up = gy.max_word();
    if x_low > y_up {
        return Err(Failure);
    }
    let new_x = clex_ub_regular(&y_up, &gx)?;
    let new_y = clex_lb_regular(&x_low, &gy)?;
    xs.clone_from_slice(&new_x);
    ys.clone_from_slice(&new_y);
    Ok(())
}

/// Graph-marking propagator for two Regular rows ordered `X ≤lex Y`.
#[derive(Clone, Debug)]
pub struct ClexRegularPropagator {
    n: usize,
    scope: Vec<VarId>,
    dfa_x: Arc<Dfa>,
    dfa_y: Arc<Dfa>,
}

impl ClexRegularPropagator {
    pub fn new(xs: Vec<VarId>, ys: Vec<VarId>, dfa_x: Arc<Dfa>, dfa_y: Arc<Dfa>) -> Self {
        assert_eq!(xs.len(), ys.len(), "lex vectors must have equal length");
        let n = xs.len();
        let scope = xs.into_iter().chain(ys).collect();
        ClexRegularPropagator {
            n,
            scope,
            dfa_x,
            dfa_y,
        }
    }

    pub fn same(xs: Vec<VarId>, ys: Vec<VarId>, dfa: Arc<Dfa>) -> Self {
        Self::new(xs, ys, dfa.clone(), dfa)
    }
}

impl Propagator for ClexRegularPropagator {
    fn name(&self) -> &str {
        "clex-regular"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        3
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        let (xs, ys) = domains.split_at_mut(self.n);
        propagate_clex_regular(xs, ys, &self.dfa_x, &self.dfa_y)?;
        Ok(crate::status_of(domains))
    }
}

/// Ordering bookkeeping of a product state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// Before an `x` symbol; the prefixes read so far are equal.
    Equal,
    /// Before an `x` symbol; `x` is already strictly smaller.
    Less,
    /// After `x[i]` with equal prefixes, waiting for `y[i]`.
    Pending(i32),
    /// After `x[i]` with `x` already smaller.
    LessPending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub qx: usize,
    pub qy: usize,
    pub phase: Phase,
}

/// Automaton over `x1 y1 … xn yn` accepting iff `dfa_x` accepts `x`,
/// `dfa_y` accepts `y` and `x ≤lex y`.
#[derive(Clone, Debug)]
pub struct ProductDfa {
    pub dfa: Dfa,
    /// Meaning of each state of `dfa`.
    pub states: Vec<ProductState>,
}

/// Builds the product automaton; only states reachable from the initial
/// state are kept, numbered in breadth-first order.
pub fn build_product_dfa(dfa_x: &Dfa, dfa_y: &Dfa) -> ProductDfa {
    let start = ProductState {
        qx: dfa_x.initial(),
        qy: dfa_y.initial(),
        phase: Phase::Equal,
    };
    let mut ids: HashMap<ProductState, usize> = HashMap::new();
    let mut states = vec![start];
    ids.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut transitions = Vec::new();
    while let Some(id) = queue.pop_front() {
        let s = states[id];
        let successors: Vec<(i32, ProductState)> = match s.phase {
            Phase::Equal | Phase::Less => dfa_x
                .transitions_from(s.qx)
                .iter()
                .map(|&(v, t)| {
                    let phase = if s.phase == Phase::Equal {
                        Phase::Pending(v)
                    } else {
                        Phase::LessPending
                    };
                    (v, ProductState { qx: t, phase, ..s })
                })
                .collect(),
            Phase::Pending(v) => dfa_y
                .transitions_from(s.qy)
                .iter()
                .filter_map(|&(w, t)| {
                    let phase = match v.cmp(&w) {
                        Ordering::Less => Phase::Less,
                        Ordering::Equal => Phase::Equal,
                        Ordering::Greater => return None,
                    };
                    Some((w, ProductState { qy: t, phase, ..s }))
                })
                .collect(),
            Phase::LessPending => dfa_y
                .transitions_from(s.qy)
                .iter()
                .map(|&(w, t)| {
                    (
                        w,
                        ProductState {
                            qy: t,
                            phase: Phase::Less,
                            ..s
                        },
                    )
                })
                .collect(),
        };
        for (label, next) in successors {
            let to = *ids.entry(next).or_insert_with(|| {
                states.push(next);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            transitions.push((id, label, to));
        }
    }
    let finals: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            matches!(s.phase, Phase::Equal | Phase::Less) && dfa_x.is_final(s.qx) && dfa_y.is_final(s.qy)
        })
        .map(|(i, _)| i)
        .collect();
    let dfa = Dfa::new(states.len(), 0, finals, transitions).expect("product is deterministic");
    ProductDfa { dfa, states }
}

/// Interleaves two equal-length vectors: `x1 y1 x2 y2 …`.
pub fn interleave<T: Clone>(xs: &[T], ys: &[T]) -> Vec<T> {
    assert_eq!(xs.len(), ys.len());
    xs.iter().zip(ys).flat_map(|(x, y)| [x.clone(), y.clone()]).collect()
}

/// Posts `Regular(X) ∧ Regular(Y) ∧ X ≤lex Y` as one Regular constraint on
/// the interleaved variables.
pub fn post_clex_regular_product(
    model: &mut Model,
    xs: &[VarId],
    ys: &[VarId],
    dfa: &Dfa,
) -> PropagatorHandle {
    let product = build_product_dfa(dfa, dfa);
    model.post(RegularPropagator::new(interleave(xs, ys), Arc::new(product.dfa)))
}

/// Same as [`post_clex_regular_product`] with an already built product.
pub fn post_product(model: &mut Model, xs: &[VarId], ys: &[VarId], product: Arc<Dfa>) -> PropagatorHandle {
    model.post(RegularPropagator::new(interleave(xs, ys), product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Consistency;

    fn no_11() -> Dfa {
        Dfa::new(2, 0, [0, 1], [(0, 0, 0), (0, 1, 1), (1, 0, 0)]).unwrap()
    }

    #[test]
    fn boolean_pairs() {
        let sigma = Dfa::universal(&Domain::boolean());
        let p = build_product_dfa(&sigma, &sigma).dfa;
        assert!(p.accepts(&[0, 0]));
        assert!(p.accepts(&[0, 1]));
        assert!(p.accepts(&[1, 1]));
        assert!(!p.accepts(&[1, 0]));
    }

    #[test]
    fn universal_with_minima_bound_prunes_nothing() {
        let d = vec![Domain::range(0, 2); 3];
        let g = LayeredGraph::build(&Dfa::universal(&Domain::range(0, 2)), &d).unwrap();
        assert_eq!(clex_lb_regular(&[0, 0, 0], &g).unwrap(), d);
    }

    #[test]
    fn maximum_bound_fixes() {
        let d = vec![Domain::boolean(); 3];
        let g = LayeredGraph::build(&no_11(), &d).unwrap();
        assert_eq!(clex_lb_regular(&[1, 0, 1], &g).unwrap(), domain::fixed(&[1, 0, 1]));
    }

    #[test]
    fn prefix_arcs_marked_on_branch() {
        // unique-ish: strings over {0,1,2} of length 3 ending in 2
        let dfa = Dfa::new(
            2,
            0,
            [1],
            [(0, 0, 0), (0, 1, 0), (0, 2, 1), (1, 0, 0), (1, 1, 0), (1, 2, 1)],
        )
        .unwrap();
        let d = vec![Domain::singleton(1), Domain::range(0, 2), Domain::range(0, 2)];
        let g = LayeredGraph::build(&dfa, &d).unwrap();
        // bound 1 1 2: branch at layer 1 (value 2) marks the prefix arc 1
        let out = clex_lb_regular(&[1, 1, 2], &g).unwrap();
        assert_eq!(out, vec![Domain::singleton(1), Domain::new([1, 2]), Domain::singleton(2)]);
    }

    #[test]
    fn empty_language_fails_at_once() {
        let dead = Dfa::new(1, 0, [], [(0, 0, 0), (0, 1, 0)]).unwrap();
        let mut m = Model::new();
        let xs = m.new_vars(vec![Domain::boolean(); 2]);
        let ys = m.new_vars(vec![Domain::boolean(); 2]);
        post_clex_regular_product(&mut m, &xs, &ys, &dead);
        assert_eq!(m.propagate(), Consistency::Failed);
    }
}
