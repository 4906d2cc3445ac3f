use crate::domain::Domain;
use crate::regular::Dfa;
use crate::Failure;

/// One arc between layer `i` and layer `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphArc {
    pub from: usize,
    pub value: i32,
    pub to: usize,
}

/// Unfolding of an automaton over `n` variable domains, trimmed so that
/// every remaining arc lies on a path from the initial node at layer 0 to a
/// final node at layer `n`.
///
/// Arcs of a layer are stored contiguously and sorted by `(from, value)`;
/// `offsets` indexes the arcs leaving each state at each layer.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    initial: usize,
    q_count: usize,
    arcs: Vec<GraphArc>,
    // arcs of layer i: layer_start[i]..layer_start[i + 1]
    layer_start: Vec<usize>,
    // arcs leaving q at layer i: offsets[i * (q_count + 1) + q ..= + 1], relative to the layer
    offsets: Vec<usize>,
}

impl LayeredGraph {
    /// Builds and trims the graph. Fails when no accepted string fits the domains.
    pub fn build(dfa: &Dfa, domains: &[Domain]) -> Result<LayeredGraph, Failure> {
        let n = domains.len();
        let q_count = dfa.num_states();

        // forward pass: candidate arcs out of reachable nodes
        let mut arcs: Vec<GraphArc> = Vec::new();
        let mut starts = Vec::with_capacity(n + 1);
        let mut reach = vec![false; q_count];
        let mut next = vec![false; q_count];
        reach[dfa.initial()] = true;
        for dom in domains {
            starts.push(arcs.len());
            next.fill(false);
            for q in (0..q_count).filter(|&q| reach[q]) {
                let trans = dfa.transitions_from(q);
                // walk whichever side is smaller
                if trans.len() <= dom.len() {
                    for &(v, t) in trans {
                        if dom.contains(v) {
                            arcs.push(GraphArc { from: q, value: v, to: t });
                            next[t] = true;
                        }
                    }
                } else {
                    for v in dom.iter() {
                        if let Some(t) = dfa.delta(q, v) {
                            arcs.push(GraphArc { from: q, value: v, to: t });
                            next[t] = true;
                        }
                    }
                }
            }
            std::mem::swap(&mut reach, &mut next);
        }
        starts.push(arcs.len());

        // backward pass: keep arcs into co-reachable nodes, compacting in place
        let mut alive: Vec<bool> = (0..q_count).map(|q| reach[q] && dfa.is_final(q)).collect();
        if !alive.iter().any(|&a| a) {
            return Err(Failure);
        }
        let mut kept_len = vec![0; n];
        for i in (0..n).rev() {
            let (lo, hi) = (starts[i], starts[i + 1]);
            let mut w = lo;
            next.fill(false);
            for k in lo..hi {
                let a = arcs[k];
                if alive[a.to] {
                    arcs[w] = a;
                    w += 1;
                    next[a.from] = true;
                }
            }
            if w == lo {
                return Err(Failure);
            }
            kept_len[i] = w - lo;
            std::mem::swap(&mut alive, &mut next);
        }
        let mut layer_start = Vec::with_capacity(n + 1);
        let mut w = 0;
        for i in 0..n {
            layer_start.push(w);
            arcs.copy_within(starts[i]..starts[i] + kept_len[i], w);
            w += kept_len[i];
        }
        layer_start.push(w);
        arcs.truncate(w);

        let stride = q_count + 1;
        let mut offsets = vec![0; n * stride];
        for i in 0..n {
            let off = &mut offsets[i * stride..(i + 1) * stride];
            for a in &arcs[layer_start[i]..layer_start[i + 1]] {
                off[a.from + 1] += 1;
            }
            for q in 0..q_count {
                off[q + 1] += off[q];
            }
        }
        Ok(LayeredGraph {
            initial: dfa.initial(),
            q_count,
            arcs,
            layer_start,
            offsets,
        })
    }

    /// Number of variable layers.
    pub fn len(&self) -> usize {
        self.layer_start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs between layer `i` and `i + 1`.
    pub fn layer(&self, i: usize) -> &[GraphArc] {
        &self.arcs[self.layer_start[i]..self.layer_start[i + 1]]
    }

    /// Index range in [`layer`](Self::layer) of the arcs leaving `state` at layer `i`,
    /// ascending by label.
    pub fn out_range(&self, i: usize, state: usize) -> std::ops::Range<usize> {
        if state >= self.q_count {
            return 0..0;
        }
        let base = i * (self.q_count + 1) + state;
        self.offsets[base]..self.offsets[base + 1]
    }

    pub fn out_arcs(&self, i: usize, state: usize) -> &[GraphArc] {
        &self.layer(i)[self.out_range(i, state)]
    }

    /// Index of the arc leaving `state` at layer `i` with label `value`.
    pub fn find_arc(&self, i: usize, state: usize, value: i32) -> Option<usize> {
        let range = self.out_range(i, state);
        let start = range.start;
        self.layer(i)[range]
            .binary_search_by_key(&value, |a| a.value)
            .ok()
            .map(|k| start + k)
    }

    /// Values labelling at least one arc at each layer.
    pub fn supported_domains(&self) -> Vec<Domain> {
        (0..self.len())
            .map(|i| self.layer(i).iter().map(|a| a.value).collect())
            .collect()
    }

    /// Lexicographically smallest accepted string.
    pub fn min_word(&self) -> Vec<i32> {
        self.greedy(|arcs| arcs.first())
    }

    /// Lexicographically greatest accepted string.
    pub fn max_word(&self) -> Vec<i32> {
        self.greedy(|arcs| arcs.last())
    }

    /// For every layer `i` and every value `v` on it, the lex-smallest (or,
    /// with `greatest`, lex-greatest) accepted string with `v` at position
    /// `i`. Entries of a layer are sorted by value.
    pub fn extreme_words(&self, greatest: bool) -> Vec<Vec<(i32, Vec<i32>)>> {
        let n = self.len();
        let q_count = self.q_count;
        let key_value = |v: i32| if greatest { -(v as i64) } else { v as i64 };

        // rank[i * q + s]: position of node (i, s) when nodes of layer i are
        // ordered by their best prefix; parent: layer-relative index of the
        // last arc of that prefix
        let mut rank = vec![usize::MAX; (n + 1) * q_count];
        let mut parent = vec![usize::MAX; (n + 1) * q_count];
        if q_count > 0 {
            rank[self.initial] = 0;
        }
        let mut best: Vec<Option<(usize, i64, usize)>> = vec![None; q_count];
        let mut order: Vec<(usize, i64, usize, usize)> = Vec::with_capacity(q_count);
        for i in 0..n {
            best.fill(None);
            for (k, a) in self.layer(i).iter().enumerate() {
                let key = (rank[i * q_count + a.from], key_value(a.value), k);
                if best[a.to].is_none_or(|b| key < b) {
                    best[a.to] = Some(key);
                }
            }
            order.clear();
            order.extend(
                best.iter()
                    .enumerate()
                    .filter_map(|(q, b)| b.map(|(r, v, k)| (r, v, k, q))),
            );
            order.sort_unstable();
            for (r, &(_, _, k, q)) in order.iter().enumerate() {
                rank[(i + 1) * q_count + q] = r;
                parent[(i + 1) * q_count + q] = k;
            }
        }

        let word_through = |i: usize, a: GraphArc| {
            let mut word = vec![0; n];
            let mut q = a.from;
            for j in (0..i).rev() {
                let p = self.layer(j)[parent[(j + 1) * q_count + q]];
                word[j] = p.value;
                q = p.from;
            }
            word[i] = a.value;
            let mut q = a.to;
            for (j, slot) in word.iter_mut().enumerate().skip(i + 1) {
                let out = self.out_arcs(j, q);
                let next = if greatest { out.last() } else { out.first() };
                let next = next.expect("trimmed graph has no dead ends");
                *slot = next.value;
                q = next.to;
            }
            word
        };

        (0..n)
            .map(|i| {
                let mut chosen: Vec<(i32, usize, GraphArc)> = Vec::new();
                for a in self.layer(i) {
                    let r = rank[i * q_count + a.from];
                    match chosen.iter_mut().find(|c| c.0 == a.value) {
                        Some(c) if r < c.1 => *c = (a.value, r, *a),
                        Some(_) => {}
                        None => chosen.push((a.value, r, *a)),
                    }
                }
                chosen.sort_unstable_by_key(|c| c.0);
                chosen.into_iter().map(|(v, _, a)| (v, word_through(i, a))).collect()
            })
            .collect()
    }

    fn greedy<'a>(&'a self, pick: impl Fn(&'a [GraphArc]) -> Option<&'a GraphArc>) -> Vec<i32> {
        let mut q = self.initial;
        let mut word = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let arc = pick(self.out_arcs(i, q)).expect("trimmed graph has no dead ends");
            word.push(arc.value);
            q = arc.to;
        }
        word
    }

    pub fn new_marks(&self) -> ArcMarks {
        ArcMarks {
            arcs: (0..self.len()).map(|i| vec![false; self.layer(i).len()]).collect(),
            expanded: vec![vec![false; self.q_count]; self.len()],
        }
    }

    /// Marks every arc on a path from `state` at layer `i` to the last layer.
    ///
    /// The graph is trimmed, so every forward path ends in a final node.
    pub fn mark_from(&self, marks: &mut ArcMarks, i: usize, state: usize) {
        if state >= self.q_count {
            return;
        }
        let mut frontier = vec![state];
        let mut next = Vec::new();
        for layer in i..self.len() {
            next.clear();
            for &q in &frontier {
                if std::mem::replace(&mut marks.expanded[layer][q], true) {
                    continue;
                }
                for k in self.out_range(layer, q) {
                    marks.arcs[layer][k] = true;
                    next.push(self.layer(layer)[k].to);
                }
            }
            next.sort_unstable();
            next.dedup();
            std::mem::swap(&mut frontier, &mut next);
        }
    }

    /// Values at each layer carried by a marked arc.
    pub fn marked_domains(&self, marks: &ArcMarks) -> Vec<Domain> {
        (0..self.len())
            .map(|i| {
                self.layer(i)
                    .iter()
                    .zip(&marks.arcs[i])
                    .filter(|(_, &k)| k)
                    .map(|(a, _)| a.value)
                    .collect()
            })
            .collect()
    }
}

/// Per-arc mark flags for one [`LayeredGraph`].
#[derive(Clone, Debug)]
pub struct ArcMarks {
    pub arcs: Vec<Vec<bool>>,
    // nodes whose whole forward cone is already marked
    expanded: Vec<Vec<bool>>,
}

/// Lexicographically smallest string accepted by `dfa` within `domains`.
pub fn regular_min(dfa: &Dfa, domains: &[Domain]) -> Result<Vec<i32>, Failure> {
    Ok(LayeredGraph::build(dfa, domains)?.min_word())
}

/// Lexicographically greatest string accepted by `dfa` within `domains`.
pub fn regular_max(dfa: &Dfa, domains: &[Domain]) -> Result<Vec<i32>, Failure> {
    Ok(LayeredGraph::build(dfa, domains)?.max_word())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_11() -> Dfa {
        Dfa::new(2, 0, [0, 1], [(0, 0, 0), (0, 1, 1), (1, 0, 0)]).unwrap()
    }

    // accepts exactly "1 2"
    fn only_ab() -> Dfa {
        Dfa::new(3, 0, [2], [(0, 1, 1), (1, 2, 2)]).unwrap()
    }

    #[test]
    fn universal_single_arc() {
        let g = LayeredGraph::build(&Dfa::universal(&Domain::singleton(1)), &[Domain::singleton(1)]).unwrap();
        assert_eq!(g.num_arcs(), 1);
    }

    #[test]
    fn unique_path() {
        let g = LayeredGraph::build(&only_ab(), &[Domain::singleton(1), Domain::singleton(2)]).unwrap();
        assert_eq!(g.num_arcs(), 2);
        let g = LayeredGraph::build(&only_ab(), &[Domain::new([1, 2]), Domain::new([1, 2])]).unwrap();
        assert_eq!(g.supported_domains(), vec![Domain::singleton(1), Domain::singleton(2)]);
        assert_eq!(g.num_arcs(), 2);
    }

    #[test]
    fn no_path_fails() {
        assert!(LayeredGraph::build(&only_ab(), &[Domain::singleton(2), Domain::singleton(2)]).is_err());
        assert!(LayeredGraph::build(&only_ab(), &[Domain::singleton(1)]).is_err());
    }

    #[test]
    fn extremes_without_consecutive_ones() {
        let d = vec![Domain::boolean(); 3];
        assert_eq!(regular_min(&no_11(), &d).unwrap(), vec![0, 0, 0]);
        assert_eq!(regular_max(&no_11(), &d).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn empty_word() {
        assert_eq!(regular_min(&no_11(), &[]).unwrap(), Vec::<i32>::new());
        assert!(regular_min(&only_ab(), &[]).is_err());
    }

    #[test]
    fn marking_from_root_marks_everything() {
        let g = LayeredGraph::build(&no_11(), &vec![Domain::boolean(); 4]).unwrap();
        let mut m = g.new_marks();
        g.mark_from(&mut m, 0, g.initial());
        assert!(m.arcs.iter().flatten().all(|&k| k));
    }

    #[test]
    fn marking_from_dead_node_marks_nothing() {
        let g = LayeredGraph::build(&only_ab(), &[Domain::new([1, 2]), Domain::new([1, 2])]).unwrap();
        let mut m = g.new_marks();
        g.mark_from(&mut m, 1, 0);
        assert!(m.arcs.iter().flatten().all(|&k| !k));
    }
}
