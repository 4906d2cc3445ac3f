mod common;

use std::sync::Arc;

use clex::clex::{
    build_product_dfa, clex_lb_regular, interleave, post_clex_regular_product, propagate_clex,
    propagate_clex_regular, ClexRegularPropagator, RegularRow,
};
use clex::oracle::{brute_force_dc, LexCheck, RegularCheck};
use clex::regular::{filter_regular, Dfa, LayeredGraph};
use clex::{Consistency, Domain, Model};
use common::*;
use rand::Rng;

fn regular_instance(rng: &mut rand_chacha::ChaCha8Rng) -> (Arc<Dfa>, Vec<Domain>, Vec<Domain>) {
    let inst = random_regular_pair(rng);
    match inst.kind {
        RowKind::Regular(d) => (d, inst.xs, inst.ys),
        _ => unreachable!(),
    }
}

fn generic(dfa: &Arc<Dfa>, x: &[Domain], y: &[Domain]) -> Option<Vec<Domain>> {
    let row = RegularRow(dfa.clone());
    let (mut x, mut y) = (x.to_vec(), y.to_vec());
    propagate_clex(&mut x, &mut y, &row, &row).ok()?;
    Some([x, y].concat())
}

fn graph(dfa: &Dfa, x: &[Domain], y: &[Domain]) -> Option<Vec<Domain>> {
    let (mut x, mut y) = (x.to_vec(), y.to_vec());
    propagate_clex_regular(&mut x, &mut y, dfa, dfa).ok()?;
    Some([x, y].concat())
}

fn product(dfa: &Dfa, x: &[Domain], y: &[Domain]) -> Option<Vec<Domain>> {
    let n = x.len();
    let mut m = Model::new();
    let xs = m.new_vars(x.to_vec());
    let ys = m.new_vars(y.to_vec());
    post_clex_regular_product(&mut m, &xs, &ys, dfa);
    if m.propagate() == Consistency::Failed {
        return None;
    }
    let out = m.store().domains().to_vec();
    assert_eq!(out.len(), 2 * n);
    Some(out)
}

#[test]
fn three_encodings_agree_with_each_other_and_the_oracle() {
    let mut rng = rng(21);
    for case in 0..300 {
        let (dfa, x, y) = regular_instance(&mut rng);
        let g = generic(&dfa, &x, &y);
        assert_eq!(graph(&dfa, &x, &y), g, "graph, case {case}");
        assert_eq!(product(&dfa, &x, &y), g, "product, case {case}");
        let inst = PairInstance {
            kind: RowKind::Regular(dfa),
            xs: x,
            ys: y,
        };
        assert_eq!(g, oracle_pair(&inst).map(|(x, y)| [x, y].concat()), "oracle, case {case}");
    }
}

#[test]
fn lower_bound_marking_matches_oracle() {
    let mut rng = rng(22);
    for _ in 0..300 {
        let (dfa, x, _) = regular_instance(&mut rng);
        let Ok(g) = LayeredGraph::build(&dfa, &x) else { continue };
        // any accepted word makes a legal bound; pick a random one by walking
        let mut bound = Vec::new();
        let mut q = g.initial();
        for i in 0..g.len() {
            let arcs = g.out_arcs(i, q);
            let a = arcs[rng.gen_range(0..arcs.len())];
            bound.push(a.value);
            q = a.to;
        }
        let n = x.len();
        let check = RegularCheck::new((0..n).collect(), dfa.clone());
        let fixed_bound = bound.clone();
        let ge = clex::oracle::FnCheck::new((0..n).collect(), move |t: &[i32]| t >= &fixed_bound[..]);
        let expected = brute_force_dc(&x, &[&check, &ge]).unwrap();
        assert_eq!(clex_lb_regular(&bound, &g).ok(), expected);
    }
}

#[test]
fn propagator_entails_fixed_rows() {
    let dfa = Arc::new(Dfa::universal(&Domain::boolean()));
    let mut m = Model::new();
    let xs = m.new_vars(vec![Domain::boolean(); 3]);
    let ys = m.new_vars(vec![Domain::boolean(); 3]);
    m.post(ClexRegularPropagator::same(xs.clone(), ys.clone(), dfa));
    assert_eq!(m.propagate(), Consistency::Consistent);
    m.push_level();
    m.assign(xs[0], 1).unwrap();
    assert_eq!(m.propagate(), Consistency::Consistent);
    assert_eq!(m.domain(ys[0]), &Domain::singleton(1));
}

fn all_words(symbols: i32, len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..symbols).map(move |v| {
                    let mut w = w.clone();
                    w.push(v);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn product_language_is_exact() {
    let mut rng = rng(23);
    for _ in 0..60 {
        let symbols = rng.gen_range(1..=3);
        let dx = random_dfa(&mut rng, 4, symbols);
        let dy = random_dfa(&mut rng, 4, symbols);
        let p = build_product_dfa(&dx, &dy);
        let q = dx.num_states().max(dy.num_states());
        let d = symbols as usize + 3;
        assert!(p.dfa.num_states() <= d * q * q + q * q);
        for n in 0..=3 {
            let words = all_words(symbols, n);
            for x in &words {
                for y in &words {
                    let expected = dx.accepts(x) && dy.accepts(y) && x <= y;
                    assert_eq!(p.dfa.accepts(&interleave(x, y)), expected);
                }
            }
        }
    }
}

#[test]
fn product_filter_equals_direct_oracle() {
    let mut rng = rng(24);
    for _ in 0..100 {
        let (dfa, x, y) = regular_instance(&mut rng);
        let p = build_product_dfa(&dfa, &dfa);
        let mut doms = interleave(&x, &y);
        let got = filter_regular(&p.dfa, &mut doms).ok().map(|_| doms);
        let n = x.len();
        let xs: Vec<usize> = (0..n).map(|i| 2 * i).collect();
        let ys: Vec<usize> = (0..n).map(|i| 2 * i + 1).collect();
        let cx = RegularCheck::new(xs.clone(), dfa.clone());
        let cy = RegularCheck::new(ys.clone(), dfa.clone());
        let lex = LexCheck::new(xs, ys);
        let expected = brute_force_dc(&interleave(&x, &y), &[&cx, &cy, &lex]).unwrap();
        assert_eq!(got, expected);
    }
}

#[test]
fn extreme_words_are_the_lex_extreme_supports() {
    use clex::oracle::brute_force_solutions;
    let mut rng = rng(25);
    for _ in 0..200 {
        let (dfa, x, _) = regular_instance(&mut rng);
        let Ok(g) = LayeredGraph::build(&dfa, &x) else { continue };
        let check = RegularCheck::new((0..x.len()).collect(), dfa.clone());
        let sols = brute_force_solutions(&x, &[&check]).unwrap();
        for greatest in [false, true] {
            for (i, layer) in g.extreme_words(greatest).into_iter().enumerate() {
                let values: Vec<i32> = layer.iter().map(|(v, _)| *v).collect();
                let mut expected_values: Vec<i32> = sols.iter().map(|s| s[i]).collect();
                expected_values.sort();
                expected_values.dedup();
                assert_eq!(values, expected_values);
                for (v, word) in layer {
                    let with_v = sols.iter().filter(|s| s[i] == v);
                    let expected = if greatest { with_v.max() } else { with_v.min() };
                    assert_eq!(Some(&word), expected);
                }
            }
        }
    }
}
