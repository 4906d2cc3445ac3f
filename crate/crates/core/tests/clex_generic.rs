mod common;

use std::sync::Arc;

use clex::clex::{c_max, c_min, clex_lb, propagate_clex, ClexPropagator, RowPropagator, SumRow};
use clex::domain::fixed;
use clex::propagators::Lex;
use clex::{Consistency, Domain, Model};
use common::*;

fn run(inst: &PairInstance) -> Option<(Vec<Domain>, Vec<Domain>)> {
    let c = inst.kind.adapter();
    let mut x = inst.xs.clone();
    let mut y = inst.ys.clone();
    propagate_clex(&mut x, &mut y, &*c, &*c).ok()?;
    Some((x, y))
}

#[test]
fn matches_oracle_on_random_rows() {
    let mut rng = rng(11);
    for case in 0..400 {
        let inst = random_pair(&mut rng);
        assert_eq!(run(&inst), oracle_pair(&inst), "case {case}");
    }
}

#[test]
fn second_run_is_a_no_op_and_bounds_are_stable() {
    let mut rng = rng(12);
    for _ in 0..300 {
        let inst = random_pair(&mut rng);
        let c = inst.kind.adapter();
        let Some((x, y)) = run(&inst) else { continue };
        let again = run(&PairInstance {
            kind: inst.kind.clone(),
            xs: x.clone(),
            ys: y.clone(),
        });
        assert_eq!(again, Some((x.clone(), y.clone())));
        assert_eq!(c_min(&*c, &x), c_min(&*c, &inst.xs));
        assert_eq!(c_max(&*c, &y), c_max(&*c, &inst.ys));
    }
}

#[test]
fn at_least_as_strong_as_the_decomposition() {
    let mut rng = rng(13);
    let mut strictly_stronger = 0;
    for _ in 0..300 {
        let inst = random_pair(&mut rng);
        let c = inst.kind.adapter();
        let mut m = Model::new();
        let xs = m.new_vars(inst.xs.clone());
        let ys = m.new_vars(inst.ys.clone());
        m.post(RowPropagator::new(xs.clone(), c.clone()));
        m.post(RowPropagator::new(ys.clone(), c.clone()));
        m.post(Lex::new(xs, ys));
        let decomposed = match m.propagate() {
            Consistency::Consistent => Some(m.store().domains().to_vec()),
            Consistency::Failed => None,
        };
        let combined = run(&inst).map(|(x, y)| [x, y].concat());
        match (combined, decomposed) {
            (Some(c), Some(d)) => {
                assert!(c.iter().zip(&d).all(|(a, b)| a.is_subset(b)));
                if c != d {
                    strictly_stronger += 1;
                }
            }
            (Some(_), None) => panic!("decomposition failed where the combined filter did not"),
            (None, _) => {}
        }
    }
    assert!(strictly_stronger > 0);
}

fn example_row(i: i32, n: i32) -> Vec<Domain> {
    vec![
        Domain::range(1, n - 1),
        Domain::range(n + 2 - i, 2 * n - i),
        Domain::singleton(n + 1 - i),
    ]
}

#[test]
fn worked_example_of_two_sum_rows() {
    let mut m = Model::new();
    let r1 = m.new_vars(example_row(1, 5));
    let r2 = m.new_vars(example_row(2, 5));
    m.post(ClexPropagator::same(r1.clone(), r2.clone(), Arc::new(SumRow)));
    assert_eq!(m.propagate(), Consistency::Consistent);
    m.push_level();
    m.assign(r1[0], 1).unwrap();
    assert_eq!(m.propagate(), Consistency::Consistent);
    assert_eq!(m.store().gather(&r1), fixed(&[1, 6, 5]));
    assert_eq!(
        m.store().gather(&r2),
        vec![Domain::range(2, 4), Domain::range(6, 8), Domain::singleton(4)]
    );

    let pruned = clex_lb(&[1, 6, 5], &SumRow, &example_row(2, 5)).unwrap();
    assert_eq!(pruned[0], Domain::range(2, 4));
    assert_eq!(pruned[1], Domain::range(6, 8));
}

#[test]
fn chain_of_sum_rows_fails_at_root() {
    for n in 2..=8 {
        let mut m = Model::new();
        let rows: Vec<_> = (1..=n).map(|i| m.new_vars(example_row(i, n))).collect();
        for w in rows.windows(2) {
            m.post(ClexPropagator::same(w[0].clone(), w[1].clone(), Arc::new(SumRow)));
        }
        assert_eq!(m.propagate(), Consistency::Failed, "n = {n}");
    }
}

#[test]
fn entailed_pairs_behave_like_independent_rows() {
    let mut rng = rng(14);
    let mut seen = 0;
    for _ in 0..2000 {
        let inst = random_pair(&mut rng);
        let maxima: Vec<i32> = inst.xs.iter().map(|d| d.max().unwrap()).collect();
        let minima: Vec<i32> = inst.ys.iter().map(|d| d.min().unwrap()).collect();
        if maxima > minima {
            continue;
        }
        seen += 1;
        let independent = oracle_row(&inst.kind, &inst.xs).zip(oracle_row(&inst.kind, &inst.ys));
        assert_eq!(run(&inst), independent);
    }
    assert!(seen > 10);
}

#[test]
fn quadratic_growth_of_the_lower_bound_walk() {
    use clex::clex::RegularRow;
    use clex::regular::Dfa;
    use std::time::Instant;
    let dfa = Arc::new(Dfa::universal(&Domain::range(0, 3)));
    let c = RegularRow(dfa);
    let time = |n: usize| {
        let d = vec![Domain::range(0, 3); n];
        let bound = vec![1; n];
        let start = Instant::now();
        for _ in 0..5 {
            clex_lb(&bound, &c, &d).unwrap();
        }
        start.elapsed().as_secs_f64()
    };
    let small = time(100).max(1e-6);
    let large = time(400);
    // 4x longer input; allow generous slack over the quadratic 16x
    assert!(large / small < 64.0, "{small} {large}");
}
