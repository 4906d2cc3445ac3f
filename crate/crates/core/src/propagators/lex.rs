use crate::domain::Domain;
use crate::engine::{FilterResult, Propagator, Status};
use crate::store::VarId;
use crate::Failure;

/// Two equal-length variable vectors ordered `xs ≤lex ys`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexPair {
    pub xs: Vec<VarId>,
    pub ys: Vec<VarId>,
}

impl LexPair {
    /// # Panics
    /// If the vectors differ in length.
    pub fn new(xs: Vec<VarId>, ys: Vec<VarId>) -> Self {
        assert_eq!(xs.len(), ys.len(), "lex vectors must have equal length");
        LexPair { xs, ys }
    }
}

/// Enforces domain consistency on `X ≤lex Y` for independent variables.
///
/// A tuple pair satisfies the constraint iff there is a position `p` such
/// that `X[j] = Y[j]` for all `j < p` and either `p = n` or `X[p] < Y[p]`.
/// For a value at position `i` we look for such a `p` below `i`, at `i`, or
/// above `i` (in which case position `i` itself must be an equality).
pub fn filter_lex(xs: &mut [Domain], ys: &mut [Domain]) -> FilterResult {
    let n = xs.len();
    assert_eq!(n, ys.len());
    crate::check_nonempty(xs)?;
    crate::check_nonempty(ys)?;

    let can_eq: Vec<bool> = (0..n)
        .map(|j| xs[j].iter().any(|v| ys[j].contains(v)))
        .collect();
    let can_lt: Vec<bool> = (0..n)
        .map(|j| xs[j].min().unwrap() < ys[j].max().unwrap())
        .collect();

    // eq_prefix[i]: positions 0..i can all be equal
    let mut eq_prefix = vec![true; n + 1];
    for j in 0..n {
        eq_prefix[j + 1] = eq_prefix[j] && can_eq[j];
    }
    // strict_before[i]: some p < i with eq_prefix[p] and can_lt[p]
    let mut strict_before = vec![false; n + 1];
    for j in 0..n {
        strict_before[j + 1] = strict_before[j] || (eq_prefix[j] && can_lt[j]);
    }
    // tail_ok[i]: positions i..p-1 can be equal and (p == n or can_lt[p]) for some p ≥ i
    let mut tail_ok = vec![true; n + 1];
    for j in (0..n).rev() {
        tail_ok[j] = can_lt[j] || (can_eq[j] && tail_ok[j + 1]);
    }

    if !tail_ok[0] {
        return Err(Failure);
    }

    // Entailed when the largest X is below the smallest Y.
    let x_max: Vec<i32> = xs.iter().map(|d| d.max().unwrap()).collect();
    let y_min: Vec<i32> = ys.iter().map(|d| d.min().unwrap()).collect();
    if x_max <= y_min {
        return Ok(Status::Entailed);
    }

    for i in 0..n {
        if strict_before[i] {
            continue;
        }
        if !eq_prefix[i] {
            // unreachable when tail_ok[0] holds and nothing strict before i
            break;
        }
        let after = tail_ok[i + 1];
        let y_max = ys[i].max().unwrap();
        let x_min = xs[i].min().unwrap();
        let y_snapshot = ys[i].clone();
        let x_snapshot = xs[i].clone();
        xs[i].retain(|v| v < y_max || (after && y_snapshot.contains(v)));
        ys[i].retain(|w| w > x_min || (after && x_snapshot.contains(w)));
        if xs[i].is_empty() || ys[i].is_empty() {
            return Err(Failure);
        }
    }
    Ok(Status::Active)
}

/// Propagator for [`LexPair`].
#[derive(Clone, Debug)]
pub struct Lex {
    pair: LexPair,
    scope: Vec<VarId>,
}

impl Lex {
    pub fn new(xs: Vec<VarId>, ys: Vec<VarId>) -> Self {
        let pair = LexPair::new(xs, ys);
        let scope = pair.xs.iter().chain(&pair.ys).copied().collect();
        Lex { pair, scope }
    }

    pub fn pair(&self) -> &LexPair {
        &self.pair
    }
}

impl Propagator for Lex {
    fn name(&self) -> &str {
        "lex"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        0
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        let (xs, ys) = domains.split_at_mut(self.pair.xs.len());
        filter_lex(xs, ys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_dc, LexCheck};
    use proptest::prelude::*;

    fn run(x: &[Domain], y: &[Domain]) -> Result<(Vec<Domain>, Vec<Domain>), Failure> {
        let mut x = x.to_vec();
        let mut y = y.to_vec();
        filter_lex(&mut x, &mut y)?;
        Ok((x, y))
    }

    #[test]
    fn both_orders_possible() {
        let x = [Domain::boolean()];
        let y = [Domain::boolean()];
        assert_eq!(run(&x, &y).unwrap(), (x.to_vec(), y.to_vec()));
    }

    #[test]
    fn equality_prefix_pruning() {
        // X=[{1,2},{1,3}], Y=[{1},{0,1}]
        let x = [Domain::new([1, 2]), Domain::new([1, 3])];
        let y = [Domain::singleton(1), Domain::new([0, 1])];
        let (x, y) = run(&x, &y).unwrap();
        assert_eq!(x, vec![Domain::singleton(1), Domain::singleton(1)]);
        assert_eq!(y, vec![Domain::singleton(1), Domain::singleton(1)]);
    }

    #[test]
    fn strictly_greater_fails() {
        assert_eq!(
            run(&[Domain::singleton(2)], &[Domain::singleton(1)]),
            Err(Failure)
        );
    }

    #[test]
    fn empty_vectors_are_ordered() {
        assert!(run(&[], &[]).is_ok());
    }

    fn doms(n: usize) -> impl Strategy<Value = Vec<Domain>> {
        prop::collection::vec(
            prop::collection::btree_set(0i32..4, 1..=4).prop_map(|s| Domain::new(s)),
            n,
        )
    }

    proptest! {
        #[test]
        fn matches_oracle((x, y) in (1usize..=4).prop_flat_map(|n| (doms(n), doms(n)))) {
            let n = x.len();
            let mut all = x.clone();
            all.extend(y.clone());
            let check = LexCheck::new((0..n).collect(), (n..2 * n).collect());
            let expected = brute_force_dc(&all, &[&check]).unwrap();
            match run(&x, &y) {
                Ok((fx, fy)) => {
                    let expected = expected.expect("filter succeeded so oracle must too");
                    prop_assert_eq!(&fx[..], &expected[..n]);
                    prop_assert_eq!(&fy[..], &expected[n..]);
                    // idempotent
                    let again = run(&fx, &fy).unwrap();
                    prop_assert_eq!((fx, fy), again);
                }
                Err(Failure) => prop_assert!(expected.is_none()),
            }
        }
    }
}
