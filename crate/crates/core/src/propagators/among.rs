use crate::clex::sequence::SequenceSpec;
use crate::domain::Domain;
use crate::engine::{FilterResult, Model, Propagator, PropagatorHandle, Status};
use crate::store::VarId;
use crate::Failure;

/// `l ≤ |{i : window[i] ∈ V}| ≤ u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmongSpec {
    pub lower: usize,
    pub upper: usize,
    pub window: Vec<VarId>,
    pub values: Domain,
}

impl AmongSpec {
    pub fn new(lower: usize, upper: usize, window: Vec<VarId>, values: Domain) -> Self {
        AmongSpec {
            lower,
            upper,
            window,
            values,
        }
    }
}

/// Domain consistency for a counting constraint on one window.
///
/// A variable whose domain lies inside `V` always counts, one disjoint from
/// `V` never does, and a mixed variable may go either way. Mixed variables
/// lose their `V` values when the count is already at `upper`, and their
/// other values when it can only just reach `lower`.
pub fn filter_among(lower: usize, upper: usize, values: &Domain, doms: &mut [Domain]) -> FilterResult {
    crate::check_nonempty(doms)?;
    let mut forced = 0;
    let mut possible = 0;
    let mut mixed = Vec::new();
    for (i, d) in doms.iter().enumerate() {
        let inside = d.iter().filter(|&v| values.contains(v)).count();
        if inside == d.len() {
            forced += 1;
            possible += 1;
        } else if inside > 0 {
            possible += 1;
            mixed.push(i);
        }
    }
    if forced > upper || possible < lower {
        return Err(Failure);
    }
    if mixed.is_empty() {
        return Ok(Status::Entailed);
    }
    let drop_inside = forced == upper;
    let drop_outside = possible == lower;
    if drop_inside || drop_outside {
        for &i in &mixed {
            doms[i].retain(|v| {
                let inside = values.contains(v);
                !(inside && drop_inside || !inside && drop_outside)
            });
        }
        return Ok(Status::Entailed);
    }
    Ok(Status::Active)
}

/// Propagator for [`AmongSpec`].
#[derive(Clone, Debug)]
pub struct Among {
    spec: AmongSpec,
}

impl Among {
    pub fn new(spec: AmongSpec) -> Self {
        Among { spec }
    }

    /// `|{i : vars[i] ∈ V}| ≥ demand`.
    pub fn at_least(vars: Vec<VarId>, values: Domain, demand: usize) -> Self {
        let n = vars.len();
        Among::new(AmongSpec::new(demand, n.max(demand), vars, values))
    }

    pub fn spec(&self) -> &AmongSpec {
        &self.spec
    }
}

impl Propagator for Among {
    fn name(&self) -> &str {
        "among"
    }

    fn scope(&self) -> &[VarId] {
        &self.spec.window
    }

    fn priority(&self) -> u8 {
        0
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        filter_among(self.spec.lower, self.spec.upper, &self.spec.values, domains)
    }
}

/// Posts one [`Among`] per length-`k` window of `vars` (`n − k + 1` of them).
pub fn post_sequence_decomposed(
    model: &mut Model,
    spec: &SequenceSpec,
    vars: &[VarId],
) -> Vec<PropagatorHandle> {
    assert!(spec.k >= 1 && spec.k <= vars.len(), "window longer than the sequence");
    vars.windows(spec.k)
        .map(|w| {
            model.post(Among::new(AmongSpec::new(
                spec.lower,
                spec.upper,
                w.to_vec(),
                spec.values.clone(),
            )))
        })
        .collect()
}
