use crate::domain::Domain;
use crate::engine::{FilterResult, Propagator, Status};
use crate::store::VarId;
use crate::Failure;

/// Domain-consistent filter for `y = x + z`, domains given as `[y, x, z]`.
pub fn filter_sum(doms: &mut [Domain]) -> FilterResult {
    crate::check_nonempty(doms)?;
    let (y, x, z) = (&doms[0], &doms[1], &doms[2]);
    let xs: Domain = x.iter().filter(|&a| z.iter().any(|c| y.contains(a + c))).collect();
    let zs: Domain = z.iter().filter(|&c| x.iter().any(|a| y.contains(a + c))).collect();
    let ys: Domain = y.iter().filter(|&b| x.iter().any(|a| z.contains(b - a))).collect();
    if xs.is_empty() || ys.is_empty() || zs.is_empty() {
        return Err(Failure);
    }
    doms[0] = ys;
    doms[1] = xs;
    doms[2] = zs;
    Ok(crate::status_of(doms))
}

/// `y = x + z`.
#[derive(Clone, Debug)]
pub struct TernarySum {
    scope: [VarId; 3],
}

impl TernarySum {
    pub fn new(y: VarId, x: VarId, z: VarId) -> Self {
        TernarySum { scope: [y, x, z] }
    }
}

impl Propagator for TernarySum {
    fn name(&self) -> &str {
        "sum"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        0
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        filter_sum(domains)
    }
}

/// `x = y`.
#[derive(Clone, Debug)]
pub struct Equal {
    scope: [VarId; 2],
}

impl Equal {
    pub fn new(x: VarId, y: VarId) -> Self {
        Equal { scope: [x, y] }
    }
}

impl Propagator for Equal {
    fn name(&self) -> &str {
        "equal"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        0
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        let mut common = domains[0].clone();
        common.intersect(&domains[1]);
        if common.is_empty() {
            return Err(Failure);
        }
        domains[0] = common.clone();
        domains[1] = common;
        Ok(crate::status_of(domains))
    }
}

/// `x ≠ y`.
#[derive(Clone, Debug)]
pub struct NotEqual {
    scope: [VarId; 2],
}

impl NotEqual {
    pub fn new(x: VarId, y: VarId) -> Self {
        NotEqual { scope: [x, y] }
    }
}

impl Propagator for NotEqual {
    fn name(&self) -> &str {
        "not-equal"
    }

    fn scope(&self) -> &[VarId] {
        &self.scope
    }

    fn priority(&self) -> u8 {
        0
    }

    fn filter(&self, domains: &mut [Domain]) -> FilterResult {
        crate::check_nonempty(domains)?;
        for (a, b) in [(0, 1), (1, 0)] {
            if let Some(v) = domains[a].value() {
                domains[b].remove(v);
                if domains[b].is_empty() {
                    return Err(Failure);
                }
                return Ok(Status::Entailed);
            }
        }
        if !domains[0].iter().any(|v| domains[1].contains(v)) {
            return Ok(Status::Entailed);
        }
        Ok(Status::Active)
    }
}
