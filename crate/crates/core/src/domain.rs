//! Finite integer domains.

use std::fmt;

/// A finite, ordered set of integer values.
///
/// Values are kept sorted and deduplicated, so `min`, `max` and successor
/// queries are `O(1)` / `O(log d)`.
#[derive(PartialEq, Eq, Hash, Default)]
pub struct Domain {
    values: Vec<i32>,
}

impl Clone for Domain {
    fn clone(&self) -> Self {
        Domain {
            values: self.values.clone(),
        }
    }

    // reuses the allocation; the engine copies domains on every filter call
    fn clone_from(&mut self, source: &Self) {
        self.values.clone_from(&source.values);
    }
}

impl Domain {
    pub fn new<I: IntoIterator<Item = i32>>(values: I) -> Self {
        let mut values: Vec<i32> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        Domain { values }
    }

    /// The inclusive interval `lo..=hi`; empty when `lo > hi`.
    pub fn range(lo: i32, hi: i32) -> Self {
        Domain {
            values: (lo..=hi).collect(),
        }
    }

    pub fn singleton(value: i32) -> Self {
        Domain {
            values: vec![value],
        }
    }

    pub fn empty() -> Self {
        Domain { values: Vec::new() }
    }

    pub fn boolean() -> Self {
        Domain { values: vec![0, 1] }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_fixed(&self) -> bool {
        self.values.len() == 1
    }

    /// The value of a singleton domain.
    pub fn value(&self) -> Option<i32> {
        if self.is_fixed() {
            Some(self.values[0])
        } else {
            None
        }
    }

    pub fn min(&self) -> Option<i32> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<i32> {
        self.values.last().copied()
    }

    pub fn contains(&self, value: i32) -> bool {
        self.values.binary_search(&value).is_ok()
    }

    /// Position of `value` in iteration order.
    pub fn index_of(&self, value: i32) -> Option<usize> {
        self.values.binary_search(&value).ok()
    }

    /// Smallest value strictly greater than `value`.
    pub fn next_above(&self, value: i32) -> Option<i32> {
        let at = self.values.partition_point(|&v| v <= value);
        self.values.get(at).copied()
    }

    /// Largest value strictly smaller than `value`.
    pub fn next_below(&self, value: i32) -> Option<i32> {
        let at = self.values.partition_point(|&v| v < value);
        at.checked_sub(1).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = i32> + ExactSizeIterator + '_ {
        self.values.iter().copied()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.values
    }

    /// Keeps the values satisfying `keep`. Returns whether anything was removed.
    pub fn retain<F: FnMut(i32) -> bool>(&mut self, mut keep: F) -> bool {
        let before = self.values.len();
        self.values.retain(|&v| keep(v));
        self.values.len() != before
    }

    pub fn remove(&mut self, value: i32) -> bool {
        match self.values.binary_search(&value) {
            Ok(at) => {
                self.values.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    /// Restricts to `{value}` (or empty if `value` is absent).
    pub fn assign(&mut self, value: i32) -> bool {
        if self.is_fixed() && self.values[0] == value {
            return false;
        }
        let present = self.contains(value);
        self.values.clear();
        if present {
            self.values.push(value);
        }
        true
    }

    pub fn intersect(&mut self, other: &Domain) -> bool {
        self.retain(|v| other.contains(v))
    }

    pub fn is_subset(&self, other: &Domain) -> bool {
        self.values.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<i32> for Domain {
    fn from_iter<I: IntoIterator<Item = i32>>(iter: I) -> Self {
        Domain::new(iter)
    }
}

impl From<&[i32]> for Domain {
    fn from(values: &[i32]) -> Self {
        Domain::new(values.iter().copied())
    }
}

impl<const N: usize> From<[i32; N]> for Domain {
    fn from(values: [i32; N]) -> Self {
        Domain::new(values)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Per-variable minima; the tuple a search with `MinFirst` would try first.
pub fn minima(domains: &[Domain]) -> Option<Vec<i32>> {
    domains.iter().map(Domain::min).collect()
}

pub fn maxima(domains: &[Domain]) -> Option<Vec<i32>> {
    domains.iter().map(Domain::max).collect()
}

/// Singleton domains spelling `tuple`.
pub fn fixed(tuple: &[i32]) -> Vec<Domain> {
    tuple.iter().map(|&v| Domain::singleton(v)).collect()
}
