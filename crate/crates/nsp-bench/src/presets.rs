//! Built-in workload rules.
//!
//! Shift values: `0` day, `1` evening, `2` night, `3` off.

use std::sync::Arc;

use clex::clex::SequenceSpec;
use clex::regular::Dfa;

use crate::model::RowRule;

pub const DAY: i32 = 0;
pub const EVENING: i32 = 1;
pub const NIGHT: i32 = 2;
pub const OFF: i32 = 3;

/// `(lower, upper, k)` triples for the Boolean experiments.
pub const BOOLEAN_TRIPLES: [(usize, usize, usize); 6] =
    [(3, 4, 5), (2, 3, 4), (1, 2, 3), (4, 5, 7), (3, 4, 7), (2, 3, 5)];

pub const PRESET_NAMES: [&str; 2] = ["break12", "break12-run2"];

/// Consecutive shifts that leave less than 12 hours of rest.
pub fn forbidden_pair(prev: i32, next: i32) -> bool {
    matches!((prev, next), (NIGHT, DAY) | (NIGHT, EVENING) | (EVENING, DAY))
}

/// Rest rule only. State `0` is the start, state `1 + v` remembers the last
/// value `v`.
pub fn break12() -> Dfa {
    let mut transitions = Vec::new();
    for v in DAY..=OFF {
        transitions.push((0, v, 1 + v as usize));
    }
    for prev in DAY..=OFF {
        for next in DAY..=OFF {
            if !forbidden_pair(prev, next) {
                transitions.push((1 + prev as usize, next, 1 + next as usize));
            }
        }
    }
    Dfa::new(5, 0, 0..5, transitions).expect("well-formed preset")
}

/// Rest rule plus: every block of a working shift lasts at least two days,
/// including blocks touching either end of the horizon.
///
/// States: `0` start, `1 + 2w` first day of shift `w`, `2 + 2w` second or
/// later day of shift `w`, `7` off.
pub fn break12_run2() -> Dfa {
    const START: usize = 0;
    const OFF_STATE: usize = 7;
    let first = |w: i32| 1 + 2 * w as usize;
    let long = |w: i32| 2 + 2 * w as usize;
    let mut transitions = Vec::new();
    for from in [START, OFF_STATE] {
        transitions.push((from, OFF, OFF_STATE));
        for w in DAY..=NIGHT {
            transitions.push((from, w, first(w)));
        }
    }
    for w in DAY..=NIGHT {
        transitions.push((first(w), w, long(w)));
        transitions.push((long(w), w, long(w)));
        transitions.push((long(w), OFF, OFF_STATE));
        for next in DAY..=NIGHT {
            if next != w && !forbidden_pair(w, next) {
                transitions.push((long(w), next, first(next)));
            }
        }
    }
    let finals = [START, long(DAY), long(EVENING), long(NIGHT), OFF_STATE];
    Dfa::new(8, START, finals, transitions).expect("well-formed preset")
}

pub fn preset(name: &str) -> Option<RowRule> {
    let dfa = match name {
        "break12" => break12(),
        "break12-run2" => break12_run2(),
        _ => return None,
    };
    Some(RowRule::Automaton {
        label: name.to_string(),
        dfa: Arc::new(dfa),
    })
}

pub fn boolean_rules() -> Vec<RowRule> {
    BOOLEAN_TRIPLES
        .iter()
        .map(|&(l, u, k)| RowRule::Sequence(SequenceSpec::boolean(l, u, k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(len: usize) -> Vec<Vec<i32>> {
        (0..4usize.pow(len as u32))
            .map(|mut code| {
                (0..len)
                    .map(|_| {
                        let v = (code % 4) as i32;
                        code /= 4;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    fn rest_ok(w: &[i32]) -> bool {
        w.windows(2).all(|p| !forbidden_pair(p[0], p[1]))
    }

    fn runs_ok(w: &[i32]) -> bool {
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            if w[i] != OFF && j - i < 2 {
                return false;
            }
            i = j;
        }
        true
    }

    #[test]
    fn break12_language() {
        let dfa = break12();
        for len in 0..=5 {
            for w in words(len) {
                assert_eq!(dfa.accepts(&w), rest_ok(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn run2_language() {
        let dfa = break12_run2();
        for len in 0..=6 {
            for w in words(len) {
                assert_eq!(dfa.accepts(&w), rest_ok(&w) && runs_ok(&w), "{w:?}");
            }
        }
        assert!(dfa.accepts(&[DAY, DAY, OFF, NIGHT, NIGHT]));
        assert!(!dfa.accepts(&[NIGHT, NIGHT, DAY, DAY]));
        assert!(!dfa.accepts(&[OFF, EVENING]));
    }

    #[test]
    fn presets_by_name() {
        for name in PRESET_NAMES {
            assert!(preset(name).is_some());
        }
        assert!(preset("nope").is_none());
        assert_eq!(boolean_rules().len(), 6);
    }
}
