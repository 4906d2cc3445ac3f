use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::domain::Domain;

/// Deterministic finite automaton over integer symbols.
///
/// States are `0..num_states`. Transitions out of each state are kept
/// sorted by symbol, so the smallest and largest labels are at the ends.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    initial: usize,
    finals: Vec<bool>,
    transitions: Vec<Vec<(i32, usize)>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfaError {
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("state {state} out of range (automaton has {num_states} states)")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("two transitions from state {state} on symbol {value}")]
    Nondeterministic { state: usize, value: i32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Dfa {
    /// Builds an automaton from `(from, symbol, to)` triples.
    pub fn new<F, T>(num_states: usize, initial: usize, finals: F, transitions: T) -> Result<Dfa, DfaError>
    where
        F: IntoIterator<Item = usize>,
        T: IntoIterator<Item = (usize, i32, usize)>,
    {
        if num_states == 0 {
            return Err(DfaError::NoStates);
        }
        let check = |state: usize| {
            if state < num_states {
                Ok(state)
            } else {
                Err(DfaError::StateOutOfRange { state, num_states })
            }
        };
        check(initial)?;
        let mut final_flags = vec![false; num_states];
        for f in finals {
            final_flags[check(f)?] = true;
        }
        let mut out: Vec<Vec<(i32, usize)>> = vec![Vec::new(); num_states];
        for (from, value, to) in transitions {
            check(from)?;
            check(to)?;
            out[from].push((value, to));
        }
        for (state, arcs) in out.iter_mut().enumerate() {
            arcs.sort_unstable();
            if let Some(w) = arcs.windows(2).find(|w| w[0].0 == w[1].0) {
                if w[0].1 != w[1].1 {
                    return Err(DfaError::Nondeterministic { state, value: w[0].0 });
                }
            }
            arcs.dedup();
        }
        Ok(Dfa {
            initial,
            finals: final_flags,
            transitions: out,
        })
    }

    /// One-state automaton accepting every string over `alphabet`.
    pub fn universal(alphabet: &Domain) -> Dfa {
        Dfa::new(1, 0, [0], alphabet.iter().map(|v| (0, v, 0))).unwrap()
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    /// Outgoing `(symbol, target)` pairs of `state`, ascending by symbol.
    pub fn transitions_from(&self, state: usize) -> &[(i32, usize)] {
        &self.transitions[state]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn delta(&self, state: usize, value: i32) -> Option<usize> {
        let arcs = &self.transitions[state];
        arcs.binary_search_by_key(&value, |&(v, _)| v)
            .ok()
            .map(|at| arcs[at].1)
    }

    /// Every symbol that labels some transition.
    pub fn alphabet(&self) -> Domain {
        self.transitions.iter().flatten().map(|&(v, _)| v).collect()
    }

    pub fn accepts(&self, word: &[i32]) -> bool {
        let mut q = self.initial;
        for &v in word {
            match self.delta(q, v) {
                Some(next) => q = next,
                None => return false,
            }
        }
        self.finals[q]
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &(_, t) in &self.transitions[q] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Serialises to the text format read by [`Dfa::from_str`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states {} initial {} finals", self.num_states(), self.initial)?;
        for q in self.finals() {
            write!(f, " {q}")?;
        }
        writeln!(f)?;
        for (from, arcs) in self.transitions.iter().enumerate() {
            for &(value, to) in arcs {
                writeln!(f, "{from} {value} {to}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> DfaError {
    DfaError::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, DfaError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

/// Text format: a header `states K initial I finals F1 F2 …` followed by one
/// `from value to` line per transition. Blank lines and lines starting with
/// `#` are ignored.
impl FromStr for Dfa {
    type Err = DfaError;

    fn from_str(text: &str) -> Result<Dfa, DfaError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("states") {
            return Err(parse_err(hline, "expected `states`"));
        }
        let num_states: usize = number(toks.next(), hline, "state count")?;
        if toks.next() != Some("initial") {
            return Err(parse_err(hline, "expected `initial`"));
        }
        let initial: usize = number(toks.next(), hline, "initial state")?;
        if toks.next() != Some("finals") {
            return Err(parse_err(hline, "expected `finals`"));
        }
        let finals = toks
            .map(|t| number::<usize>(Some(t), hline, "final state"))
            .collect::<Result<Vec<_>, _>>()?;

        let mut transitions = Vec::new();
        for (line, l) in lines {
            let mut toks = l.split_whitespace();
            let from: usize = number(toks.next(), line, "source state")?;
            let value: i32 = number(toks.next(), line, "symbol")?;
            let to: usize = number(toks.next(), line, "target state")?;
            if toks.next().is_some() {
                return Err(parse_err(line, "trailing tokens"));
            }
            for s in [from, to] {
                if s >= num_states {
                    return Err(parse_err(line, format!("state {s} out of range")));
                }
            }
            transitions.push((from, value, to));
        }
        Dfa::new(num_states, initial, finals, transitions).map_err(|e| match e {
            DfaError::Parse { .. } => e,
            other => parse_err(hline, other.to_string()),
        })
    }
}
