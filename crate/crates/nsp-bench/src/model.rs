//! Matrix models of the nurse-scheduling problem.
//!
//! Variable `(r, c)` is nurse `r` on day `c`. Rows are interchangeable, so
//! adjacent rows are ordered with `≤lex`. Each row carries the same workload
//! rule, either a Sequence constraint or an automaton, and each day carries an
//! at-least demand per shift.

use std::fmt;
use std::sync::Arc;

use clex::clex::{
    build_product_dfa, post_product, ClexPropagator, ClexRegularPropagator, ClexSequencePropagator,
    RowPropagator, SequenceRow, SequenceSpec, SumRow,
};
use clex::propagators::{post_sequence_decomposed, Among, Lex, TernarySum};
use clex::regular::{Dfa, RegularPropagator};
use clex::{BranchingOrder, Domain, Limits, Model, VarId};
use thiserror::Error;

use crate::instance::NspInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One Among per window, plus Lex.
    AmongLex,
    /// Domain-consistent Sequence per row, plus Lex.
    SeqLex,
    /// Combined Sequence and Lex per adjacent row pair.
    ClexSeq,
    /// Regular per row, plus Lex.
    RegularLex,
    /// Combined Regular and Lex as a Regular on the product automaton.
    ClexRegular,
    /// Combined Regular and Lex on the layered graphs.
    ClexRegularGraph,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::AmongLex,
        Mode::SeqLex,
        Mode::ClexSeq,
        Mode::RegularLex,
        Mode::ClexRegular,
        Mode::ClexRegularGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::AmongLex => "among-lex",
            Mode::SeqLex => "seq-lex",
            Mode::ClexSeq => "clex-seq",
            Mode::RegularLex => "regular-lex",
            Mode::ClexRegular => "clex-regular",
            Mode::ClexRegularGraph => "clex-regular-graph",
        }
    }

    pub fn uses_sequence(self) -> bool {
        matches!(self, Mode::AmongLex | Mode::SeqLex | Mode::ClexSeq)
    }

    pub fn is_combined(self) -> bool {
        matches!(self, Mode::ClexSeq | Mode::ClexRegular | Mode::ClexRegularGraph)
    }

    /// Modes that accept the given rule.
    pub fn family(sequence: bool) -> Vec<Mode> {
        Mode::ALL.into_iter().filter(|m| m.uses_sequence() == sequence).collect()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Mode::ALL.iter().map(|m| m.name()).collect();
                format!("unknown mode `{s}`, expected one of {}", names.join(", "))
            })
    }
}

/// The per-row workload rule. A Sequence rule counts working days: its value
/// set is replaced by the instance's working values when the model is built.
#[derive(Clone, Debug)]
pub enum RowRule {
    Sequence(SequenceSpec),
    Automaton { label: String, dfa: Arc<Dfa> },
}

impl RowRule {
    pub fn label(&self) -> String {
        match self {
            RowRule::Sequence(s) => format!("({},{},{})", s.lower, s.upper, s.k),
            RowRule::Automaton { label, .. } => label.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub mode: Mode,
    pub rule: RowRule,
    pub limits: Limits,
}

impl ModelConfig {
    pub fn new(mode: Mode, rule: RowRule, limits: Limits) -> Self {
        ModelConfig { mode, rule, limits }
    }

    /// Short label used in result tables, e.g. `clex-seq(2,3,4)`.
    pub fn name(&self) -> String {
        match &self.rule {
            RowRule::Sequence(_) => format!("{}{}", self.mode, self.rule.label()),
            RowRule::Automaton { label, .. } => format!("{}[{label}]", self.mode),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("mode {mode} needs a {expected} rule")]
    RuleMismatch { mode: Mode, expected: &'static str },
    #[error("Sequence window {k} is longer than the {days}-day horizon")]
    WindowTooLong { k: usize, days: usize },
}

pub struct NspModel {
    pub model: Model,
    pub order: BranchingOrder,
    /// `grid[nurse][day]`.
    pub grid: Vec<Vec<VarId>>,
}

impl NspModel {
    /// Schedule as a matrix, from a full assignment indexed by variable.
    pub fn schedule(&self, solution: &[i32]) -> Vec<Vec<i32>> {
        self.grid.iter().map(|row| row.iter().map(|&v| solution[v]).collect()).collect()
    }
}

/// Columns from the last day to the first, each from the bottom row up.
pub fn paper_order(grid: &[Vec<VarId>], days: usize) -> BranchingOrder {
    let seq = (0..days)
        .rev()
        .flat_map(|c| grid.iter().rev().map(move |row| row[c]))
        .collect();
    BranchingOrder::new(seq)
}

pub fn build_model(inst: &NspInstance, config: &ModelConfig) -> Result<NspModel, ModelError> {
    let (n, m) = (inst.nurses(), inst.days());
    let seq_spec = match (&config.rule, config.mode.uses_sequence()) {
        (RowRule::Sequence(s), true) => Some(SequenceSpec::new(s.lower, s.upper, s.k, inst.working_values())),
        (RowRule::Automaton { .. }, false) => None,
        (_, true) => {
            return Err(ModelError::RuleMismatch {
                mode: config.mode,
                expected: "Sequence",
            })
        }
        (_, false) => {
            return Err(ModelError::RuleMismatch {
                mode: config.mode,
                expected: "automaton",
            })
        }
    };
    if let Some(s) = &seq_spec {
        if s.k > m {
            return Err(ModelError::WindowTooLong { k: s.k, days: m });
        }
    }

    let mut model = Model::new();
    let grid: Vec<Vec<VarId>> = (0..n).map(|_| model.new_vars(vec![inst.value_domain(); m])).collect();

    match (&config.rule, config.mode) {
        (RowRule::Sequence(_), mode) => {
            let spec = seq_spec.expect("sequence rule");
            post_sequence_rows(&mut model, &grid, &spec, mode);
        }
        (RowRule::Automaton { dfa, .. }, Mode::RegularLex) => {
            for row in &grid {
                model.post(RegularPropagator::new(row.clone(), dfa.clone()));
            }
            post_lex(&mut model, &grid);
        }
        (RowRule::Automaton { dfa, .. }, Mode::ClexRegular) => {
            if n == 1 {
                model.post(RegularPropagator::new(grid[0].clone(), dfa.clone()));
            }
            let product = Arc::new(build_product_dfa(dfa, dfa).dfa);
            for w in grid.windows(2) {
                post_product(&mut model, &w[0], &w[1], product.clone());
            }
        }
        (RowRule::Automaton { dfa, .. }, Mode::ClexRegularGraph) => {
            if n == 1 {
                model.post(RegularPropagator::new(grid[0].clone(), dfa.clone()));
            }
            for w in grid.windows(2) {
                model.post(ClexRegularPropagator::same(w[0].clone(), w[1].clone(), dfa.clone()));
            }
        }
        _ => unreachable!("rule checked above"),
    }

    for day in 0..m {
        let column: Vec<VarId> = grid.iter().map(|row| row[day]).collect();
        for shift in 0..inst.shifts() {
            let values = Domain::singleton(inst.shift_value(shift));
            model.post(Among::at_least(column.clone(), values, inst.demand(day, shift)));
        }
    }

    let order = paper_order(&grid, m);
    Ok(NspModel { model, order, grid })
}

fn post_sequence_rows(model: &mut Model, grid: &[Vec<VarId>], spec: &SequenceSpec, mode: Mode) {
    match mode {
        Mode::AmongLex => {
            for row in grid {
                post_sequence_decomposed(model, spec, row);
            }
            post_lex(model, grid);
        }
        Mode::SeqLex => {
            let c = Arc::new(SequenceRow::new(spec.clone()));
            for row in grid {
                model.post(RowPropagator::new(row.clone(), c.clone()));
            }
            post_lex(model, grid);
        }
        Mode::ClexSeq => {
            if grid.len() == 1 {
                model.post(RowPropagator::new(grid[0].clone(), Arc::new(SequenceRow::new(spec.clone()))));
            }
            for w in grid.windows(2) {
                model.post(ClexSequencePropagator::new(w[0].clone(), w[1].clone(), spec.clone()));
            }
        }
        _ => unreachable!("not a Sequence mode"),
    }
}

fn post_lex(model: &mut Model, grid: &[Vec<VarId>]) {
    for w in grid.windows(2) {
        model.post(Lex::new(w[0].clone(), w[1].clone()));
    }
}

/// Row `i` (1-based) of the `n × 3` separation instance: `[X, Y, Z]` with
/// `Y = X + Z`, `X ∈ 1..n-1`, `Y ∈ n+2-i..2n-i`, `Z = n+1-i`.
pub fn separation_row(i: i32, n: i32) -> Vec<Domain> {
    vec![
        Domain::range(1, n - 1),
        Domain::range(n + 2 - i, 2 * n - i),
        Domain::singleton(n + 1 - i),
    ]
}

/// The separation instance with either one combined propagator per adjacent
/// row pair or the sum constraints and Lex posted separately. Variables are
/// branched in row-major order.
pub fn separation_model(n: usize, combined: bool) -> (Model, BranchingOrder) {
    let n = n as i32;
    let mut m = Model::new();
    let rows: Vec<Vec<VarId>> = (1..=n).map(|i| m.new_vars(separation_row(i, n))).collect();
    if combined {
        if n == 1 {
            m.post(RowPropagator::new(rows[0].clone(), Arc::new(SumRow)));
        }
        for w in rows.windows(2) {
            m.post(ClexPropagator::same(w[0].clone(), w[1].clone(), Arc::new(SumRow)));
        }
    } else {
        for r in &rows {
            m.post(TernarySum::new(r[1], r[0], r[2]));
        }
        for w in rows.windows(2) {
            m.post(Lex::new(w[0].clone(), w[1].clone()));
        }
    }
    let order = BranchingOrder::input_order(m.num_vars());
    (m, order)
}
