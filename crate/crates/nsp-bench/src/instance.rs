//! Nurse-scheduling instances: text format and seeded generator.
//!
//! File layout:
//!
//! ```text
//! n m s
//! d_1,1 ... d_1,s
//! ...
//! d_m,1 ... d_m,s
//! ```
//!
//! `n` nurses, `m` days and `s` demanded shifts per day. With `s = 1` the
//! instance is Boolean (a nurse works or is off); with `s > 1` shift `c` is
//! encoded as value `c` and "off" as value `s`. Each following line holds the
//! minimum staff per shift for one day. Blank lines and `#` comments are
//! skipped.

use std::fmt;
use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use clex::Domain;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftModel {
    /// One demanded "working" value, domain {0, 1}.
    Boolean,
    /// Day, evening and night shifts plus off, domain {0, 1, 2, 3}.
    Shifts,
}

impl ShiftModel {
    pub fn columns(self) -> usize {
        match self {
            ShiftModel::Boolean => 1,
            ShiftModel::Shifts => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NspInstance {
    nurses: usize,
    days: usize,
    shifts: usize,
    /// `demand[day][shift]`.
    demand: Vec<Vec<usize>>,
}

impl NspInstance {
    pub fn new(nurses: usize, shifts: usize, demand: Vec<Vec<usize>>) -> Result<Self, InstanceError> {
        if shifts == 0 {
            return Err(InstanceError::Invalid("at least one shift column is needed".into()));
        }
        for (day, row) in demand.iter().enumerate() {
            if row.len() != shifts {
                return Err(InstanceError::Invalid(format!(
                    "day {} has {} demand entries, expected {shifts}",
                    day + 1,
                    row.len()
                )));
            }
            if let Some(d) = row.iter().find(|&&d| d > nurses) {
                return Err(InstanceError::Invalid(format!(
                    "day {} demands {d} nurses but only {nurses} exist",
                    day + 1
                )));
            }
        }
        Ok(NspInstance {
            nurses,
            days: demand.len(),
            shifts,
            demand,
        })
    }

    pub fn nurses(&self) -> usize {
        self.nurses
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn shifts(&self) -> usize {
        self.shifts
    }

    pub fn is_boolean(&self) -> bool {
        self.shifts() == 1
    }

    pub fn demand(&self, day: usize, shift: usize) -> usize {
        self.demand[day][shift]
    }

    pub fn demand_rows(&self) -> &[Vec<usize>] {
        &self.demand
    }

    /// Domain of every schedule variable.
    pub fn value_domain(&self) -> Domain {
        if self.is_boolean() {
            Domain::boolean()
        } else {
            Domain::range(0, self.shifts() as i32)
        }
    }

    /// The value a nurse takes when working shift `shift`.
    pub fn shift_value(&self, shift: usize) -> i32 {
        if self.is_boolean() {
            1
        } else {
            shift as i32
        }
    }

    /// Values that count as working.
    pub fn working_values(&self) -> Domain {
        (0..self.shifts()).map(|c| self.shift_value(c)).collect()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        fs::read_to_string(path)?.parse()
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), InstanceError> {
        fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for NspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.nurses, self.days, self.shifts())?;
        for row in &self.demand {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, InstanceError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{t}`"))))
        .collect()
}

impl FromStr for NspInstance {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m s`"))?;
        let header = numbers(hline, header)?;
        let [nurses, days, shifts] = header[..] else {
            return Err(parse_err(hline, format!("header needs 3 numbers, found {}", header.len())));
        };
        if shifts == 0 {
            return Err(parse_err(hline, "shift count must be positive"));
        }
        let mut demand = Vec::with_capacity(days);
        let mut last = hline;
        for (line, text) in lines {
            last = line;
            if demand.len() == days {
                return Err(parse_err(line, format!("more than {days} demand rows")));
            }
            let row = numbers(line, text)?;
            if row.len() != shifts {
                return Err(parse_err(line, format!("expected {shifts} demand entries, found {}", row.len())));
            }
            if let Some(d) = row.iter().find(|&&d| d > nurses) {
                return Err(parse_err(line, format!("demand {d} exceeds the {nurses} nurses")));
            }
            demand.push(row);
        }
        if demand.len() != days {
            return Err(parse_err(last, format!("expected {days} demand rows, found {}", demand.len())));
        }
        NspInstance::new(nurses, shifts, demand)
    }
}

/// Seeded random instance. Each shift demand is drawn from `demand_range`
/// (clamped to `nurses`); in the shift model the per-day total is capped at
/// `nurses` so that every day is staffable.
pub fn generate_instance(
    seed: u64,
    nurses: usize,
    days: usize,
    demand_range: RangeInclusive<usize>,
    model: ShiftModel,
) -> NspInstance {
    assert!(!demand_range.is_empty(), "empty demand range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let demand = (0..days)
        .map(|_| {
            let mut left = nurses;
            (0..model.columns())
                .map(|_| {
                    let d = rng.gen_range(demand_range.clone()).min(left);
                    left -= d;
                    d
                })
                .collect()
        })
        .collect();
    NspInstance::new(nurses, model.columns(), demand).expect("generated demand is within bounds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let inst: NspInstance = "1 1 1\n0\n".parse().unwrap();
        assert_eq!(inst.nurses(), 1);
        assert_eq!(inst.days(), 1);
        assert_eq!(inst.demand(0, 0), 0);
        assert!(inst.is_boolean());
    }

    #[test]
    fn demand_above_nurses_is_rejected() {
        let err = "2 2 1\n1\n3\n".parse::<NspInstance>().unwrap_err();
        assert!(matches!(err, InstanceError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let line = |s: &str| match s.parse::<NspInstance>() {
            Err(InstanceError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line(""), 1);
        assert_eq!(line("2 2\n"), 1);
        assert_eq!(line("2 2 1\n1\n"), 2);
        assert_eq!(line("2 1 1\n1\n1\n"), 3);
        assert_eq!(line("2 1 2\n1\n"), 2);
        assert_eq!(line("# c\n2 1 1\nx\n"), 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let inst: NspInstance = "# roster\n\n3 2 1\n1\n\n2\n".parse().unwrap();
        assert_eq!(inst.to_string(), "3 2 1\n1\n2\n");
    }

    #[test]
    fn generator_shapes() {
        let b = generate_instance(1, 30, 28, 5..=15, ShiftModel::Boolean);
        assert_eq!((b.nurses(), b.days(), b.shifts()), (30, 28, 1));
        let s = generate_instance(1, 25, 7, 3..=9, ShiftModel::Shifts);
        assert_eq!((s.nurses(), s.days(), s.shifts()), (25, 7, 3));
        assert!(s.demand_rows().iter().all(|r| r.iter().sum::<usize>() <= 25));
        assert_eq!(s.value_domain(), Domain::range(0, 3));
    }
}
