//! Nurse-scheduling benchmark for combined lex propagation.
//!
//! * [`instance`]: instance text format and seeded generator.
//! * [`model`]: matrix models in decomposed and combined modes, plus the
//!   small separation instance.
//! * [`presets`]: built-in Sequence triples and shift automata.
//! * [`bench`]: parallel batch runner and result tables.

pub mod bench;
pub mod instance;
pub mod model;
pub mod presets;

pub use bench::{run_benchmark, run_one, summarize, RunOutcome, RunRecord, SummaryRow};
pub use instance::{generate_instance, InstanceError, NspInstance, ShiftModel};
pub use model::{build_model, separation_model, Mode, ModelConfig, ModelError, NspModel, RowRule};
