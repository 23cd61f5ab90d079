//! Differential equivalence testing, soundness checks of the analysis
//! against concrete runs, cost comparison and rule mutants.

pub mod cost;
pub mod diff;
pub mod gen;
pub mod mutants;
pub mod oracle;
pub mod vertex;

pub use cost::{cost_compare, Bucket, CostSummary};
pub use diff::{check_inputs, differential_check, run_call, show_args, shrink, DiffReport, Outcome, Verdict, Witness};
pub use gen::{generate_inputs, GenError, GeneratorConfig};
pub use mutants::{mutation_suite, MutantOutcome};
pub use oracle::{check_procedure, Claim, Property, SoundnessReport};
