//! Inference and choice-point counters across input sizes.

use std::fmt;

use specpl_core::ast::{Program, Term};
use specpl_core::concrete::SolveOptions;

use super::diff::run_call;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bucket {
    pub size: usize,
    pub inputs: usize,
    pub original_inferences: u64,
    pub specialized_inferences: u64,
    /// Largest residual choice-point count after the first answer.
    pub original_residual: u64,
    pub specialized_residual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostSummary {
    pub buckets: Vec<Bucket>,
}

impl CostSummary {
    /// Same residual count in every bucket.
    pub fn specialized_constant(&self) -> bool {
        self.buckets.windows(2).all(|w| w[0].specialized_residual == w[1].specialized_residual)
    }

    pub fn original_constant(&self) -> bool {
        self.buckets.windows(2).all(|w| w[0].original_residual == w[1].original_residual)
    }

    /// Residual count of the original positive and at least proportional
    /// to the size: `r(n) / n` never decreases.
    pub fn original_grows_linearly(&self) -> bool {
        self.buckets.iter().all(|b| b.original_residual > 0)
            && self.buckets.windows(2).all(|w| {
                w[1].original_residual as u128 * w[0].size as u128 >= w[0].original_residual as u128 * w[1].size as u128
            })
    }
}

impl fmt::Display for CostSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.buckets {
            writeln!(
                f,
                "size {} inputs {} inferences {} {} residual {} {}",
                b.size, b.inputs, b.original_inferences, b.specialized_inferences, b.original_residual, b.specialized_residual
            )?;
        }
        writeln!(f, "specialized_residual_constant {}", self.specialized_constant())?;
        writeln!(f, "original_residual_linear {}", self.original_grows_linearly())
    }
}

/// Runs both programs on the inputs of every size bucket.
pub fn cost_compare(
    original: &Program,
    specialized: &Program,
    pred: &str,
    buckets: &[(usize, Vec<Vec<Term>>)],
    opts: &SolveOptions,
) -> CostSummary {
    let buckets = buckets
        .iter()
        .map(|(size, inputs)| {
            let mut b = Bucket {
                size: *size,
                inputs: inputs.len(),
                original_inferences: 0,
                specialized_inferences: 0,
                original_residual: 0,
                specialized_residual: 0,
            };
            for args in inputs {
                let (_, o) = run_call(original, pred, args, opts);
                let (_, s) = run_call(specialized, pred, args, opts);
                b.original_inferences += o.inferences;
                b.specialized_inferences += s.inferences;
                b.original_residual = b.original_residual.max(o.residual_choicepoints_after_first_answer);
                b.specialized_residual = b.specialized_residual.max(s.residual_choicepoints_after_first_answer);
            }
            b
        })
        .collect();
    CostSummary { buckets }
}
