//! Answer-sequence comparison between two programs.

use std::collections::BTreeMap;
use std::fmt;

use specpl_core::ast::{print_term, Program, Term};
use specpl_core::concrete::{CostCounters, SolveOptions, Substitution};
use specpl_core::spec_lang::{arg_var, input_substitution, FormalSpec};

use super::gen::{generate_inputs, GenError, GeneratorConfig};

/// What one call produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Answers(Vec<Substitution>),
    /// A runtime error, e.g. an instantiation error.
    Error(String),
    /// The inference budget ran out.
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Answers(a) => {
                f.write_str("[")?;
                for (i, s) in a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
            Outcome::Error(e) => write!(f, "error: {e}"),
            Outcome::Inconclusive => f.write_str("budget exhausted"),
        }
    }
}

/// Calls `pred` with `args` and restricts the answers to the argument
/// positions, so both programs are compared on the same query.
pub fn run_call(p: &Program, pred: &str, args: &[Term], opts: &SolveOptions) -> (Outcome, CostCounters) {
    let query: Vec<Term> = (0..args.len()).map(|k| Term::var(&format!("A{}", k + 1))).collect();
    let bind: Vec<Term> = args.to_vec();
    // A1 = t1, ..., p(A1..An): the answers name the arguments, not the
    // variables inside them.
    let mut goal = Term::compound(pred, query.clone());
    for (q, t) in query.iter().zip(bind).rev() {
        goal = Term::compound(",", vec![Term::compound("=", vec![q.clone(), t]), goal]);
    }
    match specpl_core::concrete::solve(p, &goal, opts) {
        Ok((seq, c)) if seq.is_complete() => {
            let answers = seq
                .answers
                .into_iter()
                .map(|s| Substitution(s.0.into_iter().filter(|(v, _)| v.starts_with('A')).collect()))
                .collect();
            (Outcome::Answers(answers), c)
        }
        Ok((_, c)) => (Outcome::Inconclusive, c),
        Err(e) => (Outcome::Error(e.to_string()), CostCounters::default()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Mismatch { original: Outcome, specialized: Outcome },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputReport {
    pub args: Vec<Term>,
    pub verdict: Verdict,
    pub original_cost: CostCounters,
    pub specialized_cost: CostCounters,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub args: Vec<Term>,
    pub original: Outcome,
    pub specialized: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    pub pred: String,
    pub inputs: Vec<InputReport>,
    pub equal: usize,
    pub mismatches: usize,
    pub inconclusive: usize,
    /// Locally minimal mismatching input.
    pub witness: Option<Witness>,
    /// Mean of specialized / original inferences over inputs where the
    /// original made at least one.
    pub mean_inference_ratio: f64,
    pub residual_original: u64,
    pub residual_specialized: u64,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

pub fn show_args(pred: &str, args: &[Term]) -> String {
    let a: Vec<String> = args.iter().map(print_term).collect();
    format!("{pred}({})", a.join(","))
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {}", self.inputs.len())?;
        writeln!(f, "equal {}", self.equal)?;
        writeln!(f, "mismatches {}", self.mismatches)?;
        writeln!(f, "inconclusive {}", self.inconclusive)?;
        writeln!(f, "mean_inference_ratio {:.3}", self.mean_inference_ratio)?;
        writeln!(f, "residual_choicepoints original {} specialized {}", self.residual_original, self.residual_specialized)?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness {}", show_args(&self.pred, &w.args))?;
            writeln!(f, "  original    {}", w.original)?;
            writeln!(f, "  specialized {}", w.specialized)?;
        }
        Ok(())
    }
}

fn compare(original: &Program, specialized: &Program, pred: &str, args: &[Term], opts: &SolveOptions) -> InputReport {
    let (o, oc) = run_call(original, pred, args, opts);
    let (s, sc) = run_call(specialized, pred, args, opts);
    let verdict = match (&o, &s) {
        (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => Verdict::Inconclusive,
        _ if o == s => Verdict::Equal,
        _ => Verdict::Mismatch {
            original: o,
            specialized: s,
        },
    };
    InputReport {
        args: args.to_vec(),
        verdict,
        original_cost: oc,
        specialized_cost: sc,
    }
}

/// Compares the answer sequences of `original` and `specialized` for the
/// predicate of `spec` on every generated input.
pub fn differential_check(
    original: &Program,
    specialized: &Program,
    spec: &FormalSpec,
    cfg: &GeneratorConfig,
    opts: &SolveOptions,
) -> Result<DiffReport, GenError> {
    let inputs = generate_inputs(spec, cfg)?;
    Ok(check_inputs(original, specialized, spec, &inputs, opts))
}

/// [`differential_check`] on given inputs.
pub fn check_inputs(
    original: &Program,
    specialized: &Program,
    spec: &FormalSpec,
    inputs: &[Vec<Term>],
    opts: &SolveOptions,
) -> DiffReport {
    let pred = spec.name.as_str();
    let reports: Vec<InputReport> = inputs.iter().map(|a| compare(original, specialized, pred, a, opts)).collect();
    let count = |f: fn(&Verdict) -> bool| reports.iter().filter(|r| f(&r.verdict)).count();
    let (mut ratio, mut n) = (0.0, 0usize);
    for r in &reports {
        if r.original_cost.inferences > 0 {
            ratio += r.specialized_cost.inferences as f64 / r.original_cost.inferences as f64;
            n += 1;
        }
    }
    let witness = reports.iter().find(|r| matches!(r.verdict, Verdict::Mismatch { .. })).map(|r| {
        let args = shrink(original, specialized, spec, &r.args, opts);
        let (o, _) = run_call(original, pred, &args, opts);
        let (s, _) = run_call(specialized, pred, &args, opts);
        Witness {
            args,
            original: o,
            specialized: s,
        }
    });
    DiffReport {
        pred: pred.to_string(),
        equal: count(|v| *v == Verdict::Equal),
        mismatches: count(|v| matches!(v, Verdict::Mismatch { .. })),
        inconclusive: count(|v| *v == Verdict::Inconclusive),
        witness,
        mean_inference_ratio: if n == 0 { 1.0 } else { ratio / n as f64 },
        residual_original: reports.iter().map(|r| r.original_cost.residual_choicepoints_after_first_answer).sum(),
        residual_specialized: reports.iter().map(|r| r.specialized_cost.residual_choicepoints_after_first_answer).sum(),
        inputs: reports,
    }
}

/// One-step simplifications: drop a list element, decrement an integer.
fn smaller(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Some(items) = t.as_list() {
        for i in 0..items.len() {
            let mut v: Vec<Term> = items.iter().map(|x| (*x).clone()).collect();
            v.remove(i);
            out.push(Term::list(v));
        }
    }
    match t {
        Term::Int(n) if *n > 0 => out.push(Term::Int(n - 1)),
        Term::Int(n) if *n < 0 => out.push(Term::Int(n + 1)),
        Term::Compound(f, args) => {
            for (i, a) in args.iter().enumerate() {
                for s in smaller(a) {
                    let mut v = args.clone();
                    v[i] = s;
                    out.push(Term::Compound(f.clone(), v));
                }
            }
        }
        _ => {}
    }
    out
}

/// Greedily simplifies a mismatching input while it stays admissible and
/// mismatching.
pub fn shrink(original: &Program, specialized: &Program, spec: &FormalSpec, args: &[Term], opts: &SolveOptions) -> Vec<Term> {
    let beta = input_substitution(spec);
    let admissible = |a: &[Term]| {
        let theta: BTreeMap<String, Term> = a.iter().enumerate().map(|(k, t)| (arg_var(k), t.clone())).collect();
        beta.models(&theta)
    };
    let mismatch = |a: &[Term]| matches!(compare(original, specialized, &spec.name, a, opts).verdict, Verdict::Mismatch { .. });
    let mut cur = args.to_vec();
    'outer: loop {
        for k in 0..cur.len() {
            for s in smaller(&cur[k]) {
                let mut cand = cur.clone();
                cand[k] = s;
                if admissible(&cand) && mismatch(&cand) {
                    cur = cand;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}
