//! Argument tuples described by a spec's input.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specpl_core::abstract_domain::{AbsSubst, Mode};
use specpl_core::ast::Term;
use specpl_core::spec_lang::{arg_var, input_substitution, FormalSpec, Pattern};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Nesting depth of random ground terms.
    pub max_depth: usize,
    pub max_list_len: usize,
    pub ints: RangeInclusive<i64>,
    /// Random samples after the exhaustive part.
    pub samples: usize,
    /// Lists up to this length are enumerated exhaustively.
    pub exhaustive_len: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_depth: 2,
            max_list_len: 8,
            ints: 1..=3,
            samples: 200,
            exhaustive_len: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("the input description is unsatisfiable")]
    Unsatisfiable,
    #[error("bad generator configuration: {0}")]
    Config(&'static str),
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.max_depth == 0 || self.max_list_len == 0 || self.ints.is_empty() {
            return Err(GenError::Config("bounds must be positive"));
        }
        if self.exhaustive_len > self.max_list_len {
            return Err(GenError::Config("exhaustive bound exceeds the list length bound"));
        }
        Ok(())
    }
}

/// Placeholder for a fresh variable, numbered per tuple by [`freshen`].
const FRESH: &str = "_";

fn fresh() -> Term {
    Term::var(FRESH)
}

/// Renames every placeholder to a distinct `V<k>`.
fn freshen(args: &[Term]) -> Vec<Term> {
    let mut n = 0;
    fn go(t: &Term, n: &mut usize) -> Term {
        match t {
            Term::Var(v) if v == FRESH => {
                *n += 1;
                Term::var(&format!("V{n}"))
            }
            Term::Compound(f, a) => Term::Compound(f.clone(), a.iter().map(|x| go(x, n)).collect()),
            _ => t.clone(),
        }
    }
    args.iter().map(|t| go(t, &mut n)).collect()
}

fn lists(elems: &[Term], max_len: usize) -> Vec<Term> {
    let mut out = vec![Term::nil()];
    let mut layer: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &layer {
            for e in elems {
                let mut l = prefix.clone();
                l.push(e.clone());
                out.push(Term::list(l.clone()));
                next.push(l);
            }
        }
        layer = next;
    }
    out
}

/// Candidate terms for exhaustive enumeration.
fn pool(p: &Pattern, cfg: &GeneratorConfig, len: usize) -> Vec<Term> {
    let ints: Vec<Term> = cfg.ints.clone().map(Term::Int).collect();
    match p {
        Pattern::Int => ints,
        Pattern::Atom => vec![Term::atom("a"), Term::atom("b")],
        Pattern::List(e) => lists(&pool(e, cfg, 1), len),
        Pattern::Mode(m) => {
            let mut out = Vec::new();
            if m.may_be_var() {
                out.push(fresh());
            }
            if m.may_be_ground() {
                out.extend(ints.iter().cloned());
            }
            if *m == Mode::ANY || *m == Mode::NOVAR {
                out.extend(lists(&ints, len.min(2)).into_iter().filter(|t| *t != Term::nil()));
                out.push(Term::nil());
            }
            if m.may_be_ngv() {
                out.push(Term::list(vec![fresh()]));
                out.push(Term::list_with_tail(vec![ints[0].clone()], fresh()));
            }
            out
        }
    }
}

fn random_term(p: &Pattern, cfg: &GeneratorConfig, rng: &mut ChaCha8Rng, depth: usize) -> Term {
    let int = |rng: &mut ChaCha8Rng| Term::Int(rng.gen_range(cfg.ints.clone()));
    match p {
        Pattern::Int => int(rng),
        Pattern::Atom => Term::atom(["a", "b", "c"][rng.gen_range(0..3)]),
        Pattern::List(e) => {
            let n = rng.gen_range(0..=cfg.max_list_len);
            Term::list((0..n).map(|_| random_term(e, cfg, rng, depth + 1)).collect())
        }
        Pattern::Mode(m) => {
            let ground = |rng: &mut ChaCha8Rng| {
                if depth + 1 < cfg.max_depth && rng.gen_bool(0.2) {
                    random_term(&Pattern::List(Box::new(Pattern::Mode(Mode::GROUND))), cfg, rng, depth + 1)
                } else {
                    int(rng)
                }
            };
            let mut choices: Vec<u8> = Vec::new();
            if m.may_be_var() {
                choices.push(0);
            }
            if m.may_be_ground() {
                choices.push(1);
            }
            if m.may_be_ngv() {
                choices.push(2);
            }
            match choices[rng.gen_range(0..choices.len())] {
                0 => fresh(),
                1 if *m == Mode::ANY || *m == Mode::NOVAR => {
                    random_term(&Pattern::List(Box::new(Pattern::Int)), cfg, rng, depth + 1)
                }
                1 => ground(rng),
                _ => {
                    let n = rng.gen_range(0..=cfg.max_list_len.min(3));
                    Term::list_with_tail((0..n).map(|_| int(rng)).collect(), fresh())
                }
            }
        }
    }
}

fn models(beta: &AbsSubst, args: &[Term]) -> bool {
    let theta: BTreeMap<String, Term> = args.iter().enumerate().map(|(k, t)| (arg_var(k), t.clone())).collect();
    beta.models(&theta)
}

/// Every tuple within the exhaustive bound, then `cfg.samples` random
/// tuples, all satisfying the spec's input description. The result only
/// depends on `spec` and `cfg`.
pub fn generate_inputs(spec: &FormalSpec, cfg: &GeneratorConfig) -> Result<Vec<Vec<Term>>, GenError> {
    cfg.validate()?;
    let beta = input_substitution(spec);
    if beta.is_bottom() {
        return Err(GenError::Unsatisfiable);
    }
    let pools: Vec<Vec<Term>> = spec.args.iter().map(|a| pool(&a.pattern, cfg, cfg.exhaustive_len)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; pools.len()];
    if pools.iter().all(|p| !p.is_empty()) {
        loop {
            let args = freshen(&idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect::<Vec<_>>());
            if models(&beta, &args) {
                out.push(args);
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < pools[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut tries = 0;
    let mut sampled = 0;
    while sampled < cfg.samples && tries < cfg.samples * 50 {
        tries += 1;
        let args = freshen(&spec.args.iter().map(|a| random_term(&a.pattern, cfg, &mut rng, 0)).collect::<Vec<_>>());
        if models(&beta, &args) {
            out.push(args);
            sampled += 1;
        }
    }
    if out.is_empty() {
        return Err(GenError::Unsatisfiable);
    }
    Ok(out)
}
