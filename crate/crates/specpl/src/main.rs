use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use specpl::harness::{check_inputs, differential_check, generate_inputs, show_args, GeneratorConfig, Verdict};
use specpl::io::{load_program, load_specs};
use specpl_core::analyzer::analyze_program;
use specpl_core::ast::{parse_term, print_program, print_term, PredId, Program};
use specpl_core::concrete::{solve, SolveOptions};
use specpl_core::normal_form::normalize_program;
use specpl_core::spec_lang::FormalSpec;
use specpl_core::transformer::{procedure_text, specialize, strip_green_cuts, CutMode, TransformError};

#[derive(Parser)]
#[command(name = "specpl", version, about = "Specializes Prolog procedures for the calls described by a spec")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Select clauses on the functor of a bound first argument when running.
    #[arg(long, global = true)]
    model_indexing: bool,
    /// Seed of the random inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Inference budget per call.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Longest generated list.
    #[arg(long, global = true, default_value_t = 8)]
    max_size: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Checks every procedure against its specs.
    Check { program: PathBuf, specs: Vec<PathBuf> },
    /// Specializes one procedure.
    Specialize {
        program: PathBuf,
        specs: Vec<PathBuf>,
        /// Target as name/arity; defaults to the predicate of the first spec.
        #[arg(long)]
        pred: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Specialized)]
        emit: Emit,
        /// Prints the transformation trace on stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = StripCuts::Off)]
        strip_cuts: StripCuts,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs a query.
    Run {
        program: PathBuf,
        #[arg(short, long)]
        query: String,
    },
    /// Compares the answer sequences of a program and its specialization.
    Diff {
        program: PathBuf,
        specs: Vec<PathBuf>,
        /// Specialized program; computed when omitted.
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long)]
        pred: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Normalized,
    Annotated,
    Specialized,
}

#[derive(Clone, Copy, ValueEnum)]
enum StripCuts {
    Off,
    AssumeGreen,
    Verified,
}

/// Failure with its exit code.
struct Exit(u8, anyhow::Error);

fn usage(e: anyhow::Error) -> Exit {
    Exit(2, e)
}

impl Global {
    fn opts(&self) -> SolveOptions {
        SolveOptions {
            budget: self.budget,
            model_indexing: self.model_indexing,
            ..SolveOptions::default()
        }
    }

    fn generator(&self) -> GeneratorConfig {
        let d = GeneratorConfig::default();
        GeneratorConfig {
            seed: self.seed,
            max_list_len: self.max_size.max(1),
            exhaustive_len: d.exhaustive_len.min(self.max_size.max(1)),
            ..d
        }
    }
}

fn parse_pred(s: &str) -> Result<PredId> {
    let (name, arity) = s.rsplit_once('/').ok_or_else(|| anyhow!("expected name/arity, got `{s}`"))?;
    Ok(PredId::new(name, arity.parse()?))
}

/// Index of the spec to specialize for.
fn target(specs: &[FormalSpec], pred: Option<&str>) -> Result<usize> {
    let Some(p) = pred else {
        return if specs.is_empty() { Err(anyhow!("no specs given")) } else { Ok(0) };
    };
    let p = parse_pred(p)?;
    specs
        .iter()
        .position(|s| s.pred() == p)
        .ok_or_else(|| anyhow!("no spec for {p}"))
}

fn transform_exit(e: TransformError) -> Exit {
    match e {
        TransformError::Normalize(_) | TransformError::NoProcedure(_) => Exit(2, e.into()),
        _ => Exit(1, e.into()),
    }
}

fn check(program: &Program, specs: &[FormalSpec]) -> Result<bool, Exit> {
    let norm = normalize_program(program).map_err(|e| usage(e.into()))?;
    let analysis = analyze_program(&norm, specs);
    for ap in &analysis.procedures {
        for w in &ap.warnings {
            eprintln!("warning: {}: {w}", ap.procedure.pred);
        }
        match &ap.verdict {
            specpl_core::analyzer::Verdict::Accepted => {
                println!("verdict {} spec {} accepted", ap.procedure.pred, ap.spec_index)
            }
            specpl_core::analyzer::Verdict::Rejected(rs) => {
                for r in rs {
                    println!("verdict {} spec {} rejected {r}", ap.procedure.pred, ap.spec_index);
                }
            }
        }
    }
    Ok(analysis.all_accepted())
}

/// Source with the cuts of the target removed as requested.
fn strip(program: &Program, spec: &FormalSpec, mode: StripCuts, g: &Global) -> Result<Program, Exit> {
    let mode = match mode {
        StripCuts::Off => return Ok(program.clone()),
        StripCuts::AssumeGreen => CutMode::AssumeGreen,
        StripCuts::Verified => CutMode::Verified,
    };
    let pred = spec.pred();
    let proc_ = program.get(&pred).ok_or_else(|| Exit(2, anyhow!("no procedure {pred}")))?;
    let inputs = generate_inputs(spec, &g.generator()).map_err(|e| usage(e.into()))?;
    let opts = g.opts();
    let mut verify = |with: &specpl_core::ast::Procedure, without: &specpl_core::ast::Procedure| {
        let (mut a, mut b) = (program.clone(), program.clone());
        a.insert(with.clone());
        b.insert(without.clone());
        let r = check_inputs(&a, &b, spec, &inputs, &opts);
        match r.witness {
            Some(w) => Err(show_args(&spec.name, &w.args)),
            None => Ok(()),
        }
    };
    let stripped = strip_green_cuts(proc_, mode, &mut verify).map_err(transform_exit)?;
    let mut out = program.clone();
    out.insert(stripped);
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Exit> {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Check { program, specs } => {
            let p = load_program(&program).map_err(usage)?;
            let s = load_specs(&specs).map_err(usage)?;
            if !check(&p, &s)? {
                return Err(Exit(1, anyhow!("some specs are not met")));
            }
        }
        Cmd::Specialize {
            program,
            specs,
            pred,
            emit,
            trace,
            strip_cuts,
            output,
        } => {
            let p = load_program(&program).map_err(usage)?;
            let s = load_specs(&specs).map_err(usage)?;
            let i = target(&s, pred.as_deref()).map_err(usage)?;
            let source = strip(&p, &s[i], strip_cuts, g)?;
            let sp = specialize(&source, &s, i).map_err(transform_exit)?;
            if trace {
                eprint!("{}", sp.trace);
            }
            for w in &sp.warnings {
                eprintln!("warning: {w}");
            }
            let text = match emit {
                Emit::Normalized => procedure_text(&sp.normalized),
                Emit::Annotated => sp.annotated.dump(),
                Emit::Specialized => print_program(&sp.output_program(&source)),
            };
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| Exit(2, e.into()))?,
                None => print!("{text}"),
            }
        }
        Cmd::Run { program, query } => {
            let p = load_program(&program).map_err(usage)?;
            let goal = parse_term(&query).map_err(|e| usage(anyhow!("query: {e}")))?;
            let (seq, c) = solve(&p, &goal, &g.opts()).map_err(|e| Exit(1, e.into()))?;
            if seq.answers.is_empty() {
                println!("false");
            }
            for a in &seq.answers {
                let parts: Vec<String> = a
                    .0
                    .iter()
                    .filter(|(v, _)| !v.starts_with('_'))
                    .map(|(v, t)| format!("{v} = {}", print_term(t)))
                    .collect();
                println!("{}", if parts.is_empty() { String::from("true") } else { parts.join(", ") });
            }
            println!(
                "counters inferences={} choicepoints={} max_live={} residual={}",
                c.inferences, c.choicepoints_created, c.max_live_choicepoints, c.residual_choicepoints_after_first_answer
            );
            if !seq.is_complete() {
                eprintln!("budget exhausted after {} inferences", c.inferences);
            }
        }
        Cmd::Diff {
            program,
            specs,
            against,
            pred,
        } => {
            let p = load_program(&program).map_err(usage)?;
            let s = load_specs(&specs).map_err(usage)?;
            let i = target(&s, pred.as_deref()).map_err(usage)?;
            let other = match against {
                Some(path) => load_program(&path).map_err(usage)?,
                None => specialize(&p, &s, i).map_err(transform_exit)?.output_program(&p),
            };
            let report = differential_check(&p, &other, &s[i], &g.generator(), &g.opts()).map_err(|e| usage(e.into()))?;
            print!("{report}");
            for r in report.inputs.iter().filter(|r| matches!(r.verdict, Verdict::Mismatch { .. })).take(5) {
                eprintln!("mismatch {}", show_args(&s[i].name, &r.args));
            }
            if !report.passed() {
                return Err(Exit(1, anyhow!("{} mismatches", report.mismatches)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Exit(code, e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(3),
    }
}
