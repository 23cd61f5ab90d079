//! Acceptance criteria AC1 to AC9, one `PASS`/`FAIL` line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use specpl::corpus;
use specpl::harness::{
    check_procedure, cost_compare, differential_check, generate_inputs, mutation_suite, GeneratorConfig,
    SoundnessReport,
};
use specpl::harness::vertex::entailment_agreement;
use specpl_core::analyzer::{analyze_procedure, analyze_program, Verdict};
use specpl_core::ast::Term;
use specpl_core::concrete::SolveOptions;
use specpl_core::normal_form::normalize_program;
use specpl_core::spec_lang::parse_specs;
use specpl_core::transformer::{procedure_text, specialize, Specialization};

const TIME_LIMIT: Duration = Duration::from_secs(5);
const AC6_SIZES: [usize; 3] = [10, 100, 1000];
const AC7_MIN_SEQUENCES: usize = 50;
const AC7_MAX_SIZE: usize = 4;
const AC8_MIN_PER_RULE: usize = 2;
const AC9_SYSTEMS: usize = 100;

const EFFACE_GOLDEN: &str = "efface(X1,[X1|X2],X3) :- !, X2=X3.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).\n";

const APPEND_GOLDEN: &str = "append([X4|X1],X2,[X4|X3]) :- append(X1,X2,X3), !.\nappend(_,X2,X2).\n";

/// Code after Steps A, C, D, E and G as printed for the worked example.
const EFFACE_STEPS: [(char, &str); 5] = [
    (
        'A',
        "efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n\
         efface(X1,X2,X3) :- X2=[X1|X3].\n",
    ),
    (
        'C',
        "efface(X1,X2,X3) :- X2=[X1|X3].\n\
         efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n",
    ),
    (
        'D',
        "efface(X1,X2,X3) :- X2=[X4|X5], X4=X1, X5=X3.\n\
         efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n",
    ),
    (
        'E',
        "efface(X1,X2,X3) :- X2=[X4|X5], X4=X1, !, X5=X3.\n\
         efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n",
    ),
    (
        'G',
        "efface(X1,X2,X3) :- X2=[X4|X5], X4=X1, !, X5=X3.\n\
         efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6).\n",
    ),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(entry: &corpus::Entry, spec: usize) -> (Result<Specialization, String>, Duration) {
    let start = Instant::now();
    let r = specialize(&entry.program(), &entry.specs(), spec).map_err(|e| e.to_string());
    (r, start.elapsed())
}

fn ac1() -> Outcome {
    let (r, t) = timed(&corpus::EFFACE, 0);
    let s = match r {
        Ok(s) => s,
        Err(e) => return outcome(false, e),
    };
    let text = procedure_text(&s.output);
    let fired = ['C', 'D', 'E', 'G'].iter().all(|&c| s.trace.of_step(c).any(|x| x.applied()));
    let f_declined = s.trace.of_step('F').count() > 0 && s.trace.of_step('F').all(|x| !x.applied());
    // The criterion names the TEff:var directionality, where X3 is a
    // variable and the cut can legitimately move past X2=X3.
    let (var, _) = timed(&corpus::EFFACE_DIRECTIONS, 0);
    let var_note = match var {
        Ok(v) => format!(
            "; under TEff:var step F {} and yields {}",
            if v.trace.of_step('F').any(|x| x.applied()) { "moves the cut" } else { "declines" },
            procedure_text(&v.output).replace('\n', " ")
        ),
        Err(e) => format!("; under TEff:var: {e}"),
    };
    outcome(
        text == EFFACE_GOLDEN && fired && f_declined && t < TIME_LIMIT,
        format!(
            "spec TEff:any: golden {}, C/D/E/G fired {fired}, F declined {f_declined}, {t:.2?}{var_note}",
            text == EFFACE_GOLDEN
        ),
    )
}

fn ac2() -> Outcome {
    let (r, t) = timed(&corpus::APPEND, 0);
    match r {
        Ok(s) => {
            let ok = procedure_text(&s.output) == APPEND_GOLDEN;
            outcome(ok && t < TIME_LIMIT, format!("golden {ok}, {t:.2?}"))
        }
        Err(e) => outcome(false, e),
    }
}

fn ac3() -> Outcome {
    let (r, _) = timed(&corpus::EFFACE, 0);
    let s = match r {
        Ok(s) => s,
        Err(e) => return outcome(false, e),
    };
    let bad: Vec<char> = EFFACE_STEPS
        .iter()
        .filter(|(step, want)| s.trace.text_after(*step) != Some(want))
        .map(|(step, _)| *step)
        .collect();
    outcome(bad.is_empty(), format!("steps A C D E G, differing {bad:?}"))
}

fn ac4() -> Outcome {
    let entry = &corpus::EFFACE_DIRECTIONS;
    let norm = normalize_program(&entry.program()).unwrap();
    let a = analyze_program(&norm, &entry.specs());
    let accepted = a.procedures.len() == 2 && a.all_accepted();
    let mut detail = format!("both directions accepted {accepted}");
    let mut ok = accepted;
    for (mutation, component) in [
        ("efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) srel(TEff_out = T_in-1) sol(sol = 0) sexpr(T)", "E_sol"),
        ("efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) srel(TEff_out = T_in) sol(sol =< 1) sexpr(T)", "E_ref_out"),
    ] {
        let a = analyze_program(&norm, &parse_specs(mutation).unwrap());
        let named = match &a.procedures[0].verdict {
            Verdict::Rejected(rs) => rs.iter().any(|r| r.component == component),
            Verdict::Accepted => false,
        };
        ok &= named;
        detail.push_str(&format!(", mutant rejected on {component} {named}"));
    }
    outcome(ok, detail)
}

fn ac5() -> Outcome {
    let cfg = GeneratorConfig::default();
    let opts = SolveOptions::default();
    let mut runs = 0;
    let mut inputs = 0;
    let mut failures = Vec::new();
    for entry in corpus::all() {
        let program = entry.program();
        let specs = entry.specs();
        for i in entry.targets() {
            runs += 1;
            let label = format!("{} spec {i}", entry.name);
            let out = match specialize(&program, &specs, i) {
                Ok(s) => s.output_program(&program),
                Err(e) => {
                    failures.push(format!("{label}: {e}"));
                    continue;
                }
            };
            match differential_check(&program, &out, &specs[i], &cfg, &opts) {
                Ok(r) => {
                    inputs += r.inputs.len();
                    if r.mismatches > 0 || r.inconclusive > 0 {
                        failures.push(format!("{label}: {} mismatches {} inconclusive", r.mismatches, r.inconclusive));
                    }
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{runs} program/spec pairs, {inputs} inputs, failures {failures:?}"),
    )
}

fn ac6() -> Outcome {
    let entry = &corpus::EFFACE_DIRECTIONS;
    let program = entry.program();
    let spec = match specialize(&program, &entry.specs(), 0) {
        Ok(s) => s.output_program(&program),
        Err(e) => return outcome(false, e.to_string()),
    };
    let buckets: Vec<(usize, Vec<Vec<Term>>)> = AC6_SIZES
        .iter()
        .map(|&n| {
            let list: Vec<i64> = (1..=n as i64).collect();
            (n, vec![vec![Term::Int(n as i64), Term::int_list(&list), Term::var("R")]])
        })
        .collect();
    let opts = SolveOptions {
        budget: 10_000_000,
        ..SolveOptions::default()
    };
    let c = cost_compare(&program, &spec, "efface", &buckets, &opts);
    let res: Vec<(u64, u64)> = c.buckets.iter().map(|b| (b.original_residual, b.specialized_residual)).collect();
    outcome(
        c.specialized_constant() && c.original_grows_linearly(),
        format!("residual (original, specialized) at sizes {AC6_SIZES:?}: {res:?}"),
    )
}

/// Sum of the lengths of the list arguments.
fn input_size(args: &[Term]) -> usize {
    args.iter().filter_map(|t| t.as_list()).map(|l| l.len()).sum()
}

fn ac7() -> Outcome {
    let cfg = GeneratorConfig {
        samples: 0,
        ..GeneratorConfig::default()
    };
    let opts = SolveOptions::default();
    let mut report = SoundnessReport::default();
    for entry in corpus::all() {
        let program = entry.program();
        let specs = entry.specs();
        let norm = normalize_program(&program).unwrap();
        let analysis = analyze_program(&norm, &specs);
        for i in entry.targets() {
            let inputs: Vec<Vec<Term>> = generate_inputs(&specs[i], &cfg)
                .unwrap()
                .into_iter()
                .filter(|args| input_size(args) <= AC7_MAX_SIZE)
                .collect();
            let Some(ap) = analysis.procedures.iter().find(|p| p.spec_index == i) else { continue };
            report.merge(check_procedure(&norm, ap, &inputs, &opts));
            if let Ok(s) = specialize(&program, &specs, i) {
                let ap = analyze_procedure(&norm, &s.final_normalized, &analysis.table, i);
                let mut p = norm.clone();
                p.insert(s.final_normalized.clone());
                report.merge(check_procedure(&p, &ap, &inputs, &opts));
            }
        }
    }
    let bad: Vec<String> = report
        .violations()
        .map(|c| format!("{} {}: {}", c.location, c.property, c.counterexample.as_deref().unwrap_or("")))
        .collect();
    let runs: usize = report.claims.iter().map(|c| c.runs).sum();
    outcome(
        report.sequences >= AC7_MIN_SEQUENCES && bad.is_empty(),
        format!(
            "{} sequences, {} true claims, {runs} oracle runs, counterexamples {bad:?}",
            report.sequences,
            report.claims.len()
        ),
    )
}

fn ac8() -> Outcome {
    let out = mutation_suite(&GeneratorConfig::default(), &SolveOptions::default());
    let per_rule: Vec<usize> = (1..=5).map(|r| out.iter().filter(|m| m.rule == r).count()).collect();
    let unsafe_: Vec<String> = out.iter().filter(|m| !m.safe()).map(|m| m.to_string()).collect();
    let refused = out.iter().filter(|m| m.refused.is_some()).count();
    let caught = out.iter().filter(|m| m.caught).count();
    outcome(
        per_rule.iter().all(|&n| n >= AC8_MIN_PER_RULE) && unsafe_.is_empty(),
        format!(
            "mutants per rule {per_rule:?}, refused {refused}, caught {caught} of {}, unsafe {unsafe_:?}",
            out.len()
        ),
    )
}

fn ac9() -> Outcome {
    let a = entailment_agreement(7, AC9_SYSTEMS);
    outcome(
        a.disagreements.is_empty(),
        format!(
            "{AC9_SYSTEMS} systems, {} queries, {} entailed, {} disagreements",
            a.compared,
            a.entailed,
            a.disagreements.len()
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters pass arguments; nothing to list
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 efface golden", ac1),
        ("AC2 append golden", ac2),
        ("AC3 efface intermediate steps", ac3),
        ("AC4 spec checking", ac4),
        ("AC5 differential equivalence", ac5),
        ("AC6 residual choice points", ac6),
        ("AC7 decision procedure soundness", ac7),
        ("AC8 mutation safety", ac8),
        ("AC9 entailment against vertices", ac9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let o = f();
        println!(
            "{} {name} ({:.1?}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
