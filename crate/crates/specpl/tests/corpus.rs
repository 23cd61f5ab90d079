use specpl::corpus;
use specpl::harness::{differential_check, GeneratorConfig};
use specpl_core::analyzer::analyze_program;
use specpl_core::concrete::SolveOptions;
use specpl_core::normal_form::normalize_program;
use specpl_core::transformer::{procedure_text, specialize};

#[test]
fn every_spec_is_accepted() {
    for entry in corpus::all() {
        let norm = normalize_program(&entry.program()).unwrap();
        let a = analyze_program(&norm, &entry.specs());
        for ap in &a.procedures {
            assert!(ap.verdict.accepted(), "{} spec {}: {:?}", entry.name, ap.spec_index, ap.verdict);
        }
    }
}

#[test]
fn specializations_are_equivalent_on_small_inputs() {
    let cfg = GeneratorConfig {
        samples: 20,
        exhaustive_len: 3,
        ..GeneratorConfig::default()
    };
    for entry in corpus::all() {
        let program = entry.program();
        let specs = entry.specs();
        for i in entry.targets() {
            let out = specialize(&program, &specs, i).unwrap().output_program(&program);
            let r = differential_check(&program, &out, &specs[i], &cfg, &SolveOptions::default()).unwrap();
            assert!(r.passed(), "{} spec {i}: {:?}", entry.name, r.witness);
            assert_eq!(r.inconclusive, 0);
        }
    }
}

fn specialized(entry: &corpus::Entry, i: usize) -> String {
    procedure_text(&specialize(&entry.program(), &entry.specs(), i).unwrap().output)
}

#[test]
fn reverse_commits_after_the_recursive_clause() {
    let text = specialized(&corpus::REVERSE, 0);
    assert!(text.lines().next().unwrap().ends_with(", !."), "{text}");
    assert_eq!(text.lines().nth(1), Some("reverse(_,[])."), "{text}");
}

#[test]
fn member_under_a_ground_element_is_unchanged() {
    let text = specialized(&corpus::MEMBER, 0);
    assert!(!text.contains('!'), "{text}");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn delete_and_partition_gain_cuts() {
    assert!(specialized(&corpus::DELETE, 0).contains('!'));
    assert!(specialized(&corpus::PARTITION, 0).contains('!'));
}
