//! Programs and specifications shipped with the crate.

use specpl_core::ast::{parse_program, Program};
use specpl_core::spec_lang::{parse_specs, FormalSpec};

pub struct Entry {
    pub name: &'static str,
    pub source: &'static str,
    pub specs: &'static str,
}

impl Entry {
    pub fn program(&self) -> Program {
        parse_program(self.source).expect("corpus program parses")
    }

    pub fn specs(&self) -> Vec<FormalSpec> {
        parse_specs(self.specs).expect("corpus spec parses")
    }

    /// Indices of the specs whose predicate is the entry's own.
    pub fn targets(&self) -> Vec<usize> {
        self.specs()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.name == self.name)
            .map(|(i, _)| i)
            .collect()
    }
}

macro_rules! entry {
    ($name:literal, $spec:literal) => {
        Entry {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".pl")),
            specs: include_str!(concat!("../corpus/", $spec, ".spec")),
        }
    };
}

pub const EFFACE: Entry = entry!("efface", "efface");
/// efface with both directionalities.
pub const EFFACE_DIRECTIONS: Entry = entry!("efface", "efface_directions");
pub const APPEND: Entry = entry!("append", "append");
pub const MEMBER: Entry = entry!("member", "member");
pub const REVERSE: Entry = entry!("reverse", "reverse");
pub const DELETE: Entry = entry!("delete", "delete");
pub const PARTITION: Entry = entry!("partition", "partition");

pub fn all() -> [&'static Entry; 7] {
    [&EFFACE, &EFFACE_DIRECTIONS, &APPEND, &MEMBER, &REVERSE, &DELETE, &PARTITION]
}
